"""Independent reference implementations used as test oracles.

brute_force_match enumerates every injective variable assignment over
candidate nodes and re-checks each constraint from scratch; it shares no
code with GraphStore.match.
"""

import itertools


def _relation_ok(matcher, relation: str) -> bool:
    if matcher.kind == "any":
        return True
    return relation.casefold() in matcher.words


def _node_ok(constraint, node) -> bool:
    if constraint.label is not None and node.label.casefold() != constraint.label.casefold():
        return False
    if constraint.ne_types is not None:
        if node.ne_type is None or node.ne_type not in constraint.ne_types:
            return False
    return True


def brute_force_match(store, pattern) -> list[dict]:
    """All assignments var->node_id satisfying the pattern, by exhaustive
    enumeration over candidate nodes. Returns a list of assignment dicts.
    For each edge constraint the satisfying (src, dst) pairs are collected
    up front with one scan over every edge."""
    var_names = [c.var for c in pattern.nodes]
    candidates = []
    for c in pattern.nodes:
        candidates.append([
            nid for nid in sorted(store.nodes)
            if _node_ok(c, store.nodes[nid])
        ])
    pair_sets = []
    for ec in pattern.edges:
        pairs = set()
        for e in store.edges.values():
            if _relation_ok(ec.relation, e.relation):
                pairs.add((e.src, e.dst))
                if ec.direction == "any":
                    pairs.add((e.dst, e.src))
        pair_sets.append(pairs)
    out = []
    for combo in itertools.product(*candidates):
        if len(set(combo)) != len(combo):
            continue
        assignment = dict(zip(var_names, combo))
        ok = all(
            (assignment[ec.src], assignment[ec.dst]) in pairs
            for ec, pairs in zip(pattern.edges, pair_sets)
        )
        if ok:
            out.append(assignment)
    return out
