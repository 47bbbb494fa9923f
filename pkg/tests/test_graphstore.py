import random

import pytest

from _oracles import brute_force_match
from graphqa.docgraph import DeltaEdge, DeltaNode, GraphDelta
from graphqa.graphstore import (
    Binding,
    CorruptFileError,
    EdgeConstraint,
    GraphStore,
    NodeConstraint,
    Pattern,
    RelationMatcher,
    UnknownNodeError,
)

NE_TYPES = [None, "PERSON", "LOCATION", "ORGANIZATION", "DATE", "NUMEX"]
LABELS = ["ram", "sita", "delhi", "pune", "statement", "party", "award", "modi"]
RELATIONS = ["criticized", "visited", "met", "has a", "in", "paid"]


def test_upsert_idempotent():
    s = GraphStore()
    a = s.upsert_node("Ram", "PERSON")
    b = s.upsert_node("Ram", "PERSON")
    assert a == b
    assert len(s.nodes) == 1


def test_upsert_case_folds():
    s = GraphStore()
    assert s.upsert_node("Ram", "PERSON") == s.upsert_node("ram", "PERSON")
    assert s.nodes[0].label == "Ram"  # first-seen casing kept


def test_upsert_identity_includes_type():
    s = GraphStore()
    assert s.upsert_node("Ram", "PERSON") != s.upsert_node("Ram", "LOCATION")


def test_add_edge_hasa():
    s = GraphStore()
    j = s.upsert_node("John", "PERSON")
    b = s.upsert_node("Brother")
    e = s.add_edge(j, b, "has a", "HasA", doc_id=1, sentence_index=2)
    assert s.edges[e].relation == "has a"
    assert s.edges[e].doc_id == 1


def test_add_edge_duplicate_collapses():
    s = GraphStore()
    a, b = s.upsert_node("A"), s.upsert_node("B")
    e1 = s.add_edge(a, b, "met", "AVerb", 0, 0)
    e2 = s.add_edge(a, b, "met", "AVerb", 0, 0)
    assert e1 == e2
    e3 = s.add_edge(a, b, "met", "AVerb", 0, 1)  # new provenance, new edge
    assert e3 != e1


def test_add_edge_unknown_node():
    s = GraphStore()
    a = s.upsert_node("A")
    with pytest.raises(UnknownNodeError):
        s.add_edge(a, 999, "met")


def test_match_person_pattern():
    s = _fig5_store()
    pattern = Pattern(
        nodes=(NodeConstraint("x", label="lalu yadav"),
               NodeConstraint("y", ne_types=frozenset({"PERSON"}))),
        edges=(EdgeConstraint("x", RelationMatcher.exact("criticized"), "y"),),
    )
    bindings = s.match(pattern)
    patients = {s.nodes[b.assignment["y"]].label for b in bindings}
    assert patients == {"Nitish Kumar", "Sushil Modi"}
    for b in bindings:
        assert b.matched_edges


def test_match_empty_store():
    s = GraphStore()
    pattern = Pattern(nodes=(NodeConstraint("x"),))
    assert s.match(pattern) == []


def test_match_undeclared_var_rejected():
    with pytest.raises(ValueError):
        Pattern(nodes=(NodeConstraint("x"),),
                edges=(EdgeConstraint("x", RelationMatcher.any(), "y"),))


def _fig5_store():
    s = GraphStore()
    lalu = s.upsert_node("Lalu Yadav", "PERSON")
    for i, p in enumerate(["Nitish Kumar", "Sushil Modi"]):
        pid = s.upsert_node(p, "PERSON")
        s.add_edge(lalu, pid, "criticized", "PVerb", doc_id=i, sentence_index=0)
    patna = s.upsert_node("Patna", "LOCATION")
    s.add_edge(lalu, patna, "visited", "AVerb", doc_id=0, sentence_index=1)
    return s


def random_store(rng: random.Random, max_nodes=50, max_edges=120) -> GraphStore:
    s = GraphStore()
    n = rng.randint(2, max_nodes)
    ids = []
    for _ in range(n):
        ids.append(s.upsert_node(
            rng.choice(LABELS) + (str(rng.randint(0, 3)) if rng.random() < 0.5 else ""),
            rng.choice(NE_TYPES)))
    ids = sorted(set(ids))
    for _ in range(rng.randint(0, max_edges)):
        s.add_edge(rng.choice(ids), rng.choice(ids), rng.choice(RELATIONS),
                   "Concept", rng.randint(0, 5), rng.randint(0, 5))
    return s


def random_pattern(rng: random.Random, store: GraphStore, max_vars=4) -> Pattern:
    k = rng.randint(1, max_vars)
    node_list = list(store.nodes.values())
    constraints = []
    unconstrained = 0
    for i in range(k):
        label = None
        ne = None
        roll = rng.random()
        if roll < 0.45 and node_list:
            label = rng.choice(node_list).label
        elif roll < 0.75:
            ne = frozenset(rng.sample(
                [t for t in NE_TYPES if t], rng.randint(1, 2)))
        else:
            unconstrained += 1
        constraints.append(NodeConstraint(f"v{i}", label, ne))
    edges = []
    for _ in range(rng.randint(0, min(4, k * 2))):
        src, dst = rng.choice(constraints).var, rng.choice(constraints).var
        kind = rng.random()
        if kind < 0.4:
            matcher = RelationMatcher.exact(rng.choice(RELATIONS))
        elif kind < 0.7:
            matcher = RelationMatcher.synonyms(
                rng.sample(RELATIONS, rng.randint(1, 3)))
        else:
            matcher = RelationMatcher.any()
        direction = "any" if rng.random() < 0.25 else "out"
        edges.append(EdgeConstraint(src, dst=dst, relation=matcher,
                                    direction=direction))
    return Pattern(nodes=tuple(constraints), edges=tuple(edges))


def _product_size(store, pattern):
    size = 1
    for c in pattern.nodes:
        count = len([
            nid for nid, n in store.nodes.items()
            if (c.label is None or n.label.casefold() == c.label.casefold())
            and (c.ne_types is None or (n.ne_type and n.ne_type in c.ne_types))
        ])
        size *= max(count, 1)
    return size


def test_match_equals_brute_force_randomized():
    rng = random.Random(20240817)
    trials = 0
    while trials < 300:
        pattern_rng_store = random_store(rng, max_nodes=18, max_edges=40)
        pattern = random_pattern(rng, pattern_rng_store)
        if _product_size(pattern_rng_store, pattern) > 30000:
            continue
        trials += 1
        got = {tuple(sorted(b.assignment.items()))
               for b in pattern_rng_store.match(pattern)}
        want = {tuple(sorted(a.items()))
                for a in brute_force_match(pattern_rng_store, pattern)}
        assert got == want


def test_matched_edges_satisfy_matchers():
    rng = random.Random(7)
    for _ in range(50):
        store = random_store(rng, max_nodes=12, max_edges=30)
        pattern = random_pattern(rng, store, max_vars=3)
        if _product_size(store, pattern) > 20000:
            continue
        for b in store.match(pattern):
            for eid in b.matched_edges:
                e = store.edges[eid]
                ok = any(
                    ec.relation.matches(e.relation)
                    for ec in pattern.edges
                )
                assert ok


def test_save_load_round_trip(tmp_path):
    s = _fig5_store()
    path = tmp_path / "store.graph"
    s.save(path)
    s2 = GraphStore.load(path)
    assert {(n.label, n.ne_type) for n in s2.nodes.values()} == \
        {(n.label, n.ne_type) for n in s.nodes.values()}
    assert {(e.src, e.dst, e.relation, e.doc_id, e.sentence_index)
            for e in s2.edges.values()} == \
        {(e.src, e.dst, e.relation, e.doc_id, e.sentence_index)
            for e in s.edges.values()}


def test_load_truncated_file(tmp_path):
    s = _fig5_store()
    path = tmp_path / "store.graph"
    s.save(path)
    data = path.read_text(encoding="utf-8")
    path.write_text(data[:len(data) // 2], encoding="utf-8")
    with pytest.raises(CorruptFileError):
        GraphStore.load(path)


def test_load_tampered_file(tmp_path):
    s = _fig5_store()
    path = tmp_path / "store.graph"
    s.save(path)
    data = path.read_text(encoding="utf-8").replace("Lalu", "Balu", 1)
    path.write_text(data, encoding="utf-8")
    with pytest.raises(CorruptFileError):
        GraphStore.load(path)


def test_round_trip_large_randomized(tmp_path):
    rng = random.Random(99)
    for i in range(10):
        s = random_store(rng, max_nodes=120, max_edges=200)
        path = tmp_path / f"s{i}.graph"
        s.save(path)
        s2 = GraphStore.load(path)
        assert len(s2.nodes) == len(s.nodes)
        assert len(s2.edges) == len(s.edges)
        for nid, n in s.nodes.items():
            m = s2.nodes[nid]
            assert (m.label, m.ne_type, m.attributes) == \
                (n.label, n.ne_type, n.attributes)
        for eid, e in s.edges.items():
            assert s2.edges[eid] == e


def test_no_orphan_edges_after_random_ops():
    rng = random.Random(5)
    for _ in range(50):
        s = random_store(rng, max_nodes=10, max_edges=25)
        for e in s.edges.values():
            assert e.src in s.nodes and e.dst in s.nodes


def test_apply_delta_atomic_on_failure():
    s = GraphStore()
    s.upsert_node("Existing", "PERSON")
    bad = GraphDelta(
        nodes=[DeltaNode("A", None)],
        edges=[DeltaEdge("A", None, "met", "AVerb", "Ghost", None, 0, 0)],
    )
    with pytest.raises(UnknownNodeError):
        s.apply_delta(bad)
    assert len(s.nodes) == 1
    assert len(s.edges) == 0


def test_export_view_highlight_flags():
    s = _fig5_store()
    crit = [e.id for e in s.edges.values() if e.relation == "criticized"]
    view = s.export_view(highlight=set(crit))
    for edge in view["edges"]:
        assert edge["highlight"] == (edge["id"] in crit)
    lit_nodes = {n["id"] for n in view["nodes"] if n["highlight"]}
    incident = set()
    for e in s.edges.values():
        if e.id in crit:
            incident.update((e.src, e.dst))
    assert lit_nodes == incident


def test_export_view_empty_highlight_and_filter():
    s = _fig5_store()
    view = s.export_view()
    assert all(not e["highlight"] for e in view["edges"])
    assert all(not n["highlight"] for n in view["nodes"])
    empty = s.export_view(node_filter=set())
    assert empty == {"nodes": [], "edges": []}


def test_export_view_limit_zero():
    s = _fig5_store()
    view = s.export_view(limit=0)
    assert view == {"nodes": [], "edges": []}


def test_match_deterministic_order():
    s = _fig5_store()
    pattern = Pattern(
        nodes=(NodeConstraint("x", ne_types=frozenset({"PERSON"})),),
    )
    a = [b.assignment for b in s.match(pattern)]
    b = [b.assignment for b in s.match(pattern)]
    assert a == b
    ids = [x["x"] for x in a]
    assert ids == sorted(ids)
