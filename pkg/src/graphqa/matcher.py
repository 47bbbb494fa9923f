"""Question compilation and answering.

A processed question becomes one or more type-constrained subgraph
patterns: known role fillers turn into constrained nodes, the wh word
into a free variable whose NE types come from the wh table, and concept
relations match document relations through synonym sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .docgraph import HAS_A, expand_possessive
from .graphstore import (
    Binding,
    EdgeConstraint,
    GraphStore,
    NodeConstraint,
    Pattern,
    RelationMatcher,
)
from .lexicon import Lexicon
from .pipeline import QueryAnalysis, QueryUnitTree, analyze_query
from .roles import RoleFiller, RoleUnit, WhType
from .tagger import DATE, LOCATION, NUMEX, ORGANIZATION, PERSON, TIME, DB_TO_NER


class EmptyQueryError(ValueError):
    """The question contains neither a relation nor an entity."""


# wh type -> allowed NE types of the free variable
WH_CONSTRAINTS: dict[WhType, frozenset[str]] = {
    WhType.WHO: frozenset({PERSON}),
    WhType.WHOM: frozenset({PERSON, ORGANIZATION}),
    WhType.WHEN: frozenset({DATE}),
    WhType.WHAT_TIME: frozenset({TIME}),
    WhType.WHERE: frozenset({LOCATION, ORGANIZATION}),
    WhType.WHICH_PLACE: frozenset({LOCATION, ORGANIZATION}),
    WhType.HOW_MANY: frozenset({NUMEX}),
    WhType.HOW_MUCH: frozenset({NUMEX}),
}

_PLACE_HOP_PREPS = frozenset({"at", "in", "near", "inside"})


@dataclass(frozen=True)
class Answer:
    label: str
    ne_type: str | None
    doc_id: int
    sentence_index: int


@dataclass
class MatchResult:
    answers: list[Answer] = field(default_factory=list)
    bindings: list[Binding] = field(default_factory=list)
    highlight: frozenset = frozenset()
    wh: WhType = WhType.NONE
    unanswerable: bool = False
    message: str = ""


def _morph_variants(word: str) -> set[str]:
    out = {word}
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        out |= {stem, stem + "e", stem + "ed", stem + "s", stem + "es"}
    if word.endswith("ed") and len(word) > 3:
        stem = word[:-2]
        out |= {stem, stem + "ing", stem + "s", word[:-1]}
    if word.endswith("s") and not word.endswith("ss") and len(word) > 3:
        stem = word[:-1]
        out |= {stem, stem + "ed", stem + "ing"}
    out |= {word + "s", word + "ed", word + "ing"}
    if word.endswith("e"):
        out |= {word + "d", word[:-1] + "ing"}
    return out


def relation_variants(word: str, lexicon: Lexicon | None = None) -> frozenset[str]:
    """Synonym set for one relation word: its morphological variants plus
    the lexicon's configured synonym group (and their variants)."""
    base = word.lower().strip()
    out = set(_morph_variants(base))
    if lexicon is not None:
        for syn in lexicon.synonym_group(base):
            out |= _morph_variants(syn)
    return frozenset(out)


@dataclass
class CompiledQuery:
    pattern: Pattern
    free_var: str | None
    wh: WhType


class _Builder:
    def __init__(self, lexicon: Lexicon | None):
        self.lexicon = lexicon
        self.nodes: list[NodeConstraint] = []
        self.edges: list[EdgeConstraint] = []
        self._n = 0
        self._by_key: dict[tuple[str, str | None], str] = {}

    def new_var(self, label: str | None = None,
                ne_types: frozenset[str] | None = None) -> str:
        name = f"n{self._n}"
        self._n += 1
        self.nodes.append(NodeConstraint(name, label, ne_types))
        return name

    def entity_var(self, filler: RoleFiller) -> str:
        """Variable for a filler; possessive chains add owner variables
        plus their "has a" edge constraints; the tail is returned."""
        parts, _ = expand_possessive(filler)
        if not parts:
            parts = [filler.surface]
        handles = []
        for k, part in enumerate(parts):
            if k == len(parts) - 1:
                ne = filler.ne_type
            else:
                tag = self.lexicon.lookup(part) if self.lexicon else None
                ne = DB_TO_NER.get(tag) if tag else None
            key = (part.casefold(), ne)
            var = self._by_key.get(key)
            if var is None:
                types = frozenset({ne}) if ne else None
                var = self.new_var(label=part.casefold(), ne_types=types)
                self._by_key[key] = var
            handles.append(var)
        for k in range(len(handles) - 1):
            self.edges.append(EdgeConstraint(
                handles[k], RelationMatcher.exact(HAS_A), handles[k + 1]))
        return handles[-1]

    def edge(self, src: str, relation: str, dst: str):
        self.edges.append(EdgeConstraint(
            src, RelationMatcher.synonyms(relation_variants(relation, self.lexicon)),
            dst))

    def pattern(self) -> Pattern:
        return Pattern(nodes=tuple(self.nodes), edges=tuple(self.edges))


@dataclass
class _Wired:
    """Variable handles for one conjunct's main unit after wiring."""

    agent: str | None = None
    patients: list[str] = field(default_factory=list)
    anchor: str | None = None     # patient-side SubAction anchor
    had_edges: bool = False


def _build_tree(builder: _Builder, tree: QueryUnitTree,
                promote_agentless: bool = True) -> _Wired:
    """Wire one conjunct's main+sub units into the builder; mirrors the
    document-side edge rules (agent promotion for agentless passives,
    sub-unit head = its patient node). Promotion is disabled when the
    missing agent is the wh slot itself."""
    by_id = {u.unit_id: u for u in tree.subs}
    head_cache: dict[str, str | None] = {}

    def head_var(unit: RoleUnit) -> str | None:
        if unit.unit_id in head_cache:
            return head_cache[unit.unit_id]
        head_cache[unit.unit_id] = None
        var = None
        if unit.acted_upon is not None:
            var = builder.entity_var(unit.acted_upon)
        elif unit.acted_upon_phrase and unit.acted_upon_phrase in by_id:
            var = head_var(by_id[unit.acted_upon_phrase])
        elif unit.place_dest is not None:
            var = builder.entity_var(unit.place_dest)
        elif unit.place_source is not None:
            var = builder.entity_var(unit.place_source)
        elif unit.time is not None:
            var = builder.entity_var(unit.time)
        elif unit.agent is not None:
            var = builder.entity_var(unit.agent)
        elif unit.agent_phrase and unit.agent_phrase in by_id:
            var = head_var(by_id[unit.agent_phrase])
        head_cache[unit.unit_id] = var
        return var

    def wire(unit: RoleUnit, promote: bool) -> _Wired:
        agent = None
        if unit.agent is not None:
            agent = builder.entity_var(unit.agent)
        elif unit.agent_phrase and unit.agent_phrase in by_id:
            agent = head_var(by_id[unit.agent_phrase])
        au = (builder.entity_var(unit.acted_upon)
              if unit.acted_upon is not None else None)
        aup = None
        if unit.acted_upon_phrase and unit.acted_upon_phrase in by_id:
            aup = head_var(by_id[unit.acted_upon_phrase])
        pd = (builder.entity_var(unit.place_dest)
              if unit.place_dest is not None else None)
        ps = (builder.entity_var(unit.place_source)
              if unit.place_source is not None else None)
        when = (builder.entity_var(unit.time)
                if unit.time is not None else None)
        patients = [v for v in (au, aup, pd, ps, when) if v is not None]
        if promote and agent is None and au is not None:
            agent = au
            patients = [v for v in (aup, pd, ps, when) if v is not None]
        anchor = next((v for v in (au, aup, pd, ps) if v is not None), None)
        had = False
        if agent is not None:
            for p in patients:
                builder.edge(agent, unit.relation.surface, p)
                had = True
        return _Wired(agent=agent, patients=patients, anchor=anchor,
                      had_edges=had)

    sub_edges = False
    for sub in tree.subs:
        sub_edges = wire(sub, True).had_edges or sub_edges
    wired = wire(tree.main, promote_agentless)
    wired.had_edges = wired.had_edges or sub_edges
    return wired


def compile_tree(
    tree: QueryUnitTree,
    wh: WhType,
    lexicon: Lexicon | None = None,
) -> list[CompiledQuery]:
    """Compile one conjunct into candidate patterns, most direct first."""
    constraint = WH_CONSTRAINTS.get(wh)
    main = tree.main
    out: list[CompiledQuery] = []

    def fresh_builder(promote: bool = True) -> tuple[_Builder, _Wired]:
        b = _Builder(lexicon)
        return b, _build_tree(b, tree, promote_agentless=promote)

    if constraint is None:
        # Report / None: closed pattern, whole-query match. A relation
        # with no patient still constrains: it must have some target.
        b, wired = fresh_builder()
        if wired.agent is not None and not wired.had_edges:
            b.edge(wired.agent, main.relation.surface, b.new_var())
        if not b.nodes:
            raise EmptyQueryError("query has no relation and no entity")
        out.append(CompiledQuery(b.pattern(), None, wh))
        return out

    agent_free = main.agent is None and main.agent_phrase is None
    patient_free = main.acted_upon is None and main.acted_upon_phrase is None

    def agent_position():
        b, wired = fresh_builder(promote=False)
        free = b.new_var(ne_types=constraint)
        if wired.patients:
            for p in wired.patients:
                b.edge(free, main.relation.surface, p)
        else:
            b.edge(free, main.relation.surface, b.new_var())
        out.append(CompiledQuery(b.pattern(), free, wh))

    def patient_position():
        b, wired = fresh_builder()
        free = b.new_var(ne_types=constraint)
        src = wired.agent if wired.agent is not None else b.new_var()
        b.edge(src, main.relation.surface, free)
        out.append(CompiledQuery(b.pattern(), free, wh))

    def place_hop():
        # place one hop off the patient-side node (leftover preposition
        # phrases become SubAction edges there)
        b, wired = fresh_builder()
        if wired.anchor is None:
            return
        free = b.new_var(ne_types=constraint)
        b.edges.append(EdgeConstraint(
            wired.anchor,
            RelationMatcher.synonyms(_PLACE_HOP_PREPS),
            free))
        out.append(CompiledQuery(b.pattern(), free, wh))

    if wh is WhType.WHO:
        if agent_free:
            agent_position()
        if patient_free:
            patient_position()
        if not out:
            agent_position()
    elif wh is WhType.WHOM:
        if patient_free:
            patient_position()
        if agent_free:
            agent_position()
        if not out:
            patient_position()
    elif wh in (WhType.WHEN, WhType.WHAT_TIME, WhType.HOW_MANY, WhType.HOW_MUCH):
        patient_position()
    elif wh in (WhType.WHERE, WhType.WHICH_PLACE):
        patient_position()
        place_hop()
    return out


def compile(units, wh: WhType, lexicon: Lexicon | None = None) -> Pattern:
    """Compile role units (one conjunct: main first, subs after) into the
    primary pattern for their wh type."""
    if not units:
        raise EmptyQueryError("no units to compile")
    tree = QueryUnitTree(main=units[0], subs=list(units[1:]))
    compiled = compile_tree(tree, wh, lexicon)
    if not compiled:
        raise EmptyQueryError("query compiled to no pattern")
    return compiled[0].pattern


def _answer_provenance(store: GraphStore, binding: Binding, node_id: int):
    touching = [
        store.edges[eid] for eid in binding.matched_edges
        if store.edges[eid].src == node_id or store.edges[eid].dst == node_id
    ]
    if not touching:
        touching = [store.edges[eid] for eid in store.incident_edges(node_id)]
    if not touching:
        return -1, -1
    best = min(touching, key=lambda e: (e.doc_id, e.sentence_index))
    return best.doc_id, best.sentence_index


def _date_specificity(label: str) -> int:
    return label.count("-")


def run_compiled(store: GraphStore, compiled: list[CompiledQuery]) -> MatchResult:
    """Run candidate patterns in order, merging answers by node identity."""
    result = MatchResult()
    seen_nodes: set[int] = set()
    highlight: set[int] = set()
    for cq in compiled:
        result.wh = cq.wh
        bindings = store.match(cq.pattern)
        result.bindings.extend(bindings)
        for binding in bindings:
            if binding.matched_edges:
                highlight.update(binding.matched_edges)
            else:
                for nid in binding.assignment.values():
                    highlight.update(store.incident_edges(nid))
            if cq.free_var is not None:
                targets = [binding.assignment[cq.free_var]]
            else:
                targets = sorted(set(binding.assignment.values()))
            for nid in targets:
                if nid in seen_nodes:
                    continue
                seen_nodes.add(nid)
                node = store.nodes[nid]
                doc, sent = _answer_provenance(store, binding, nid)
                result.answers.append(Answer(node.label, node.ne_type, doc, sent))
    if result.wh in (WhType.WHEN,) and result.answers:
        best = max(_date_specificity(a.label) for a in result.answers)
        result.answers = [a for a in result.answers
                          if _date_specificity(a.label) == best]
    result.highlight = frozenset(highlight)
    return result


def _entity_only_pattern(analysis: QueryAnalysis, lexicon: Lexicon) -> Pattern | None:
    """Report-style query with entities but no relation word ("give me
    report on Ram" -> "on Ram"): match the entity nodes directly."""
    b = _Builder(lexicon)
    from .roles import filler_from_phrase  # local to avoid cycle at import
    seen = set()
    for sent in analysis.sentences:
        for ph in sent.phrases:
            if not ph.is_ne and not (ph.is_nounish and not ph.is_concept):
                continue
            if ph.is_dummy or len(ph.tokens) == 0:
                continue
            key = ph.node_label.casefold()
            if key in seen:
                continue
            seen.add(key)
            b.entity_var(filler_from_phrase(ph))
    if not b.nodes:
        return None
    return b.pattern()


def answer(
    question: str,
    store: GraphStore,
    lexicon: Lexicon,
    patterns,
) -> MatchResult:
    """Full pipeline: analyze the question, compile each conjunct, run
    them against the store, and merge. Unanswerable questions produce an
    empty result, never a crash."""
    analysis: QueryAnalysis = analyze_query(question, lexicon, patterns)
    if not analysis.sentences:
        raise EmptyQueryError("empty question")
    compiled: list[CompiledQuery] = []
    failures: list[str] = []
    for tree in analysis.trees:
        try:
            compiled.extend(compile_tree(tree, analysis.wh, lexicon))
        except EmptyQueryError as exc:
            failures.append(str(exc))
    if not compiled and analysis.wh in (WhType.REPORT, WhType.NONE):
        pattern = _entity_only_pattern(analysis, lexicon)
        if pattern is not None:
            compiled.append(CompiledQuery(pattern, None, analysis.wh))
    if not compiled:
        if analysis.errors or analysis.trees:
            return MatchResult(
                wh=analysis.wh, unanswerable=True,
                message="; ".join(analysis.errors + failures)
                or "no analyzable clause")
        raise EmptyQueryError("query has no relation and no entity")
    result = run_compiled(store, compiled)
    result.wh = analysis.wh
    if analysis.errors:
        result.message = "; ".join(analysis.errors)
    return result
