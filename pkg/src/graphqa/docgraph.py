"""Document-side graph construction.

Verb classification, SubAction extraction for leftover preposition
phrases, annotated-XML emission (with a parser for the round trip), and
GraphDelta construction from role units including "has a" possessive
chains. Every edge carries (doc_id, sentence_index) provenance.
"""

from __future__ import annotations

import enum
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .chunker import AnnotatedSentence, Phrase
from .lexicon import Lexicon
from .roles import RoleFiller, RoleUnit
from .tagger import DB_TO_NER, TaggedSentence, Token


class DanglingRoleError(ValueError):
    """A unit has a relation but neither an agent- nor patient-side node."""


class VerbClass(enum.Enum):
    AVERB = "AVerb"
    PVERB = "PVerb"
    COPULA = "Copula"


REL_CONCEPT = "Concept"
REL_HASA = "HasA"
REL_SUBACTION = "SubAction"
HAS_A = "has a"

_BE_FORMS = frozenset({"is", "am", "are", "was", "were", "be", "been", "being"})

_RELATION_ELEMENTS = {
    VerbClass.AVERB.value: VerbClass.AVERB.value,
    VerbClass.PVERB.value: VerbClass.PVERB.value,
    VerbClass.COPULA.value: VerbClass.COPULA.value,
    REL_CONCEPT: REL_CONCEPT,
}


@dataclass(frozen=True)
class SubAction:
    """A leftover preposition phrase: its action word, the entity it
    introduces, and that entity's NE type (never NONE)."""

    action: str
    entity: str
    ne_type: str
    attached_to: str = "AU"      # role side the edge hangs off
    unit_id: str = ""


@dataclass
class DeltaNode:
    label: str
    ne_type: str | None = None
    attributes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DeltaEdge:
    src_label: str
    src_ne: str | None
    relation: str
    relation_class: str
    dst_label: str
    dst_ne: str | None
    doc_id: int
    sentence_index: int


@dataclass
class GraphDelta:
    nodes: list[DeltaNode] = field(default_factory=list)
    edges: list[DeltaEdge] = field(default_factory=list)


def _tokens_of(sentence) -> list[Token]:
    if isinstance(sentence, TaggedSentence):
        return sentence.tokens
    if isinstance(sentence, AnnotatedSentence):
        return sentence.tokens
    return list(sentence)


def classify_verb(relation, sentence) -> VerbClass:
    """Copula for be-forms, PVerb for passives (be-form directly before
    the participle), AVerb otherwise."""
    surf = relation.surface if isinstance(relation, RoleFiller) else str(relation)
    word = surf.lower().split()[0] if surf.split() else surf.lower()
    if word in _BE_FORMS:
        return VerbClass.COPULA
    tokens = _tokens_of(sentence)
    for k, tok in enumerate(tokens):
        if tok.low == word:
            if k > 0 and tokens[k - 1].low in _BE_FORMS:
                return VerbClass.PVERB
            break
    return VerbClass.AVERB


def is_verb_relation(relation: RoleFiller, sentence) -> bool:
    word = relation.surface.lower().split()[0] if relation.surface.split() else ""
    for tok in _tokens_of(sentence):
        if tok.low == word:
            return tok.pos.startswith("VB")
    return False


def extract_subactions(sentence, unit: RoleUnit) -> list[SubAction]:
    """Preposition phrases not consumed by any role slot, paired with a
    following entity of known NE type."""
    phrases: tuple[Phrase, ...] = tuple(getattr(sentence, "phrases", sentence))
    consumed = unit.consumed_indices
    out = []
    for k in range(len(phrases) - 1):
        ph, ent = phrases[k], phrases[k + 1]
        if k in consumed or (k + 1) in consumed:
            continue
        if not ph.is_prep or ent.is_dummy:
            continue
        ne = ent.ne_type
        if ne is None:
            continue
        out.append(SubAction(
            action=ph.surface.lower(),
            entity=ent.node_label,
            ne_type=ne,
            attached_to="AU" if _has_patient(unit) else "A",
            unit_id=unit.unit_id,
        ))
    return out


def _has_patient(unit: RoleUnit) -> bool:
    # time is excluded: a date never anchors a SubAction edge
    return any((unit.acted_upon, unit.acted_upon_phrase, unit.place_dest,
                unit.place_source))


_POSS_SPLIT = re.compile(r"'s(?=\s|$)")


def expand_possessive(entity) -> tuple[list[str], list[tuple[str, str, str]]]:
    """Expand "X's Y's Z" into its node chain; n possessive markers give
    n+1 nodes linked by n "has a" edges, leftmost owner first."""
    label = entity.surface if isinstance(entity, RoleFiller) else str(entity)
    parts = [p.strip() for p in _POSS_SPLIT.split(label)]
    parts = [p for p in parts if p]
    edges = [(parts[k], HAS_A, parts[k + 1]) for k in range(len(parts) - 1)]
    return parts, edges


# ---------------------------------------------------------------- XML --

def emit_xml(units: list[RoleUnit], subactions: list[SubAction] = (), doc_id: int = 0) -> str:
    """Serialize one processed document; element names follow the
    annotation schema (A, AU, AUPlaceS, AUPlaceD, AP, AUP, AVerb, PVerb,
    Copula, SubAction/SubAction_NETYPE)."""
    root = ET.Element("document", {"id": str(doc_id)})
    by_sentence: dict[int, list[RoleUnit]] = {}
    for u in units:
        by_sentence.setdefault(u.sentence_index, []).append(u)
    sa_by_unit: dict[str, list[SubAction]] = {}
    for sa in subactions:
        sa_by_unit.setdefault(sa.unit_id, []).append(sa)
    for sent_idx in sorted(by_sentence):
        sent_el = ET.SubElement(root, "sentence", {"index": str(sent_idx)})
        for u in by_sentence[sent_idx]:
            ue = ET.SubElement(sent_el, "unit", {"id": u.unit_id})
            if u.low_confidence:
                ue.set("low_confidence", "true")

            def add_role(name: str, filler: RoleFiller | None):
                if filler is None:
                    return
                el = ET.SubElement(ue, name)
                el.text = filler.surface
                if filler.ne_type:
                    el.set("netype", filler.ne_type)
                if filler.attributes:
                    el.set("attrs", ",".join(filler.attributes))

            add_role("A", u.agent)
            rel_el = ET.SubElement(
                ue, _RELATION_ELEMENTS.get(u.relation_class or REL_CONCEPT, REL_CONCEPT))
            rel_el.text = u.relation.surface
            add_role("AU", u.acted_upon)
            add_role("AUPlaceS", u.place_source)
            add_role("AUPlaceD", u.place_dest)
            add_role("Time", u.time)
            if u.agent_phrase:
                ap = ET.SubElement(ue, "AP", {"ref": u.agent_phrase})
                ap.text = "DUMMY"
            if u.acted_upon_phrase:
                aup = ET.SubElement(ue, "AUP", {"ref": u.acted_upon_phrase})
                aup.text = "DUMMY"
            for sa in sa_by_unit.get(u.unit_id, []):
                sa_el = ET.SubElement(
                    ue, "SubAction", {"action": sa.action, "attached": sa.attached_to})
                sa_el.text = sa.entity
                ne_el = ET.SubElement(sa_el, "SubAction_NETYPE")
                ne_el.text = sa.ne_type
    ET.indent(root)
    return ET.tostring(root, encoding="unicode")


def _filler_from_el(el: ET.Element | None) -> RoleFiller | None:
    if el is None:
        return None
    attrs = tuple(a for a in (el.get("attrs") or "").split(",") if a)
    return RoleFiller(
        surface=el.text or "",
        ne_type=el.get("netype"),
        attributes=attrs,
    )


def parse_xml(xml_text: str) -> tuple[int, list[RoleUnit], list[SubAction]]:
    """Inverse of emit_xml; recovers the role units field for field."""
    root = ET.fromstring(xml_text)
    doc_id = int(root.get("id", "0"))
    units: list[RoleUnit] = []
    subactions: list[SubAction] = []
    for sent_el in root.findall("sentence"):
        sent_idx = int(sent_el.get("index", "0"))
        for ue in sent_el.findall("unit"):
            rel_el = None
            rel_class = None
            for name in _RELATION_ELEMENTS:
                found = ue.find(name)
                if found is not None:
                    rel_el, rel_class = found, name
                    break
            ap = ue.find("AP")
            aup = ue.find("AUP")
            unit = RoleUnit(
                unit_id=ue.get("id", ""),
                doc_id=doc_id,
                sentence_index=sent_idx,
                relation=RoleFiller(surface=rel_el.text or "", ne_type=None)
                if rel_el is not None else RoleFiller(""),
                relation_class=rel_class,
                agent=_filler_from_el(ue.find("A")),
                acted_upon=_filler_from_el(ue.find("AU")),
                place_source=_filler_from_el(ue.find("AUPlaceS")),
                place_dest=_filler_from_el(ue.find("AUPlaceD")),
                time=_filler_from_el(ue.find("Time")),
                agent_phrase=ap.get("ref") if ap is not None else None,
                acted_upon_phrase=aup.get("ref") if aup is not None else None,
                low_confidence=ue.get("low_confidence") == "true",
            )
            units.append(unit)
            for sa_el in ue.findall("SubAction"):
                ne_el = sa_el.find("SubAction_NETYPE")
                subactions.append(SubAction(
                    action=sa_el.get("action", ""),
                    entity=(sa_el.text or "").strip(),
                    ne_type=(ne_el.text or "") if ne_el is not None else "",
                    attached_to=sa_el.get("attached", "AU"),
                    unit_id=unit.unit_id,
                ))
    return doc_id, units, subactions


# -------------------------------------------------------------- delta --

class _DeltaBuilder:
    def __init__(self, lexicon: Lexicon | None):
        self.lexicon = lexicon
        self.nodes: dict[tuple[str, str | None], DeltaNode] = {}
        self.edges: list[DeltaEdge] = []
        self._edge_seen: set = set()

    def node(self, label: str, ne_type: str | None, attributes: dict | None = None):
        key = (label.casefold(), ne_type)
        found = self.nodes.get(key)
        if found is None:
            found = DeltaNode(label=label, ne_type=ne_type, attributes={})
            self.nodes[key] = found
        if attributes:
            found.attributes.update(attributes)
        return label, ne_type

    def edge(self, src, relation, relation_class, dst, doc_id, sentence_index):
        e = DeltaEdge(src[0], src[1], relation, relation_class,
                      dst[0], dst[1], doc_id, sentence_index)
        key = (e.src_label.casefold(), e.src_ne, e.relation, e.dst_label.casefold(),
               e.dst_ne, e.doc_id, e.sentence_index)
        if key not in self._edge_seen:
            self._edge_seen.add(key)
            self.edges.append(e)

    def _owner_ne(self, part: str) -> str | None:
        if self.lexicon is None:
            return None
        tag = self.lexicon.lookup(part)
        return DB_TO_NER.get(tag) if tag else None

    def entity(self, filler: RoleFiller, unit: RoleUnit):
        """Add a filler's node(s); possessive chains expand with the chain
        tail as the edge endpoint."""
        parts, links = expand_possessive(filler)
        if not parts:
            return None
        if len(parts) == 1:
            return self.node(parts[0], filler.ne_type,
                             _attrs_of(filler))
        handles = []
        for k, part in enumerate(parts):
            ne = filler.ne_type if k == len(parts) - 1 else self._owner_ne(part)
            attrs = _attrs_of(filler) if k == len(parts) - 1 else None
            handles.append(self.node(part, ne, attrs))
        for k in range(len(handles) - 1):
            self.edge(handles[k], HAS_A, REL_HASA, handles[k + 1],
                      unit.doc_id, unit.sentence_index)
        return handles[-1]


def _attrs_of(filler: RoleFiller) -> dict:
    return {"modifiers": ",".join(filler.attributes)} if filler.attributes else {}


def build_graph_delta(
    units: list[RoleUnit],
    subactions: list[SubAction] = (),
    lexicon: Lexicon | None = None,
) -> GraphDelta:
    """Apply the edge rules: agent -> each available patient-side filler
    (acted-upon, sub-unit head, places, time), sub-unit heads standing in
    for AP/AUP, and SubActions hanging off the patient-side node."""
    b = _DeltaBuilder(lexicon)
    by_id = {u.unit_id: u for u in units}
    head_cache: dict[str, object] = {}

    def head_node(unit: RoleUnit):
        # A sub-unit is represented by its patient node, else its agent.
        if unit.unit_id in head_cache:
            return head_cache[unit.unit_id]
        head_cache[unit.unit_id] = None  # cycle guard
        handle = None
        if unit.acted_upon is not None:
            handle = b.entity(unit.acted_upon, unit)
        elif unit.acted_upon_phrase and unit.acted_upon_phrase in by_id:
            handle = head_node(by_id[unit.acted_upon_phrase])
        elif unit.place_dest is not None:
            handle = b.entity(unit.place_dest, unit)
        elif unit.place_source is not None:
            handle = b.entity(unit.place_source, unit)
        elif unit.time is not None:
            handle = b.entity(unit.time, unit)
        elif unit.agent is not None:
            handle = b.entity(unit.agent, unit)
        elif unit.agent_phrase and unit.agent_phrase in by_id:
            handle = head_node(by_id[unit.agent_phrase])
        head_cache[unit.unit_id] = handle
        return handle

    subaction_anchor: dict[str, object] = {}
    for unit in units:
        agent = None
        if unit.agent is not None:
            agent = b.entity(unit.agent, unit)
        elif unit.agent_phrase and unit.agent_phrase in by_id:
            agent = head_node(by_id[unit.agent_phrase])
        au = b.entity(unit.acted_upon, unit) if unit.acted_upon is not None else None
        aup = None
        if unit.acted_upon_phrase and unit.acted_upon_phrase in by_id:
            aup = head_node(by_id[unit.acted_upon_phrase])
        pd = b.entity(unit.place_dest, unit) if unit.place_dest is not None else None
        ps = b.entity(unit.place_source, unit) if unit.place_source is not None else None
        when = b.entity(unit.time, unit) if unit.time is not None else None
        patients = [h for h in (au, aup, pd, ps, when) if h is not None]
        if agent is None and not patients:
            raise DanglingRoleError(
                f"unit {unit.unit_id}: relation {unit.relation.surface!r} "
                "has neither agent nor patient")
        if agent is None and au is not None:
            # agentless passive: the acted-upon anchors its places/times
            agent = au
            patients = [h for h in (aup, pd, ps, when) if h is not None]
        subaction_anchor[unit.unit_id] = next(
            (h for h in (au, aup, pd, ps, agent) if h is not None), None)
        if agent is not None:
            rclass = unit.relation_class or REL_CONCEPT
            for p in patients:
                b.edge(agent, unit.relation.surface, rclass, p,
                       unit.doc_id, unit.sentence_index)

    for sa in subactions:
        unit = by_id.get(sa.unit_id)
        if unit is None:
            continue
        anchor = subaction_anchor.get(sa.unit_id)
        if sa.attached_to == "A" and unit.agent is not None:
            anchor = b.entity(unit.agent, unit)
        if anchor is None:
            continue
        target = b.node(sa.entity, sa.ne_type)
        b.edge(anchor, sa.action, REL_SUBACTION, target,
               unit.doc_id, unit.sentence_index)

    return GraphDelta(nodes=list(b.nodes.values()), edges=b.edges)
