"""Clause analysis: wh-detection, conjunctive separation, embedded-clause
lifting with DUMMY placeholders, and semantic-role assignment against the
ordered pattern table."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace

from .chunker import AnnotatedSentence, Phrase, make_dummy
from .lexicon import DbTag, RolePattern, SlotMatcher
from .tagger import DATE, TIME


class NoRelationError(ValueError):
    """The unit contains no verb or concept word to act as relation."""


class WhType(enum.Enum):
    WHO = "Who"
    WHOM = "Whom"
    WHEN = "When"
    WHAT_TIME = "WhatTime"
    WHERE = "Where"
    WHICH_PLACE = "WhichPlace"
    HOW_MANY = "HowMany"
    HOW_MUCH = "HowMuch"
    REPORT = "Report"
    NONE = "None"


_WH_SECOND = {
    ("what", "time"): WhType.WHAT_TIME,
    ("which", "place"): WhType.WHICH_PLACE,
    ("which", "day"): WhType.WHEN,
    ("which", "month"): WhType.WHEN,
    ("which", "year"): WhType.WHEN,
    ("which", "date"): WhType.WHEN,
    ("how", "many"): WhType.HOW_MANY,
    ("how", "much"): WhType.HOW_MUCH,
}
_WH_FIRST = {
    "who": WhType.WHO,
    "whom": WhType.WHOM,
    "when": WhType.WHEN,
    "where": WhType.WHERE,
}

_AUX_VERBS = frozenset({"do", "does", "did"})


@dataclass(frozen=True)
class RoleFiller:
    """Surface snapshot of a role slot; what graph building consumes."""

    surface: str
    ne_type: str | None = None
    attributes: tuple[str, ...] = ()


@dataclass(frozen=True)
class UnitQuery:
    phrases: tuple[Phrase, ...]
    wh: WhType = WhType.NONE
    parent_dummy_slot: str | None = None
    unit_id: str = ""


@dataclass
class RoleUnit:
    unit_id: str
    doc_id: int
    sentence_index: int
    relation: RoleFiller
    relation_class: str | None = None
    agent: RoleFiller | None = None
    acted_upon: RoleFiller | None = None
    place_source: RoleFiller | None = None
    place_dest: RoleFiller | None = None
    time: RoleFiller | None = None
    agent_phrase: str | None = None          # sub-unit id (AP)
    acted_upon_phrase: str | None = None     # sub-unit id (AUP)
    low_confidence: bool = False
    consumed_indices: frozenset[int] = field(
        default_factory=frozenset, compare=False, repr=False)


def unit_text(phrases) -> str:
    """Render a phrase sequence back to text (possessive 's binds tight)."""
    parts: list[str] = []
    for ph in phrases:
        if ph.surface == "'s" and parts:
            parts[-1] += "'s"
        else:
            parts.append(ph.surface)
    return " ".join(parts)


def dump_role_unit(unit: RoleUnit) -> str:
    def s(f: RoleFiller | None) -> str:
        return f.surface if f else ""

    return (
        f"A={s(unit.agent)}|AU={s(unit.acted_upon)}"
        f"|AUPlaceS={s(unit.place_source)}|AUPlaceD={s(unit.place_dest)}"
        f"|REL={unit.relation.surface}|TIME={s(unit.time)}"
        f"|doc={unit.doc_id}|sent={unit.sentence_index}"
    )


def detect_wh(sentence: AnnotatedSentence, report_hint: bool = False) -> WhType:
    """Classify by the leading wh-word. A WP/WRB anywhere but position 0
    does not make a wh-query; report-style inputs (detected upstream from
    the removed ignorable prefix) come in via `report_hint`."""
    tokens = sentence.tokens
    if tokens and tokens[0].pos in ("WP", "WRB"):
        first = tokens[0].low
        second = tokens[1].low if len(tokens) > 1 else ""
        wh = _WH_SECOND.get((first, second))
        if wh is not None:
            return wh
        return _WH_FIRST.get(first, WhType.NONE)
    if report_hint:
        return WhType.REPORT
    return WhType.NONE


def _is_relation_word(ph: Phrase) -> bool:
    if ph.is_concept:
        return True
    return ph.is_verb and ph.surface.lower() not in _AUX_VERBS


def _is_np(ph: Phrase) -> bool:
    if ph.is_dummy:
        return True
    if ph.ner_label in {DATE, TIME}:
        return False
    return ph.is_nounish


def _is_entity_like(ph: Phrase) -> bool:
    return ph.is_ne or (_is_np(ph) and not ph.is_concept and not ph.is_dummy)


def _is_cc(ph: Phrase) -> bool:
    return len(ph.tokens) == 1 and ph.first_pos == "CC"


def _category(ph: Phrase) -> str | None:
    if _is_relation_word(ph):
        return "rel"
    if _is_entity_like(ph):
        return "ent"
    return None


def _complete(phrases: tuple[Phrase, ...]) -> bool:
    return any(_is_relation_word(p) for p in phrases) and any(
        _is_entity_like(p) for p in phrases)


def _find_groups(phrases: tuple[Phrase, ...]):
    groups = []
    k = 0
    while k < len(phrases):
        cat = _category(phrases[k])
        if cat is None:
            k += 1
            continue
        members = [k]
        j = k
        while (
            j + 2 < len(phrases)
            and _is_cc(phrases[j + 1])
            and _category(phrases[j + 2]) == cat
        ):
            members.append(j + 2)
            j += 2
        if len(members) > 1:
            groups.append((k, j + 1, members))
            k = j + 1
        else:
            k += 1
    return groups


def _split_phrases(phrases: tuple[Phrase, ...]) -> list[tuple[Phrase, ...]]:
    for k, ph in enumerate(phrases):
        if _is_cc(ph) and _complete(phrases[:k]) and _complete(phrases[k + 1:]):
            return _split_phrases(phrases[:k]) + _split_phrases(phrases[k + 1:])
    groups = _find_groups(phrases)
    if not groups:
        return [phrases]
    out = []
    for combo in itertools.product(*(g[2] for g in groups)):
        rebuilt: list[Phrase] = []
        k = 0
        for (start, end, _members), pick in zip(groups, combo):
            rebuilt.extend(phrases[k:start])
            rebuilt.append(phrases[pick])
            k = end
        rebuilt.extend(phrases[k:])
        out.append(tuple(rebuilt))
    return out


def split_conjunctive(sentence: AnnotatedSentence, wh: WhType = WhType.NONE) -> list[UnitQuery]:
    """Conjunctive separation: k conjoined concepts crossed with m
    conjoined entities yield k*m unit queries; complete clauses joined
    by a conjunction split into independent units."""
    parts = _split_phrases(tuple(sentence.phrases))
    return [UnitQuery(phrases=p, wh=wh) for p in parts]


def _has_relation(phrases: tuple[Phrase, ...]) -> bool:
    return any(_is_relation_word(p) for p in phrases)


def _has_entity(phrases: tuple[Phrase, ...]) -> bool:
    return any(p.is_ne or (_is_np(p) and not p.is_concept and not p.is_dummy)
               for p in phrases)


def extract_embedded(unit: UnitQuery, make_id=None) -> tuple[UnitQuery, list[UnitQuery]]:
    """Lift inner clauses (a preposition followed by a phrase run with its
    own relation word and entity) into sub-units; the main unit keeps a
    DUMMY placeholder referencing each sub-unit."""
    counter = itertools.count(1)
    if make_id is None:
        def make_id() -> str:
            return f"{unit.unit_id or 'u'}.d{next(counter)}"

    subs: list[UnitQuery] = []

    def lift(phrases: tuple[Phrase, ...]) -> tuple[Phrase, ...]:
        for i in reversed(range(len(phrases))):
            ph = phrases[i]
            if not ph.is_prep:
                continue
            head, tail = phrases[:i + 1], phrases[i + 1:]
            if len(tail) < 2:
                continue
            if _has_relation(tail) and _has_entity(tail) and _has_relation(phrases[:i]):
                did = make_id()
                sub_phrases = lift(tail)
                subs.append(UnitQuery(
                    phrases=sub_phrases,
                    wh=WhType.NONE,
                    parent_dummy_slot=did,
                    unit_id=did,
                ))
                return lift(head + (make_dummy(did, anchor=ph.end),))
        return phrases

    main = replace(unit, phrases=lift(tuple(unit.phrases)))
    return main, subs


def _slot_matches(slot: SlotMatcher, ph: Phrase) -> bool:
    if slot.kind == "literal":
        return ph.surface.lower() == slot.value
    t = slot.value
    if t == "np":
        return _is_np(ph)
    if t == "ne":
        return ph.is_ne
    if t == "concept":
        return _is_relation_word(ph)
    if t == "cn":
        return ph.db_label == DbTag.CN
    if t == "xprep":
        return ph.db_label == DbTag.XPREP
    if t == "aprep":
        return ph.db_label == DbTag.APREP
    tag = {"nep": DbTag.NEP, "nel": DbTag.NEL, "nec": DbTag.NEC,
           "neo": DbTag.NEO, "ned": DbTag.NED, "nept": DbTag.NEPT}.get(t)
    return tag is not None and ph.db_label == tag


def _match_pattern(pattern: RolePattern, phrases: tuple[Phrase, ...]):
    width = len(pattern.sequence)
    for start in range(len(phrases) - width + 1):
        window = phrases[start:start + width]
        if all(_slot_matches(s, p) for s, p in zip(pattern.sequence, window)):
            captures = {
                slot.capture: start + k
                for k, slot in enumerate(pattern.sequence)
                if slot.capture
            }
            return captures, set(range(start, start + width))
    return None


def filler_from_phrase(ph: Phrase) -> RoleFiller:
    return RoleFiller(
        surface=ph.node_label,
        ne_type=ph.ne_type,
        attributes=ph.modifiers,
    )


def _relation_filler(ph: Phrase) -> RoleFiller:
    return RoleFiller(surface=ph.node_label.lower(), ne_type=None)


_PLACE_FILL_PREPS = frozenset({"in", "at", "near", "inside"})
_PLACE_NE = frozenset({"LOCATION", "ORGANIZATION"})

# Light verbs whose concept-word object carries the real relation:
# "gave a statement" relates through "statement", not "gave".
LIGHT_VERBS = frozenset(
    "give gives gave given make makes made hold holds held "
    "deliver delivers delivered perform performs performed".split())


def assign_roles(
    unit: UnitQuery,
    patterns: list[RolePattern],
    doc_id: int = 0,
    sentence_index: int = 0,
    unit_id: str = "",
) -> RoleUnit:
    """Bind role slots via the first matching pattern (file order), then
    run the closing passes: light-verb absorption, by-agent, from/to
    places, leftover DUMMY to AP/AUP, date/time into the time slot, and
    the no-patient place fill."""
    phrases = tuple(unit.phrases)
    slots: dict[str, int] = {}
    consumed: set[int] = set()
    low_confidence = False
    for pattern in patterns:
        got = _match_pattern(pattern, phrases)
        if got:
            slots, consumed = got
            break
    rel_idx = slots.pop("Relation", None)
    if rel_idx is None:
        rel_idx = next(
            (k for k, p in enumerate(phrases) if p.is_concept), None)
        if rel_idx is None:
            rel_idx = next(
                (k for k, p in enumerate(phrases) if _is_relation_word(p)), None)
        if rel_idx is None:
            raise NoRelationError(
                "no verb or concept word in unit: "
                + " ".join(p.surface for p in phrases))
        if not slots:
            low_confidence = True
        consumed.add(rel_idx)

    # light verb + concept object: the concept word is the relation
    au_idx = slots.get("AU")
    if (
        au_idx is not None
        and phrases[rel_idx].surface.lower() in LIGHT_VERBS
        and phrases[au_idx].is_concept
    ):
        rel_idx = slots.pop("AU")

    def free(k: int) -> bool:
        return k not in consumed

    # leftover DUMMY placeholders become AP (before relation) or AUP (after)
    ap_ref = aup_ref = None
    for name, target in (("AP", "ap"), ("AUP", "aup")):
        idx = slots.pop(name, None)
        if idx is not None and phrases[idx].is_dummy:
            if target == "ap":
                ap_ref = phrases[idx].dummy_id
            else:
                aup_ref = phrases[idx].dummy_id
    for k, ph in enumerate(phrases):
        if not ph.is_dummy or not free(k):
            continue
        if k > rel_idx and aup_ref is None:
            aup_ref = ph.dummy_id
        elif k < rel_idx and ap_ref is None:
            ap_ref = ph.dummy_id
        else:
            continue
        consumed.add(k)
        if k > 0 and free(k - 1) and phrases[k - 1].is_prep:
            consumed.add(k - 1)

    # agentive "by <entity>"
    if "A" not in slots:
        for k in range(len(phrases) - 1):
            if (free(k) and free(k + 1)
                    and phrases[k].surface.lower() == "by"
                    and _is_np(phrases[k + 1])):
                slots["A"] = k + 1
                consumed.update((k, k + 1))
                break

    # from/to place prepositions
    for prep, name in (("from", "AUPlaceS"), ("to", "AUPlaceD")):
        if name in slots:
            continue
        for k in range(len(phrases) - 1):
            if (free(k) and free(k + 1)
                    and phrases[k].surface.lower() == prep
                    and _is_np(phrases[k + 1])):
                slots[name] = k + 1
                consumed.update((k, k + 1))
                break

    # first unconsumed date/time phrase fills the time slot
    time_ph = None
    for k, ph in enumerate(phrases):
        if free(k) and ph.ner_label in {DATE, TIME}:
            time_ph = ph
            consumed.add(k)
            if k > 0 and free(k - 1) and phrases[k - 1].is_prep:
                consumed.add(k - 1)
            break

    # with no patient of any kind, a locative prep phrase becomes the
    # destination place (the patient slot may be a place)
    if not any(r in slots for r in ("AU", "AUPlaceS", "AUPlaceD")) and aup_ref is None:
        for k in range(len(phrases) - 1):
            if (
                free(k) and free(k + 1)
                and phrases[k].surface.lower() in _PLACE_FILL_PREPS
                and phrases[k + 1].ne_type in _PLACE_NE
            ):
                slots["AUPlaceD"] = k + 1
                consumed.update((k, k + 1))
                break

    def role(name: str) -> RoleFiller | None:
        idx = slots.get(name)
        if idx is None or phrases[idx].is_dummy:
            return None
        return filler_from_phrase(phrases[idx])

    return RoleUnit(
        unit_id=unit_id or unit.unit_id,
        doc_id=doc_id,
        sentence_index=sentence_index,
        relation=_relation_filler(phrases[rel_idx]),
        agent=role("A"),
        acted_upon=role("AU"),
        place_source=role("AUPlaceS"),
        place_dest=role("AUPlaceD"),
        time=filler_from_phrase(time_ph) if time_ph is not None else None,
        agent_phrase=ap_ref,
        acted_upon_phrase=aup_ref,
        low_confidence=low_confidence,
        consumed_indices=frozenset(consumed),
    )
