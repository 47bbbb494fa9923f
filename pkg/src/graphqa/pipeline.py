"""End-to-end orchestration shared by document ingestion and querying.

Both sides run the same chain: normalize -> pronoun resolution -> re-tag
-> phrase marking / chunking; documents then get role assignment, verb
classification, SubAction extraction and a GraphDelta, queries get
wh-detection, conjunctive separation and embedded-clause lifting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import coref, normalize as norm
from .chunker import AnnotatedSentence, annotate
from .docgraph import (
    GraphDelta,
    SubAction,
    build_graph_delta,
    classify_verb,
    emit_xml,
    extract_subactions,
    is_verb_relation,
)
from .lexicon import Lexicon
from .roles import (
    NoRelationError,
    RoleUnit,
    WhType,
    assign_roles,
    detect_wh,
    extract_embedded,
    split_conjunctive,
)
from .tagger import tag_sentence

# Queries whose leading imperative was removed as an ignorable pattern are
# report-style ("give me report on X" -> "on X").
REPORT_PREFIXES = ("give me report", "give me details", "show graph")


@dataclass
class DocumentAnalysis:
    doc_id: int
    sentences: list[AnnotatedSentence]
    units: list[RoleUnit]
    subactions: list[SubAction]
    delta: GraphDelta
    coref_log: list[coref.Substitution]
    skipped_units: list[str] = field(default_factory=list)

    @property
    def unresolved_pronouns(self) -> int:
        return sum(1 for s in self.coref_log if s.replacement is None)

    def to_xml(self) -> str:
        return emit_xml(self.units, self.subactions, self.doc_id)


@dataclass
class QueryUnitTree:
    """One conjunct: its main role unit plus lifted sub-units."""

    main: RoleUnit
    subs: list[RoleUnit] = field(default_factory=list)


@dataclass
class QueryAnalysis:
    wh: WhType
    trees: list[QueryUnitTree]
    sentences: list[AnnotatedSentence]
    coref_log: list[coref.Substitution]
    errors: list[str] = field(default_factory=list)


def annotate_text(text: str, lexicon: Lexicon, doc_id: int = 0):
    """normalize -> pre-tag -> pronoun substitution -> re-normalize ->
    tag -> chunk; returns the annotated sentences and the coref log."""
    first = norm.normalize(text, lexicon.aux)
    pre = [
        tag_sentence(first.text[a:b], lexicon, tuple(first.datetimes_in((a, b))), i)
        for i, (a, b) in enumerate(first.sentence_spans)
    ]
    mentions = coref.collect_mentions(pre, lexicon)
    resolved_texts, log = coref.resolve(pre, mentions, doc_id)
    second = norm.normalize("\n".join(resolved_texts), lexicon.aux)
    sentences = []
    for i, (a, b) in enumerate(second.sentence_spans):
        tagged = tag_sentence(second.text[a:b], lexicon,
                              tuple(second.datetimes_in((a, b))), i)
        sentences.append(annotate(tagged.text, tagged.tokens, lexicon,
                                  doc_id=doc_id, sentence_index=i))
    return sentences, log


def analyze_document(
    text: str,
    doc_id: int,
    lexicon: Lexicon,
    patterns,
) -> DocumentAnalysis:
    """Full document processing down to the graph delta. Units without a
    usable relation or with no attachable node are skipped and listed,
    never fatal."""
    sentences, log = annotate_text(text, lexicon, doc_id)
    units: list[RoleUnit] = []
    subactions: list[SubAction] = []
    skipped: list[str] = []
    unit_n = 0
    for sent in sentences:
        for part in split_conjunctive(sent):
            main_uq, sub_uqs = extract_embedded(
                part, make_id=_id_maker(doc_id, sent.sentence_index, unit_n))
            unit_n += 1
            for uq in [main_uq] + sub_uqs:
                uid = uq.unit_id or f"d{doc_id}s{sent.sentence_index}u{unit_n}"
                unit_n += 1
                try:
                    ru = assign_roles(uq, patterns, doc_id=doc_id,
                                      sentence_index=sent.sentence_index,
                                      unit_id=uid)
                except NoRelationError:
                    skipped.append(
                        f"s{sent.sentence_index}: no relation in "
                        + " ".join(p.surface for p in uq.phrases))
                    continue
                if is_verb_relation(ru.relation, sent):
                    ru.relation_class = classify_verb(ru.relation, sent).value
                else:
                    ru.relation_class = "Concept"
                units.append(ru)
                subactions.extend(extract_subactions(uq.phrases, ru))
    attachable = []
    for ru in units:
        has_node = any((ru.agent, ru.acted_upon, ru.place_source,
                        ru.place_dest, ru.time, ru.agent_phrase,
                        ru.acted_upon_phrase))
        if has_node:
            attachable.append(ru)
        else:
            skipped.append(f"{ru.unit_id}: relation-only unit "
                           f"({ru.relation.surface})")
    kept_ids = {u.unit_id for u in attachable}
    subactions = [sa for sa in subactions if sa.unit_id in kept_ids]
    delta = build_graph_delta(attachable, subactions, lexicon)
    return DocumentAnalysis(
        doc_id=doc_id,
        sentences=sentences,
        units=attachable,
        subactions=subactions,
        delta=delta,
        coref_log=log,
        skipped_units=skipped,
    )


def _id_maker(doc_id: int, sent_idx: int, unit_n: int):
    counter = [0]

    def make() -> str:
        counter[0] += 1
        return f"d{doc_id}s{sent_idx}u{unit_n}.{counter[0]}"

    return make


def has_report_prefix(question: str) -> bool:
    lowered = " ".join(question.split()).lower()
    return any(lowered.startswith(p) for p in REPORT_PREFIXES)


def analyze_query(question: str, lexicon: Lexicon, patterns) -> QueryAnalysis:
    """Query processing up to role units, grouped per conjunct."""
    report_hint = has_report_prefix(question)
    sentences, log = annotate_text(question, lexicon, doc_id=-1)
    trees: list[QueryUnitTree] = []
    errors: list[str] = []
    wh = WhType.NONE
    unit_n = 0
    for sent in sentences:
        sent_wh = detect_wh(sent, report_hint=report_hint)
        if wh is WhType.NONE and sent_wh is not WhType.NONE:
            wh = sent_wh
        for part in split_conjunctive(sent, wh=sent_wh):
            main_uq, sub_uqs = extract_embedded(
                part, make_id=_id_maker(-1, sent.sentence_index, unit_n))
            unit_n += 1
            try:
                main_ru = assign_roles(
                    main_uq, patterns, doc_id=-1,
                    sentence_index=sent.sentence_index,
                    unit_id=f"q{len(trees)}")
            except NoRelationError as exc:
                errors.append(str(exc))
                continue
            subs = []
            ok = True
            for uq in sub_uqs:
                try:
                    subs.append(assign_roles(
                        uq, patterns, doc_id=-1,
                        sentence_index=sent.sentence_index,
                        unit_id=uq.unit_id))
                except NoRelationError as exc:
                    errors.append(str(exc))
                    ok = False
            if ok:
                trees.append(QueryUnitTree(main=main_ru, subs=subs))
    return QueryAnalysis(wh=wh, trees=trees, sentences=sentences,
                         coref_log=log, errors=errors)
