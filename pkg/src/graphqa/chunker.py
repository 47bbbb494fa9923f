"""Phrase marking (POS / NER / Db phrase union) and NP-chunk creation.

The sentence is rebuilt as an ordered partition of phrases: every token
belongs to exactly one phrase. On span conflicts Db phrases win over NER
phrases, which win over POS phrases; the loser's uncovered tokens are
re-split into fragments.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .lexicon import CONCEPT_TAGS, DbTag, Lexicon, NE_DB_TAGS, PREP_TAGS
from .tagger import (
    DATE,
    NONE,
    NUMEX,
    TIME,
    DB_TO_NER,
    Token,
    iter_gazetteer_matches,
)


class ConflictError(ValueError):
    """Two phrases of the same origin overlap partially (tagger bug)."""


_NOUN_POS = {"NN", "NNS", "NNP"}
_NE_NER = {"PERSON", "LOCATION", "ORGANIZATION"}


@dataclass(frozen=True)
class Phrase:
    tokens: tuple[Token, ...]
    start: int
    end: int
    surface: str
    pos_label: str | None = None
    ner_label: str | None = None
    db_label: DbTag | None = None
    origin: frozenset[str] = frozenset()
    head: str | None = None             # NP-chunk head surface
    modifiers: tuple[str, ...] = ()
    label: str | None = None            # display label (chunks drop modifiers)
    is_dummy: bool = False
    dummy_id: str | None = None

    @property
    def first_pos(self) -> str:
        return self.tokens[0].pos if self.tokens else ""

    @property
    def is_prep(self) -> bool:
        if self.db_label in PREP_TAGS:
            return True
        return len(self.tokens) == 1 and self.first_pos == "IN"

    @property
    def is_concept(self) -> bool:
        return self.db_label in CONCEPT_TAGS

    @property
    def is_ne(self) -> bool:
        if self.db_label in NE_DB_TAGS:
            return True
        return self.ner_label in _NE_NER

    @property
    def is_verb(self) -> bool:
        return len(self.tokens) == 1 and self.first_pos.startswith("VB")

    @property
    def is_nounish(self) -> bool:
        if self.is_dummy:
            return True
        if self.head is not None or self.pos_label == "NNP":
            return True
        if self.db_label in NE_DB_TAGS or self.db_label in CONCEPT_TAGS or self.db_label == DbTag.CN:
            return True
        if self.ner_label in _NE_NER or self.ner_label == NUMEX:
            return True
        return len(self.tokens) == 1 and self.first_pos in _NOUN_POS

    @property
    def ne_type(self) -> str | None:
        """NE class with Db tags authoritative over plain NER."""
        if self.db_label in DB_TO_NER:
            return DB_TO_NER[self.db_label]
        return self.ner_label

    @property
    def node_label(self) -> str:
        return self.label if self.label is not None else self.surface


@dataclass(frozen=True)
class AnnotatedSentence:
    phrases: tuple[Phrase, ...]
    doc_id: int = 0
    sentence_index: int = 0
    text: str = ""

    @property
    def tokens(self) -> list[Token]:
        return [t for ph in self.phrases for t in ph.tokens]


def _mk_phrase(tokens: list[Token], text: str, **kw) -> Phrase:
    start, end = tokens[0].start, tokens[-1].end
    return Phrase(tuple(tokens), start, end, text[start:end], **kw)


def pos_phrases(tokens: list[Token], text: str) -> list[Phrase]:
    """Maximal runs of consecutive NNP tokens, one phrase each."""
    out = []
    i = 0
    while i < len(tokens):
        if tokens[i].pos != "NNP":
            i += 1
            continue
        j = i
        while j + 1 < len(tokens) and tokens[j + 1].pos == "NNP":
            j += 1
        out.append(_mk_phrase(tokens[i:j + 1], text,
                              pos_label="NNP", origin=frozenset({"POS"})))
        i = j + 1
    return out


def ner_phrases(tokens: list[Token], text: str) -> list[Phrase]:
    """Maximal runs of consecutive tokens sharing a non-NONE NER tag."""
    out = []
    i = 0
    while i < len(tokens):
        if tokens[i].ner == NONE:
            i += 1
            continue
        j = i
        while j + 1 < len(tokens) and tokens[j + 1].ner == tokens[i].ner:
            j += 1
        out.append(_mk_phrase(tokens[i:j + 1], text,
                              ner_label=tokens[i].ner, origin=frozenset({"NER"})))
        i = j + 1
    return out


def db_phrases(tokens: list[Token], text: str, lexicon: Lexicon) -> list[Phrase]:
    """Longest gazetteer matches as phrases carrying the Db tag."""
    out = []
    for i, j, tag in iter_gazetteer_matches(tokens, lexicon):
        out.append(_mk_phrase(tokens[i:j], text,
                              db_label=tag, origin=frozenset({"DB"})))
    return out


def _subtract(span: tuple[int, int], taken: list[tuple[int, int]]) -> list[tuple[int, int]]:
    free = [span]
    for ta, tb in sorted(taken):
        nxt = []
        for a, b in free:
            if tb <= a or b <= ta:
                nxt.append((a, b))
                continue
            if a < ta:
                nxt.append((a, ta))
            if tb < b:
                nxt.append((tb, b))
        free = nxt
    return [s for s in free if s[0] < s[1]]


def union_phrases(
    tokens: list[Token],
    pos_list: list[Phrase],
    ner_list: list[Phrase],
    db_list: list[Phrase],
    text: str = "",
) -> list[Phrase]:
    """Merge the three phrase lists into one token partition.

    Identical spans merge their labels; on partial overlap the higher
    precedence phrase keeps its boundaries and the loser is re-split.
    Uncovered tokens come out as singleton phrases.
    """
    if not text and tokens:
        text = " ".join(t.surface for t in tokens)
    index = {id(t): k for k, t in enumerate(tokens)}

    def rng(ph: Phrase) -> tuple[int, int]:
        return index[id(ph.tokens[0])], index[id(ph.tokens[-1])] + 1

    chosen: list[tuple[int, int, Phrase]] = []
    for name, plist in (("DB", db_list), ("NER", ner_list), ("POS", pos_list)):
        ranges = sorted(rng(p) for p in plist)
        for (a1, b1), (a2, b2) in zip(ranges, ranges[1:]):
            if a2 < b1:
                raise ConflictError(
                    f"{name} phrases overlap partially at tokens {a2}..{b1}")
        for ph in plist:
            a, b = rng(ph)
            hits = [(ca, cb, cp) for ca, cb, cp in chosen
                    if a < cb and ca < b]
            if not hits:
                chosen.append((a, b, ph))
                continue
            if len(hits) == 1 and hits[0][0] == a and hits[0][1] == b:
                ca, cb, cp = hits[0]
                merged = replace(
                    cp,
                    origin=cp.origin | ph.origin,
                    pos_label=cp.pos_label or ph.pos_label,
                    ner_label=cp.ner_label or ph.ner_label,
                    db_label=cp.db_label or ph.db_label,
                )
                chosen[chosen.index(hits[0])] = (ca, cb, merged)
                continue
            # partial overlap: keep winners whole, re-split this phrase
            for fa, fb in _subtract((a, b), [(ca, cb) for ca, cb, _ in hits]):
                frag = _mk_phrase(tokens[fa:fb], text,
                                  pos_label=ph.pos_label,
                                  ner_label=ph.ner_label,
                                  db_label=ph.db_label,
                                  origin=ph.origin)
                chosen.append((fa, fb, frag))
    taken = [(a, b) for a, b, _ in chosen]
    for k, tok in enumerate(tokens):
        if not any(a <= k < b for a, b in taken):
            ner = tok.ner if tok.ner != NONE else None
            chosen.append((k, k + 1, _mk_phrase(
                [tok], text,
                pos_label=tok.pos, ner_label=ner, db_label=tok.db)))
    chosen.sort(key=lambda item: (item[0], item[1]))
    return [p for _, _, p in chosen]


def _is_modifier(ph: Phrase) -> bool:
    return len(ph.tokens) == 1 and ph.first_pos in {"JJ", "RB"} and not ph.is_ne


def _is_chunk_noun(ph: Phrase) -> bool:
    if ph.is_dummy or ph.ner_label in {DATE, TIME, NUMEX}:
        return False
    return ph.is_nounish


def _is_pos_marker(ph: Phrase) -> bool:
    return len(ph.tokens) == 1 and ph.first_pos == "POS"


def _parse_segment(phrases: list[Phrase], i: int):
    mods = []
    j = i
    while j < len(phrases) and _is_modifier(phrases[j]):
        mods.append(phrases[j])
        j += 1
    nouns = []
    while j < len(phrases) and _is_chunk_noun(phrases[j]):
        # concept words stay single-noun segments: "friend visit" must
        # not merge, while "detailed statement" may
        if nouns and (phrases[j].is_concept or nouns[0].is_concept):
            break
        nouns.append(phrases[j])
        j += 1
    if not nouns:
        return None
    return mods, nouns, j


def _seg_label(nouns: list[Phrase]) -> str:
    return " ".join(n.node_label for n in nouns)


def _try_chunk(phrases: list[Phrase], i: int, text: str):
    j = i
    det = None
    if j < len(phrases) and len(phrases[j].tokens) == 1 and phrases[j].first_pos == "DT":
        det = phrases[j]
        j += 1
    seg = _parse_segment(phrases, j)
    if seg is None:
        return None
    segments = [seg]
    j = seg[2]
    # possessive chain: <seg> 's <seg> ... ; never ends on a concept head
    while j + 1 < len(phrases) and _is_pos_marker(phrases[j]):
        nxt = _parse_segment(phrases, j + 1)
        if nxt is None or nxt[1][-1].is_concept:
            break
        segments.append(nxt)
        j = nxt[2]
    members: list[Phrase] = [det] if det else []
    members.extend(segments[0][0] + segments[0][1])
    k = segments[0][2]
    for seg_n in segments[1:]:
        members.append(phrases[k])      # the 's marker
        members.extend(seg_n[0] + seg_n[1])
        k = seg_n[2]
    if len(members) == 1:
        return None
    head_phrase = segments[-1][1][-1]
    mods = tuple(m.surface.lower() for s in segments for m in s[0])
    label = "'s ".join(_seg_label(s[1]) for s in segments)
    ner = head_phrase.ner_label
    if ner is None:
        ner = next((m.ner_label for m in members if m.ner_label), None)
    tokens = [t for m in members for t in m.tokens]
    return _mk_phrase(
        tokens, text,
        ner_label=ner,
        db_label=head_phrase.db_label,
        origin=frozenset().union(*(m.origin for m in members)),
        head=head_phrase.node_label,
        modifiers=mods,
        label=label,
    ), k


def np_chunks(sentence: AnnotatedSentence) -> AnnotatedSentence:
    """Collapse (DT)? (RB|JJ)* noun+ ('s noun-segment)* sequences into one
    chunk phrase; the head is the last noun phrase, modifiers become
    attributes. Chunks never cross verbs, prepositions or punctuation."""
    phrases = list(sentence.phrases)
    out: list[Phrase] = []
    i = 0
    while i < len(phrases):
        got = _try_chunk(phrases, i, sentence.text)
        if got is None:
            out.append(phrases[i])
            i += 1
        else:
            chunk, j = got
            out.append(chunk)
            i = j
    return replace(sentence, phrases=tuple(out))


def make_dummy(dummy_id: str, anchor: int = 0) -> Phrase:
    """Placeholder phrase standing in for a lifted embedded clause."""
    return Phrase(
        tokens=(), start=anchor, end=anchor, surface="DUMMY",
        is_dummy=True, dummy_id=dummy_id,
    )


def annotate(
    tagged_text: str,
    tokens: list[Token],
    lexicon: Lexicon,
    doc_id: int = 0,
    sentence_index: int = 0,
) -> AnnotatedSentence:
    """Phrase-mark and chunk one tagged sentence."""
    pos_l = pos_phrases(tokens, tagged_text)
    ner_l = ner_phrases(tokens, tagged_text)
    db_l = db_phrases(tokens, tagged_text, lexicon)
    merged = union_phrases(tokens, pos_l, ner_l, db_l, tagged_text)
    sent = AnnotatedSentence(
        phrases=tuple(merged), doc_id=doc_id,
        sentence_index=sentence_index, text=tagged_text,
    )
    return np_chunks(sent)
