"""Deterministic POS / NER / database tagging.

POS comes from a rule cascade (closed-class words, lexicon overrides,
suffix rules, capitalization, NN default); NER and Db tags come from
gazetteer longest-matching plus the normalizer's date/time spans.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lexicon import DbTag, Lexicon, NE_DB_TAGS, normalize_phrase

PERSON = "PERSON"
LOCATION = "LOCATION"
ORGANIZATION = "ORGANIZATION"
DATE = "DATE"
TIME = "TIME"
NUMEX = "NUMEX"
NONE = "NONE"

NER_VALUES = (PERSON, LOCATION, ORGANIZATION, DATE, TIME, NUMEX, NONE)

# Db gazetteer -> NER class.
DB_TO_NER = {
    DbTag.NEP: PERSON,
    DbTag.NED: PERSON,
    DbTag.NEC: LOCATION,
    DbTag.NEL: LOCATION,
    DbTag.NEO: ORGANIZATION,
    DbTag.NEPT: ORGANIZATION,
}

WH_WORDS = frozenset({"who", "whom", "what", "which", "when", "where", "how"})

_CLOSED_CLASS = {
    "who": "WP", "whom": "WP", "what": "WP", "which": "WP",
    "when": "WRB", "where": "WRB", "how": "WRB",
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT",
    "these": "DT", "those": "DT", "each": "DT", "every": "DT",
    "some": "DT", "any": "DT",
    "he": "PRP", "she": "PRP", "it": "PRP", "they": "PRP", "i": "PRP",
    "you": "PRP", "we": "PRP", "him": "PRP", "them": "PRP", "me": "PRP",
    "us": "PRP", "her": "PRP", "himself": "PRP", "herself": "PRP",
    "itself": "PRP", "themselves": "PRP",
    "his": "PRP$", "its": "PRP$", "their": "PRP$", "my": "PRP$",
    "your": "PRP$", "our": "PRP$",
    "and": "CC", "or": "CC", "but": "CC", "nor": "CC",
    "is": "VBZ", "am": "VBP", "are": "VBP", "was": "VBD", "were": "VBD",
    "be": "VB", "been": "VBN", "being": "VBG",
    "has": "VBZ", "have": "VBP", "had": "VBD",
    "do": "VBP", "does": "VBZ", "did": "VBD",
    "will": "MD", "would": "MD", "can": "MD", "could": "MD", "may": "MD",
    "might": "MD", "must": "MD", "shall": "MD", "should": "MD",
    "not": "RB", "very": "RB", "quite": "RB", "too": "RB", "also": "RB",
    "of": "IN", "on": "IN", "in": "IN", "at": "IN", "by": "IN", "to": "IN",
    "from": "IN", "with": "IN", "for": "IN", "about": "IN", "against": "IN",
    "after": "IN", "before": "IN", "during": "IN", "between": "IN",
    "under": "IN", "over": "IN", "near": "IN", "since": "IN", "until": "IN",
    "as": "IN", "into": "IN", "through": "IN",
    "'s": "POS",
    ",": ",",
}

_NUMBER_WORDS = frozenset(
    "one two three four five six seven eight nine ten eleven twelve "
    "twenty thirty forty fifty hundred thousand million lakh crore".split()
)

_BE_FORMS = frozenset({"is", "am", "are", "was", "were", "be", "been", "being"})
_HAVE_FORMS = frozenset({"has", "have", "had"})

_UNIT_WORDS = frozenset(
    "rupees rupee dollars dollar people persons crore crores lakh lakhs "
    "percent runs votes seats times kilometers kilometer km wickets goals "
    "medals awards films songs years matches centuries tickets visitors".split()
)
_CURRENCY_MARKERS = frozenset({"rs", "rs.", "rupees", "usd"})
_PERCENT_WORDS = frozenset({"percent", "percentage"})
_MONEY_WORDS = frozenset({"rupees", "rupee", "dollars", "dollar", "crore", "crores", "lakh", "lakhs"})

_WORD_RE = re.compile(r"\d[\d:/.\-]*\d|\d|[A-Za-z][A-Za-z'.\-]*|,")
_INTERNAL_DOTTED = re.compile(r"^(?:[A-Za-z]\.)+$")


@dataclass
class Token:
    """One surface token; span offsets index into the owning sentence."""

    surface: str
    start: int = 0
    end: int = 0
    pos: str = ""
    ner: str = NONE
    db: DbTag | None = None
    numex_kind: str | None = None

    @property
    def low(self) -> str:
        return self.surface.lower()


@dataclass
class TaggedSentence:
    text: str
    tokens: list[Token]
    index: int = 0


def tokenize(text: str) -> list[Token]:
    """Split one sentence into tokens; possessive 's becomes its own
    token and a plain trailing dot is stripped off words."""
    tokens: list[Token] = []
    for m in _WORD_RE.finditer(text):
        surface, start, end = m.group(0), m.start(), m.end()
        if surface.endswith(".") and not _INTERNAL_DOTTED.match(surface):
            surface, end = surface[:-1], end - 1
        if not surface:
            continue
        if len(surface) > 2 and surface.lower().endswith("'s"):
            tokens.append(Token(surface[:-2], start, end - 2))
            tokens.append(Token("'s", end - 2, end))
        else:
            tokens.append(Token(surface, start, end))
    return tokens


def _as_tokens(tokens) -> list[Token]:
    if tokens and isinstance(tokens[0], str):
        out = []
        pos = 0
        for s in tokens:
            out.append(Token(s, pos, pos + len(s)))
            pos += len(s) + 1
        return out
    return list(tokens)


def pos_tag(tokens, lexicon: Lexicon | None = None) -> list[Token]:
    """Fill POS tags via the rule cascade. Accepts surface strings or
    Token objects; returns the (mutated) Token list."""
    toks = _as_tokens(tokens)
    overrides = lexicon.pos_overrides if lexicon else {}
    ne_vocab = lexicon.ne_vocab if lexicon else frozenset()
    verb_stems = {w for w, p in overrides.items() if p.startswith("VB")}
    for i, tok in enumerate(toks):
        low = tok.low
        if low in _CLOSED_CLASS:
            tok.pos = _CLOSED_CLASS[low]
            continue
        if low in overrides:
            tok.pos = overrides[low]
            continue
        if low[0].isdigit() or low in _NUMBER_WORDS:
            tok.pos = "CD"
            continue
        if tok.surface[0].isupper() and low in ne_vocab:
            tok.pos = "NNP"
            continue
        if low.endswith("ed") and len(low) > 3:
            prev = toks[i - 1].low if i else ""
            tok.pos = "VBN" if prev in _BE_FORMS | _HAVE_FORMS else "VBD"
            continue
        if low.endswith("ing") and len(low) > 4:
            tok.pos = "VBG"
            continue
        if low.endswith("ly") and len(low) > 3:
            tok.pos = "RB"
            continue
        if low.endswith("s") and len(low) > 2 and not low.endswith("ss"):
            stem = low[:-1]
            tok.pos = "VBZ" if stem in verb_stems else "NNS"
            continue
        if tok.surface[0].isupper() and i > 0:
            tok.pos = "NNP"
            continue
        tok.pos = "NN"
    # "her" is PRP$ before a nominal, PRP otherwise
    for i, tok in enumerate(toks):
        if tok.low == "her":
            nxt = toks[i + 1].pos if i + 1 < len(toks) else ""
            tok.pos = "PRP$" if nxt in {"NN", "NNS", "NNP", "JJ", "CD"} else "PRP"
    return toks


def iter_gazetteer_matches(tokens: list[Token], lexicon: Lexicon, tags=None):
    """Greedy longest-match scan; yields (start, end, DbTag) over token
    indices. Listed ambiguous words are suppressed when lowercase."""
    n = len(tokens)
    i = 0
    while i < n:
        hit = None
        for length in range(min(lexicon.max_phrase_words, n - i), 0, -1):
            phrase = normalize_phrase(" ".join(t.surface for t in tokens[i:i + length]))
            if not phrase:
                continue
            tag = lexicon.lookup(phrase)
            if tag is None or (tags is not None and tag not in tags):
                continue
            if (
                length == 1
                and phrase in lexicon.aux.ambiguous_words
                and tokens[i].surface.islower()
            ):
                continue
            hit = (i, i + length, tag)
            break
        if hit:
            yield hit
            i = hit[1]
        else:
            i += 1


def ner_tag(
    tokens,
    lexicon: Lexicon | None = None,
    datetime_spans: tuple[tuple[tuple[int, int], str], ...] = (),
) -> list[Token]:
    """Fill NER values: date/time spans first, then gazetteer hits,
    then numeric expressions with a unit or currency context."""
    toks = _as_tokens(tokens)
    for (a, b), value in datetime_spans:
        kind = TIME if ":" in value else DATE
        for tok in toks:
            if tok.start >= a and tok.end <= b:
                tok.ner = kind
    if lexicon is not None:
        for i, j, tag in iter_gazetteer_matches(toks, lexicon, tags=NE_DB_TAGS):
            ner = DB_TO_NER[tag]
            for tok in toks[i:j]:
                if tok.ner == NONE:
                    tok.ner = ner
    for i, tok in enumerate(toks):
        if tok.pos != "CD" or tok.ner != NONE:
            continue
        nxt = toks[i + 1] if i + 1 < len(toks) else None
        prev = toks[i - 1] if i else None
        unit = nxt if nxt is not None and nxt.low in _UNIT_WORDS else None
        currency = prev is not None and prev.low in _CURRENCY_MARKERS
        if unit is None and not currency:
            continue
        if unit is not None and unit.low in _PERCENT_WORDS:
            kind = "percentage"
        elif currency or (unit is not None and unit.low in _MONEY_WORDS):
            kind = "money"
        else:
            kind = "quantity"
        tok.ner = NUMEX
        tok.numex_kind = kind
        if unit is not None:
            unit.ner = NUMEX
            unit.numex_kind = kind
            # extend over a run of unit words ("2000 crore rupees")
            j = i + 2
            while j < len(toks) and toks[j].low in _UNIT_WORDS:
                toks[j].ner = NUMEX
                toks[j].numex_kind = kind
                j += 1
    return toks


def db_tag(tokens, lexicon: Lexicon) -> list[Token]:
    """Fill Db tags by longest-match-first gazetteer matching; every
    token in a matched span carries the gazetteer's tag."""
    toks = _as_tokens(tokens)
    for i, j, tag in iter_gazetteer_matches(toks, lexicon):
        for tok in toks[i:j]:
            tok.db = tag
    return toks


def tag_sentence(
    text: str,
    lexicon: Lexicon,
    datetime_spans: tuple[tuple[tuple[int, int], str], ...] = (),
    index: int = 0,
) -> TaggedSentence:
    tokens = tokenize(text)
    pos_tag(tokens, lexicon)
    ner_tag(tokens, lexicon, datetime_spans)
    db_tag(tokens, lexicon)
    return TaggedSentence(text=text, tokens=tokens, index=index)


def dump_tokens(tokens: list[Token]) -> str:
    """Debug dump, one token per line: surface<TAB>POS<TAB>NER<TAB>DB."""
    lines = []
    for t in tokens:
        db = t.db.value if t.db else "-"
        lines.append(f"{t.surface}\t{t.pos}\t{t.ner}\t{db}")
    return "\n".join(lines)
