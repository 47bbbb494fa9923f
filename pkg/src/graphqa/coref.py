"""Rule-based pronoun resolution.

Each pronoun is replaced in the text by the nearest preceding entity
mention that agrees in gender/number; possessive pronouns become
"<Entity>'s". Cataphora is never resolved, only logged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import DbTag, Lexicon
from .tagger import TaggedSentence

MASC = "masc-sing"
FEM = "fem-sing"
NEUT = "neut-sing"
PLURAL = "plural"
UNKNOWN = "unknown"

# pronoun surface -> (gender/number, rendered possessive)
PRONOUNS = {
    "he": (MASC, False), "him": (MASC, False), "himself": (MASC, False),
    "his": (MASC, True),
    "she": (FEM, False), "herself": (FEM, False), "hers": (FEM, True),
    "it": (NEUT, False), "itself": (NEUT, False), "its": (NEUT, True),
    "they": (PLURAL, False), "them": (PLURAL, False),
    "themselves": (PLURAL, False), "their": (PLURAL, True),
    "theirs": (PLURAL, True),
}
# "her" is PRP or PRP$ depending on context; rendering follows the POS tag.
PRONOUNS["her"] = (FEM, None)

# First/second person pronouns have no textual antecedent here.
_UNRESOLVABLE = frozenset(
    {"i", "you", "we", "me", "us", "my", "your", "our", "mine", "yours", "ours"}
)


@dataclass(frozen=True)
class Mention:
    span: tuple[int, int]
    surface: str
    kind: str                  # "entity" | "pronoun"
    gender_number: str
    sentence_index: int = 0


@dataclass(frozen=True)
class Substitution:
    sentence_index: int
    span: tuple[int, int]
    pronoun: str
    replacement: str | None    # None when unresolved


def format_log_entry(doc_id: int, sub: Substitution) -> str:
    repl = sub.replacement if sub.replacement is not None else "UNRESOLVED"
    return f"{doc_id}\t{sub.sentence_index}\t{sub.pronoun}\t{repl}"


def _mention_gender(surface: str, lexicon: Lexicon | None) -> str:
    if lexicon is None:
        return UNKNOWN
    first = surface.split()[0].lower()
    if first in lexicon.male_names:
        return MASC
    if first in lexicon.female_names:
        return FEM
    tag = lexicon.lookup(surface) if surface else None
    if tag is not None and tag not in (DbTag.NEP, DbTag.NED):
        return NEUT  # places, organisations, common nouns, concepts
    return UNKNOWN


def collect_mentions(sentences: list[TaggedSentence], lexicon: Lexicon | None = None) -> list[Mention]:
    """Entity mentions = maximal runs of NNP tokens, in document order."""
    mentions = []
    for sent in sentences:
        toks = sent.tokens
        i = 0
        while i < len(toks):
            if toks[i].pos != "NNP":
                i += 1
                continue
            j = i
            while j + 1 < len(toks) and toks[j + 1].pos == "NNP":
                j += 1
            surface = sent.text[toks[i].start:toks[j].end]
            mentions.append(Mention(
                span=(toks[i].start, toks[j].end),
                surface=surface,
                kind="entity",
                gender_number=_mention_gender(surface, lexicon),
                sentence_index=sent.index,
            ))
            i = j + 1
    return mentions


def _compatible(pronoun_gn: str, mention_gn: str) -> bool:
    return mention_gn == UNKNOWN or mention_gn == pronoun_gn


def resolve(
    sentences: list[TaggedSentence],
    entities: list[Mention],
    doc_id: int = 0,
) -> tuple[list[str], list[Substitution]]:
    """Substitute pronouns in sentence texts; returns the new texts and
    the substitution log. Non-pronoun text is byte-identical."""
    subs: list[Substitution] = []
    for sent in sentences:
        for tok in sent.tokens:
            if tok.pos not in ("PRP", "PRP$"):
                continue
            low = tok.low
            if low in _UNRESOLVABLE or low not in PRONOUNS:
                subs.append(Substitution(sent.index, (tok.start, tok.end), tok.surface, None))
                continue
            gn, possessive = PRONOUNS[low]
            if possessive is None:
                possessive = tok.pos == "PRP$"
            candidates = [
                m for m in entities
                if (m.sentence_index, m.span[0]) < (sent.index, tok.start)
                and _compatible(gn, m.gender_number)
            ]
            if not candidates:
                subs.append(Substitution(sent.index, (tok.start, tok.end), tok.surface, None))
                continue
            best = max(candidates, key=lambda m: (m.sentence_index, m.span[0]))
            replacement = best.surface + ("'s" if possessive else "")
            subs.append(Substitution(sent.index, (tok.start, tok.end), tok.surface, replacement))
    texts = []
    for sent in sentences:
        text = sent.text
        for sub in sorted(
            (s for s in subs if s.sentence_index == sent.index and s.replacement),
            key=lambda s: s.span[0],
            reverse=True,
        ):
            a, b = sub.span
            text = text[:a] + sub.replacement + text[b:]
        texts.append(text)
    return texts, subs
