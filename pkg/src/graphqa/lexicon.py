"""Gazetteers, auxiliary tables and the role-pattern table.

Everything the pipeline consults at tagging / role-assignment time is
loaded once into an immutable Lexicon and shared read-only afterwards.
Gazetteer files are plain UTF-8 text, one phrase per line, '#' comments.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path


class DbTag(enum.Enum):
    NEP = "NEP"              # person names
    NEC = "NEC"              # countries
    NEL = "NEL"              # locations
    NED = "NED"              # political designations
    NEPT = "NEPT"            # political parties
    NEO = "NEO"              # organisations
    CN = "CN"                # common nouns
    CONCEPT_S = "ConceptS"   # action-word classes; the class labels are opaque
    CONCEPT_K = "ConceptK"
    CONCEPT_Y = "ConceptY"
    CONCEPT_N = "ConceptN"
    XPREP = "XPrep"          # relation-bearing prepositions (of/on/to/from/...)
    APREP = "APrep"          # agentive preposition (by)


CONCEPT_TAGS = frozenset(
    {DbTag.CONCEPT_S, DbTag.CONCEPT_K, DbTag.CONCEPT_Y, DbTag.CONCEPT_N}
)
NE_DB_TAGS = frozenset(
    {DbTag.NEP, DbTag.NEC, DbTag.NEL, DbTag.NED, DbTag.NEPT, DbTag.NEO}
)
PREP_TAGS = frozenset({DbTag.XPREP, DbTag.APREP})

# Cross-gazetteer precedence when one phrase appears in several tables.
# Specific person/political tags beat generic location tags, concepts beat
# common nouns, prepositions come last.
TAG_PRECEDENCE = (
    DbTag.NEP,
    DbTag.NED,
    DbTag.NEPT,
    DbTag.NEO,
    DbTag.NEC,
    DbTag.NEL,
    DbTag.CONCEPT_S,
    DbTag.CONCEPT_K,
    DbTag.CONCEPT_Y,
    DbTag.CONCEPT_N,
    DbTag.CN,
    DbTag.APREP,
    DbTag.XPREP,
)

SLOT_TAG_NAMES = frozenset(
    {"ne", "nep", "nel", "nec", "neo", "ned", "nept", "cn",
     "concept", "xprep", "aprep", "np"}
)
ROLE_NAMES = frozenset(
    {"A", "AU", "AUPlaceS", "AUPlaceD", "AP", "AUP", "Relation"}
)


class FormatError(ValueError):
    """Raised when a gazetteer file is not line-oriented text."""


class PatternParseError(ValueError):
    """Raised on a malformed role-pattern line; carries the line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def normalize_phrase(phrase: str) -> str:
    """Lowercase and collapse internal whitespace to single spaces."""
    return " ".join(phrase.split()).lower()


@dataclass(frozen=True)
class Gazetteer:
    tag: DbTag
    entries: frozenset[str]
    source_path: str = ""

    def __contains__(self, phrase: str) -> bool:
        return normalize_phrase(phrase) in self.entries


@dataclass(frozen=True)
class AuxTables:
    ignorable_patterns: tuple[str, ...]
    ambiguous_words: frozenset[str]
    abbreviations: frozenset[str]


@dataclass(frozen=True)
class SlotMatcher:
    kind: str                 # "literal" | "tag"
    value: str                # surface form or slot tag name
    capture: str | None = None


@dataclass(frozen=True)
class RolePattern:
    id: str
    sequence: tuple[SlotMatcher, ...]
    captures: dict[str, str] = field(hash=False, default_factory=dict)


def _read_lines(path: Path) -> list[str]:
    try:
        raw = path.read_bytes()
    except OSError:
        raise
    if b"\x00" in raw:
        raise FormatError(f"{path}: binary content is not a gazetteer")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8 text") from exc
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line)
    return out


def load_gazetteer(path: str | Path, tag: DbTag) -> Gazetteer:
    """Load one phrase-per-line gazetteer; duplicates collapse after
    normalization and blank/comment lines are skipped."""
    path = Path(path)
    entries = frozenset(
        normalize_phrase(line) for line in _read_lines(path)
        if normalize_phrase(line)
    )
    return Gazetteer(tag=tag, entries=entries, source_path=str(path))


_SLOT_RE = re.compile(r'"([^"]*)"|\{([^{}]*)\}|(\S+)')


def _parse_slot(raw: re.Match, line_no: int) -> SlotMatcher:
    literal, braced, junk = raw.group(1), raw.group(2), raw.group(3)
    if junk is not None:
        raise PatternParseError(f"unrecognised slot {junk!r}", line_no)
    if literal is not None:
        if not literal:
            raise PatternParseError("empty literal slot", line_no)
        return SlotMatcher(kind="literal", value=literal.lower())
    name, _, role = braced.partition(":")
    name = name.strip()
    role = role.strip()
    if name not in SLOT_TAG_NAMES:
        raise PatternParseError(f"unknown slot tag {name!r}", line_no)
    if role:
        if role not in ROLE_NAMES:
            raise PatternParseError(f"unknown role {role!r}", line_no)
        return SlotMatcher(kind="tag", value=name, capture=role)
    return SlotMatcher(kind="tag", value=name)


def parse_role_pattern(line: str, line_no: int = 0) -> RolePattern:
    pid, sep, body = line.partition(":")
    if not sep or not pid.strip():
        raise PatternParseError("expected 'ID: slot slot ...'", line_no)
    slots = [_parse_slot(m, line_no) for m in _SLOT_RE.finditer(body)]
    if not slots:
        raise PatternParseError("pattern has no slots", line_no)
    captures: dict[str, str] = {}
    for slot in slots:
        if slot.capture is None:
            continue
        if slot.capture in captures:
            raise PatternParseError(
                f"capture {slot.capture!r} used twice", line_no)
        captures[slot.capture] = slot.capture
    return RolePattern(id=pid.strip(), sequence=tuple(slots), captures=captures)


def load_role_patterns(path: str | Path) -> list[RolePattern]:
    """Parse the pattern table; file order is match priority."""
    path = Path(path)
    patterns = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        patterns.append(parse_role_pattern(stripped, line_no))
    return patterns


# Default file names inside a lexicon directory.
_GAZETTEER_FILES = {
    "names.txt": DbTag.NEP,
    "countries.txt": DbTag.NEC,
    "locations.txt": DbTag.NEL,
    "designations.txt": DbTag.NED,
    "parties.txt": DbTag.NEPT,
    "organizations.txt": DbTag.NEO,
    "common_nouns.txt": DbTag.CN,
    "concepts_s.txt": DbTag.CONCEPT_S,
    "concepts_k.txt": DbTag.CONCEPT_K,
    "concepts_y.txt": DbTag.CONCEPT_Y,
    "concepts_n.txt": DbTag.CONCEPT_N,
    "xprep.txt": DbTag.XPREP,
    "aprep.txt": DbTag.APREP,
}

DEFAULT_IGNORABLE = ("give me details", "give me report")
DEFAULT_ABBREVIATIONS = ("mr.", "mrs.", "dr.", "rs.", "st.", "no.", "vs.")


@dataclass
class Lexicon:
    """Immutable bundle of all gazetteers plus the auxiliary tables."""

    gazetteers: dict[DbTag, Gazetteer]
    aux: AuxTables
    synonyms: dict[str, frozenset[str]] = field(default_factory=dict)
    male_names: frozenset[str] = frozenset()
    female_names: frozenset[str] = frozenset()
    pos_overrides: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self._max_words = max(
            (len(e.split()) for g in self.gazetteers.values() for e in g.entries),
            default=1,
        )
        self._ne_vocab = frozenset(
            w
            for tag in NE_DB_TAGS
            for e in self.gazetteers.get(tag, Gazetteer(tag, frozenset())).entries
            for w in e.split()
        )

    @property
    def max_phrase_words(self) -> int:
        return self._max_words

    @property
    def ne_vocab(self) -> frozenset[str]:
        """Every word occurring in any named-entity gazetteer entry."""
        return self._ne_vocab

    def lookup(self, phrase: str) -> DbTag | None:
        """Tag of the highest-precedence gazetteer containing the phrase."""
        if not phrase:
            raise ValueError("lookup requires a non-empty phrase")
        norm = normalize_phrase(phrase)
        for tag in TAG_PRECEDENCE:
            gaz = self.gazetteers.get(tag)
            if gaz is not None and norm in gaz.entries:
                return tag
        return None

    def synonym_group(self, word: str) -> frozenset[str]:
        word = word.lower()
        return self.synonyms.get(word, frozenset({word}))

    @classmethod
    def from_data(
        cls,
        gazetteers: dict[DbTag, set[str]] | None = None,
        ignorable: tuple[str, ...] = DEFAULT_IGNORABLE,
        ambiguous: set[str] | None = None,
        abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS,
        synonym_groups: list[set[str]] | None = None,
        male_names: set[str] | None = None,
        female_names: set[str] | None = None,
        pos_overrides: dict[str, str] | None = None,
    ) -> "Lexicon":
        """Build a lexicon from in-memory tables (tests, embedding)."""
        gaz = {
            tag: Gazetteer(tag, frozenset(normalize_phrase(e) for e in entries))
            for tag, entries in (gazetteers or {}).items()
        }
        aux = AuxTables(
            ignorable_patterns=tuple(normalize_phrase(p) for p in ignorable),
            ambiguous_words=frozenset(w.lower() for w in (ambiguous or set())),
            abbreviations=frozenset(a.lower() for a in abbreviations),
        )
        return cls(
            gazetteers=gaz,
            aux=aux,
            synonyms=_merge_synonym_groups(synonym_groups or []),
            male_names=frozenset(w.lower() for w in (male_names or set())),
            female_names=frozenset(w.lower() for w in (female_names or set())),
            pos_overrides={k.lower(): v for k, v in (pos_overrides or {}).items()},
        )


def _merge_synonym_groups(groups: list[set[str]]) -> dict[str, frozenset[str]]:
    # Later lines mentioning an already-grouped word union into its group.
    merged: list[set[str]] = []
    for group in groups:
        group = {w.lower() for w in group}
        hits = [g for g in merged if g & group]
        for g in hits:
            group |= g
            merged.remove(g)
        merged.append(group)
    return {w: frozenset(g) for g in merged for w in g}


def _load_word_list(path: Path) -> frozenset[str]:
    if not path.exists():
        return frozenset()
    return frozenset(normalize_phrase(l) for l in _read_lines(path))


def _load_synonyms(path: Path) -> dict[str, frozenset[str]]:
    if not path.exists():
        return {}
    groups = []
    for line in _read_lines(path):
        words = {w.strip().lower() for w in re.split(r"[,:]", line) if w.strip()}
        if len(words) > 1:
            groups.append(words)
    return _merge_synonym_groups(groups)


def _load_pos_overrides(path: Path) -> dict[str, str]:
    if not path.exists():
        return {}
    out = {}
    for line in _read_lines(path):
        parts = line.split()
        if len(parts) == 2:
            out[parts[0].lower()] = parts[1]
    return out


def default_lexicon_dir() -> Path:
    return Path(__file__).resolve().parent / "data" / "lexicon"


def default_pattern_table() -> Path:
    return Path(__file__).resolve().parent / "data" / "role_patterns.txt"


def load_lexicon(lexicon_dir: str | Path | None = None) -> Lexicon:
    """Load every table from a lexicon directory (package defaults when
    no directory is given); missing optional files load empty."""
    root = Path(lexicon_dir) if lexicon_dir else default_lexicon_dir()
    if not root.is_dir():
        raise FileNotFoundError(f"lexicon directory not found: {root}")
    gazetteers = {}
    for fname, tag in _GAZETTEER_FILES.items():
        path = root / fname
        if path.exists():
            gazetteers[tag] = load_gazetteer(path, tag)
        else:
            gazetteers[tag] = Gazetteer(tag, frozenset(), str(path))
    ignorable = tuple(
        normalize_phrase(l) for l in _read_lines(root / "ignorable.txt")
    ) if (root / "ignorable.txt").exists() else ()
    if not ignorable:
        ignorable = DEFAULT_IGNORABLE
    abbreviations = _load_word_list(root / "abbreviations.txt")
    if not abbreviations:
        abbreviations = frozenset(DEFAULT_ABBREVIATIONS)
    aux = AuxTables(
        ignorable_patterns=ignorable,
        ambiguous_words=_load_word_list(root / "ambiguous.txt"),
        abbreviations=abbreviations,
    )
    return Lexicon(
        gazetteers=gazetteers,
        aux=aux,
        synonyms=_load_synonyms(root / "synonyms.txt"),
        male_names=_load_word_list(root / "names_male.txt"),
        female_names=_load_word_list(root / "names_female.txt"),
        pos_overrides=_load_pos_overrides(root / "pos_lexicon.txt"),
    )
