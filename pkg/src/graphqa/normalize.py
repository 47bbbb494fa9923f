"""Text preprocessing shared by documents and queries.

Fixed stage order: abbreviation dot-protection -> garbage removal ->
ignorable-phrase removal -> date/time normalization -> sentence split.
The dot marker is internal only and never appears in module output.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass

from .lexicon import AuxTables, DEFAULT_ABBREVIATIONS, DEFAULT_IGNORABLE

# Reserved stand-in for dots inside abbreviations so the splitter skips them.
DOT_MARKER = ""

# Retained characters. The spec set {letters digits ws . , - '} is extended
# with '!' (sentence terminator the splitter needs), '/' and ':' (date and
# time formats are normalized after garbage removal).
_ALLOWED_CHAR = re.compile(r"[A-Za-z0-9\s.,\-'!/:" + DOT_MARKER + r"]")

_MONTHS = {
    name.lower(): i
    for i, name in enumerate(calendar.month_name)
    if name
}
_MONTH_ALT = "|".join(sorted(_MONTHS, key=len, reverse=True))

# Words that veto the bare-year reading of a four-digit number.
_YEAR_VETO = (
    "rupees?|dollars?|people|persons?|crores?|lakhs?|percent|runs?|votes?|"
    "seats?|times|kilometers?|km|wickets?|goals?|medals?|awards?|films?|songs?"
)

_DATETIME_RE = re.compile(
    r"""
    (?P<dmy>\b(?P<d1>\d{1,2})\s+(?P<m1>%(months)s)\s+(?P<y1>\d{4})\b)
  | (?P<mdy>\b(?P<m2>%(months)s)\s+(?P<d2>\d{1,2})\s*,?\s+(?P<y2>\d{4})\b)
  | (?P<my>\b(?P<m3>%(months)s)\s+(?P<y3>\d{4})\b)
  | (?P<slash>\b(?P<d4>\d{1,2})/(?P<m4>\d{1,2})/(?P<y4>\d{4})\b)
  | (?P<isod>\b(?P<y5>\d{4})-(?P<m5>\d{2})-(?P<d5>\d{2})\b)
  | (?P<isom>\b(?P<y6>\d{4})-(?P<m6>\d{2})\b(?!-))
  | (?P<ampm>\b(?P<h7>\d{1,2})(?::(?P<min7>\d{2}))?\s*(?P<ap7>am|pm)\b)
  | (?P<isot>\b(?P<h8>\d{1,2}):(?P<min8>\d{2})\b(?!\s*(?:am|pm)))
  | (?P<year>\b(?P<y9>\d{4})\b(?![-/:])(?!\s*(?:%(veto)s)\b))
    """ % {"months": _MONTH_ALT, "veto": _YEAR_VETO},
    re.IGNORECASE | re.VERBOSE,
)

_TERMINATORS = ".!"


@dataclass(frozen=True)
class NormalizedText:
    """Preprocessed text plus sentence and date/time spans (character
    offsets into `text`; date/time spans carry the canonical value)."""

    text: str
    sentence_spans: tuple[tuple[int, int], ...] = ()
    datetime_spans: tuple[tuple[tuple[int, int], str], ...] = ()

    def sentences(self) -> list[str]:
        return [self.text[a:b] for a, b in self.sentence_spans]

    def datetimes_in(self, span: tuple[int, int]) -> list[tuple[tuple[int, int], str]]:
        """Date/time spans inside one sentence span, sentence-relative."""
        a, b = span
        return [
            ((s - a, e - a), value)
            for (s, e), value in self.datetime_spans
            if a <= s and e <= b
        ]


def protect_abbreviations(text: str, abbrevs: frozenset[str] | set[str] | None = None) -> str:
    """Replace the dot of each known abbreviation with the reserved marker
    so sentence splitting never fires on it."""
    if abbrevs is None:
        abbrevs = set(DEFAULT_ABBREVIATIONS)
    for ab in sorted(abbrevs, key=len, reverse=True):
        if not ab.endswith("."):
            continue
        stem = re.escape(ab[:-1])
        pat = re.compile(r"(?<![A-Za-z])" + stem + r"\.", re.IGNORECASE)
        text = pat.sub(lambda m: m.group(0)[:-1] + DOT_MARKER, text)
    return text


def _collapse_ws(text: str) -> str:
    def repl(m: re.Match) -> str:
        return "\n" if "\n" in m.group(0) else " "

    return re.sub(r"\s+", repl, text).strip()


def strip_garbage(text: str) -> str:
    """Drop characters outside the retained set (in place, no replacement
    space) and collapse whitespace runs; newlines survive as boundaries."""
    kept = "".join(ch for ch in text if _ALLOWED_CHAR.match(ch))
    return _collapse_ws(kept)


def remove_ignorable_phrases(text: str, patterns: tuple[str, ...] | list[str] | None = None) -> str:
    """Delete whole-word, case-insensitive occurrences of each pattern."""
    if patterns is None:
        patterns = DEFAULT_IGNORABLE
    for pat in sorted(patterns, key=len, reverse=True):
        words = [re.escape(w) for w in pat.split()]
        if not words:
            continue
        rx = re.compile(
            r"(?<![A-Za-z])" + r"\s+".join(words) + r"(?![A-Za-z])",
            re.IGNORECASE,
        )
        text = rx.sub(" ", text)
    return _collapse_ws(text)


def _valid_date(year: int, month: int, day: int | None = None) -> bool:
    if not 1 <= month <= 12:
        return False
    if day is None:
        return True
    return 1 <= day <= calendar.monthrange(year, month)[1]


def _canonical(m: re.Match) -> str | None:
    if m.group("dmy"):
        y, mo, d = int(m.group("y1")), _MONTHS[m.group("m1").lower()], int(m.group("d1"))
        return f"{y:04d}-{mo:02d}-{d:02d}" if _valid_date(y, mo, d) else None
    if m.group("mdy"):
        y, mo, d = int(m.group("y2")), _MONTHS[m.group("m2").lower()], int(m.group("d2"))
        return f"{y:04d}-{mo:02d}-{d:02d}" if _valid_date(y, mo, d) else None
    if m.group("my"):
        y, mo = int(m.group("y3")), _MONTHS[m.group("m3").lower()]
        return f"{y:04d}-{mo:02d}"
    if m.group("slash"):
        y, mo, d = int(m.group("y4")), int(m.group("m4")), int(m.group("d4"))
        return f"{y:04d}-{mo:02d}-{d:02d}" if _valid_date(y, mo, d) else None
    if m.group("isod"):
        y, mo, d = int(m.group("y5")), int(m.group("m5")), int(m.group("d5"))
        return m.group("isod") if _valid_date(y, mo, d) else None
    if m.group("isom"):
        y, mo = int(m.group("y6")), int(m.group("m6"))
        return m.group("isom") if _valid_date(y, mo) else None
    if m.group("ampm"):
        h = int(m.group("h7"))
        minute = int(m.group("min7") or 0)
        if not (1 <= h <= 12 and minute < 60):
            return None
        ap = m.group("ap7").lower()
        if ap == "am":
            h = 0 if h == 12 else h
        else:
            h = 12 if h == 12 else h + 12
        return f"{h:02d}:{minute:02d}"
    if m.group("isot"):
        h, minute = int(m.group("h8")), int(m.group("min8"))
        return f"{h:02d}:{minute:02d}" if h < 24 and minute < 60 else None
    if m.group("year"):
        y = int(m.group("y9"))
        return m.group("year") if 1000 <= y <= 2099 else None
    return None


def normalize_datetime(text: str) -> tuple[str, tuple[tuple[tuple[int, int], str], ...]]:
    """Rewrite recognized date/time expressions to ISO-8601 / 24-hour form.

    Returns the rewritten text and the spans (in output coordinates) of
    every recognized expression with its canonical value. Unrecognized
    or invalid forms are left untouched.
    """
    out: list[str] = []
    spans: list[tuple[tuple[int, int], str]] = []
    pos = 0
    out_len = 0
    for m in _DATETIME_RE.finditer(text):
        value = _canonical(m)
        if value is None:
            continue
        out.append(text[pos:m.start()])
        out_len += m.start() - pos
        spans.append(((out_len, out_len + len(value)), value))
        out.append(value)
        out_len += len(value)
        pos = m.end()
    out.append(text[pos:])
    return "".join(out), tuple(spans)


def split_sentences(
    text: str,
    datetime_spans: tuple[tuple[tuple[int, int], str], ...] = (),
) -> NormalizedText:
    """Split on '.', '!' and newlines; abbreviation markers are restored
    to dots afterwards (same length, so spans stay valid)."""
    spans: list[tuple[int, int]] = []
    i, n = 0, len(text)
    start = None
    while i < n:
        ch = text[i]
        if ch == "\n":
            if start is not None:
                spans.append((start, i))
                start = None
            i += 1
            continue
        if ch in _TERMINATORS:
            if start is None:
                start = i
            # consume a run of terminators as one boundary
            while i + 1 < n and text[i + 1] in _TERMINATORS:
                i += 1
            spans.append((start, i + 1))
            start = None
            i += 1
            continue
        if start is None and not ch.isspace():
            start = i
        i += 1
    if start is not None:
        spans.append((start, n))
    # trim trailing whitespace inside each span
    trimmed = []
    for a, b in spans:
        while b > a and text[b - 1].isspace():
            b -= 1
        if b > a:
            trimmed.append((a, b))
    return NormalizedText(
        text=text.replace(DOT_MARKER, "."),
        sentence_spans=tuple(trimmed),
        datetime_spans=datetime_spans,
    )


def normalize(text: str, aux: AuxTables | None = None) -> NormalizedText:
    """Run the full preprocessing chain on one document or query."""
    abbrevs = aux.abbreviations if aux else frozenset(DEFAULT_ABBREVIATIONS)
    ignorable = aux.ignorable_patterns if aux else DEFAULT_IGNORABLE
    text = text.replace(DOT_MARKER, "")  # the marker is ours alone
    text = protect_abbreviations(text, abbrevs)
    text = strip_garbage(text)
    text = remove_ignorable_phrases(text, ignorable)
    text, dt_spans = normalize_datetime(text)
    return split_sentences(text, dt_spans)
