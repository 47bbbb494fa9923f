"""graphqa: rule-based text-to-property-graph extraction and
natural-language wh-question answering over the resulting graph."""

from .lexicon import DbTag, Lexicon, load_lexicon, load_role_patterns
from .graphstore import GraphStore
from .matcher import MatchResult, answer
from .pipeline import analyze_document, analyze_query
from .roles import WhType

__all__ = [
    "DbTag",
    "GraphStore",
    "Lexicon",
    "MatchResult",
    "WhType",
    "analyze_document",
    "analyze_query",
    "answer",
    "load_lexicon",
    "load_role_patterns",
]

__version__ = "0.1.0"
