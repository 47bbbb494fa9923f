import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))

import pytest

from graphqa.graphstore import GraphStore
from graphqa.lexicon import (
    default_pattern_table,
    load_lexicon,
    load_role_patterns,
)
from graphqa.pipeline import analyze_document

CORPUS_DIR = ROOT / "corpus"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def corpus_paths():
    return sorted(CORPUS_DIR.glob("doc*.txt"))


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def patterns():
    return load_role_patterns(default_pattern_table())


@pytest.fixture(scope="session")
def corpus_analyses(lexicon, patterns):
    return [
        analyze_document(path.read_text(encoding="utf-8"), i, lexicon, patterns)
        for i, path in enumerate(corpus_paths())
    ]


@pytest.fixture(scope="session")
def corpus_store(corpus_analyses):
    store = GraphStore()
    for analysis in corpus_analyses:
        store.apply_delta(analysis.delta)
    return store
