"""Run the golden question set against the fixture corpus and print a
per-question-type accuracy table.

Usage: python scripts/run_qa_eval.py
"""

import json
import sys
from collections import defaultdict
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from graphqa.graphstore import GraphStore  # noqa: E402
from graphqa.lexicon import (  # noqa: E402
    default_pattern_table,
    load_lexicon,
    load_role_patterns,
)
from graphqa.matcher import answer  # noqa: E402
from graphqa.pipeline import analyze_document  # noqa: E402


def main() -> int:
    lexicon = load_lexicon()
    patterns = load_role_patterns(default_pattern_table())
    store = GraphStore()
    for i, path in enumerate(sorted((ROOT / "corpus").glob("doc*.txt"))):
        store.apply_delta(analyze_document(
            path.read_text(encoding="utf-8"), i, lexicon, patterns).delta)

    golden = json.loads(
        (ROOT / "tests" / "golden" / "qa_golden.json").read_text(encoding="utf-8"))
    totals = defaultdict(lambda: [0, 0])  # wh -> [correct, total]
    failures = []
    for entry in golden:
        result = answer(entry["question"], store, lexicon, patterns)
        got = sorted(
            [{"label": a.label, "doc": a.doc_id, "sent": a.sentence_index}
             for a in result.answers], key=lambda d: d["label"])
        ok = got == entry["answers"] and result.wh.value == entry["wh"]
        totals[entry["wh"]][1] += 1
        if ok:
            totals[entry["wh"]][0] += 1
        else:
            failures.append((entry["question"], got, entry["answers"]))

    print(f"{'Query type':<12} {'Total':>5} {'Correct':>8} {'Accuracy':>9}")
    correct_all = total_all = 0
    for wh in sorted(totals):
        correct, total = totals[wh]
        correct_all += correct
        total_all += total
        print(f"{wh:<12} {total:>5} {correct:>8} {100 * correct / total:>8.1f}%")
    print(f"{'All':<12} {total_all:>5} {correct_all:>8} "
          f"{100 * correct_all / total_all:>8.1f}%")
    for q, got, want in failures:
        print(f"\nFAIL {q}\n  got:  {got}\n  want: {want}")
    return 0 if not failures else 1


if __name__ == "__main__":
    raise SystemExit(main())
