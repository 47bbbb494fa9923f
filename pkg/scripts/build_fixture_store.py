"""Ingest the fixture corpus into a persistent store.

Usage: python scripts/build_fixture_store.py [store-path]
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from graphqa.service import Config, Runtime, _cmd_ingest  # noqa: E402


def main() -> int:
    store_path = sys.argv[1] if len(sys.argv) > 1 else str(ROOT / "fixture.graph")
    config = Config.load(None)
    config.store_path = store_path
    rt = Runtime(config)
    reports = rt.ingest_files(sorted((ROOT / "corpus").glob("doc*.txt")))
    rt.persist()
    for r in reports:
        if "error" in r:
            print(f"{r['source']}: ERROR {r['error']}")
        else:
            print(f"doc {r['doc_id']:2d}  {r['sentences']} sentences  "
                  f"+{r['nodes_added']:3d} nodes  +{r['edges_added']:3d} edges  "
                  f"{Path(r['source']).name}")
    print(f"\nstore written to {store_path}: "
          f"{len(rt.store.nodes)} nodes, {len(rt.store.edges)} edges")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
