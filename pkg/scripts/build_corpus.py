#!/usr/bin/env python3
"""Regenerate the shipped derivation corpus under src/duolog/corpus_data/.

Run from the repository root after changing any corpus builder:

    python scripts/build_corpus.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from duolog.corpus import CORPUS_BUILDERS, corpus_entry_to_dict
from duolog.proof import check_proof
from duolog.syntax import render_formula


def main() -> int:
    out_dir = pathlib.Path(__file__).resolve().parents[1] / "src" / "duolog" / "corpus_data"
    out_dir.mkdir(parents=True, exist_ok=True)
    for stale in out_dir.glob("*.json"):
        stale.unlink()
    for name, make in CORPUS_BUILDERS.items():
        proof = make()
        verdict = check_proof(proof)
        if not verdict.accepted:
            print(f"{name}: REJECTED at step {verdict.failed_step}: {verdict.reason}")
            return 1
        path = out_dir / f"{name.lower()}.json"
        path.write_text(json.dumps(corpus_entry_to_dict(name, proof), indent=1) + "\n")
        print(f"{name:14s} {proof.system:14s} {len(proof.steps):5d} steps  |- {render_formula(proof.conclusion)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
