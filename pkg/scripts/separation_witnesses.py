#!/usr/bin/env python3
"""Print the countermodels behind the toolkit's separation results.

A quick tour for the curious: the model where the conditional fails to
distribute over disjunction without a base world, the split between the
downward and global readings of the classical conditional, and the
witnesses separating the two based systems.

    python scripts/separation_witnesses.py [--max-worlds N]
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from duolog.search import SearchBounds, bounded_valid
from duolog.semantics import dump_model
from duolog.syntax import parse_formula


CASES = [
    ("conditional/disjunction distribution, base-free",
     "(p => r) -> ((q => r) -> ((p | q) => r))", "sminus-bot", False, 2),
    ("same axiom on rooted models",
     "(p => r) -> ((q => r) -> ((p | q) => r))", "s", True, 3),
    ("X3 under the downward reading, base-free",
     "p => ((p => q) -> (p -> q))", "cipc-a", False, 3),
    ("X3 under the global reading, base-free",
     "p => ((p => q) -> (p -> q))", "cipc-c", False, 3),
    ("alternative system's T1 under the first semantics",
     "(p => q) -> (((p -> p) => p) -> q)", "s", True, 3),
    ("swap axiom under the alternative semantics",
     "(p => (q -> r)) -> (q -> (p => r))", "t", True, 3),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-worlds", type=int, default=None)
    args = parser.parse_args()
    for title, text, variant, rooted, bound in CASES:
        bound = args.max_worlds or bound
        formula = parse_formula(text)
        result = bounded_valid(
            formula, SearchBounds(variant=variant, max_worlds=bound, rooted=rooted)
        )
        print(f"== {title}")
        print(f"   {text}  [{variant}, {'rooted' if rooted else 'base-free'}, <= {bound} worlds]")
        if result.valid:
            print(f"   valid up to bound ({result.models_checked} models checked)")
        else:
            print(f"   refuted at world {result.world}: {dump_model(result.model)}")
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
