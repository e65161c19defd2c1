#!/usr/bin/env python3
"""Randomized audit of the free-operator identities.

Draws seeded random Lie presentations, builds the free structure on each,
and runs the square-zero, deviation, bracket-compatibility and Gerstenhaber
suites.  Prints one line per presentation and a summary.

Usage: python scripts/random_bv_audit.py [--count N] [--seed S]
       [--pair-degree D] [--triple-degree D]
"""

import argparse
import random
import sys

from bvalg.bv import (free_bv_structure, verify_bracket_compatibility,
                      verify_deviation_identity, verify_gerstenhaber,
                      verify_square_zero)
from bvalg.lie import random_lie_presentation
from bvalg.report import merge_reports


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pair-degree", type=int, default=10)
    parser.add_argument("--triple-degree", type=int, default=8)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    failures = 0
    for i in range(args.count):
        presentation = random_lie_presentation(rng, basis_budget=80,
                                               window=args.pair_degree)
        structure = free_bv_structure(presentation, args.pair_degree)
        report = merge_reports(
            verify_square_zero(structure, args.pair_degree),
            verify_deviation_identity(structure, args.pair_degree),
            verify_bracket_compatibility(structure, args.pair_degree),
            verify_gerstenhaber(structure, args.triple_degree, args.triple_degree),
        )
        checked = sum(c.checked for c in report.checks)
        shape = ", ".join(f"{g.id}:{g.degree}" for g in presentation.generators)
        brackets = sum(1 for v in presentation.brackets.values() if not v.is_zero)
        verdict = "PASS" if report.passed else "FAIL"
        print(f"[{i:02d}] {verdict} field={presentation.field} "
              f"shift={presentation.shift} gens=({shape}) "
              f"brackets={brackets} diffs={len(presentation.differential)} "
              f"checks={checked}")
        if not report.passed:
            failures += 1
            for cert in report.certificates():
                print("     counterexample:", cert)
    print(f"summary: {args.count - failures}/{args.count} passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
