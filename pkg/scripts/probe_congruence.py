#!/usr/bin/env python3
"""Hammer the congruence property: bisimilar pairs stay bisimilar in context.

Generates random small processes, keeps the pairs the checker verifies as
bisimilar (reflexive pairs, commuted sums and parallels, units), then wraps
each pair in random contexts and re-checks.  Any counterexample would be an
engine bug, so the script exits nonzero on one.
"""

import argparse
import random
import sys

from papc.equivalence import bisimilar, congruence_probe
from papc.lts import Bounds
from papc.syntax import EMPTY_DEFINITIONS, NIL, Par, Sum, format_term

sys.path.insert(0, str(__import__("pathlib").Path(__file__).resolve().parent.parent / "tests"))
from gen import random_process  # noqa: E402


def candidate_pairs(rng, wanted, bounds):
    pairs = []
    while len(pairs) < wanted // 2:
        p = random_process(rng, 2, constants=False)
        pairs.append((p, p))
    attempts = 0
    while len(pairs) < wanted and attempts < 50 * wanted:
        attempts += 1
        p = random_process(rng, 2, constants=False)
        q = random_process(rng, 2, constants=False)
        pair = rng.choice([
            (Sum(p, q), Sum(q, p)),
            (Par(p, q), Par(q, p)),
            (Sum(p, NIL), p),
            (Par(NIL, p), p),
        ])
        if pair[0] != pair[1] and bisimilar(*pair, EMPTY_DEFINITIONS, bounds).is_bisimilar:
            pairs.append(pair)
    return pairs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=20)
    parser.add_argument("--contexts", type=int, default=25)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-states", type=int, default=250)
    parser.add_argument("--max-depth", type=int, default=8)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    bounds = Bounds(max_states=args.max_states, max_depth=args.max_depth)
    pairs = candidate_pairs(rng, args.pairs, bounds)
    print(f"verified candidate pairs: {len(pairs)}; sample:")
    for p, q in pairs[:5]:
        print(f"  {format_term(p)}   ~   {format_term(q)}")

    report = congruence_probe(pairs, EMPTY_DEFINITIONS, n_contexts=args.contexts,
                              seed=args.seed, bounds=bounds)
    print(f"\npairs verified: {report.verified_pairs}  rejected: {len(report.rejected_pairs)}")
    print(f"checks: {report.checks}  bisimilar: {report.bisimilar_checks}  "
          f"unknown: {report.unknown_checks}")
    if report.counterexamples:
        print("\nCOUNTEREXAMPLES (engine bug!):")
        for finding in report.counterexamples:
            print(f"  pair {finding.pair_index} under {format_term(finding.context)}: "
                  f"{finding.verdict.detail}")
        return 1
    print("no counterexamples")
    return 0


if __name__ == "__main__":
    sys.exit(main())
