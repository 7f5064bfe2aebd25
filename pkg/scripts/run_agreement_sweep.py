#!/usr/bin/env python3
"""Cross-check every verdict route over the on-grid rational parameter range.

For each reduced a = p/q (q <= qmax, a < 1), b = 1, and every on-grid window
length c = k/q in (c_lo, c_hi), runs triple_pipeline_check: closed-form
classification, invariant-set construction (measure identity and
two-solvability), and the grid-orbit oracle where applicable.  Prints a
per-region tally and exits nonzero on the first route disagreement.

Usage:
    python3 scripts/run_agreement_sweep.py --qmax 12
    python3 scripts/run_agreement_sweep.py --qmax 12 --generic-only
    python3 scripts/run_agreement_sweep.py --qmax 14 --workers 8
"""

import argparse
import sys
import time
from collections import Counter
from fractions import Fraction
from math import gcd

from gaborbox import RegionTag, normalize, rat, region_tag
from gaborbox.classifier import classify_triple
from gaborbox.oracle import triple_pipeline_check


def cell_payloads(qmax, c_lo, c_hi):
    for q in range(1, qmax + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                for k in range(c_lo * q + 1, c_hi * q):
                    yield (p, q, k)


def check_cell(payload):
    """Worker body: rebuild the triple from integers, run every route."""
    p, q, k = payload
    nt = normalize(rat(Fraction(p, q)), rat(1), rat(Fraction(k, q)))
    tag = str(region_tag(nt))
    verdict = classify_triple(nt).verdict
    return tag, verdict, triple_pipeline_check(nt)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qmax", type=int, default=12)
    ap.add_argument("--c-lo", type=int, default=1)
    ap.add_argument("--c-hi", type=int, default=8)
    ap.add_argument(
        "--generic-only",
        action="store_true",
        help="restrict to the generic dynamical region instead of all regions",
    )
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    payloads = list(cell_payloads(args.qmax, args.c_lo, args.c_hi))
    t0 = time.monotonic()
    if args.workers > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(args.workers) as ex:
            results = list(ex.map(check_cell, payloads, chunksize=64))
    else:
        results = [check_cell(p) for p in payloads]
    elapsed = time.monotonic() - t0

    tally = Counter()
    clashes = []
    checked = 0
    for (p, q, k), (tag, verdict, clash) in zip(payloads, results):
        if args.generic_only and tag not in ("XII", "XIII"):
            continue
        checked += 1
        tally[(tag, verdict)] += 1
        if clash is not None:
            clashes.append((p, q, k, clash))

    print(f"checked {checked} triples in {elapsed:.2f}s "
          f"(qmax={args.qmax}, c in ({args.c_lo},{args.c_hi}), "
          f"workers={args.workers})")
    for (tag, verdict), n in sorted(tally.items()):
        print(f"  region {tag:>4}  {verdict:>8}  {n:5d}")
    if clashes:
        print(f"\n{len(clashes)} DISAGREEMENT(S):", file=sys.stderr)
        for p, q, k, clash in clashes[:20]:
            print(f"  a={p}/{q} c={k}/{q}: {clash}", file=sys.stderr)
        return 1
    print("all routes agree")
    return 0


if __name__ == "__main__":
    sys.exit(main())
