"""Enumerate the unknot corpus and report counts per crossing number.

    python3 scripts/corpus_stats.py --max-crossings 10 [--m=1,-1] [--out corpus.pd]
"""

import argparse
import collections
import time

from aaknots.diagram import emit_pd
from aaknots.generate import EnumConfig, enumerate_unknot_diagrams
from aaknots.recognition import is_strongly_reduced


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-crossings", type=int, default=10)
    ap.add_argument("--m", default="1,-1,2,-2,3,-3")
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = EnumConfig(args.max_crossings, frozenset(int(v) for v in args.m.split(",")))
    stats: dict = {}
    t = time.perf_counter()
    diagrams = enumerate_unknot_diagrams(cfg, stats=stats)
    elapsed = time.perf_counter() - t
    by_n = collections.Counter(d.n for d in diagrams)
    strong = collections.Counter(d.n for d in diagrams if is_strongly_reduced(d))
    print(f"{'n':>3} {'diagrams':>9} {'strongly reduced':>17} {'cumulative':>11}")
    total = 0
    for n in sorted(by_n):
        total += by_n[n]
        print(f"{n:>3} {by_n[n]:>9} {strong[n]:>17} {total:>11}")
    print(f"moves applied: {stats}")
    print(f"{len(diagrams)} diagrams in {elapsed:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(f"# max_crossings={cfg.max_crossings} m={args.m}\n")
            fh.writelines(emit_pd(d) + "\n" for d in diagrams)


if __name__ == "__main__":
    main()
