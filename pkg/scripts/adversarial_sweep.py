"""Soundness sweep on almost alternating diagrams built from random braids.

Each reduced prime alternating closed braid is flipped at every crossing.
Every result that is a valid input is decided and compared with the Jones
oracle: a TRIVIAL verdict with Jones != 1 would be unsound, and a Jones = 1
diagram decided NONTRIVIAL would contradict completeness.

    python3 scripts/adversarial_sweep.py --seed 1 --seconds 60 --max-length 15
"""

import argparse
import collections
import random
import time

from aaknots.corpus import braid_closure, random_braid_word
from aaknots.decide import InvalidInput, Status, decide
from aaknots.diagram import canonical_code, components, emit_pd, flip, is_connected, make_alternating
from aaknots.oracle import jones
from aaknots.recognition import decomposing_pairs, is_reduced


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--seconds", type=float, default=60)
    ap.add_argument("--max-length", type=int, default=15)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    seen: set[str] = set()
    stats = collections.Counter()
    suspicious = []
    t = time.perf_counter()
    while time.perf_counter() - t < args.seconds:
        strands = rng.randrange(3, 7)
        try:
            shadow = braid_closure(random_braid_word(rng, strands, rng.randrange(6, args.max_length)), strands)
        except ValueError:
            continue
        if components(shadow) != 1 or not is_connected(shadow):
            continue
        alt = make_alternating(shadow)
        if not is_reduced(alt) or decomposing_pairs(alt):
            continue
        code = canonical_code(alt)
        if code in seen:
            continue
        seen.add(code)
        for c in range(alt.n):
            d = flip(alt, [c])
            try:
                verdict, _ = decide(d)
            except InvalidInput:
                stats["invalid input"] += 1
                continue
            unknot_jones = jones(d) == 1
            stats[(unknot_jones, verdict.status.value)] += 1
            if unknot_jones != (verdict.status == Status.TRIVIAL):
                suspicious.append(d)
    print(f"{len(seen)} alternating knots, {time.perf_counter() - t:.0f}s")
    for k, v in sorted(stats.items(), key=str):
        label = k if isinstance(k, str) else f"jones==1: {k[0]}, verdict {k[1]}"
        print(f"  {label}: {v}")
    print(f"verdict/oracle disagreements: {len(suspicious)}")
    for d in suspicious[:5]:
        print("  ", emit_pd(d))


if __name__ == "__main__":
    main()
