"""Decide every corpus diagram and summarise the certificates.

Prints the verdict histogram, the move mix, and the certificate length
distribution; every certificate is replayed (with the Jones check unless
--no-jones is given).

    python3 scripts/decide_corpus.py --max-crossings 10
"""

import argparse
import collections
import time

from aaknots.decide import decide, replay
from aaknots.generate import EnumConfig, enumerate_unknot_diagrams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-crossings", type=int, default=10)
    ap.add_argument("--no-jones", action="store_true")
    args = ap.parse_args()
    diagrams = enumerate_unknot_diagrams(EnumConfig(args.max_crossings))
    verdicts = collections.Counter()
    kinds = collections.Counter()
    lengths = collections.Counter()
    failed = []
    t = time.perf_counter()
    for d in diagrams:
        v, cert = decide(d)
        verdicts[str(v)] += 1
        kinds.update(r.kind.value for r in cert.steps)
        lengths[len(cert.steps)] += 1
        rep = replay(cert, check_jones=not args.no_jones)
        if not rep.ok:
            failed.append((d, rep.message))
    elapsed = time.perf_counter() - t
    print(f"{len(diagrams)} diagrams, {elapsed:.1f}s")
    for k, v in verdicts.most_common():
        print(f"  {k}: {v}")
    print("moves:", dict(kinds))
    print("certificate lengths:", dict(sorted(lengths.items())))
    print(f"replay failures: {len(failed)}")
    for d, msg in failed[:5]:
        print("  ", msg)


if __name__ == "__main__":
    main()
