"""Push random flat torsion-free symplectic connections through the pipeline and tally the verdicts."""

import argparse
import random
from collections import Counter

from gcdga.constructions import build_semidirect, lambda_lemma, technical_lemma, weak_mirror_pipeline
from gcdga.sampling import random_connection


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=int, nargs="+", default=[2, 4])
    args = p.parse_args()
    rng = random.Random(args.seed)
    verdicts: Counter = Counter()
    halted: Counter = Counter()
    lemma_failures = 0
    for _ in range(args.count):
        data = random_connection(rng, rng.choice(args.dims))
        pkg = build_semidirect(data)
        lemma_failures += not (lambda_lemma(pkg).ok and technical_lemma(pkg).ok)
        rep = weak_mirror_pipeline(data)
        verdicts[rep.verdict] += 1
        failed = next((s.name for s in rep.stages if not s.passed and s.name != "diagnostic"), None)
        if failed:
            halted[failed] += 1
    print(f"{args.count} connections, seed {args.seed}")
    for v, k in verdicts.most_common():
        print(f"  {v:<22} {k}")
    if halted:
        print("first failing stage:")
        for v, k in halted.most_common():
            print(f"  {v:<22} {k}")
    print(f"lemma failures: {lemma_failures}")
    return 1 if lemma_failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
