"""Time the focal-point pipeline m -> q -> w -> m on growing frames.

For each frame size a seeded random mass is drawn and the round trip is
timed; the dense FMT path is run too whenever it fits under the memory cap,
so the crossover is visible in one table.

    python scripts/scaling_demo.py --sizes 10,15,20,25,30 --support 50
"""

import argparse
import time
import tracemalloc

import numpy as np

from focalpoints.dst import commonality_to_conjunctive_weights, mass_to_commonality, weights_to_mass
from focalpoints.engines import EngineConfig, transform
from focalpoints.errors import FrameTooLarge
from focalpoints.lattice import DEFAULT_MEM_CAP_BYTES
from focalpoints.sampling import random_mass


def focal_round_trip(m):
    q = mass_to_commonality(m)
    back = weights_to_mass(commonality_to_conjunctive_weights(q))
    return len(q.fp), back


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="10,15,20,25,30")
    parser.add_argument("--support", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--mem-cap-bytes", type=int, default=DEFAULT_MEM_CAP_BYTES)
    args = parser.parse_args()

    print(f"{'N':>3} {'|fp|':>7} {'focal s':>9} {'peak MiB':>9} {'round-trip err':>15} {'fmt s':>9}")
    for n in (int(s) for s in args.sizes.split(",")):
        m = random_mass(np.random.default_rng([args.seed, n]), n, args.support, include_full=True)
        elapsed, (size, back) = best_of(lambda: focal_round_trip(m), args.repeats)
        tracemalloc.start()
        focal_round_trip(m)
        peak = tracemalloc.get_traced_memory()[1] / 2**20
        tracemalloc.stop()
        try:
            fmt_time, _ = best_of(lambda: transform(m, "mass-from-w", "fmt", EngineConfig(args.mem_cap_bytes)), args.repeats)
            fmt_col = f"{fmt_time:9.3f}"
        except FrameTooLarge:
            fmt_col = f"{'over cap':>9}"
        print(f"{n:>3} {size:>7} {elapsed:>9.3f} {peak:>9.1f} {back.max_abs_diff(m):>15.1e} {fmt_col}")


if __name__ == "__main__":
    main()
