"""Time the numba kernels against their numpy fallbacks on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--five]

Each row checks that both paths return identical arrays before timing.
``--five`` adds the reduced 5-point trace-bound sweep, which is slow on the
numpy path.
"""

import argparse
import time

import numpy as np

from sunflower_vc import _kernels as K
from sunflower_vc.gen import GeneratorConfig, random_family
from sunflower_vc.vc import sauer_shelah_bound


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def family(n, ell, size, seed):
    H = random_family(GeneratorConfig(n=n, ell=ell, family_size=size, seed=seed))
    return K.as_masks(H.members), H


def cases():
    m, H = family(18, 4, 40, 1)
    yield "upset_profile n=18 |H|=40", lambda: K._upset_profile_nb(m, 18), lambda: K._upset_profile_np(m, 18)
    m, H = family(14, 5, 60, 2)
    yield "shattered_table n=14 |H|=60", lambda: K._shattered_table_nb(m, 14), lambda: K._shattered_table_np(m, 14)
    m, H = family(12, 4, 14, 3)
    for rule in (K.LEX, K.RANDOM):
        yield (
            f"large_profile n=12 |H|=14 rule={rule}",
            lambda: K._large_profile_nb(m, 12, H.ell, rule, 7),
            lambda: K._large_profile_np(m, 12, H.ell, rule, 7),
        )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--five", action="store_true", help="include the 5-point sweep")
    args = ap.parse_args()
    if not K.NUMBA_ENABLED:
        raise SystemExit("numba path is disabled (SUNFLOWER_VC_DISABLE_NUMBA); unset it to compare")
    print(f"{'kernel':40s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, nb, npf in cases():
        nb()  # compile outside the timing
        t_nb, a = best_of(nb, args.repeat)
        t_np, b = best_of(npf, args.repeat)
        assert np.array_equal(np.asarray(a), np.asarray(b)), name
        print(f"{name:40s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}")
    if args.five:
        ss = np.array([[sauer_shelah_bound(k, min(d, k)) for d in range(6)] for k in range(6)], dtype=np.int64)
        K.sauer_shelah_five(ss)
        t_nb, a = best_of(lambda: K.sauer_shelah_five(ss), 1)
        K.NUMBA_ENABLED = False
        try:
            t_np, b = best_of(lambda: K.sauer_shelah_five(ss), 1)
        finally:
            K.NUMBA_ENABLED = True
        assert tuple(a) == tuple(b)
        print(f"{'sauer_shelah_five reduced':40s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
