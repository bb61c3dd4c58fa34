"""Time the compiled and numpy Euler-sum kernels on the same workload.

    python benchmarks/bench_kernels.py [--count 200] [--d 5] [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

from dynzeta import kernels, zetafun
from dynzeta.geodata import synthesize_length_spectrum
from dynzeta.repkit import MIrrep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200, help="number of geodesics")
    ap.add_argument("--d", type=int, default=5, help="odd dimension")
    ap.add_argument("--dim-chi", type=int, default=3, help="twist dimension")
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    ap.add_argument("--tail-tol", type=float, default=1e-14, help="Euler tail tolerance")
    args = ap.parse_args()

    spec = synthesize_length_spectrum(7, args.count, args.d, args.dim_chi, unitary=False)
    sigma = MIrrep.of(args.d, [1] * ((args.d - 1) // 2))
    s = zetafun.selberg_abscissa(spec) + 0.5 + 1j
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    values = {}
    print(f"geodesics={args.count} d={args.d} dim_chi={args.dim_chi} s={s}")
    for b in backends:
        ev = zetafun.log_selberg(spec, sigma, s, args.tail_tol, backend=b)
        values[b] = ev.value
        t = min(timeit.repeat(lambda: zetafun.log_selberg(spec, sigma, s, args.tail_tol, backend=b), number=1, repeat=args.repeat))
        print(f"{b:>7}: {t * 1e3:9.2f} ms  terms={ev.n_terms}  value={ev.value:.15g}")
    if len(values) == 2:
        print(f"|cython - python| = {abs(values['cython'] - values['python']):.3e}")
    else:
        print("compiled kernels not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
