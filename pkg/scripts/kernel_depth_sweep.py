"""Interior W^{-1} entries vs the closed-form finite kernel as the cylinder gets taller.

The boundary rows leak into the middle level at the per-level rate
q = max|1 + eps zeta| off the window / min|1 + eps zeta| on it, so the gap at
depth D is about q^D.  At L = 4, eps = 0.05 this is ~0.93 per level and a 1e-6
gap needs D near 200.

    python scripts/kernel_depth_sweep.py --depths 10 25 50 100 150 200 250
"""
import argparse
import math
import time

import numpy as np

from youngtasep.dimer import kernels
from youngtasep.verify import kernel_convergence_errors


def level_ratio(L, N, eps):
    win, comp = kernels.harmonics(L, N)
    lw = np.abs(1 + eps * kernels.zeta(L, N, win)).min()
    lc = np.abs(1 + eps * kernels.zeta(L, N, comp)).max()
    return lc / lw


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--L", type=int, default=4)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--depths", type=int, nargs="+", default=[10, 25, 50, 100, 150, 200])
    args = ap.parse_args()
    Ns = tuple(range(1, args.L))
    q = {N: level_ratio(args.L, N, args.eps) for N in Ns}
    print("# per-level ratio q: " + ", ".join(f"N={N}: {v:.5f}" for N, v in q.items()))
    print("# depth needed for 1e-6 at unit prefactor: "
          + ", ".join(f"N={N}: {math.log(1e-6) / math.log(v):.0f}" for N, v in q.items()))
    print("depth,N,max_error,q^depth,seconds")
    errs = {N: [] for N in Ns}
    for D in args.depths:
        t0 = time.perf_counter()
        e = kernel_convergence_errors(depth=D, L=args.L, eps=args.eps, Ns=Ns)
        dt = time.perf_counter() - t0
        for N in Ns:
            errs[N].append(e[N])
            print(f"{D},{N},{e[N]:.3e},{q[N] ** D:.3e},{dt:.2f}")
    for N in Ns:
        slope = np.polyfit(args.depths, np.log(errs[N]), 1)[0]
        print(f"# N={N}: fitted decay per level {math.exp(slope):.5f} (predicted {q[N]:.5f})")


if __name__ == "__main__":
    main()
