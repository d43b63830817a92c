"""Gauged cylinder jump kernel against the infinite beads kernel, L -> infinity at fixed density.

    python scripts/beads_sweep.py --rho 0.3
"""
import argparse

import numpy as np

from youngtasep.dimer import beads


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rho", type=float, default=0.3)
    ap.add_argument("--Ls", type=int, nargs="+", default=[20, 40, 100, 200, 500, 1000, 2000, 5000])
    args = ap.parse_args()
    ts, ks = (0.7, -0.7, 0.3, -1.5), range(-2, 3)
    ref = {(t, k): beads.beads_kernel_arc(args.rho, t, k) for t in ts for k in ks}
    if args.rho < 0.5:
        rep = max(abs(v - beads.beads_kernel_segment(args.rho, t, k)) for (t, k), v in ref.items())
        print(f"# arc vs segment, max over grid: {rep:.3e}")
    print("L,N,max_error,L*error")
    Ls, es = [], []
    for L in args.Ls:
        N = round(args.rho * L)
        e = max(abs(beads.cylinder_jump_kernel(L, N, t, k) - v) for (t, k), v in ref.items())
        Ls.append(L)
        es.append(e)
        print(f"{L},{N},{e:.4e},{e * L:.4f}")
    slope = np.polyfit(np.log(Ls), np.log(es), 1)[0]
    print(f"# fitted exponent {slope:.3f}")


if __name__ == "__main__":
    main()
