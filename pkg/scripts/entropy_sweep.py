"""Closed-form entropy against power iteration on the m-TASEP transition matrix.

    python scripts/entropy_sweep.py --lmax 16 > entropy.csv
"""
import argparse
import math
import time

from youngtasep import mtasep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lmax", type=int, default=14)
    args = ap.parse_args()
    print("L,N,states,closed,numeric,abs_diff,iterations,period,seconds")
    worst = 0.0
    for L in range(2, args.lmax + 1):
        for N in range(1, L):
            t0 = time.perf_counter()
            spec = mtasep.spectral_radius_numeric(L, N)
            dt = time.perf_counter() - t0
            h = mtasep.entropy_closed(L, N)
            err = abs(h - math.log(spec.rho))
            worst = max(worst, err)
            print(f"{L},{N},{math.comb(L, N)},{h!r},{math.log(spec.rho)!r},{err:.3e},{spec.iterations},{spec.period},{dt:.3f}")
    print(f"# worst abs diff {worst:.3e}")


if __name__ == "__main__":
    main()
