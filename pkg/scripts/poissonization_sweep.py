"""Mirrored-graph weights against the width-restricted poissonized Plancherel law.

    python scripts/poissonization_sweep.py --width 3 --theta 0.5
"""
import argparse
from fractions import Fraction

from youngtasep.dimer import poisson
from youngtasep.young import Partition


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--width", type=int, default=3)
    ap.add_argument("--theta", type=float, default=0.5)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.05, 0.025, 0.0125, 0.00625])
    args = ap.parse_args()
    # brute-force oracle on the graphs that fit the enumeration cap
    for w, M in ((1, 2), (2, 2), (3, 1)):
        Z = poisson.path_weights(w, M, Fraction(1, 10))
        brute = poisson.enumerate_mirrored(w, M, Fraction(1, 10))
        ok = all(Z.get(k, 0) ** 2 == brute.get(k, 0) for k in set(Z) | set(brute))
        print(f"# width {w}, M {M}: transfer^2 == mirrored matchings: {ok}")
    one, two, col = Partition((1,)), Partition((2,)), Partition((1, 1))
    print("eps,M,max_error,error_at_1,ratio_2_over_11")
    for e in args.eps:
        r = poisson.poissonization_check(args.width, epsilon=e, theta=args.theta)
        ratio = float(r.weights[two] / r.weights[col])
        print(f"{e},{r.M},{r.max_error:.4e},{r.error_at(one):.4e},{ratio:.6f}")


if __name__ == "__main__":
    main()
