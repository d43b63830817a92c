"""Quadrature of the functional on the VKLS surface under mesh refinement, all three normalisations.

    python scripts/functional_mesh.py --meshes 250 500 1000 2000 4000
"""
import argparse
import math
import time

from youngtasep import shape


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--meshes", type=int, nargs="+", default=[250, 500, 1000, 2000])
    ap.add_argument("--n", type=float, default=2500.0)
    args = ap.parse_args()
    print(f"# C = {shape.constant_C():.9f}")
    print("mesh,L_area1,L0_plus_C,L_area2,L_unrescaled,err,seconds")
    prev = None
    for m in args.meshes:
        t0 = time.perf_counter()
        g = shape.vkls_shape(m)
        L1 = shape.functional_L(g)
        L0 = shape.functional_L(g, constant=0.0) + shape.constant_C()
        g2 = shape.to_area2(g)
        L2 = shape.functional_L(g2)
        Lu = shape.functional_L(shape.to_unrescaled(g2, args.n))
        dt = time.perf_counter() - t0
        print(f"{m},{L1:.8f},{L0:.8f},{L2:.8f},{Lu:.8f},{abs(L1 + 0.5):.2e},{dt:.2f}")
        if prev is not None:
            print(f"# observed order {math.log2(prev / abs(L1 + 0.5)) / math.log2(m / pm):.2f}")
        prev, pm = abs(L1 + 0.5), m


if __name__ == "__main__":
    main()
