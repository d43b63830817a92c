"""Plancherel growth against the rescaled VKLS family h_alpha.

Reports sup_x |g(alpha, x) - h_alpha(x)| per sample; no rate is asserted.

    python scripts/shape_montecarlo.py --n 500 2500 10000 --samples 5 --svg shapes.svg
"""
import argparse

import numpy as np

from youngtasep import shape, young

ALPHAS = (0.25, 0.5, 0.75, 1.0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[500, 2500])
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--svg")
    args = ap.parse_args()
    ss = np.random.SeedSequence(args.seed)
    print("n,sample," + ",".join(f"sup_err_{a}" for a in ALPHAS))
    last = None
    for n in args.n:
        rows = []
        for s, child in enumerate(ss.spawn(args.samples)):
            g = shape.path_to_shape(young.sample_plancherel_path(n, seed=np.random.default_rng(child)))
            d = shape.shape_discrepancy(g, ALPHAS)
            rows.append([d[a] for a in ALPHAS])
            print(f"{n},{s}," + ",".join(f"{v:.4f}" for v in rows[-1]))
            last = g
        m = np.mean(rows, axis=0)
        print(f"# n={n} mean: " + ", ".join(f"{v:.4f}" for v in m) + f"; mean * n^(1/3) at alpha=1: {m[-1] * n ** (1 / 3):.3f}")
    if args.svg and last is not None:
        curves = [last.at(a) for a in ALPHAS] + [shape.omega_tx(a, last.x) for a in ALPHAS]
        labels = [f"sample alpha={a}" for a in ALPHAS] + [f"h_alpha={a}" for a in ALPHAS]
        shape.write_svg_curves(args.svg, last.x, curves, labels)


if __name__ == "__main__":
    main()
