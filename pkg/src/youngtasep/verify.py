"""Invariant suites and the ten acceptance criteria.

Every check returns a :class:`Check` record with the measured value, the
tolerance it is held to and its wall-clock time; budgets are enforced here so
the CLI and the test-suite report the same verdicts.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import mtasep, shape, young
from .dimer import beads, exact, graph, kernels, poisson

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    passed: bool
    value: object
    tolerance: object
    detail: str = ""
    runtime: float = 0.0
    budget: float | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("value", "tolerance"):
            v = d[k]
            if isinstance(v, (np.floating, np.integer)):
                d[k] = v.item()
            elif isinstance(v, Fraction):
                d[k] = str(v)
        return d

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" / {self.budget:g}s" if self.budget else ""
        return f"[{status}] {self.name}: value={_fmt(self.value)} tol={_fmt(self.tolerance)} ({self.runtime:.1f}s{budget}) {self.detail}".rstrip()


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def timed(name, budget=None):
    """Decorator: run f() -> (passed, value, tol, detail) and wrap it in a Check."""
    def wrap(f):
        def run(**kw) -> Check:
            t0 = time.perf_counter()
            passed, value, tol, detail = f(**kw)
            dt = time.perf_counter() - t0
            if budget is not None and dt > budget:
                passed = False
                detail = f"{detail}; over runtime budget".lstrip("; ")
            return Check(name, bool(passed), value, tol, detail, dt, budget)
        run.__name__ = f.__name__
        run.__doc__ = f.__doc__
        return run
    return wrap


# ---------------------------------------------------------------- acceptance criteria


@timed("1 entropy closed form vs power iteration", budget=60)
def criterion_1():
    worst, arg = 0.0, None
    for L in range(2, 13):
        for N in range(1, L):
            spec = mtasep.spectral_radius_numeric(L, N)
            err = abs(mtasep.entropy_closed(L, N) - math.log(spec.rho))
            if err >= worst:
                worst, arg = err, (L, N)
    return worst <= 1e-10, worst, 1e-10, f"66 pairs, worst at (L, N) = {arg}"


@timed("2 Parry law equals projection-kernel minors", budget=120)
def criterion_2():
    worst, arg, pairs = 0.0, None, 0
    for L in range(2, 11):
        for N in range(1, L):
            K = mtasep.projection_kernel(L, N)
            pairs += 1
            for s, p in mtasep.parry_measure(L, N).items():
                err = abs(p - mtasep.determinantal_state_probability(K, s))
                if err >= worst:
                    worst, arg = err, (L, N, s)
    return worst <= 1e-10, worst, 1e-10, f"{pairs} pairs (both parities of N), worst at {arg}"


def _cap_instances(cap_vertices):
    """(L, N, M, boundary_in) with 2 (L M + L - N) <= cap_vertices."""
    half = cap_vertices // 2
    for L in range(2, half + 1):
        for N in range(1, L):
            for M in itertools.count(1):
                if L * M + L - N > half:
                    break
                for bi in itertools.combinations(range(L), N):
                    yield L, N, M, bi


def rotation_orbit(bi, L):
    return {tuple(sorted((k + r) % L for k in bi)) for r in range(L)}


@timed("3 Kasteleyn exactness within the vertex cap", budget=60)
def criterion_3(eps=Fraction(1, 3), edge_cap=24, extra=60, seed=0):
    # |det W| = Z for every (L, N, M, boundary_in, boundary_out) with at most 40 vertices.
    # Graph, gauge and weights commute with rotation, so one boundary_in per orbit is
    # enough; each covers all outputs (exact minors on the support, Cauchy-Binet for the rest).
    instances = bad = classes = 0
    big = []
    for L, N, M, bi in _cap_instances(graph.VERTEX_CAP):
        if 2 * (L * M + L - N) > edge_cap:
            big.append((L, N, M, bi))
        orbit = rotation_orbit(bi, L)
        if min(orbit) != bi:
            continue
        classes += 1
        instances += len(orbit) * math.comb(L, N)
        Z = graph.enumerate_by_output(L, N, M, bi, eps)
        bad += exact.certify_det_by_output(L, N, M, bi, eps, Z)
    # edge probabilities from the exact inverse vs enumeration frequencies: every feasible
    # instance up to edge_cap vertices, plus a seeded sample of larger feasible ones
    pool = [(L, N, M, bi, bo) for L, N, M, bi in _cap_instances(edge_cap) for bo in itertools.combinations(range(L), N)]
    rng = random.Random(seed)
    for L, N, M, bi in rng.sample(big, extra):
        Z = graph.enumerate_by_output(L, N, M, bi, eps)
        if Z:
            pool.append((L, N, M, bi, rng.choice(sorted(Z))))
    edge_bad = edge_n = checked = 0
    for L, N, M, bi, bo in pool:
        g = graph.CylinderGraph.build(L, N, M, bi, bo)
        en = graph.enumerate_matchings(g, eps)
        if en.Z == 0:
            continue
        checked += 1
        ex = exact.exact_kasteleyn(g, eps)
        marg = en.edge_marginals()
        for e in g.edges:
            edge_n += 1
            edge_bad += ex.edge_probability(e) != marg[e]
    ok = bad == 0 and edge_bad == 0
    detail = (f"{instances} instances in {classes} rotation classes, det mismatches {bad}; "
              f"edge probabilities on {checked} feasible instances ({edge_n} edges), mismatches {edge_bad}")
    return ok, bad + edge_bad, 0, detail


def kernel_convergence_errors(depth=25, L=4, eps=0.05, js=range(-3, 4), Ns=(1, 2, 3)):
    """max |W^{-1} entry - closed-form K(j, d)| per N on the graph with levels -depth..depth."""
    out = {}
    for N in Ns:
        g = graph.CylinderGraph.build(L, N, 2 * depth, tuple(range(N)), M_minus=-depth)
        fk = kernels.finite_kernel_exact(g, eps, js=js, center=0)
        out[N] = max(abs(v - kernels.finite_kernel_closed(L, N, eps, j, d)) for (j, d), v in fk.values.items())
    return out


@timed("4 finite kernel convergence at depth 25", budget=30)
def criterion_4():
    errs = kernel_convergence_errors(depth=25)
    worst = max(errs.values())
    return worst <= 1e-6, worst, 1e-6, "per N: " + ", ".join(f"{N}: {e:.2e}" for N, e in errs.items())


def frozen_kernel_errors(pairs=((4, 2), (6, 3), (5, 2), (4, 1)), epss=(0.1, 0.01, 0.001),
                         ts=(0.5, 1.0, -0.5, -1.0, 2.0)):
    errs = {}
    for L, N in pairs:
        errs[(L, N)] = [max(abs(kernels.finite_kernel_closed(L, N, e, round(t / e), d) - kernels.limit_kernel(L, N, t, d))
                            for t in ts for d in range(L)) for e in epss]
    return errs


@timed("5 frozen limit: O(eps) kernels and the jump rate", budget=120)
def criterion_5(horizon=1e4, seed=1):
    epss = (0.1, 0.01, 0.001)
    errs = frozen_kernel_errors(epss=epss)
    slopes = {k: float(np.polyfit(np.log(epss), np.log(v), 1)[0]) for k, v in errs.items()}
    slope_ok = all(0.9 <= s <= 1.1 for s in slopes.values())
    zs = {}
    for i, (L, N) in enumerate(((4, 2), (6, 3))):
        fs = mtasep.sample_frozen_process(L, N, horizon, seed=seed + i)
        rate = math.exp(mtasep.entropy_closed(L, N))
        zs[(L, N)] = (fs.rate - rate) / math.sqrt(rate / horizon)
    rate_ok = all(abs(z) <= 3 for z in zs.values())
    worst_z = max(abs(z) for z in zs.values())
    detail = ("log-log slopes " + ", ".join(f"{k}: {s:.3f}" for k, s in slopes.items())
              + "; rate z-scores " + ", ".join(f"{k}: {z:+.2f}" for k, z in zs.items()))
    return slope_ok and rate_ok, worst_z, 3.0, detail


def skew_sweep(max_size=20):
    """(pairs, mismatches): DP over sub-diagrams of every outer shape vs the determinant count."""
    pairs = bad = 0
    for n in range(max_size + 1):
        for lam in young.partitions_of(n):
            for mu, c in young._paths_raw(lam.parts, ()).items():
                pairs += 1
                bad += young._skew_det_raw(lam.parts, mu) != c
    return pairs, bad


@timed("6 exact Young-graph combinatorics", budget=60)
def criterion_6():
    plancherel = all(young.plancherel_identity_check(n) for n in range(13))
    pairs, bad = skew_sweep(20)
    return plancherel and bad == 0, bad, 0, f"sum dim^2 = n! for n <= 12: {plancherel}; {pairs} skew shapes, mismatches {bad}"


def vkls_residual_max(h=1e-3, nt=11, nx=17):
    worst = 0.0
    for t in np.linspace(0.5, 1.0, nt):
        for x in np.linspace(-0.8, 0.8, nx) * math.sqrt(t):
            worst = max(worst, abs(shape.el_residual(shape.omega_tx, t, x, h)))
    return worst


@timed("7 variational anchors", budget=60)
def criterion_7(mesh=2000):
    g = shape.vkls_shape(mesh)
    L = shape.functional_L(g)
    L0 = shape.functional_L(g, constant=0.0)
    L2 = shape.functional_L(shape.to_area2(g))
    res = vkls_residual_max()
    c_err = abs(L0 + shape.constant_C() + 0.5)
    ok = abs(L + 0.5) <= 2e-3 and res <= 1e-3 and c_err <= 2e-3 and abs(L2 - L) <= 2e-3
    detail = f"L[Omega] = {L:.6f}, L0 + C = {L0 + shape.constant_C():.6f}, area2 form {L2:.6f}, max EL residual {res:.2e}"
    return ok, abs(L + 0.5), 2e-3, detail


@timed("8 sine-kernel limit of the projection kernel", budget=10)
def criterion_8():
    worst_scaled, detail = 0.0, []
    ok = True
    for L in (50, 500, 2000):
        K = mtasep.projection_kernel(L, int(0.3 * L))
        err = max(abs(K.value(k) - mtasep.sine_kernel(k, 0.3)) for k in range(1, 6))
        ok &= err <= 5 / L
        worst_scaled = max(worst_scaled, err * L)
        detail.append(f"L={L}: {err:.2e}")
    return ok, worst_scaled, 5.0, "L * max error; " + ", ".join(detail)


def beads_grid_errors(rho=0.3, ts=(0.7, -0.7, 0.3, -0.3, 1.5, -1.5, 0.0), ks=range(-3, 4)):
    return max(abs(beads.beads_kernel_arc(rho, t, k) - beads.beads_kernel_segment(rho, t, k)) for t in ts for k in ks)


def beads_cylinder_errors(rho=0.3, Ls=(20, 40, 100, 200, 500, 1000, 2000), ts=(0.7, -0.7, 0.3, -1.5), ks=range(-2, 3)):
    ref = {(t, k): beads.beads_kernel_arc(rho, t, k) for t in ts for k in ks}
    return {L: max(abs(beads.cylinder_jump_kernel(L, round(rho * L), t, k) - v) for (t, k), v in ref.items()) for L in Ls}


@timed("9 beads kernel: arc vs segment, cylinder limit", budget=60)
def criterion_9():
    rep = beads_grid_errors()
    errs = beads_cylinder_errors()
    Ls = np.array(list(errs))
    e = np.array(list(errs.values()))
    slope, icpt = np.polyfit(np.log(Ls), np.log(e), 1)
    C = float(np.max(e * Ls))
    ok = rep <= 1e-8 and slope <= -0.9
    return ok, rep, 1e-8, f"cylinder error ~ L^{slope:.3f}, fitted C = {C:.3f} (error <= C / L on the sweep)"


@timed("10 poissonization on the mirrored graph", budget=120)
def criterion_10(width=3, theta=0.5, epss=(0.1, 0.05, 0.025)):
    # the transfer recursion is itself cross-checked against brute-force mirrored matchings
    oracle_bad = 0
    for w, M in ((1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)):
        eps = Fraction(1, 10)
        Z = poisson.path_weights(w, M, eps)
        brute = poisson.enumerate_mirrored(w, M, eps)
        keys = set(Z) | set(brute)
        oracle_bad += any(Z.get(k, 0) ** 2 != brute.get(k, 0) for k in keys)
    reps = [poisson.poissonization_check(width, epsilon=e, theta=theta) for e in epss]
    max_err = [r.max_error for r in reps]
    one = [r.error_at(young.Partition((1,))) for r in reps]
    mono = all(a > b for a, b in zip(max_err, max_err[1:])) and all(a > b for a, b in zip(one, one[1:]))
    ok = mono and oracle_bad == 0
    detail = ("max error " + ", ".join(f"{e:.2e}" for e in max_err) + "; error at (1) " + ", ".join(f"{e:.2e}" for e in one)
              + f"; brute-force mismatches {oracle_bad}")
    return ok, max_err[-1], "decreasing", detail


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


# ---------------------------------------------------------------- module suites


def _check(name, value, tol, ok=None, detail=""):
    ok = (value <= tol) if ok is None else ok
    return Check(name, bool(ok), value, tol, detail)


def suite_young() -> list[Check]:
    out = []
    out.append(_check("sum of dim^2 equals n! for n <= 10", 0, 0,
                      all(young.plancherel_identity_check(n) for n in range(11))))
    pairs, bad = skew_sweep(10)
    out.append(_check("DP skew count equals determinant count, |outer| <= 10", bad, 0, detail=f"{pairs} shapes"))
    worst = 0.0
    for n in range(1, 8):
        for p in young.partitions_of(n):
            worst = max(worst, abs(float(sum(young.forward_step_distribution(p).values())) - 1))
            back = young.backward_step_distribution(p)
            worst = max(worst, abs(float(sum(back.values())) - 1))
    out.append(_check("forward and backward transitions are probability vectors", worst, 0.0))
    bad = 0
    for n in range(8):
        for p in young.partitions_of(n):
            bad += young.maya_decode(young.maya_encode(p)) != p
    out.append(_check("maya encode/decode round trip, n <= 7", bad, 0))
    tab = young.sample_plancherel_path(200, seed=5)
    out.append(_check("sampled Plancherel path is a valid tableau", 0, 0,
                      young.PathTableau.from_json(tab.to_json()) == tab))
    return out


def suite_mtasep() -> list[Check]:
    out = []
    worst = max(abs(mtasep.entropy_closed(L, N) - math.log(mtasep.spectral_radius_numeric(L, N).rho))
                for L in range(2, 9) for N in range(1, L))
    out.append(_check("closed entropy vs power iteration, L <= 8", worst, 1e-10))
    worst = 0.0
    for L in range(2, 9):
        for N in range(1, L):
            K = mtasep.projection_kernel(L, N)
            for s, p in mtasep.parry_measure(L, N).items():
                worst = max(worst, abs(p - mtasep.determinantal_state_probability(K, s)))
    out.append(_check("Parry measure vs determinantal minors, L <= 8", worst, 1e-10))
    worst = 0.0
    for L in range(2, 9):
        for N in range(1, L):
            P = mtasep.projection_kernel(L, N).matrix()
            worst = max(worst, np.abs(P @ P - P).max(), np.abs(P - P.conj().T).max())
    out.append(_check("projection kernel is an orthogonal projector", worst, 1e-12))
    worst = 0.0
    for L in range(2, 8):
        for N in range(1, L):
            K0 = mtasep.projection_kernel(L, N)
            for off in range(1, L):
                K1 = mtasep.projection_kernel(L, N, offset=off)
                for s in mtasep.circle_states(L, N):
                    worst = max(worst, abs(mtasep.determinantal_state_probability(K0, s)
                                           - mtasep.determinantal_state_probability(K1, s)))
    out.append(_check("minors do not depend on the Fourier window offset", worst, 1e-10))
    worst = 0.0
    for L in range(2, 9):
        for N in range(1, L):
            P = mtasep.parry_kernel(L, N)
            worst = max(worst, float(np.abs(np.asarray(P.sum(axis=1)).ravel() - 1).max()))
    out.append(_check("Parry kernel rows sum to 1", worst, 1e-12))
    per = all(mtasep.spectral_radius_numeric(L, N).period == L for L in range(2, 9) for N in range(1, L))
    out.append(_check("chain period equals L", 0, 0, per))
    return out


def suite_dimer() -> list[Check]:
    out = []
    bad = 0
    for L, N, M, bi in _cap_instances(24):
        Z = graph.enumerate_by_output(L, N, M, bi, Fraction(1, 3))
        D = exact.abs_det_by_output(L, N, M, bi, Fraction(1, 3))
        bad += sum(Z.get(bo, 0) != d for bo, d in D.items())
    out.append(_check("|det W| equals the matching sum, <= 24 vertices", bad, 0))
    faces_ok = True
    for L in range(2, 7):
        for N in range(1, L):
            for M in range(1, 7):
                g = graph.CylinderGraph.build(L, N, M, tuple(range(N)))
                try:
                    graph.GaugeAssignment.standard(L, N).check_faces(g)
                except Exception:
                    faces_ok = False
    out.append(_check("gauge face conditions, L <= 6, M <= 6", 0, 0, faces_ok))
    worst = 0.0
    for L, N in ((4, 1), (4, 2), (5, 2), (6, 3)):
        for d in range(L):
            jump = kernels.limit_kernel(L, N, 0.0, d, zero_branch="+") - kernels.limit_kernel(L, N, 0.0, d, zero_branch="-")
            worst = max(worst, abs(jump - (d == 0)))
    out.append(_check("limit kernel branch difference is delta_0", worst, 1e-12))
    worst = 0.0
    for L, N in ((4, 2), (5, 2), (6, 3)):
        K = mtasep.projection_kernel(L, N)
        for s in mtasep.circle_states(L, N):
            pts = [(0.0, k) for k in s]
            worst = max(worst, abs(kernels.stone_correlation(pts, L, N) - mtasep.determinantal_state_probability(K, s)))
    out.append(_check("equal-time stone correlations equal projection minors", worst, 1e-10))
    worst = 0.0
    for L, N in ((4, 2), (5, 2)):
        for pts in (((0.0, 0), (0.4, 1)), ((0.0, 1), (-0.3, 2), (0.5, 0))):
            worst = max(worst, abs(kernels.stone_correlation(pts, L, N) - mtasep.chain_stone_correlation(L, N, pts)))
            worst = max(worst, abs(kernels.jump_density(pts, L, N) - mtasep.chain_jump_density(L, N, pts)))
    out.append(_check("limit-kernel determinants equal the continuous-time chain", worst, 1e-9))
    out.append(_check("beads arc vs segment, rho = 0.3", beads_grid_errors(ts=(0.7, -0.7), ks=range(-2, 3)), 1e-8))
    errs = kernel_convergence_errors(depth=100, Ns=(2,))
    out.append(_check("W^{-1} interior vs closed kernel at depth 100 (L=4, N=2)", errs[2], 1e-2))
    return out


def suite_shape() -> list[Check]:
    out = []
    g = shape.vkls_shape(1000)
    out.append(_check("L[Omega] = -1/2 at mesh 1000", abs(shape.functional_L(g) + 0.5), 2e-3))
    out.append(_check("area2 form without constant equals L", abs(shape.functional_L(shape.to_area2(g)) - shape.functional_L(g)), 2e-3))
    out.append(_check("EL residual of Omega, t in [0.5, 1]", vkls_residual_max(nt=6, nx=9), 1e-3))
    xi = np.linspace(-0.9, 0.9, 19)
    out.append(_check("A0 is even", float(np.abs(shape.A0(xi) - shape.A0(-xi)).max()), 0.0))
    base = shape.functional_L(g)
    worst = max(shape.functional_L(shape.perturbed_vkls(p, 1000)) - base for p in shape.perturbation_family(4))
    out.append(_check("bumps do not raise L", worst, 1e-4))
    return out


SUITES = {"young": suite_young, "mtasep": suite_mtasep, "dimer": suite_dimer, "shape": suite_shape}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for s in SUITES.values() for c in s()]
    if name == "acceptance":
        return [c() for c in CRITERIA]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()


def report(name: str, checks: list[Check], runtime: float | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": name,
        "runtime": runtime,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
