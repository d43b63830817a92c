"""Limit shapes and the entropy functional of growing Young diagrams.

Shapes are written in rotated (Russian) coordinates: the empty diagram is
g(0, x) = |x|, and a surface g(t, x) is 1-Lipschitz in x and nondecreasing
in t.  With the area-1 normalisation the diagram at time t has area t.

The functional is
    L[g] = int int g_t (-log g_t + A0(g_x)) dx dt + C,   A0(xi) = log cos(pi xi / 2),
with C = -log(pi / sqrt 2).  Two equivalent normalisations are supported:
"area2" (x stretched by sqrt 2, diagram area 2t) and "unrescaled" (the area-2
surface blown up to n cells over t in [0, n]).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, ShapeError
from .young import PathTableau

SQRT2 = math.sqrt(2.0)
TAGS = ("area1", "area2", "unrescaled")
GX_CLAMP = 1 - 1e-9
GT_FLOOR = 1e-12


def constant_C() -> float:
    return -math.log(math.pi / SQRT2)


# ------------------------------------------------------------------ closed forms


def omega(x):
    """VKLS curve (2/pi)(sqrt(2 - x^2) + x arcsin(x / sqrt 2)), |x| outside [-sqrt 2, sqrt 2]."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    inside = ax < SQRT2
    xi = np.where(inside, x, 0.0)
    val = (2 / np.pi) * (np.sqrt(np.maximum(2 - xi * xi, 0.0)) + xi * np.arcsin(xi / SQRT2))
    out = np.where(inside, val, ax)
    return float(out) if out.ndim == 0 else out


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be nonnegative")
    return t


def omega_tx(t, x):
    """sqrt(t) Omega(x / sqrt t); the t = 0 slice is the empty diagram |x|."""
    t = _check_t(t)
    x = np.asarray(x, dtype=float)
    st = np.sqrt(t)
    safe = np.where(st > 0, st, 1.0)
    out = np.where(st > 0, st * omega(x / safe), np.abs(x))
    return float(out) if out.ndim == 0 else out


def omega_x(t, x):
    """d/dx Omega(t, x) = (2/pi) arcsin(x / sqrt(2t)) inside the support, sign(x) outside."""
    t = _check_t(t)
    x = np.asarray(x, dtype=float)
    r = np.sqrt(2 * t)
    u = np.clip(x / np.where(r > 0, r, 1.0), -1.0, 1.0)
    out = np.where(np.abs(x) < r, (2 / np.pi) * np.arcsin(u), np.sign(x))
    return float(out) if out.ndim == 0 else out


def omega_t(t, x):
    """d/dt Omega(t, x) = sqrt(2t - x^2) / (pi t) inside the support, 0 outside."""
    t = _check_t(t)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(2 * t > x * x, np.sqrt(np.maximum(2 * t - x * x, 0.0)) / (np.pi * t), 0.0)
    return float(out) if out.ndim == 0 else out


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(np.abs(xi) >= 1):
        raise DomainError("A0 needs |xi| < 1")
    return xi


def A0(xi):
    xi = _check_xi(xi)
    out = np.log(np.cos(np.pi * xi / 2))
    return float(out) if out.ndim == 0 else out


def A0_prime(xi):
    xi = _check_xi(xi)
    out = -(np.pi / 2) * np.tan(np.pi * xi / 2)
    return float(out) if out.ndim == 0 else out


def A0_second(xi):
    xi = _check_xi(xi)
    out = -(np.pi**2 / 4) / np.cos(np.pi * xi / 2) ** 2
    return float(out) if out.ndim == 0 else out


# ------------------------------------------------------------------ shape functions


def _area_factor(tag):
    return 1.0 if tag == "area1" else 2.0


@dataclass(frozen=True)
class ShapeFunction:
    """g(t_i, x_j) on a rectangular mesh, rows indexed by time."""
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    tag: str = "area1"
    check_area: bool = True
    tol: float = 1e-9
    area_tol: float = 5e-3

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)
        if self.tag not in TAGS:
            raise ShapeError(f"unknown normalisation tag {self.tag!r}")
        if v.shape != (len(t), len(x)) or len(t) < 2 or len(x) < 2:
            raise ShapeError(f"values have shape {v.shape}, mesh is {len(t)} x {len(x)}")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(x) <= 0):
            raise ShapeError("mesh coordinates must increase strictly")
        self.validate()

    def validate(self):
        dx = np.diff(self.x)
        slope = np.abs(np.diff(self.values, axis=1)) - dx
        if slope.max() > self.tol:
            i, j = np.unravel_index(np.argmax(slope), slope.shape)
            raise ShapeError(f"not 1-Lipschitz in x near t={self.t[i]:.6g}, x={self.x[j]:.6g}")
        drop = -np.diff(self.values, axis=0)
        if drop.max() > self.tol:
            i, j = np.unravel_index(np.argmax(drop), drop.shape)
            raise ShapeError(f"decreasing in t near t={self.t[i]:.6g}, x={self.x[j]:.6g}")
        if self.check_area:
            err = np.abs(self.areas() - _area_factor(self.tag) * (self.t - self.t[0]))
            scale = max(1.0, _area_factor(self.tag) * (self.t[-1] - self.t[0]))
            if err.max() > self.area_tol * scale:
                i = int(np.argmax(err))
                raise ShapeError(f"swept area off by {err[i]:.3g} at t={self.t[i]:.6g} ({self.tag})")

    def areas(self) -> np.ndarray:
        """int (g(t_i, .) - g(t_0, .)) dx by the trapezoid rule."""
        return integrate.trapezoid(self.values - self.values[0], self.x, axis=1)

    def at(self, t: float) -> np.ndarray:
        """The slice g(t, .), affine in t between mesh rows."""
        if not self.t[0] <= t <= self.t[-1]:
            raise DomainError(f"t={t} outside [{self.t[0]}, {self.t[-1]}]")
        i = int(np.clip(np.searchsorted(self.t, t) - 1, 0, len(self.t) - 2))
        a = (t - self.t[i]) / (self.t[i + 1] - self.t[i])
        return (1 - a) * self.values[i] + a * self.values[i + 1]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x", "g"])
            for i, ti in enumerate(self.t):
                for j, xj in enumerate(self.x):
                    w.writerow([repr(float(ti)), repr(float(xj)), repr(float(self.values[i, j]))])

    def to_svg(self, path, times=None, width=640, height=400):
        times = list(np.linspace(self.t[0], self.t[-1], 5)) if times is None else list(times)
        write_svg_curves(path, self.x, [self.at(s) for s in times], [f"t={s:.3g}" for s in times], width, height)


def write_svg_curves(path, x, curves, labels=(), width=640, height=400):
    """Polyline plot, SVG 1.1, no plotting dependency."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(c, dtype=float) for c in curves]
    lo, hi = min(float(y.min()) for y in ys), max(float(y.max()) for y in ys)
    pad = 20
    sx = (width - 2 * pad) / max(x[-1] - x[0], 1e-12)
    sy = (height - 2 * pad) / max(hi - lo, 1e-12)
    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
    ]
    for k, y in enumerate(ys):
        pts = " ".join(f"{pad + (a - x[0]) * sx:.2f},{height - pad - (b - lo) * sy:.2f}" for a, b in zip(x, y))
        lab = labels[k] if k < len(labels) else ""
        lines.append(f'<polyline fill="none" stroke="{colours[k % len(colours)]}" stroke-width="1" points="{pts}">'
                     f'<title>{lab}</title></polyline>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def sample_shape(f: Callable, t, x, tag="area1", check_area=True) -> ShapeFunction:
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    return ShapeFunction(t, x, f(t[:, None], x[None, :]), tag, check_area)


def vkls_shape(mesh: int = 1000, X: float = 1.5, nx: int | None = None, grade: float = 2.0) -> ShapeFunction:
    """Omega(t, x) on t_i = (i / mesh)^grade, x uniform on [-X, X].

    The graded time mesh resolves the sqrt(t) growth of the support near t = 0.
    """
    if mesh < 2:
        raise DomainError("mesh must be at least 2")
    if X < SQRT2:
        raise DomainError("the x-range must cover the support [-sqrt 2, sqrt 2]")
    t = (np.arange(mesh + 1) / mesh) ** grade
    x = np.linspace(-X, X, (nx or mesh) + 1)
    return sample_shape(omega_tx, t, x)


def to_area2(g: ShapeFunction) -> ShapeFunction:
    """g~(t, x) = sqrt 2 g(t, x / sqrt 2)."""
    if g.tag != "area1":
        raise ShapeError("expected an area1 shape")
    return ShapeFunction(g.t, SQRT2 * g.x, SQRT2 * g.values, "area2", g.check_area, g.tol, g.area_tol)


def to_unrescaled(g: ShapeFunction, n: float) -> ShapeFunction:
    """G(t, x) = sqrt(n) g~(t / n, x / sqrt n) over t in [0, n]."""
    if g.tag != "area2":
        raise ShapeError("expected an area2 shape")
    if not n > 0:
        raise DomainError("n must be positive")
    r = math.sqrt(n)
    return ShapeFunction(n * g.t, r * g.x, r * g.values, "unrescaled", g.check_area, g.tol * r, g.area_tol)


# ------------------------------------------------------------------ functional


def cell_derivatives(g: ShapeFunction):
    """(g_t, g_x, cell areas) at cell centres, each from the two parallel cell edges."""
    v = g.values
    dt = np.diff(g.t)[:, None]
    dx = np.diff(g.x)[None, :]
    gt = 0.5 * ((v[1:, 1:] - v[:-1, 1:]) + (v[1:, :-1] - v[:-1, :-1])) / dt
    gx = 0.5 * ((v[1:, 1:] - v[1:, :-1]) + (v[:-1, 1:] - v[:-1, :-1])) / dx
    return gt, gx, dt * dx


def _integral(g: ShapeFunction, log_scale: float, a_shift: float) -> float:
    # int int g_t (-log(log_scale g_t) + A0(g_x) + a_shift)
    gt, gx, area = cell_derivatives(g)
    gx = np.clip(gx, -GX_CLAMP, GX_CLAMP)
    live = gt > GT_FLOOR
    f = np.zeros_like(gt)
    f[live] = gt[live] * (-np.log(log_scale * gt[live]) + np.log(np.cos(np.pi * gx[live] / 2)) + a_shift)
    return float((f * area).sum())


def functional_raw(g: ShapeFunction, a_shift: float = 0.0) -> float:
    """The functional in the shape's own normalisation, without the additive constant C.

    area1:       int int g_t (-log g_t + A0(g_x))
    area2, unrescaled: (1/2) int int (-log(pi g_t / 2) + A0(g_x)) g_t
    ``a_shift`` is added to A0 inside the integrand.
    """
    if g.tag == "area1":
        return _integral(g, 1.0, a_shift)
    return 0.5 * _integral(g, math.pi / 2, a_shift)


def functional_L(g: ShapeFunction, constant: float | None = None, a_shift: float = 0.0) -> float:
    """L[g] on the area-1 scale, whatever the tag.

    For area1 the constant defaults to C; for area2 none is needed; an
    unrescaled surface over [0, n] is mapped back through (raw - n log(n) / 2) / n.
    """
    raw = functional_raw(g, a_shift)
    if g.tag == "area1":
        return raw + (constant_C() if constant is None else constant)
    if g.tag == "area2":
        return raw + (constant or 0.0)
    n = g.t[-1] - g.t[0]
    return (raw - 0.5 * n * math.log(n)) / n + (constant or 0.0)


# ------------------------------------------------------------------ Euler-Lagrange


def _residual_terms(gt, gx, gxx, gxt, gtt):
    gx = np.asarray(gx, dtype=float)
    if np.any(np.abs(gx) > GX_CLAMP):
        raise ShapeError("|g_x| = 1 at the residual point (frozen region)")
    return A0_second(gx) * gxx * gt**2 + 2 * A0_prime(gx) * gxt * gt - gtt


def _three_point(fm, f0, fp, hm, hp):
    # first and second derivative on a possibly uneven stencil
    d1 = (hm**2 * fp - hp**2 * fm + (hp**2 - hm**2) * f0) / (hm * hp * (hm + hp))
    d2 = 2 * (hm * fp - (hm + hp) * f0 + hp * fm) / (hm * hp * (hm + hp))
    return d1, d2


def el_residual(g, t: float, x: float, h: float = 1e-3) -> float:
    """A0''(g_x) g_xx g_t^2 + 2 A0'(g_x) g_xt g_t - g_tt by central differences.

    ``g`` is either a ShapeFunction (the nearest interior mesh node is used)
    or a callable g(t, x) (uniform step h).
    """
    if isinstance(g, ShapeFunction):
        i = int(np.argmin(np.abs(g.t - t)))
        j = int(np.argmin(np.abs(g.x - x)))
        if not (0 < i < len(g.t) - 1 and 0 < j < len(g.x) - 1):
            raise ShapeError(f"stencil at ({t}, {x}) leaves the mesh")
        V = g.values[i - 1:i + 2, j - 1:j + 2]
        tm, tp = g.t[i] - g.t[i - 1], g.t[i + 1] - g.t[i]
        xm, xp = g.x[j] - g.x[j - 1], g.x[j + 1] - g.x[j]
        gt, gtt = _three_point(V[0, 1], V[1, 1], V[2, 1], tm, tp)
        gx, gxx = _three_point(V[1, 0], V[1, 1], V[1, 2], xm, xp)
        gxt = (V[2, 2] - V[2, 0] - V[0, 2] + V[0, 0]) / ((tm + tp) * (xm + xp))
    else:
        if not h > 0:
            raise DomainError("step must be positive")
        if t - h < 0:
            raise ShapeError(f"stencil at t={t} reaches negative time")
        f = lambda a, b: float(g(a, b))
        f0 = f(t, x)
        ftp, ftm = f(t + h, x), f(t - h, x)
        fxp, fxm = f(t, x + h), f(t, x - h)
        gt, gtt = (ftp - ftm) / (2 * h), (ftp - 2 * f0 + ftm) / h**2
        gx, gxx = (fxp - fxm) / (2 * h), (fxp - 2 * f0 + fxm) / h**2
        gxt = (f(t + h, x + h) - f(t + h, x - h) - f(t - h, x + h) + f(t - h, x - h)) / (4 * h * h)
    return float(_residual_terms(gt, gx, gxx, gxt, gtt))


def el_residual_grid(g, ts, xs, h: float = 1e-3) -> np.ndarray:
    return np.array([[el_residual(g, t, x, h) for x in xs] for t in ts])


# ------------------------------------------------------------------ perturbations


def bump(t, x, t0, t1, x0, w, amp):
    """amp sin^2 in t on [t0, t1] times the x-derivative of a C^1 bump of radius w at x0.

    The x-factor integrates to zero, so the swept area is untouched.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    s = np.clip((t - t0) / (t1 - t0), 0.0, 1.0)
    phi = np.sin(np.pi * s) ** 2
    u = np.clip((x - x0) / w, -1.0, 1.0)
    psi = -4 * u * (1 - u * u)  # derivative of (1 - u^2)^2
    return amp * phi * psi


def perturbation_family(count: int = 10, amp: float = 0.004):
    """Admissible bumps kept inside the liquid region of Omega for t in [0.3, 0.95]."""
    rng = np.random.default_rng(12345)
    fam = []
    for k in range(count):
        t0 = 0.3 + 0.3 * rng.random()
        t1 = min(0.95, t0 + 0.2 + 0.2 * rng.random())
        w = 0.15 + 0.15 * rng.random()
        x0 = (0.6 - w) * (2 * rng.random() - 1)
        a = amp * (1 if k % 2 == 0 else -1)
        fam.append(dict(t0=t0, t1=t1, x0=x0, w=w, amp=a))
    return fam


def perturbed_vkls(params: dict, mesh: int = 1000, X: float = 1.5) -> ShapeFunction:
    base = vkls_shape(mesh, X)
    vals = base.values + bump(base.t[:, None], base.x[None, :], **params)
    return ShapeFunction(base.t, base.x, vals, "area1")


def reparametrized_vkls(phi_inv: Callable, mesh: int = 1000, X: float = 1.5) -> ShapeFunction:
    """h(t, x) = Omega(phi(t), x), sampled so that the rows sit at phi(t_i) = (i / mesh)^2."""
    s = (np.arange(mesh + 1) / mesh) ** 2
    t = np.asarray(phi_inv(s), dtype=float)
    x = np.linspace(-X, X, mesh + 1)
    return ShapeFunction(t, x, omega_tx(s[:, None], x[None, :]), "area1", check_area=False)


def reparametrization_penalty(phi_prime: Callable) -> float:
    """int_0^1 phi' log phi' dt (nonnegative when phi maps [0, 1] onto itself)."""
    def f(t):
        d = phi_prime(t)
        return d * math.log(d) if d > 0 else 0.0

    return integrate.quad(f, 0.0, 1.0, epsabs=1e-12, limit=200)[0]


# ------------------------------------------------------------------ tableaux


def path_to_shape(tab: PathTableau, margin: float = 1.05) -> ShapeFunction:
    """Rotated boundaries of the diagrams along a path, contracted to area 1.

    Contents u = col - row are integers; the profile |u| of the empty diagram
    rises by 2 at u = content of each added cell.  Coordinates are divided by
    sqrt(2n), so after all n cells the swept area is 1.
    """
    n = tab.n
    if n < 1:
        raise DomainError("path must add at least one cell")
    s = math.sqrt(2 * n)
    outer = tab.shape.outer
    U = max(len(outer), outer[0] if len(outer) else 0, math.ceil(margin * SQRT2 * s)) + 1
    u = np.arange(-U, U + 1)
    prof = np.abs(u).astype(float)
    for r, c in tab.shape.inner.cells():
        prof[c - r + U] += 2
    vals = np.empty((n + 1, len(u)))
    vals[0] = prof
    for step, (r, c) in enumerate(tab.order, start=1):
        prof[c - r + U] += 2
        vals[step] = prof
    return ShapeFunction(np.arange(n + 1) / n, u / s, vals / s, "area1")


def shape_discrepancy(g: ShapeFunction, alphas=(0.25, 0.5, 0.75, 1.0)) -> dict[float, float]:
    """sup_x |g(alpha, x) - sqrt(alpha) Omega(x / sqrt alpha)| for each alpha."""
    return {float(a): float(np.max(np.abs(g.at(a) - omega_tx(a, g.x)))) for a in alphas}
