import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from youngtasep import shape
from youngtasep.errors import DomainError, ShapeError
from youngtasep.young import PathTableau, SkewShape, Partition, sample_plancherel_path

xs = st.floats(-3, 3, allow_nan=False)


@pytest.fixture(scope="module")
def vkls():
    return shape.vkls_shape(1000)


@pytest.fixture(scope="module")
def L_vkls(vkls):
    return shape.functional_L(vkls)


# closed forms

def test_omega_values():
    assert shape.omega(math.sqrt(2)) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert shape.omega(0.0) == pytest.approx(2 * math.sqrt(2) / math.pi, abs=1e-15)
    assert shape.omega(0.0) == pytest.approx(0.900316, abs=1e-6)
    assert shape.omega(3.0) == 3.0


@given(xs)
def test_omega_even_and_above_abs(x):
    assert shape.omega(x) == pytest.approx(shape.omega(-x), abs=1e-15)
    assert shape.omega(x) >= abs(x) - 1e-15


@given(st.floats(0.01, 4), xs)
def test_omega_tx_scaling(t, x):
    assert shape.omega_tx(1.0, x) == pytest.approx(shape.omega(x), abs=1e-14)
    assert shape.omega_tx(t, x) == pytest.approx(math.sqrt(t) * shape.omega(x / math.sqrt(t)), abs=1e-13)


def test_omega_tx_domain():
    assert shape.omega_tx(0.0, -0.4) == 0.4
    with pytest.raises(DomainError):
        shape.omega_tx(-0.1, 0.0)


def test_omega_derivatives_match_differences():
    h = 1e-6
    for t in (0.3, 0.7, 1.0, 2.0):
        for x in np.linspace(-0.9, 0.9, 7) * math.sqrt(2 * t):
            dx = (shape.omega_tx(t, x + h) - shape.omega_tx(t, x - h)) / (2 * h)
            dt = (shape.omega_tx(t + h, x) - shape.omega_tx(t - h, x)) / (2 * h)
            assert shape.omega_x(t, x) == pytest.approx(dx, abs=1e-7)
            assert shape.omega_t(t, x) == pytest.approx(dt, abs=1e-7)
    assert shape.omega_t(1.0, 2.0) == 0.0 and shape.omega_x(1.0, -2.0) == -1.0


def test_unit_area_growth():
    # int Omega_t dx = 1: the diagram at time t has area t
    for t in (0.2, 1.0, 3.0):
        r = math.sqrt(2 * t)
        x = np.linspace(-r, r, 20001)
        assert integrate.trapezoid(shape.omega_t(t, x), x) == pytest.approx(1.0, abs=1e-4)


def test_A0():
    assert shape.A0(0.0) == 0.0
    g = np.linspace(-0.95, 0.95, 39)
    assert np.allclose(shape.A0(g), shape.A0(-g), atol=1e-15)
    h = 1e-5
    for xi in (-0.5, 0.5):
        fd = (shape.A0(xi + h) - shape.A0(xi - h)) / (2 * h)
        assert fd == pytest.approx(-(math.pi / 2) * math.tan(math.pi * xi / 2), abs=1e-6)
        assert shape.A0_prime(xi) == pytest.approx(fd, abs=1e-6)
        fd2 = (shape.A0_prime(xi + h) - shape.A0_prime(xi - h)) / (2 * h)
        assert shape.A0_second(xi) == pytest.approx(fd2, abs=1e-5)
    assert shape.A0_second(0.0) == pytest.approx(-math.pi**2 / 4)
    for bad in (1.0, -1.0, 1.5):
        with pytest.raises(DomainError):
            shape.A0(bad)


def test_constant_C():
    assert shape.constant_C() == -math.log(math.pi / math.sqrt(2))
    assert shape.constant_C() == pytest.approx(-0.798156, abs=1e-6)


# shape functions

def test_shape_validation():
    t = np.linspace(0, 1, 5)
    x = np.linspace(-2, 2, 9)
    with pytest.raises(ShapeError, match="Lipschitz"):
        shape.ShapeFunction(t, x, np.tile(2 * np.abs(x), (5, 1)), check_area=False)
    with pytest.raises(ShapeError, match="decreasing"):
        shape.ShapeFunction(t, x, np.abs(x)[None, :] - 0.1 * t[:, None], check_area=False)
    with pytest.raises(ShapeError, match="area"):
        shape.sample_shape(lambda t, x: shape.omega_tx(2 * t, x), t, x)
    with pytest.raises(ShapeError):
        shape.ShapeFunction(t, x, np.zeros((5, 9)), tag="area3", check_area=False)
    with pytest.raises(ShapeError):
        shape.ShapeFunction(t[::-1], x, np.zeros((5, 9)), check_area=False)


def test_vkls_mesh_args():
    with pytest.raises(DomainError):
        shape.vkls_shape(1)
    with pytest.raises(DomainError):
        shape.vkls_shape(10, X=1.0)


def test_slice_interpolation(vkls):
    assert np.allclose(vkls.at(0.49), shape.omega_tx(0.49, vkls.x), atol=1e-4)
    assert np.allclose(vkls.at(1.0), vkls.values[-1])
    with pytest.raises(DomainError):
        vkls.at(1.5)


def test_serialisation(tmp_path):
    g = shape.vkls_shape(20)
    g.to_csv(tmp_path / "g.csv")
    rows = (tmp_path / "g.csv").read_text().splitlines()
    assert rows[0] == "t,x,g" and len(rows) == 1 + 21 * 21
    t, x, v = map(float, rows[-1].split(","))
    assert (t, x) == (1.0, 1.5) and v == pytest.approx(1.5)
    g.to_svg(tmp_path / "g.svg", times=[0.25, 1.0])
    svg = (tmp_path / "g.svg").read_text()
    assert 'version="1.1"' in svg and svg.count("<polyline") == 2


# functional

def test_functional_vkls(L_vkls):
    assert L_vkls == pytest.approx(-0.5, abs=2e-3)


def test_functional_richardson(L_vkls):
    coarse = shape.functional_L(shape.vkls_shape(500))
    assert abs(coarse - L_vkls) <= 4 * 2e-3
    assert abs(L_vkls + 0.5) < abs(coarse + 0.5)


def test_constant_cross_check(vkls):
    L0 = shape.functional_L(vkls, constant=0.0)
    assert L0 + shape.constant_C() == pytest.approx(-0.5, abs=2e-3)


def test_normalisations_agree(vkls, L_vkls):
    g2 = shape.to_area2(vkls)
    assert g2.tag == "area2"
    # the clamp and the g_t floor are not scale-free, so agreement is to quadrature accuracy
    L2 = shape.functional_L(g2)
    assert L2 == pytest.approx(L_vkls, abs=1e-5)
    for n in (10.0, 2500.0):
        G = shape.to_unrescaled(g2, n)
        assert shape.functional_L(G) == pytest.approx(L2, abs=1e-5)
    with pytest.raises(ShapeError):
        shape.to_area2(g2)
    with pytest.raises(ShapeError):
        shape.to_unrescaled(vkls, 10.0)


def test_shift_of_A0_shifts_by_area(vkls, L_vkls):
    c = 0.37
    assert shape.functional_L(vkls, a_shift=c) - L_vkls == pytest.approx(c * 1.0, abs=1e-6)


def test_perturbations_do_not_increase(vkls, L_vkls):
    for params in shape.perturbation_family():
        g = shape.perturbed_vkls(params, mesh=1000)
        assert not np.allclose(g.values, vkls.values)
        assert shape.functional_L(g) <= L_vkls + 1e-4


@pytest.mark.parametrize("name", ["square", "exp"])
def test_reparametrisation_penalty(vkls, L_vkls, name):
    e = math.e
    phi_inv, phi_prime = {
        "square": (np.sqrt, lambda t: 2 * t),
        "exp": (lambda s: np.log1p(s * (e - 1)), lambda t: math.exp(t) / (e - 1)),
    }[name]
    pen = shape.reparametrization_penalty(phi_prime)
    assert pen > 0
    g = shape.reparametrized_vkls(phi_inv, mesh=1000)
    assert shape.functional_L(g) == pytest.approx(L_vkls - pen, abs=1e-3)
    assert shape.functional_L(g) < L_vkls
    assert shape.reparametrization_penalty(lambda t: 1.0) == 0.0


# Euler-Lagrange

def test_el_residual_vkls_small():
    for t in np.linspace(0.5, 1.0, 6):
        for x in np.linspace(-0.8, 0.8, 9) * math.sqrt(t):
            assert abs(shape.el_residual(shape.omega_tx, t, x)) <= 1e-3


def test_el_residual_refines():
    r = [abs(shape.el_residual(shape.omega_tx, 0.7, 0.3, h)) for h in (1e-2, 3e-3, 1e-3)]
    assert r[2] < r[0]


def test_el_residual_symmetric():
    for t, x in [(0.6, 0.2), (0.9, 0.5), (0.75, 0.65)]:
        a = shape.el_residual(shape.omega_tx, t, x)
        b = shape.el_residual(shape.omega_tx, t, -x)
        assert a == pytest.approx(b, abs=1e-4)


def test_el_residual_on_mesh():
    g = shape.vkls_shape(400)
    for t, x in [(0.6, 0.1), (0.8, -0.4)]:
        assert abs(shape.el_residual(g, t, x)) < 5e-2
    with pytest.raises(ShapeError):
        shape.el_residual(g, 1.0, 0.0)


def test_el_residual_detects_bump():
    p = dict(t0=0.5, t1=0.9, x0=0.0, w=0.3, amp=0.02)
    f = lambda t, x: shape.omega_tx(t, x) + shape.bump(t, x, **p)
    assert abs(shape.el_residual(f, 0.7, 0.1)) > 0.1


def test_el_residual_flat_in_x():
    # g_x = 0 leaves only -g_tt
    f = lambda t, x: t + t * t + 0 * x
    assert shape.el_residual(f, 0.5, 0.0) == pytest.approx(-2.0, abs=1e-5)
    g = lambda t, x: math.sin(t) + 0 * x
    assert shape.el_residual(g, 1.0, 0.3) == pytest.approx(math.sin(1.0), abs=1e-5)


def test_el_residual_errors():
    with pytest.raises(ShapeError):
        shape.el_residual(shape.omega_tx, 1e-4, 0.0, h=1e-3)
    with pytest.raises(ShapeError):
        shape.el_residual(shape.omega_tx, 0.5, 1.5)  # frozen region, |g_x| = 1
    with pytest.raises(DomainError):
        shape.el_residual(shape.omega_tx, 0.5, 0.0, h=0.0)


# tableaux to shapes

def test_single_cell_shape():
    tab = PathTableau(SkewShape(Partition((1,))), ((0, 0),))
    g = shape.path_to_shape(tab)
    s = math.sqrt(2)
    x0 = list(g.x).index(0.0)
    assert g.values[0, x0] == 0.0
    assert g.values[1, x0] == pytest.approx(2 / s)
    assert g.values[1, x0 + 1] == pytest.approx(1 / s)
    assert np.allclose(np.delete(g.values[1], x0), np.delete(g.values[0], x0))
    assert g.areas()[-1] == pytest.approx(1.0)
    with pytest.raises(DomainError):
        shape.path_to_shape(PathTableau(SkewShape(Partition())))


def test_path_shape_invariants():
    g = shape.path_to_shape(sample_plancherel_path(200, seed=3))
    assert np.allclose(g.areas(), g.t, atol=1e-12)


@pytest.mark.slow
def test_plancherel_shape_close_to_vkls():
    g = shape.path_to_shape(sample_plancherel_path(2500, seed=7))
    disc = shape.shape_discrepancy(g)
    assert set(disc) == {0.25, 0.5, 0.75, 1.0}
    assert max(disc.values()) < 0.1
