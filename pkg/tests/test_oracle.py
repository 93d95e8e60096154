import math

import numpy as np
import pytest
from scipy import integrate, special

from heckman_opdam import oracle


def test_gegenbauer_seeds_and_chebyshev():
    u = np.linspace(-1, 1, 11)
    assert np.all(oracle.gegenbauer_eval(0.7, 0, u) == 1)
    assert np.allclose(oracle.gegenbauer_eval(0.7, 1, u), 2 * 0.7 * u)
    th = np.linspace(0.1, 3.0, 15)
    for n in range(8):
        assert np.allclose(oracle.gegenbauer_eval(1.0, n, np.cos(th)), np.sin((n + 1) * th) / np.sin(th), rtol=1e-12)
    with pytest.raises(ValueError):
        oracle.gegenbauer_eval(0.0, 3, u)


@pytest.mark.parametrize("mu", [0.25, 1.0, 2.5])
def test_gegenbauer_against_scipy(mu):
    u = np.linspace(-1, 1, 21)
    for n in range(12):
        assert np.allclose(oracle.gegenbauer_eval(mu, n, u), special.eval_gegenbauer(n, mu, u), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.5, -0.5), (1.5, 0.5), (3.0, 2.0)])
def test_jacobi_against_scipy(a, b):
    u = np.linspace(-1, 1, 21)
    for n in range(12):
        assert np.allclose(oracle.jacobi_eval(a, b, n, u), special.eval_jacobi(n, a, b, u), rtol=1e-12, atol=1e-12)
        assert math.isclose(float(oracle.jacobi_normalized(a, b, n, 1.0)), 1.0, rel_tol=1e-12)


def test_normalized_families():
    assert np.allclose(oracle.gegenbauer_normalized(0, 3, np.array([0.3])), np.cos(3 * np.arccos(0.3)))
    th = np.array([0.0, math.pi, 0.5])
    vals = oracle.chebyshev_u_normalized(4, th)
    assert vals[0] == pytest.approx(1.0) and vals[1] == pytest.approx(1.0)
    assert vals[2] == pytest.approx(math.sin(2.5) / (5 * math.sin(0.5)))


def test_poly_table():
    t = oracle.ClassicalPolyTable("gegenbauer", (1.5,), n_max=6)
    for n in range(7):
        assert math.isclose(float(t(n, 1.0)), t.value_at_one(n), rel_tol=1e-12)
    j = oracle.ClassicalPolyTable("jacobi", (1.0, 0.5), n_max=6)
    assert math.isclose(float(j(5, 1.0)), j.value_at_one(5), rel_tol=1e-12)
    u = oracle.ClassicalPolyTable("chebyshev-U", n_max=4)
    assert u.value_at_one(4) == 5
    with pytest.raises(ValueError):
        u(5, 0.0)
    with pytest.raises(ValueError):
        oracle.ClassicalPolyTable("laguerre")(1, 0.0)


@pytest.mark.parametrize("t", [0.02, 0.3, 2.0])
def test_circle_kernel_representations_agree(t):
    x = np.linspace(0, 5, 13)
    y = np.linspace(-1, 2, 13)
    L = math.pi * math.sqrt(2)
    a = oracle.circle_heat_kernel(x, y, t, L, "theta")
    b = oracle.circle_heat_kernel(x, y, t, L, "images")
    assert np.allclose(a, b, rtol=1e-13, atol=1e-15)
    assert np.allclose(a, oracle.circle_heat_kernel(y, x, t, L))


def test_circle_kernel_mass_and_limit():
    L = 2 * math.pi
    val, _ = integrate.quad(lambda s: float(oracle.circle_heat_kernel(np.array([s]), np.array([0.7]), 0.1, L)[0]), 0, L)
    assert math.isclose(val, 1.0, rel_tol=1e-12)
    far = oracle.circle_heat_kernel(np.linspace(0, L, 9), np.zeros(9), 50.0, L)
    assert np.allclose(far, 1 / L, rtol=1e-12)
    with pytest.raises(ValueError):
        oracle.circle_heat_kernel(np.zeros(1), np.zeros(1), 0.0, L)
    with pytest.raises(ValueError):
        oracle.circle_heat_kernel(np.zeros(1), np.zeros(1), 1.0, L, method="fourier")


def test_masses():
    assert math.isclose(oracle.wallis_mass(0), math.pi, rel_tol=1e-15)
    assert math.isclose(oracle.wallis_mass(1), 4.0, rel_tol=1e-14)
    assert math.isclose(oracle.wallis_mass(2), 2 * math.pi, rel_tol=1e-14)
    for m in (0.5, 3.0):
        ref, _ = integrate.quad(lambda u: (2 * math.sin(u)) ** m, 0, math.pi)
        assert math.isclose(oracle.wallis_mass(m), ref, rel_tol=1e-10)
    ref, _ = integrate.quad(lambda x: abs(2 * math.sin(x)) ** 1.5 * abs(2 * math.sin(2 * x)) ** 2, 0, math.pi / 2)
    assert math.isclose(oracle.bc1_mass(1.5, 2), ref, rel_tol=1e-10)
    with pytest.raises(ValueError):
        oracle.wallis_mass(-1)


def test_finite_differences():
    mu = np.array([0.7, -1.2])
    xi = np.array([0.3, 0.8])
    x = np.array([0.2, 0.4])
    wave = lambda p: np.exp(1j * p @ mu)  # noqa: E731
    d = oracle.finite_difference_apply(wave, x, xi, 1)
    assert abs(d - 1j * (mu @ xi) * wave(x[None, :])[0]) < 1e-9
    assert np.allclose(oracle.gradient(lambda p: np.full(len(p), 3.0), x), 0, atol=1e-12)
    g = oracle.gradient(lambda p: np.sin(p[:, 0]) * np.sin(2 * p[:, 1]), x)
    assert np.allclose(g, [math.cos(0.2) * math.sin(0.8), 2 * math.sin(0.2) * math.cos(0.8)], atol=1e-9)
    lap = oracle.hessian_trace(lambda p: np.sin(p[:, 0]) + p[:, 1] ** 2, x)
    assert abs(lap - (-math.sin(0.2) + 2)) < 1e-8
    with pytest.raises(ValueError):
        oracle.finite_difference_apply(wave, x, xi, 3)


def test_pointwise_lm_of_gegenbauer():
    # on A1 with u = <a, x>, the normalized Gegenbauer polynomial of degree n solves L_m R = -theta R
    m, n = 3.0, 4
    a = math.sqrt(2)
    f = lambda p: oracle.gegenbauer_normalized(m / 2, n, np.cos(a * p[:, 0]))  # noqa: E731
    x = np.array([0.6])
    val = oracle.pointwise_Lm(f, x, [[a]], [m])
    assert abs(val + 2 * (n * n + m * n) * f(x[None, :])[0]) < 1e-6
