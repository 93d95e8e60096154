import json
import math

import numpy as np
import pytest

from heckman_opdam.innerprod import QuadratureGrid, SampledFunction
from heckman_opdam.io import dumps
from heckman_opdam.jacobi import (
    DegenerateMultiplicityError,
    JacobiBasis,
    build_basis,
    c_function,
    ho_transform,
    norm_formula,
)
from heckman_opdam.oracle import (
    chebyshev_u_normalized,
    gegenbauer_normalized,
    jacobi_normalized,
    wallis_mass,
)
from heckman_opdam.rootsys import alcove_points, build_root_system, weyl_orbit
from heckman_opdam.trigpoly import constant, monomial, orbit_sum, random_invariant

from conftest import ALL_SYSTEMS, cached_basis


def test_a1_entry_count_and_trivial_entry():
    basis = cached_basis("A1", (2,))
    # |lam| = sqrt(2) n <= 10 gives n = 0..7
    assert basis.weights == [(n,) for n in range(8)]
    e0 = basis[(0,)]
    assert e0.P.allclose(constant(basis.rs)) and e0.theta == 0 and e0.value_at_zero == 1


def test_a1_m2_is_chebyshev_u(rng):
    basis = cached_basis("A1", (2,))
    x = rng.uniform(0, math.pi / math.sqrt(2), size=20)
    u = math.sqrt(2) * x
    for n in range(8):
        got = basis[(n,)].R.evaluate(x[:, None]).real
        assert np.allclose(got, chebyshev_u_normalized(n, u), atol=1e-9, rtol=0)


@pytest.mark.parametrize("m", [0.5, 1, 3, 4.5])
def test_a1_general_m_is_gegenbauer(m, rng):
    basis = cached_basis("A1", (m,))
    x = rng.uniform(0, math.pi / math.sqrt(2), size=50)
    u = math.sqrt(2) * x
    for (n,) in basis.weights:
        got = basis[(n,)].R.evaluate(x[:, None]).real
        assert np.allclose(got, gegenbauer_normalized(m / 2, n, np.cos(u)), atol=1e-8, rtol=0)


@pytest.mark.parametrize("ms,ml", [(1, 2), (2, 1), (0.5, 1.5)])
def test_bc1_is_jacobi(ms, ml, rng):
    basis = cached_basis("BC1", (ms, ml))
    x = rng.uniform(0, math.pi / 2, size=30)
    a, b = (ms + ml - 1) / 2, (ml - 1) / 2
    for (n,) in basis.weights:
        got = basis[(n,)].R.evaluate(x[:, None]).real
        assert np.allclose(got, jacobi_normalized(a, b, n, np.cos(2 * x)), atol=1e-8, rtol=0)


def test_zero_multiplicity_gives_orbit_sums():
    for name in ("A1", "A2", "G2"):
        mult = (0,) if name in ("A1", "A2") else (0, 0)
        basis = cached_basis(name, mult, 6.0)
        for e in basis:
            M = orbit_sum(basis.rs, e.weight)
            assert e.P.allclose(M, tol=1e-12)
            assert math.isclose(e.value_at_zero, len(weyl_orbit(basis.rs, e.weight)))
        with pytest.raises(DegenerateMultiplicityError, match="degenerate multiplicity"):
            c_function(basis.rs, basis.weights[1])


def test_c_function_examples():
    rs = build_root_system("A1", 2)
    for n in range(6):
        assert math.isclose(c_function(rs, (n,)), 1 / (n + 1), rel_tol=1e-13)
    for name, mult in ALL_SYSTEMS:
        assert math.isclose(c_function(build_root_system(name, mult), (0,) * (1 if name in ("A1", "BC1") else 2)), 1.0, rel_tol=1e-14)


def test_norm_formula_examples():
    rs = build_root_system("A1", 2)
    for n in range(6):
        assert math.isclose(norm_formula(rs, (n,)), math.sqrt(2) * math.pi, rel_tol=1e-13)
    for m in (1, 2.5, 4):
        assert math.isclose(norm_formula(build_root_system("A1", m), (0,)), wallis_mass(m) / math.sqrt(2), rel_tol=1e-13)


@pytest.mark.parametrize("name,mult", ALL_SYSTEMS)
def test_gamma_formulas_match_gram_schmidt(name, mult):
    basis = cached_basis(name, mult)
    tol = 1e-12 if basis.backend == "exact" else 1e-6
    for e in basis:
        assert abs(c_function(basis.rs, e.weight) * e.value_at_zero - 1) < tol
        assert abs(norm_formula(basis.rs, e.weight) / e.norm_sq - 1) < tol
        assert math.isclose(e.r * e.norm_sq / e.value_at_zero**2, 1.0, rel_tol=1e-14)


@pytest.mark.parametrize("name,mult", ALL_SYSTEMS)
def test_orthogonality_against_lower_orbits(name, mult):
    basis = cached_basis(name, mult)
    rs = basis.rs
    ip = basis.inner
    for e in basis:
        for mu in basis.weights:
            if mu != e.weight and rs.dominates(e.weight, mu):
                M = orbit_sum(rs, mu)
                bound = 1e-9 * math.sqrt(e.norm_sq) * math.sqrt(ip(M, M).real)
                assert abs(ip(e.P, M)) < bound


@pytest.mark.parametrize("name,mult", ALL_SYSTEMS)
def test_convexity_and_conjugation(name, mult, rng):
    basis = cached_basis(name, mult)
    D = basis.exponential_coefficients
    assert D.min() >= -1e-12
    assert np.allclose(D.sum(axis=1), 1.0, atol=1e-10, rtol=0)
    X = alcove_points(basis.rs, 200)
    assert np.max(np.abs(basis.evaluate_R(X))) <= 1 + 1e-10
    assert np.allclose(basis.evaluate_R(X).conj(), basis.evaluate_R(-X), atol=1e-12)
    Z = rng.normal(size=(20, basis.rs.rank)) + 1j * rng.normal(size=(20, basis.rs.rank))
    assert np.allclose(basis.evaluate_R(Z.conj()).conj(), basis.evaluate_R(-Z), rtol=1e-11, atol=1e-12)


def test_evaluate_matches_trigpoly(rng):
    basis = cached_basis("G2", (2, 2))
    Z = rng.normal(size=(6, 2)) + 0.5j * rng.normal(size=(6, 2))
    E = basis.evaluate_R(Z)
    for i, e in enumerate(basis):
        assert np.allclose(E[:, i], e.R.evaluate(Z), rtol=1e-11, atol=1e-12)


def test_order_independence():
    rs = build_root_system("B2", (1, 2))
    a = build_basis(rs, 6.0)
    # reverse lex inside each norm shell: still a linear extension of dominance
    b = build_basis(rs, 6.0, sort_key=lambda c: (round(rs.norm(c), 9), tuple(-v for v in c)))
    assert a.weights == b.weights
    for ea, eb in zip(a, b):
        assert ea.P.allclose(eb.P, tol=1e-10)


def test_backends_give_the_same_polynomials():
    rs = build_root_system("A2", 2)
    ex = build_basis(rs, 6.0, backend="exact")
    qu = build_basis(rs, 6.0, backend="quadrature", grid=64)
    ga = build_basis(rs, 6.0, backend="gauss")
    for a, b, c in zip(ex, qu, ga):
        assert a.P.allclose(b.P, tol=1e-10) and a.P.allclose(c.P, tol=1e-10)
        assert math.isclose(a.norm_sq, c.norm_sq, rel_tol=1e-10)


def test_auto_backend_choice():
    assert cached_basis("A1", (2,)).backend == "exact"
    assert cached_basis("A2", (1,)).backend == "gauss"


def test_transform_examples(rng):
    basis = cached_basis("A2", (1,))
    rs = basis.rs
    mass = basis.inner(constant(rs), constant(rs)).real
    one = ho_transform(basis, constant(rs))
    assert math.isclose(one[(0, 0)].real, mass, rel_tol=1e-12)
    assert max(abs(v) for k, v in one.items() if k != (0, 0)) < 1e-12 * mass
    mu = basis.weights[4]
    spec = basis.transform(basis[mu].R)
    expected = np.zeros(len(basis))
    expected[basis.index(mu)] = 1 / basis[mu].r
    assert np.allclose(spec, expected, atol=1e-10 / basis[mu].r)
    f = random_invariant(rs, 5.0, rng)
    s = basis.transform(f)
    assert math.isclose(np.sum(basis.r * np.abs(s) ** 2), basis.inner(f, f).real, rel_tol=1e-9)
    assert basis.expand(basis.r * s).allclose(f, tol=1e-9)
    with pytest.raises(ValueError):
        basis.transform(f + monomial(rs, (1, 0)))


def test_sampled_transform_matches_polynomial_transform(rng):
    basis = cached_basis("A1", (2,))
    grid = QuadratureGrid(basis.rs, 64)
    f = random_invariant(basis.rs, 6.0, rng)
    a = basis.transform(SampledFunction.from_trigpoly(grid, f))
    b = basis.transform(f)
    assert np.allclose(a, b, atol=1e-12)
    back = basis.synthesize(grid, basis.r * a)
    assert np.allclose(back.values, grid.sample(f), atol=1e-12)


@pytest.mark.parametrize("name,mult", ALL_SYSTEMS)
def test_growth_envelope(name, mult):
    basis = cached_basis(name, mult)
    mono = basis.envelope_monomial(np.array(basis.weights))
    assert np.all(basis.r <= basis.envelope_constant * mono * (1 + 1e-12))
    assert basis.envelope_constant > 0


def test_json_round_trip_is_deterministic(tmp_path):
    basis = cached_basis("BC2", (1, 1, 1), 6.0)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    basis.save(p1)
    loaded = JacobiBasis.load(p1)
    loaded.save(p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert loaded.weights == basis.weights
    for a, b in zip(basis, loaded):
        assert a.P.allclose(b.P, tol=0) and a.r == b.r and a.theta == b.theta
    assert np.array_equal(loaded.exponential_coefficients, basis.exponential_coefficients)
    again = build_basis(basis.rs, 6.0)
    assert dumps(again.to_dict()) == p1.read_text()


def test_load_rejects_garbage(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"entries": []}))
    with pytest.raises(ValueError):
        JacobiBasis.load(p)


def test_invalid_shell():
    with pytest.raises(ValueError):
        build_basis(build_root_system("A1", 2), 0.0)
    with pytest.raises(ValueError):
        build_basis(build_root_system("A1", 1), 3.0, backend="exact")


@pytest.mark.parametrize("name,mult,N", [("A1", (1,), 48), ("BC1", (1, 2), 48), ("A2", (1,), 24)])
def test_sampled_transform_is_spectral_for_odd_multiplicities(name, mult, N, rng):
    basis = cached_basis(name, mult)
    grid = QuadratureGrid(basis.rs, N)
    f = random_invariant(basis.rs, 4.0, rng)
    assert np.allclose(basis.transform(SampledFunction.from_trigpoly(grid, f)), basis.transform(f), atol=1e-11)
