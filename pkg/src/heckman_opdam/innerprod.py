"""Weighted inner products on the alcove and sampled functions on the torus.

Three interchangeable ways of computing ``<f, g>_m = int_{A_0} f conj(g) w_m dx``:

``exact``
    even integer multiplicities only: ``w_m`` is expanded as a trigonometric
    polynomial and the torus integral of ``f conj(g) w_m`` is read off from
    constant Fourier coefficients, then divided by ``|W|``.
``quadrature``
    trapezoid rule on a uniform ``N^rank`` grid of the torus ``a / pi Q^vee``,
    divided by ``|W|``.  The grid sum is evaluated through the FFT of the
    sampled weight, so polynomial inner products cost table lookups.
``gauss``
    Gauss-Jacobi product rule on the alcove itself (collapsed coordinates on
    the triangle in rank 2).  The algebraic zeros of ``w_m`` on the alcove
    faces go into the Jacobi weight, so the rule converges spectrally for
    integer multiplicities.  It integrates over ``A_0`` directly and is meant
    for W-invariant integrands.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from scipy.special import roots_jacobi

from .rootsys import RootSystem, RootSystemError
from .trigpoly import TrigPoly, constant

__all__ = [
    "BACKENDS",
    "GaussRule",
    "InnerProduct",
    "QuadratureGrid",
    "SampledFunction",
    "weight_eval",
    "weight_trigpoly",
    "inner_product",
    "has_even_multiplicities",
    "weighted_rule",
    "default_gauss_order",
]

BACKENDS = ("exact", "quadrature", "gauss")
DEFAULT_GRID = 256


def default_gauss_order(rs: RootSystem, max_shell: float) -> int:
    """Nodes per dimension for the alcove rule at a given shell radius."""
    verts = rs.alcove_vertices
    diam = max(np.linalg.norm(u - v) for u in verts for v in verts)
    return int(32 + math.ceil(max_shell * diam))


def weight_eval(rs: RootSystem, x) -> np.ndarray | float:
    """``w_m(x) = prod_{a > 0} |2 sin <a, x>|^{m_a}`` at point(s) ``x``."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    p = np.atleast_2d(x) @ rs.positive_roots.T
    with np.errstate(divide="ignore"):
        w = np.prod(np.abs(2 * np.sin(p)) ** rs.root_multiplicities, axis=-1)
    return float(w[0]) if single else w


def has_even_multiplicities(rs: RootSystem) -> bool:
    return all(float(m).is_integer() and int(m) % 2 == 0 for m in rs.multiplicities.values())


def weight_trigpoly(rs: RootSystem) -> TrigPoly:
    """``w_m`` as a trigonometric polynomial; requires even integer multiplicities.

    Uses ``|e^{ia} - e^{-ia}|^m = (-1)^{m/2} (e^{2ia} - 2 + e^{-2ia})^{m/2}``.
    """
    if not has_even_multiplicities(rs):
        raise ValueError("the exact backend needs even integer multiplicities")
    w = constant(rs)
    zero = (0,) * rs.rank
    for i, m in enumerate(rs.root_multiplicities):
        half = int(m) // 2
        if half == 0:
            continue
        two_a = tuple(int(v) for v in rs.double_root_coords[i])
        minus = tuple(-v for v in two_a)
        factor = TrigPoly(rs, {two_a: 1.0, zero: -2.0, minus: 1.0})
        for _ in range(half):
            w = w * factor
        if half % 2:
            w = -w
    return w


# ---------------------------------------------------------------------------
# torus grid


class QuadratureGrid:
    """Uniform grid ``x_j = (pi/N) sum_k j_k b_k`` on the torus, ``b_k`` a basis of Q^vee.

    A weight with coordinates ``c`` satisfies ``e^{i<mu, x_j>} = exp(2 pi i c.j / N)``,
    so polynomial evaluation and the transforms reduce to FFTs.
    """

    def __init__(self, rs: RootSystem, N: int = DEFAULT_GRID):
        if int(N) != N or N < 2:
            raise ValueError("grid resolution must be an integer >= 2")
        self.rs = rs
        self.N = int(N)
        self.shape = (self.N,) * rs.rank
        idx = np.indices(self.shape).reshape(rs.rank, -1).T
        self.indices = idx
        self.nodes = (math.pi / self.N) * idx @ rs.coroot_basis
        self.cell_weight = rs.cell_volume / self.N**rs.rank

    def __len__(self):
        return self.indices.shape[0]

    def __eq__(self, other):
        return isinstance(other, QuadratureGrid) and self.N == other.N and self.rs.same_as(other.rs)

    @property
    def weights(self) -> np.ndarray:
        return np.full(len(self), self.cell_weight)

    @cached_property
    def weight_values(self) -> np.ndarray:
        return weight_eval(self.rs, self.nodes)

    @cached_property
    def index_actions(self) -> list[np.ndarray]:
        """Per Weyl element, the flat node permutation ``j -> index of w x_j``."""
        B = self.rs.coroot_basis
        Binv = np.linalg.inv(B)
        out = []
        for w in self.rs.weyl_elements:
            C = np.rint(B @ w.T @ Binv).astype(np.int64)
            img = (self.indices @ C) % self.N
            out.append(np.ravel_multi_index(img.T, self.shape))
        return out

    def fold_coefficients(self, coords: np.ndarray, coefs: np.ndarray) -> np.ndarray:
        """Dense ``N^rank`` array with ``coefs`` accumulated at ``coords mod N``."""
        A = np.zeros(self.shape, dtype=complex)
        np.add.at(A, tuple((np.asarray(coords) % self.N).T), coefs)
        return A

    def synthesize(self, A: np.ndarray) -> np.ndarray:
        """Grid values of ``sum_c A[c] exp(2 pi i c.j/N)``, flattened."""
        return (np.fft.ifftn(A) * self.N**self.rs.rank).ravel()

    def analyze(self, values: np.ndarray) -> np.ndarray:
        """``sum_j values_j exp(-2 pi i c.j/N)`` for every ``c mod N``."""
        return np.fft.fftn(np.asarray(values).reshape(self.shape))

    def sample(self, f: TrigPoly) -> np.ndarray:
        if not f.terms:
            return np.zeros(len(self), dtype=complex)
        return self.synthesize(self.fold_coefficients(f.coords, f.coefs))

    def _fourier_factors(self, x) -> list[np.ndarray]:
        """Per axis, ``exp(2 pi i k j_a(x) / N)`` for ``k`` in ``[-N/2, N/2)``, Nyquist as a cosine."""
        # fractional grid index of each point, axis by axis
        J = (self.N / math.pi) * np.atleast_2d(np.asarray(x, dtype=float)) @ np.linalg.inv(self.rs.coroot_basis)
        k = np.fft.fftfreq(self.N, 1.0 / self.N)
        factors = []
        for a in range(self.rs.rank):
            E = np.exp((2j * math.pi / self.N) * np.outer(J[:, a], k))
            if self.N % 2 == 0:
                E[:, self.N // 2] = np.cos(math.pi * J[:, a])
            factors.append(E)
        return factors

    def interpolate(self, values: np.ndarray, x) -> np.ndarray:
        """Trigonometric interpolant of grid values at arbitrary points ``x``.

        Frequencies are taken in ``[-N/2, N/2)``; for even ``N`` the Nyquist
        mode enters as a cosine so that the interpolant stays real and
        ``W``-invariant whenever the samples are.
        """
        C = self.analyze(values) / len(self)
        factors = self._fourier_factors(x)
        if self.rs.rank == 1:
            return factors[0] @ C
        return np.sum((factors[0] @ C) * factors[1], axis=1)

    @cached_property
    def node_weights(self) -> np.ndarray:
        """``W_j`` with ``sum_j W_j g_j ~ int_{A_0} g w_m`` for samples of a W-invariant ``g``.

        For even multiplicities this is the trapezoid rule ``w_m(x_j) dx / |W|``.
        Otherwise ``w_m`` has kinks on the walls and the trapezoid rule is only
        second order, so the weights integrate the trigonometric interpolant
        of ``g`` exactly against ``w_m`` (moments from the alcove rule).  Some
        of these weights are slightly negative next to the walls.
        """
        rs = self.rs
        if has_even_multiplicities(rs):
            return self.weight_values * self.cell_weight / rs.order
        reach = (self.N / 2) * float(np.sum(np.linalg.norm(rs.fundamental_weights, axis=1)))
        rule = GaussRule(rs, default_gauss_order(rs, reach))
        E = self._fourier_factors(rule.nodes)
        if rs.rank == 1:
            moments = rule.weights @ E[0]
        else:
            moments = (E[0] * rule.weights[:, None]).T @ E[1]
        return (np.fft.fftn(moments) / len(self)).real.ravel()


class SampledFunction:
    """Values of a ``W_aff``-invariant function at the nodes of a :class:`QuadratureGrid`."""

    def __init__(self, grid: QuadratureGrid, values):
        values = np.asarray(values, dtype=complex).ravel()
        if values.shape[0] != len(grid):
            raise ValueError(f"expected {len(grid)} samples for grid N={grid.N}, got {values.shape[0]}")
        self.grid = grid
        self.values = values

    @classmethod
    def from_trigpoly(cls, grid: QuadratureGrid, f: TrigPoly) -> "SampledFunction":
        return cls(grid, grid.sample(f))

    @classmethod
    def from_callable(cls, grid: QuadratureGrid, func) -> "SampledFunction":
        return cls(grid, func(grid.nodes))

    @property
    def rs(self):
        return self.grid.rs

    def symmetrize(self) -> "SampledFunction":
        acts = self.grid.index_actions
        return SampledFunction(self.grid, sum(self.values[a] for a in acts) / len(acts))

    def invariance_defect(self) -> float:
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return max(float(np.max(np.abs(self.values[a] - self.values))) for a in self.grid.index_actions) / scale

    def is_w_invariant(self, tol: float = 1e-10) -> bool:
        return self.invariance_defect() <= tol

    def integral(self) -> complex:
        """``int_{A_0} f w_m dx`` with the grid's :attr:`~QuadratureGrid.node_weights`."""
        return complex(np.sum(self.values * self.grid.node_weights))

    def lp_norm(self, p: float) -> float:
        g = self.grid
        a = np.abs(self.values)
        if np.isinf(p):
            return float(np.max(a[g.weight_values > 0]))
        return float(max(0.0, float(np.sum(a**p * g.node_weights))) ** (1.0 / p))

    def __add__(self, other):
        return SampledFunction(self.grid, self.values + _values(other))

    def __sub__(self, other):
        return SampledFunction(self.grid, self.values - _values(other))

    def __mul__(self, s):
        return SampledFunction(self.grid, self.values * _values(s))

    __rmul__ = __mul__


def _values(x):
    return x.values if isinstance(x, SampledFunction) else x


# ---------------------------------------------------------------------------
# alcove Gauss rule


class GaussRule:
    """Tensor Gauss-Jacobi rule on the closed alcove with the weight ``w_m`` built in.

    ``nodes`` and ``weights`` satisfy ``sum_q weights_q f(nodes_q) ~ int_{A_0} f w_m dx``.
    """

    def __init__(self, rs: RootSystem, order: int = 64):
        self.rs = rs
        self.order = int(order)
        if rs.rank == 1:
            self.nodes, self.weights = self._rank1()
        else:
            self.nodes, self.weights = self._rank2()

    # each zero set of sin<a,x> on A_0 is where <a,x> equals 0 or pi
    def _vanishing(self, x):
        p = self.rs.positive_roots @ x
        return [
            (np.isclose(p[i], 0.0, atol=1e-10) or np.isclose(p[i], math.pi, atol=1e-10))
            for i in range(len(p))
        ]

    def _zero_sets(self, verts):
        """For every (root, wall value) pair, the vertex indices where it vanishes."""
        out = []
        for i, a in enumerate(self.rs.positive_roots):
            m = self.rs.root_multiplicities[i]
            if m == 0:
                continue
            for tau in (0.0, math.pi):
                hit = [j for j, v in enumerate(verts) if abs(a @ v - tau) < 1e-10]
                if hit:
                    out.append((m, frozenset(hit)))
        return out

    def _rank1(self):
        v0, v1 = self.rs.alcove_vertices
        a0 = a1 = 0.0
        for m, hit in self._zero_sets([v0, v1]):
            if hit == {0}:
                a0 += m
            elif hit == {1}:
                a1 += m
        y, wy = roots_jacobi(self.order, a1, a0)
        s = (1 + y) / 2
        x = v0 + s[:, None] * (v1 - v0)
        length = float(np.linalg.norm(v1 - v0))
        scale = 2.0 ** (-(a0 + a1 + 1))
        h = weight_eval(self.rs, x) * length / (s**a0 * (1 - s) ** a1)
        return x, scale * wy * h

    def _rank2(self):
        verts = list(self.rs.alcove_vertices)
        best = None
        for apex in range(3):
            order = [apex] + [j for j in range(3) if j != apex]
            v = [verts[j] for j in order]
            exps = dict(s0=1.0, s1=0.0, t0=0.0, t1=0.0)  # Jacobian contributes s^1
            lost = 0.0
            for m, hit in self._zero_sets(v):
                if hit == {0, 1}:
                    exps["s0"] += m
                    exps["t0"] += m
                elif hit == {0, 2}:
                    exps["s0"] += m
                    exps["t1"] += m
                elif hit == {1, 2}:
                    exps["s1"] += m
                elif hit == {0}:
                    exps["s0"] += m
                else:
                    lost += m
            if best is None or lost < best[0]:
                best = (lost, v, exps)
        _, (v0, v1, v2), e = best
        ys, ws = roots_jacobi(self.order, e["s1"], e["s0"])
        yt, wt = roots_jacobi(self.order, e["t1"], e["t0"])
        s = (1 + ys) / 2
        t = (1 + yt) / 2
        S, T = np.meshgrid(s, t, indexing="ij")
        WS, WT = np.meshgrid(ws, wt, indexing="ij")
        S, T, WS, WT = S.ravel(), T.ravel(), WS.ravel(), WT.ravel()
        x = v0 + S[:, None] * (v1 - v0) + (S * T)[:, None] * (v2 - v1)
        e1, e2 = v1 - v0, v2 - v1
        jac = abs(e1[0] * e2[1] - e1[1] * e2[0]) * S
        power = S ** e["s0"] * (1 - S) ** e["s1"] * T ** e["t0"] * (1 - T) ** e["t1"]
        scale = 2.0 ** (-(e["s0"] + e["s1"] + 1)) * 2.0 ** (-(e["t0"] + e["t1"] + 1))
        h = weight_eval(self.rs, x) * jac / power
        return x, scale * WS * WT * h


# ---------------------------------------------------------------------------
# inner products


class InnerProduct:
    """Weighted inner product on trigonometric polynomials for a chosen backend.

    Args:
        rs: root system with multiplicities.
        backend: ``"exact"``, ``"quadrature"`` or ``"gauss"``.
        grid: torus resolution per dimension for ``quadrature``.
        order: nodes per dimension for ``gauss``.
    """

    def __init__(self, rs: RootSystem, backend: str = "exact", grid: int = DEFAULT_GRID, order: int = 64):
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
        self.rs = rs
        self.backend = backend
        self.grid_size = int(grid)
        self.order = int(order)
        if backend == "exact":
            w = weight_trigpoly(rs)
            self._wrad = int(np.max(np.abs(w.coords)))
            size = 2 * self._wrad + 1
            self._wdense = np.zeros((size,) * rs.rank, dtype=complex)
            self._wdense[tuple((w.coords + self._wrad).T)] = w.coefs
        elif backend == "quadrature":
            self.grid = QuadratureGrid(rs, self.grid_size)
            # trapezoid sum of e^{i nu} w over the grid equals fft(w)[-nu mod N]
            self._wfft = self.grid.analyze(self.grid.weight_values) * self.grid.cell_weight
        else:
            self.rule = GaussRule(rs, self.order)

    # integral over A_0 of e^{i nu} w_m, with the torus/|W| convention
    def _moments(self, nu: np.ndarray) -> np.ndarray:
        nu = np.asarray(nu, dtype=np.int64)
        if self.backend == "exact":
            scale = self.rs.cell_volume / self.rs.order
            k = -nu + self._wrad
            inside = np.all((k >= 0) & (k <= 2 * self._wrad), axis=-1)
            vals = np.zeros(nu.shape[:-1], dtype=complex)
            vals[inside] = self._wdense[tuple(k[inside].T)]
            return scale * vals
        idx = tuple(np.moveaxis((-nu) % self.grid_size, -1, 0))
        return self._wfft[idx] / self.rs.order

    def __call__(self, f: TrigPoly, g: TrigPoly) -> complex:
        return complex(self.gram([f], [g])[0, 0])

    def gram(self, fs, gs) -> np.ndarray:
        """Matrix ``G[i, j] = <fs[i], gs[j]>_m``."""
        for h in list(fs) + list(gs):
            if not self.rs.same_as(h.rs):
                raise RootSystemError("inner product of polynomials over a different root system")
        if self.backend == "gauss":
            F = np.stack([f.evaluate(self.rule.nodes) for f in fs], axis=1)
            G = np.stack([g.evaluate(self.rule.nodes) for g in gs], axis=1)
            return (F * self.rule.weights[:, None]).T @ G.conj()
        out = np.zeros((len(fs), len(gs)), dtype=complex)
        for i, f in enumerate(fs):
            if not f.terms:
                continue
            for j, g in enumerate(gs):
                if not g.terms:
                    continue
                diff = f.coords[:, None, :] - g.coords[None, :, :]
                mom = self._moments(diff)
                out[i, j] = f.coefs @ mom @ g.coefs.conj()
        return out

    def error_estimate(self, f: TrigPoly, g: TrigPoly) -> float:
        """A-posteriori error: change against the rule at half resolution."""
        if self.backend == "exact":
            return 0.0
        if self.backend == "quadrature":
            coarse = InnerProduct(self.rs, "quadrature", grid=max(2, self.grid_size // 2))
        else:
            coarse = InnerProduct(self.rs, "gauss", order=max(2, self.order // 2))
        return abs(self(f, g) - coarse(f, g))


def inner_product(f, g, backend: str = "exact", grid: int = DEFAULT_GRID, order: int = 64) -> complex:
    """``<f, g>_m`` for trigonometric polynomials or sampled functions.

    Sampled functions use the node weights of their own grid; a polynomial
    paired with a sampled function is sampled on that grid.
    """
    if isinstance(f, SampledFunction) or isinstance(g, SampledFunction):
        grid_obj = f.grid if isinstance(f, SampledFunction) else g.grid
        fv = f.values if isinstance(f, SampledFunction) else grid_obj.sample(f)
        gv = g.values if isinstance(g, SampledFunction) else grid_obj.sample(g)
        if isinstance(f, SampledFunction) and isinstance(g, SampledFunction) and f.grid != g.grid:
            raise ValueError("sampled functions live on different grids")
        return complex(np.sum(fv * gv.conj() * grid_obj.node_weights))
    if not f.rs.same_as(g.rs):
        raise RootSystemError("inner product of polynomials over different root systems")
    return InnerProduct(f.rs, backend, grid=grid, order=order)(f, g)


def weighted_rule(rs: RootSystem, kind: str = "auto", grid: int = DEFAULT_GRID, order: int = 64):
    """Nodes and weights with ``sum_q W_q f(x_q) ~ int_{A_0} f w_m`` for W-invariant ``f``.

    ``kind="torus"`` uses the torus grid (exact on polynomials of bounded
    degree for even multiplicities), ``"gauss"`` the alcove rule, and
    ``"auto"`` picks the torus grid for even multiplicities and the alcove rule
    otherwise.
    """
    if kind == "auto":
        kind = "torus" if has_even_multiplicities(rs) else "gauss"
    if kind == "torus":
        g = QuadratureGrid(rs, grid)
        return g.nodes, g.weight_values * g.cell_weight / rs.order
    if kind == "gauss":
        rule = GaussRule(rs, order)
        return rule.nodes, rule.weights
    raise ValueError(f"unknown rule {kind!r}")
