"""Heckman-Opdam polynomials by weighted Gram-Schmidt, Gamma-product constants and the transform.

``P_lam = sum_{mu <= lam} c_{lam mu} M_mu`` is the unique W-invariant
polynomial with ``c_{lam lam} = 1`` that is orthogonal to every ``M_mu`` with
``mu`` strictly dominated by ``lam``.  ``R_lam = P_lam / P_lam(0)`` and
``r_lam = 1 / ||R_lam||^2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from .innerprod import GaussRule, InnerProduct, default_gauss_order, QuadratureGrid, SampledFunction, has_even_multiplicities
from .rootsys import RootSystem, RootSystemError, build_root_system, dominant_weights_in_ball
from .trigpoly import TrigPoly, orbit_sum

__all__ = [
    "BasisEntry",
    "BasisError",
    "DegenerateMultiplicityError",
    "JacobiBasis",
    "build_basis",
    "c_function",
    "norm_formula",
    "ho_transform",
    "default_gauss_order",
]


class BasisError(RuntimeError):
    """Gram-Schmidt met a numerically singular Gram matrix."""


class DegenerateMultiplicityError(ValueError):
    """A Gamma argument in the closed-form constants is not positive."""

    def __init__(self, what: str):
        super().__init__(f"{what}: degenerate multiplicity; use value_at_zero instead")


# ---------------------------------------------------------------------------
# Gamma products


def _gamma_terms(rs: RootSystem, lam):
    lam = tuple(getattr(lam, "coords", lam))
    if not rs.is_dominant(lam):
        raise RootSystemError(f"{lam} is not dominant")
    la = rs.root_coordinates(lam)
    ra = rs.root_values(rs.rho())
    return la + ra, ra, rs.root_multiplicities, rs.half_root_multiplicities


def _lgamma_positive(args, what):
    args = np.asarray(args, dtype=float)
    if np.any(args <= 0):
        raise DegenerateMultiplicityError(what)
    return gammaln(args)


def c_function(rs: RootSystem, lam) -> float:
    """``c(lam + rho, m)``; equals ``1 / P_lam(0)``."""
    a, r, m, mh = _gamma_terms(rs, lam)
    num = _lgamma_positive(a + mh / 4, "c_function") + _lgamma_positive(r + mh / 4 + m / 2, "c_function")
    den = _lgamma_positive(a + mh / 4 + m / 2, "c_function") + _lgamma_positive(r + mh / 4, "c_function")
    return float(math.exp(np.sum(num - den)))


def norm_formula(rs: RootSystem, lam) -> float:
    """``||P_lam||_m^2`` from the Gamma product.

    The bare product is normalized so that the torus is given total measure
    ``|W|``-times the alcove Gamma mass of one; the integral over ``A_0`` with
    Lebesgue measure carries the extra factor ``|W| vol(A_0) = vol(torus)``.
    """
    a, _, m, mh = _gamma_terms(rs, lam)
    what = "norm_formula"
    log = (
        _lgamma_positive(a - mh / 4 - m / 2 + 1, what)
        - _lgamma_positive(a - mh / 4 + 1, what)
        + _lgamma_positive(a + mh / 4 + m / 2, what)
        - _lgamma_positive(a + mh / 4, what)
    )
    return float(rs.cell_volume * math.exp(np.sum(log)))


# ---------------------------------------------------------------------------
# basis


@dataclass(frozen=True)
class BasisEntry:
    weight: tuple
    P: TrigPoly
    value_at_zero: float
    norm_sq: float
    r: float
    theta: float

    @property
    def R(self) -> TrigPoly:
        return self.P / self.value_at_zero


_CHUNK = 4_000_000


def _choose_backend(rs: RootSystem, backend: str) -> str:
    if backend == "auto":
        return "exact" if has_even_multiplicities(rs) else "gauss"
    return backend


class JacobiBasis:
    """Computed ``P_lam``, ``R_lam``, ``r_lam`` and ``theta_lam`` for all dominant ``|lam| <= max_shell``.

    ``entries`` follow the total order ``(|lam|, coords)``. The orbit-sum
    coefficients live in ``orbit_coefficients[i, j] = c_{lam_i lam_j}``.
    """

    def __init__(self, rs, max_shell, backend, entries, orbit_coefficients, grid=None, order=None):
        self.rs = rs
        self.max_shell = float(max_shell)
        self.backend = backend
        self.entries = list(entries)
        self.orbit_coefficients = np.asarray(orbit_coefficients, dtype=complex)
        self.grid = grid
        self.order = order
        self._index = {e.weight: i for i, e in enumerate(self.entries)}

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return f"JacobiBasis({self.rs!r}, max_shell={self.max_shell:g}, {len(self)} entries)"

    def __getitem__(self, lam) -> BasisEntry:
        return self.entries[self.index(lam)]

    def index(self, lam) -> int:
        key = tuple(int(v) for v in getattr(lam, "coords", lam))
        if key not in self._index:
            raise KeyError(f"{key} is not in the basis (max_shell={self.max_shell:g})")
        return self._index[key]

    @property
    def weights(self) -> list[tuple]:
        return [e.weight for e in self.entries]

    @cached_property
    def r(self) -> np.ndarray:
        return np.array([e.r for e in self.entries])

    @cached_property
    def theta(self) -> np.ndarray:
        return np.array([e.theta for e in self.entries])

    @cached_property
    def norms(self) -> np.ndarray:
        return np.array([self.rs.norm(e.weight) for e in self.entries])

    def R(self, lam) -> TrigPoly:
        return self[lam].R

    @cached_property
    def inner(self) -> InnerProduct:
        kw = {}
        if self.grid:
            kw["grid"] = self.grid
        if self.order:
            kw["order"] = self.order
        return InnerProduct(self.rs, self.backend, **kw)

    # -- exponential expansion of all R_lam at once ----------------------------

    @cached_property
    def _support(self):
        keys = sorted({k for e in self.entries for k in e.P.terms}, key=self.rs.sort_key)
        pos = {k: j for j, k in enumerate(keys)}
        D = np.zeros((len(self), len(keys)))
        for i, e in enumerate(self.entries):
            for k, c in e.R.terms.items():
                D[i, pos[k]] = c.real
        coords = np.array(keys, dtype=np.int64).reshape(len(keys), self.rs.rank)
        return coords, D

    @property
    def support_coords(self) -> np.ndarray:
        return self._support[0]

    @property
    def exponential_coefficients(self) -> np.ndarray:
        """``d[i, j]``: coefficient of ``e^{i gamma_j}`` in ``R_{lam_i}``."""
        return self._support[1]

    def evaluate_R(self, z, rows=None) -> np.ndarray:
        """``R_lam(z)`` for all entries at points ``z`` of shape ``(n, rank)``; returns ``(n, len)``.

        ``rows`` (boolean mask or index array) restricts the evaluation to some
        entries, which keeps large imaginary parts from overflowing in unused
        exponentials.
        """
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        coords, D = self._support
        if rows is not None:
            D = D[rows]
            cols = np.flatnonzero(np.any(D != 0, axis=0))
            coords, D = coords[cols], D[:, cols]
        cart = self.rs.cartesian(coords).T
        out = np.empty((z.shape[0], D.shape[0]), dtype=complex)
        # chunk over points to bound the (points x exponentials) temporary
        step = max(1, _CHUNK // max(1, cart.shape[1]))
        for s in range(0, z.shape[0], step):
            out[s : s + step] = np.exp(1j * (z[s : s + step] @ cart)) @ D.T
        return out

    def expand(self, coefficients) -> TrigPoly:
        """``sum_lam coefficients[lam] R_lam`` as a trigonometric polynomial."""
        a = np.asarray(coefficients, dtype=complex)
        coords, D = self._support
        c = a @ D
        return TrigPoly(self.rs, {tuple(k): v for k, v in zip(coords, c)})

    def transform(self, f) -> np.ndarray:
        """``f_hat(lam)`` for every entry, in entry order."""
        if isinstance(f, SampledFunction):
            return self._transform_sampled(f)
        if not isinstance(f, TrigPoly):
            raise TypeError("expected a TrigPoly or SampledFunction")
        if not f.w_invariant:
            raise ValueError("the transform is defined for W-invariant functions")
        if self.backend == "gauss":
            nodes, R = self._gauss_tables
            return (self.inner.rule.weights * f.evaluate(nodes)) @ R.conj()
        return self.inner.gram([f], [e.R for e in self.entries])[0]

    @cached_property
    def _gauss_tables(self):
        nodes = self.inner.rule.nodes
        return nodes, self.evaluate_R(nodes)

    def _transform_sampled(self, f: SampledFunction) -> np.ndarray:
        g = f.grid
        if not g.rs.same_as(self.rs):
            raise RootSystemError("sampled function lives on a different root system")
        if not has_even_multiplicities(self.rs):
            # the weight is not a trigonometric polynomial and the trapezoid
            # rule loses its spectral accuracy; integrate the interpolant instead
            nodes, weights, R = self._sampled_tables(g.N)
            return (weights * g.interpolate(f.values, nodes)) @ R.conj()
        spec = g.analyze(f.values * g.weight_values)
        coords, D = self._support
        lookup = spec[tuple((coords % g.N).T)]
        return (g.cell_weight / self.rs.order) * (D @ lookup)

    def _sampled_tables(self, N: int):
        cache = self.__dict__.setdefault("_sampled_cache", {})
        if N not in cache:
            reach = self.max_shell + (N / 2) * float(np.sum(np.linalg.norm(self.rs.fundamental_weights, axis=1)))
            rule = GaussRule(self.rs, default_gauss_order(self.rs, reach))
            cache[N] = (rule.nodes, rule.weights, self.evaluate_R(rule.nodes))
        return cache[N]

    def synthesize(self, grid: QuadratureGrid, coefficients) -> SampledFunction:
        """Grid values of ``sum_lam coefficients[lam] R_lam``."""
        coords, D = self._support
        c = np.asarray(coefficients, dtype=complex) @ D
        return SampledFunction(grid, grid.synthesize(grid.fold_coefficients(coords, c)))

    # -- growth envelope -------------------------------------------------------

    def envelope_monomial(self, coords) -> np.ndarray:
        """``prod_{lam_a != 0} lam_a^{m_a}`` for an array of weight coordinates."""
        la = np.rint(self.rs.root_coordinates(np.atleast_2d(np.asarray(coords, dtype=float))))
        safe = np.where(la > 0, la, 1.0)
        return np.prod(safe**self.rs.root_multiplicities, axis=1)

    @cached_property
    def envelope_constant(self) -> float:
        """Smallest ``C`` with ``r_lam <= C prod lam_a^{m_a}`` over the computed entries."""
        mono = self.envelope_monomial(np.array(self.weights))
        return float(np.max(self.r / mono))

    # -- persistence -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "root_system": self.rs.spec(),
            "max_shell": self.max_shell,
            "backend": self.backend,
            "grid": self.grid,
            "order": self.order,
            "entries": [
                {
                    "weight": list(e.weight),
                    "P": e.P.to_json(),
                    "value_at_zero": e.value_at_zero,
                    "norm_sq": e.norm_sq,
                    "r": e.r,
                    "theta": e.theta,
                }
                for e in self.entries
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JacobiBasis":
        spec = data["root_system"]
        rs = build_root_system(spec["type"], spec["multiplicities"])
        entries = []
        for item in data["entries"]:
            entries.append(
                BasisEntry(
                    weight=tuple(int(v) for v in item["weight"]),
                    P=TrigPoly.from_json(rs, item["P"]),
                    value_at_zero=float(item["value_at_zero"]),
                    norm_sq=float(item["norm_sq"]),
                    r=float(item["r"]),
                    theta=float(item["theta"]),
                )
            )
        pos = {e.weight: i for i, e in enumerate(entries)}
        C = np.zeros((len(entries), len(entries)), dtype=complex)
        for i, e in enumerate(entries):
            for k, c in e.P.terms.items():
                j = pos.get(k)
                if j is not None:
                    C[i, j] = c
        return cls(rs, data["max_shell"], data["backend"], entries, C, data.get("grid"), data.get("order"))

    def save(self, path) -> None:
        from .io import dumps

        Path(path).write_text(dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> "JacobiBasis":
        try:
            data = json.loads(Path(path).read_text())
            return cls.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: not a basis file ({exc})") from exc


def build_basis(
    rs: RootSystem,
    max_shell: float,
    backend: str = "auto",
    grid: int | None = None,
    order: int | None = None,
    sort_key=None,
    singular_tol: float = 1e-12,
) -> JacobiBasis:
    """Gram-Schmidt of orbit sums against dominated orbit sums for all ``|lam| <= max_shell``.

    Args:
        backend: ``"exact"``, ``"quadrature"``, ``"gauss"`` or ``"auto"`` (exact for
            even multiplicities, gauss otherwise).
        grid: torus resolution for the quadrature backend.
        order: nodes per dimension for the gauss backend; defaults to
            :func:`default_gauss_order`.
        sort_key: alternative linear extension of the dominance order used for
            the orthogonalization sweep; the result is the same polynomials.
    """
    if not max_shell > 0:
        raise ValueError("max_shell must be positive")
    backend = _choose_backend(rs, backend)
    if backend == "gauss" and order is None:
        order = default_gauss_order(rs, max_shell)
    if backend == "quadrature" and grid is None:
        grid = 256
    kw = {}
    if grid:
        kw["grid"] = grid
    if order:
        kw["order"] = order
    ip = InnerProduct(rs, backend, **kw)

    lams = dominant_weights_in_ball(rs, max_shell)
    if sort_key is not None:
        lams = sorted(lams, key=sort_key)
    orbits = [orbit_sum(rs, lam) for lam in lams]
    G = ip.gram(orbits, orbits)
    G = 0.5 * (G + G.conj().T)
    unit = 1.0
    if backend == "exact":
        # integral weight coefficients and unit orbit-sum coefficients make G an
        # exact integer matrix times the cell scale; recover it so that the
        # elimination below only adds its own (extended precision) roundoff
        unit = rs.cell_volume / rs.order
        Gi = G / unit
        if np.max(np.abs(Gi - np.rint(Gi.real))) < 1e-6:
            G = np.rint(Gi.real)
        else:
            unit = 1.0
    G = G.astype(np.clongdouble)
    n = len(lams)
    C = np.zeros((n, n), dtype=np.clongdouble)
    GC = np.zeros((n, n), dtype=np.clongdouble)  # GC[j] = G conj(C[j])
    nsq = np.zeros(n, dtype=np.longdouble)
    for i in range(n):
        lower = [j for j in range(i) if rs.dominates(lams[i], lams[j])]
        c = np.zeros(n, dtype=np.clongdouble)
        c[i] = 1.0
        # two sweeps of modified Gram-Schmidt
        for _ in range(2):
            for j in lower:
                c = c - ((c @ GC[j]) / nsq[j]) * C[j]
        GC[i] = G @ c.conj()
        nsq[i] = (c @ GC[i]).real
        if not nsq[i] > singular_tol * max(1.0, float(G[i, i].real)):
            raise BasisError(
                f"Gram matrix is numerically singular at {lams[i]}; increase the quadrature resolution"
            )
        C[i] = c
    nsq = nsq.astype(float) * unit
    C = C.astype(complex)
    if np.any(np.abs(C.imag) > 1e-9 * np.max(np.abs(C))):
        raise BasisError("complex Gram-Schmidt coefficients; quadrature is inconsistent")
    C = C.real.astype(complex)

    entries = []
    for i, lam in enumerate(lams):
        P = sum((orbits[j].scale(C[i, j].real) for j in np.flatnonzero(C[i])), TrigPoly(rs, {}))
        p0 = float(sum(C[i, j].real * len(orbits[j]) for j in np.flatnonzero(C[i])))
        entries.append(
            BasisEntry(
                weight=lam,
                P=P,
                value_at_zero=p0,
                norm_sq=float(nsq[i]),
                r=p0**2 / float(nsq[i]),
                theta=rs.theta(lam),
            )
        )
    canonical = sorted(range(n), key=lambda i: rs.sort_key(lams[i]))
    entries = [entries[i] for i in canonical]
    C = C[np.ix_(canonical, canonical)]
    return JacobiBasis(rs, max_shell, backend, entries, C, grid, order)


def ho_transform(basis: JacobiBasis, f) -> dict:
    """``{lam: f_hat(lam)}`` with ``f_hat(lam) = int_{A_0} f(x) R_lam(-x) w_m(x) dx``."""
    values = basis.transform(f)
    return {lam: complex(v) for lam, v in zip(basis.weights, values)}
