"""Sparse trigonometric polynomials ``f = sum_mu c_mu e^{i mu}`` over the weight lattice."""

from __future__ import annotations

from functools import cached_property
from typing import Mapping

import numpy as np

from .rootsys import RootSystem, RootSystemError, weyl_orbit

__all__ = ["TrigPoly", "orbit_sum", "monomial", "constant", "random_invariant", "DROP_THRESHOLD"]

# coefficients below DROP_THRESHOLD * max|c| are removed after every operation
DROP_THRESHOLD = 1e-15


class TrigPoly:
    """Immutable sparse map weight coordinates -> complex coefficient."""

    def __init__(self, rs: RootSystem, terms: Mapping[tuple, complex] | None = None):
        self.rs = rs
        clean: dict[tuple[int, ...], complex] = {}
        if terms:
            scale = max(abs(c) for c in terms.values())
            cut = DROP_THRESHOLD * scale
            for k, c in terms.items():
                if abs(c) > cut:
                    clean[tuple(int(v) for v in k)] = complex(c)
        self.terms = clean

    # -- basic protocol ------------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self):
        return f"TrigPoly({self.rs.name}, {len(self.terms)} terms)"

    def coefficient(self, coords) -> complex:
        return self.terms.get(tuple(coords), 0j)

    def _check(self, other: "TrigPoly"):
        if not self.rs.same_as(other.rs):
            raise RootSystemError("trigonometric polynomials over different root systems")

    # -- ring structure ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = constant(self.rs, other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0j) + c
        return TrigPoly(self.rs, out)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(self.rs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, TrigPoly) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: complex) -> "TrigPoly":
        return TrigPoly(self.rs, {k: s * c for k, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TrigPoly):
            return self.scale(complex(other))
        self._check(other)
        out: dict[tuple[int, ...], complex] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0j) + c1 * c2
        return TrigPoly(self.rs, out)

    def __rmul__(self, other):
        return self.scale(complex(other))

    def __truediv__(self, s):
        return self.scale(1.0 / complex(s))

    # -- arrays --------------------------------------------------------------

    @cached_property
    def _arrays(self):
        keys = sorted(self.terms, key=self.rs.sort_key)
        coords = np.array(keys, dtype=np.int64).reshape(len(keys), self.rs.rank)
        coef = np.array([self.terms[k] for k in keys], dtype=complex)
        return coords, coef

    @property
    def coords(self) -> np.ndarray:
        return self._arrays[0]

    @property
    def coefs(self) -> np.ndarray:
        return self._arrays[1]

    @cached_property
    def degree(self) -> float:
        """Largest ``|mu|`` in the support."""
        if not self.terms:
            return 0.0
        return float(np.max(np.linalg.norm(self.rs.cartesian(self.coords), axis=1)))

    def coefficient_norm(self) -> float:
        return float(np.linalg.norm(self.coefs)) if self.terms else 0.0

    def evaluate(self, z) -> complex | np.ndarray:
        """Evaluate at real or complex point(s) ``z`` of shape ``(rank,)`` or ``(n, rank)``."""
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1
        z2 = np.atleast_2d(z)
        if z2.shape[-1] != self.rs.rank:
            raise ValueError(f"points must have {self.rs.rank} components")
        if not self.terms:
            out = np.zeros(z2.shape[0], dtype=complex)
        else:
            phase = z2 @ self.rs.cartesian(self.coords).T
            out = np.exp(1j * phase) @ self.coefs
        return complex(out[0]) if single else out

    __call__ = evaluate

    # -- symmetry ------------------------------------------------------------

    def conjugate_reflect(self) -> "TrigPoly":
        """Polynomial ``g`` with ``g(x) = conj f(x)`` for real ``x``: ``c_mu -> conj c_{-mu}``."""
        return TrigPoly(self.rs, {tuple(-v for v in k): c.conjugate() for k, c in self.terms.items()})

    def reflect(self) -> "TrigPoly":
        """``x -> f(-x)``."""
        return TrigPoly(self.rs, {tuple(-v for v in k): c for k, c in self.terms.items()})

    def act(self, coord_action: np.ndarray) -> "TrigPoly":
        """``x -> f(w^{-1} x)`` given the integer coordinate action of ``w``."""
        out = {}
        for k, c in self.terms.items():
            out[tuple(int(v) for v in np.asarray(k) @ coord_action)] = c
        return TrigPoly(self.rs, out)

    @cached_property
    def w_invariant(self) -> bool:
        """True when ``c_{w mu} = c_mu`` for every simple reflection (checked)."""
        if not self.terms:
            return True
        scale = max(abs(c) for c in self.terms.values())
        for a in self.rs.simple_coord_actions:
            for k, c in self.terms.items():
                img = tuple(int(v) for v in np.asarray(k) @ a)
                if abs(self.terms.get(img, 0j) - c) > 1e-10 * scale:
                    return False
        return True

    def allclose(self, other: "TrigPoly", tol: float = 1e-12) -> bool:
        return (self - other).coefficient_norm() <= tol * max(1.0, self.coefficient_norm())

    # -- serialization -------------------------------------------------------

    def to_json(self) -> list[dict]:
        coords, coef = self._arrays
        return [
            {"coords": [int(v) for v in k], "re": float(c.real), "im": float(c.imag)}
            for k, c in zip(coords, coef)
        ]

    @classmethod
    def from_json(cls, rs: RootSystem, items) -> "TrigPoly":
        return cls(rs, {tuple(it["coords"]): complex(it["re"], it["im"]) for it in items})


def monomial(rs: RootSystem, coords, coef: complex = 1.0) -> TrigPoly:
    return TrigPoly(rs, {tuple(coords): coef})


def constant(rs: RootSystem, value: complex = 1.0) -> TrigPoly:
    return TrigPoly(rs, {(0,) * rs.rank: value})


def orbit_sum(rs: RootSystem, lam) -> TrigPoly:
    """``M_lam = sum over the W-orbit of e^{i mu}`` for dominant ``lam``."""
    lam = tuple(getattr(lam, "coords", lam))
    if not rs.is_dominant(lam):
        raise RootSystemError(f"{lam} is not dominant")
    return TrigPoly(rs, {mu: 1.0 for mu in weyl_orbit(rs, lam)})


def random_invariant(rs: RootSystem, radius: float, rng=None, real: bool = False) -> TrigPoly:
    """Random W-invariant polynomial: normal coefficients on every orbit sum with ``|lam| <= radius``."""
    from .rootsys import dominant_weights_in_ball

    rng = np.random.default_rng(rng)
    out = TrigPoly(rs, {})
    for lam in dominant_weights_in_ball(rs, radius):
        c = rng.normal() if real else complex(rng.normal(), rng.normal())
        out = out + orbit_sum(rs, lam).scale(c)
    return out
