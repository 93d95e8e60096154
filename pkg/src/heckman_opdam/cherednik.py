"""Dunkl-Cherednik operators, the Heckman-Opdam Laplacian and ``L_m`` on trigonometric polynomials.

Convention
----------
Trigonometric polynomials are functions of ``x`` in ``a``; the Cherednik
operator of the noncompact theory is transported along ``f(x) = g(ix)``. On
``f`` this is

    T_xi f = -i d_xi f + sum_{a > 0} m_a <a, xi> (f - f o s_a) / (1 - e^{-2ia}) - <rho, xi> f,

so that ``T_xi e^{i mu} = (<mu, xi> - <rho, xi>) e^{i mu} + (reflection part)``.
The Laplacian ``Delta_m = sum_k T(xi_k)^2 - |rho|^2`` then satisfies
``L_m f = -Delta_m f`` on W-invariant ``f``, and ``Delta_m R_lam = theta_lam R_lam``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rootsys import RootSystem, RootSystemError
from .trigpoly import TrigPoly

__all__ = [
    "CherednikOperator",
    "apply_cherednik",
    "apply_laplacian",
    "apply_Lm",
    "reflection_quotient",
]


@dataclass(frozen=True)
class CherednikOperator:
    """``T(xi, m)`` for a direction ``xi`` (real or complex) in ``a``."""

    rs: RootSystem
    xi: tuple

    @classmethod
    def along(cls, rs: RootSystem, xi) -> "CherednikOperator":
        xi = np.asarray(xi, dtype=complex).ravel()
        if xi.shape != (rs.rank,):
            raise ValueError(f"direction must have {rs.rank} components")
        return cls(rs, tuple(complex(v) for v in xi))

    def __call__(self, f: TrigPoly) -> TrigPoly:
        return apply_cherednik(self, f)


def reflection_quotient(rs: RootSystem, root_index: int, coords) -> dict:
    """Expand ``(e^{i mu} - e^{i s_a mu}) / (1 - e^{-2ia})`` as a finite sum.

    With ``n = mu_a`` (an integer on the weight lattice) the quotient equals
    ``sum_{k=0}^{n-1} e^{i(mu - 2k a)}`` for ``n > 0``, zero for ``n = 0`` and
    ``-sum_{k=1}^{|n|} e^{i(mu + 2k a)}`` for ``n < 0``.
    """
    mu = np.asarray(coords, dtype=np.int64)
    n = int(round(float(rs.root_coordinates(mu)[root_index])))
    step = rs.double_root_coords[root_index]
    if n > 0:
        return {tuple(int(v) for v in mu - k * step): 1.0 for k in range(n)}
    if n < 0:
        return {tuple(int(v) for v in mu + k * step): -1.0 for k in range(1, -n + 1)}
    return {}


def apply_cherednik(op: CherednikOperator, f: TrigPoly) -> TrigPoly:
    rs = op.rs
    if not rs.same_as(f.rs):
        raise RootSystemError("operator and polynomial belong to different root systems")
    xi = np.array(op.xi, dtype=complex)
    rho_xi = complex(rs.rho() @ xi)
    out: dict[tuple[int, ...], complex] = {}
    if not f.terms:
        return TrigPoly(rs, {})
    coords = f.coords
    diag = rs.cartesian(coords) @ xi - rho_xi
    for k, c, d in zip(map(tuple, coords), f.coefs, diag):
        out[k] = out.get(k, 0j) + c * d
    for i, a in enumerate(rs.positive_roots):
        weight = rs.root_multiplicities[i] * complex(a @ xi)
        if weight == 0:
            continue
        for k, c in zip(map(tuple, coords), f.coefs):
            for q, s in reflection_quotient(rs, i, k).items():
                out[q] = out.get(q, 0j) + weight * s * c
    return TrigPoly(rs, out)


def apply_laplacian(rs: RootSystem, f: TrigPoly, basis=None) -> TrigPoly:
    """``Delta_m f = sum_k T(xi_k)^2 f - |rho|^2 f`` for an orthonormal basis ``xi_k``.

    ``basis`` defaults to the standard basis; any orthonormal basis gives the
    same operator.
    """
    basis = np.eye(rs.rank) if basis is None else np.asarray(basis, dtype=float)
    if not np.allclose(basis @ basis.T, np.eye(rs.rank), atol=1e-12):
        raise ValueError("basis must be orthonormal")
    rho = rs.rho()
    out = f.scale(-float(rho @ rho))
    for xi in basis:
        op = CherednikOperator.along(rs, xi)
        out = out + op(op(f))
    return out


def apply_Lm(rs: RootSystem, f: TrigPoly) -> TrigPoly:
    """``L_m = Delta + sum m_a cot<a, x> d_a`` on a W-invariant polynomial, via ``L_m = -Delta_m``."""
    if not f.w_invariant:
        raise ValueError("L_m acts on W-invariant polynomials only")
    return -apply_laplacian(rs, f)
