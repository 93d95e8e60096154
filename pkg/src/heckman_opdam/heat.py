"""The alcove heat kernel ``Gamma_m(x, y, t) = sum r_lam e^{-theta_lam t} R_lam(x) R_lam(-y)`` and ``H(t)``.

Truncation control
------------------
Only the entries of a :class:`~heckman_opdam.jacobi.JacobiBasis` are summed.
The neglected part is bounded with the polynomial growth envelope
``r_lam <= C prod lam_a^{m_a}`` (``C`` fitted on the basis, times a safety
factor) and ``|R_lam(z)| <= e^{|lam| |Im z|}``.  The envelope series is summed
explicitly over all dominant lattice points up to the radius at which its
terms drop below ``1e-300``; beyond that radius the terms decay like a
Gaussian, so the remainder is below double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cherednik import apply_Lm
from .innerprod import SampledFunction
from .jacobi import JacobiBasis
from .rootsys import RootSystem, dominant_weight_array
from .trigpoly import TrigPoly

__all__ = [
    "HeatKernelEvaluator",
    "KernelValue",
    "TruncationError",
    "theta",
    "kernel_eval",
    "heat_transform",
    "heat_spectrum",
    "stationary_limit",
    "heat_equation_residual",
    "SMALL_TIME",
]

# below this the kernel is outside the validated range at desk-scale shells
SMALL_TIME = 0.01
_LOG_TINY = 690.0


class TruncationError(RuntimeError):
    """The truncation tail bound exceeds the requested tolerance."""


def theta(rs: RootSystem, lam) -> float:
    """``theta_lam = <lam, lam + 2 rho>``."""
    return rs.theta(tuple(getattr(lam, "coords", lam)))


@dataclass(frozen=True)
class KernelValue:
    value: complex | np.ndarray
    tail_bound: float
    guaranteed: bool


@lru_cache(maxsize=32)
def _envelope_points(rs, inner, radius):
    pts = dominant_weight_array(rs, radius, inner=inner)
    lam = rs.cartesian(pts) if len(pts) else np.zeros((0, rs.rank))
    norms = np.linalg.norm(lam, axis=1)
    thetas = np.einsum("ij,ij->i", lam, lam + 2 * rs.rho())
    la = np.rint(rs.root_coordinates(pts)) if len(pts) else np.zeros((0, len(rs.positive_roots)))
    mono_log = np.sum(rs.root_multiplicities * np.log(np.where(la > 0, la, 1.0)), axis=1)
    return norms, thetas, mono_log


class HeatKernelEvaluator:
    """Spectral heat kernel on a Jacobi basis with a truncation tolerance.

    Args:
        basis: the computed polynomials.
        tolerance: target bound ``eps`` for the neglected tail.
        safety: factor applied to the fitted envelope constant.

    Attributes:
        t_min: smallest time at which the tail bound for real arguments is below
            ``tolerance``.
    """

    def __init__(self, basis: JacobiBasis, tolerance: float = 1e-8, safety: float = 2.0):
        if not tolerance > 0:
            raise ValueError("tolerance must be positive")
        self.basis = basis
        self.rs = basis.rs
        self.tolerance = float(tolerance)
        self.safety = float(safety)
        self.envelope_constant = self.safety * basis.envelope_constant
        self.t_min = self._solve_t_min()

    def __repr__(self):
        return f"HeatKernelEvaluator({self.basis!r}, eps={self.tolerance:g}, t_min={self.t_min:.4g})"

    # -- tail control ----------------------------------------------------------

    def _radius(self, t: float, spread: float) -> float:
        # |lam|^2 t - |lam| spread - M log|lam| - log C >= _LOG_TINY
        M = float(np.sum(self.rs.root_multiplicities))
        target = _LOG_TINY + max(0.0, math.log(self.envelope_constant))
        R = self.basis.max_shell + 1.0
        for _ in range(60):
            need = target + M * math.log(max(R, 2.0))
            R_new = (spread + math.sqrt(spread**2 + 4 * t * need)) / (2 * t)
            if abs(R_new - R) < 1e-6 * R:
                break
            R = R_new
        return max(R, self.basis.max_shell + 1.0)

    def tail_bound(self, t: float, spread: float = 0.0) -> float:
        """Bound on ``|Gamma - truncated sum|`` at time ``t``.

        ``spread`` is ``|Im z| + |Im w|`` for complex arguments.
        """
        if t <= 0:
            return math.inf
        R = self._radius(t, spread)
        # round the radius up so the cached enumeration is reused across nearby t
        R = math.ceil(R / 8.0) * 8.0
        if self.rs.rank == 2 and R > 2000:
            return math.inf
        norms, thetas, mono_log = _envelope_points(self.rs, self.basis.max_shell, R)
        if norms.size == 0:
            return 0.0
        logs = math.log(self.envelope_constant) + mono_log - thetas * t + norms * spread
        return float(np.sum(np.exp(np.minimum(logs, 700.0))))

    def _solve_t_min(self) -> float:
        f = lambda t: self.tail_bound(t) - self.tolerance  # noqa: E731
        lo, hi = 1e-3, 1.0
        while f(hi) > 0 and hi < 1e4:
            hi *= 4
        if f(hi) > 0:
            return math.inf
        if f(lo) <= 0:
            return lo
        for _ in range(60):
            mid = math.sqrt(lo * hi)
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
            if hi / lo < 1 + 1e-6:
                break
        return hi

    def is_guaranteed(self, t: float, spread: float = 0.0) -> bool:
        return t >= SMALL_TIME and self.tail_bound(t, spread) < self.tolerance

    def C_t(self, t: float) -> tuple[float, float]:
        """Bracket for ``C_t = sum r_lam e^{-theta_lam t}``: truncated sum and truncated sum + tail."""
        low = float(np.sum(self.basis.r * np.exp(-self.basis.theta * t)))
        return low, low + self.tail_bound(t)

    # -- evaluation ------------------------------------------------------------

    def _coefficients(self, t, include_zero=True):
        c = self.basis.r * np.exp(-self.basis.theta * t)
        if not include_zero:
            c = c.copy()
            c[self.basis.theta == 0] = 0.0
        return c

    def matrix(self, Z, Wp, t: float, include_zero: bool = True) -> np.ndarray:
        """``Gamma_m(Z[i], Wp[j], t)`` as a matrix (no tail information)."""
        if not t > 0:
            raise ValueError("t must be positive")
        Ez = self.basis.evaluate_R(Z)
        Ew = self.basis.evaluate_R(-np.atleast_2d(np.asarray(Wp, dtype=complex)))
        return (Ez * self._coefficients(t, include_zero)) @ Ew.T

    def __call__(self, z, w, t: float, strict: bool = False) -> KernelValue:
        return kernel_eval(self, z, w, t, strict=strict)

    def deviation(self, z, w, t: float) -> KernelValue:
        """``Gamma_m(z, w, t) - r_0``, summed without the constant term."""
        return kernel_eval(self, z, w, t, include_zero=False)


def _spread(z, w) -> float:
    zi = np.atleast_2d(np.asarray(z, dtype=complex)).imag
    wi = np.atleast_2d(np.asarray(w, dtype=complex)).imag
    return float(np.max(np.linalg.norm(zi, axis=1)) + np.max(np.linalg.norm(wi, axis=1)))


def kernel_eval(ev: HeatKernelEvaluator, z, w, t: float, strict: bool = False, include_zero: bool = True) -> KernelValue:
    """``Gamma_m(z, w, t)`` with a tail bound.

    ``z`` and ``w`` are single points (value is a complex number) or arrays of
    points of equal length (value is an array, evaluated pairwise).  With
    ``strict=True`` a tail bound above the tolerance raises
    :class:`TruncationError`.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    single = z.ndim == 1 and w.ndim == 1
    Z, Wp = np.atleast_2d(z), np.atleast_2d(w)
    if Z.shape != Wp.shape:
        raise ValueError("z and w must have the same shape")
    Ez = ev.basis.evaluate_R(Z)
    Ew = ev.basis.evaluate_R(-Wp)
    vals = np.sum(Ez * Ew * ev._coefficients(t, include_zero), axis=1)
    spread = _spread(Z, Wp)
    bound = ev.tail_bound(t, spread)
    guaranteed = t >= SMALL_TIME and bound < ev.tolerance
    if strict and bound >= ev.tolerance:
        raise TruncationError(f"tail bound {bound:.3g} exceeds tolerance {ev.tolerance:g} at t={t:g}")
    return KernelValue(complex(vals[0]) if single else vals, bound, guaranteed)


def heat_spectrum(ev: HeatKernelEvaluator, f, t: float) -> np.ndarray:
    """``e^{-theta_lam t} f_hat(lam)`` in basis order."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return np.exp(-ev.basis.theta * t) * ev.basis.transform(f)


def heat_transform(ev: HeatKernelEvaluator, f, t: float):
    """``H(t) f`` by transform, damping and resummation.

    A :class:`SampledFunction` gives a sampled function on the same grid; a
    W-invariant :class:`TrigPoly` gives a trigonometric polynomial.  ``t = 0``
    returns ``f`` unchanged.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return f
    coeffs = ev.basis.r * heat_spectrum(ev, f, t)
    if isinstance(f, SampledFunction):
        return ev.basis.synthesize(f.grid, coeffs)
    return ev.basis.expand(coeffs)


def stationary_limit(ev: HeatKernelEvaluator) -> float:
    """``r_0 = 1 / int_{A_0} w_m``."""
    return float(ev.basis[(0,) * ev.rs.rank].r)


def heat_equation_residual(ev: HeatKernelEvaluator, w, t: float) -> float:
    """Coefficient norm of ``d/dt Gamma(., w, t) - L_m Gamma(., w, t)`` for the truncated kernel."""
    Ew = ev.basis.evaluate_R(-np.atleast_2d(np.asarray(w, dtype=complex)))[0]
    c = ev._coefficients(t) * Ew
    G = ev.basis.expand(c)
    dG = ev.basis.expand(-ev.basis.theta * c)
    res: TrigPoly = dG - apply_Lm(ev.rs, G)
    return res.coefficient_norm()
