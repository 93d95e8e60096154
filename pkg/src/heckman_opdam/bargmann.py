"""Holomorphic heat transforms, the space ``H_t`` and its reproducing kernel.

Members of ``H_t`` are stored by their spectrum ``F_hat(lam)`` on a Jacobi
basis, with ``F(z) = sum r_lam F_hat(lam) R_lam(z)`` and

    <F, G>_{H_t} = sum r_lam F_hat(lam) conj(G_hat(lam)) e^{2 t theta_lam}.

``H(t)`` is then unitary from ``L^2(A_0, w_m)`` onto the truncated ``H_t``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .heat import HeatKernelEvaluator, kernel_eval
from .innerprod import GaussRule
from .jacobi import JacobiBasis

__all__ = [
    "HolomorphicHeatFunction",
    "holo_heat_transform",
    "ht_inner_product",
    "generalized_translation",
    "translation_matrix",
    "reproducing_kernel",
    "classical_torus_crosscheck",
    "TorusCrosscheck",
]


class HolomorphicHeatFunction:
    """``F(z) = sum r_lam F_hat(lam) R_lam(z)`` at a fixed time ``t``."""

    def __init__(self, basis: JacobiBasis, t: float, spectrum):
        if not t > 0:
            raise ValueError("t must be positive")
        spectrum = np.asarray(spectrum, dtype=complex)
        if spectrum.shape != (len(basis),):
            raise ValueError(f"spectrum must have {len(basis)} entries")
        self.basis = basis
        self.t = float(t)
        self.spectrum = spectrum

    @classmethod
    def from_function(cls, basis: JacobiBasis, f, t: float) -> "HolomorphicHeatFunction":
        """``H(t) f`` for a W-invariant TrigPoly or SampledFunction ``f``."""
        if not t > 0:
            raise ValueError("t must be positive")
        return cls(basis, t, np.exp(-basis.theta * t) * basis.transform(f))

    @classmethod
    def kernel_section(cls, basis: JacobiBasis, t: float, z) -> "HolomorphicHeatFunction":
        """``K_{t,z}`` with ``K_hat(lam) = e^{-2 t theta_lam} conj R_lam(z)``."""
        Rz = basis.evaluate_R(np.atleast_2d(np.asarray(z, dtype=complex)))[0]
        return cls(basis, t, np.exp(-2 * t * basis.theta) * Rz.conj())

    @property
    def coefficients(self) -> np.ndarray:
        """``a_lam = r_lam F_hat(lam)``: coefficients in the ``R_lam`` expansion."""
        return self.basis.r * self.spectrum

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        vals = self.basis.evaluate_R(np.atleast_2d(z)) @ self.coefficients
        return complex(vals[0]) if z.ndim == 1 else vals

    def restriction(self):
        """The real restriction as a trigonometric polynomial."""
        return self.basis.expand(self.coefficients)

    def norm_sq(self) -> float:
        return float(ht_inner_product(self, self).real)

    def _combine(self, other, sign):
        _check_pair(self, other)
        return HolomorphicHeatFunction(self.basis, self.t, self.spectrum + sign * other.spectrum)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, s):
        return HolomorphicHeatFunction(self.basis, self.t, complex(s) * self.spectrum)

    __rmul__ = __mul__


def _check_pair(F: HolomorphicHeatFunction, G: HolomorphicHeatFunction):
    if F.basis is not G.basis and not (
        F.basis.rs.same_as(G.basis.rs) and F.basis.weights == G.basis.weights
    ):
        raise ValueError("functions live on different bases")
    if not math.isclose(F.t, G.t, rel_tol=1e-15, abs_tol=0.0):
        raise ValueError(f"mismatched times t={F.t:g} and t={G.t:g}")


def holo_heat_transform(basis: JacobiBasis, f, t: float, z):
    """``H(t) f(z)`` at complex point(s) ``z``."""
    return HolomorphicHeatFunction.from_function(basis, f, t)(z)


def ht_inner_product(F: HolomorphicHeatFunction, G: HolomorphicHeatFunction, t: float | None = None) -> complex:
    _check_pair(F, G)
    if t is not None and not math.isclose(t, F.t, rel_tol=1e-15):
        raise ValueError(f"functions were built at t={F.t:g}, not t={t:g}")
    b = F.basis
    # split e^{2 t theta} between the factors so round-off-level spectra cannot overflow
    grow = np.exp(F.t * b.theta)
    return complex(np.sum(b.r * (F.spectrum * grow) * (G.spectrum * grow).conj()))


def _spectrum_of(basis: JacobiBasis, f) -> np.ndarray:
    if isinstance(f, HolomorphicHeatFunction):
        return f.spectrum
    return basis.transform(f)


def translation_matrix(basis: JacobiBasis, spectrum, X, Y) -> np.ndarray:
    """``tau_{i X[k]} f(Y[j])`` as a ``(len(X), len(Y))`` matrix, given ``f_hat``."""
    EX = basis.evaluate_R(-1j * np.atleast_2d(np.asarray(X, dtype=float)))
    EY = basis.evaluate_R(np.atleast_2d(np.asarray(Y, dtype=float)))
    return (EX * (basis.r * np.asarray(spectrum))) @ EY.T


def generalized_translation(basis: JacobiBasis, f, x, y) -> complex:
    """``tau_{ix} f(y) = sum r_lam f_hat(lam) R_lam(y) R_lam(-ix)`` for real points ``x, y``.

    Warns when the terms ``|r_lam f_hat(lam)| e^{|lam| |x|}`` on the outer shell
    are not small against the largest term, i.e. when the truncated growth
    condition is not visibly satisfied at this ``|x|``.
    """
    spec = _spectrum_of(basis, f)
    x = np.asarray(x, dtype=float)
    size = np.abs(basis.r * spec) * np.exp(basis.norms * np.linalg.norm(x))
    outer = basis.norms > 0.9 * basis.max_shell
    if size.max() > 0 and outer.any() and size[outer].max() > 1e-3 * size.max():
        warnings.warn(
            f"spectral terms do not decay on the outer shell at |x|={np.linalg.norm(x):.3g}",
            RuntimeWarning,
            stacklevel=2,
        )
    return complex(translation_matrix(basis, spec, x[None, :], np.asarray(y, dtype=float)[None, :])[0, 0])


def reproducing_kernel(ev: HeatKernelEvaluator, t: float, z, w):
    """``K_t(z, w) = Gamma_m(w, conj z, 2t)``."""
    if not t > 0:
        raise ValueError("t must be positive")
    return kernel_eval(ev, np.asarray(w, dtype=complex), np.conj(np.asarray(z, dtype=complex)), 2 * t).value


@dataclass(frozen=True)
class TorusCrosscheck:
    spectral: complex
    gauss_hermite: complex
    half_line: complex

    @property
    def error(self) -> float:
        scale = 1.0 + abs(self.spectral)
        return max(abs(self.gauss_hermite - self.spectral), abs(self.half_line - self.spectral)) / scale


def classical_torus_crosscheck(
    F: HolomorphicHeatFunction, G: HolomorphicHeatFunction, hermite_order: int | None = None
) -> TorusCrosscheck:
    """``<F, G>_{H_t}`` as a Gaussian-weighted double integral, for rank one and ``m = 0``.

    The outer integral over ``a = R`` of ``int_{A_0} tau_{ix} F(y) conj G(y) dy``
    against ``(8 pi t)^{-1/2} e^{-x^2/(8t)}`` is computed twice: with
    Gauss-Hermite nodes on the whole line, and as ``|W|`` times an adaptive
    integral over the positive half line.

    ``hermite_order`` defaults to 64, raised when needed so that the nodes
    reach the shifted Gaussian peak ``4 t |lam|`` of the highest active mode.
    """
    _check_pair(F, G)
    b = F.basis
    rs = b.rs
    if rs.rank != 1 or any(v != 0 for v in rs.multiplicities.values()):
        raise ValueError("the Gaussian double integral is available for rank one with m = 0 only")
    t = F.t
    # modes at round-off level would be amplified by cosh(|lam| x); keep the active spectrum
    a = np.abs(b.r * F.spectrum)
    active = a > 1e-13 * a.max() if a.max() > 0 else np.zeros(len(b), dtype=bool)
    if not active.any():
        return TorusCrosscheck(0j, 0j, 0j)
    R_active = lambda pts: b.evaluate_R(pts, rows=active)  # noqa: E731
    coef = (b.r * F.spectrum)[active]
    degree = float(np.max(b.norms[active]))
    rule = GaussRule(rs, order=int(48 + 2 * float(np.max(b.norms))))
    Gy = np.conj(G(rule.nodes.astype(complex)))
    inner_y = R_active(rule.nodes.astype(complex)).T @ (rule.weights * Gy)

    def inner(xs):
        EX = R_active(-1j * np.asarray(xs, dtype=float).reshape(-1, 1))
        return EX @ (coef * inner_y)

    if hermite_order is None:
        hermite_order = max(64, int(math.ceil((degree * math.sqrt(2 * t) + 7) ** 2 / 2)))
    s, wts = np.polynomial.hermite.hermgauss(hermite_order)
    gh = complex(np.sum(wts * inner(math.sqrt(8 * t) * s)) / math.sqrt(math.pi))

    # the integrand is bounded by e^{|lam| x - x^2/(8t)}, centred at 4 t |lam| with width ~ sqrt(4t)
    x_max = 4 * t * degree + 14 * math.sqrt(8 * t)
    gauss = lambda x: math.exp(-x * x / (8 * t)) / math.sqrt(8 * math.pi * t)  # noqa: E731
    parts = []
    for part in (np.real, np.imag):
        val, _ = integrate.quad(
            lambda x: float(part(inner([x])[0])) * gauss(x), 0.0, x_max, epsabs=1e-13, epsrel=1e-12, limit=400
        )
        parts.append(val)
    half = rs.order * complex(*parts)
    return TorusCrosscheck(ht_inner_product(F, G), gh, half)
