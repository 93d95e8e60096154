"""Classical reference values that share no code with the polynomial pipeline.

Three-term recurrences for Gegenbauer and Jacobi polynomials, the periodic
heat kernel of a circle, Wallis-type weight masses and central finite
differences.  The functions take plain floats and arrays; root-system data is
passed in explicitly where needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "ClassicalPolyTable",
    "gegenbauer_eval",
    "gegenbauer_normalized",
    "chebyshev_u_normalized",
    "chebyshev_t_eval",
    "jacobi_eval",
    "jacobi_normalized",
    "circle_heat_kernel",
    "folded_circle_kernel",
    "wallis_mass",
    "bc1_mass",
    "finite_difference_apply",
    "gradient",
    "hessian_trace",
    "pointwise_Lm",
    "pointwise_cherednik",
]


# ---------------------------------------------------------------------------
# rank-one polynomial families


def gegenbauer_eval(mu: float, n: int, u):
    """``C_n^mu(u)`` by the three-term recurrence."""
    if not mu > 0:
        raise ValueError("Gegenbauer parameter must be positive; use chebyshev_t_eval at mu = 0")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    u = np.asarray(u, dtype=float)
    prev, cur = np.ones_like(u), 2 * mu * u
    if n == 0:
        return prev
    for k in range(2, n + 1):
        prev, cur = cur, (2 * (k + mu - 1) * u * cur - (k + 2 * mu - 2) * prev) / k
    return cur


def gegenbauer_normalized(mu: float, n: int, u):
    """``C_n^mu(u) / C_n^mu(1)``; the Chebyshev-T limit at ``mu = 0``."""
    if mu == 0:
        return chebyshev_t_eval(n, u)
    return gegenbauer_eval(mu, n, u) / gegenbauer_eval(mu, n, 1.0)


def chebyshev_t_eval(n: int, u):
    u = np.asarray(u, dtype=float)
    prev, cur = np.ones_like(u), u.copy()
    if n == 0:
        return prev
    for _ in range(2, n + 1):
        prev, cur = cur, 2 * u * cur - prev
    return cur


def chebyshev_u_normalized(n: int, theta):
    """``sin((n+1) theta) / ((n+1) sin theta)`` with the removable singularities filled in."""
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    small = np.abs(s) < 1e-12
    safe = np.where(small, 1.0, s)
    out = np.sin((n + 1) * theta) / ((n + 1) * safe)
    # at theta = k pi the limit is cos((n+1) k pi)/cos(k pi)
    limit = np.cos((n + 1) * theta) / np.where(small, np.cos(theta), 1.0)
    return np.where(small, limit, out)


def jacobi_eval(a: float, b: float, n: int, u):
    """``P_n^{(a, b)}(u)`` by the three-term recurrence."""
    if a <= -1 or b <= -1:
        raise ValueError("Jacobi parameters must exceed -1")
    u = np.asarray(u, dtype=float)
    prev = np.ones_like(u)
    if n == 0:
        return prev
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2) * u
    for k in range(2, n + 1):
        c = 2 * k + a + b
        a1 = 2 * k * (k + a + b) * (c - 2)
        a2 = (c - 1) * (a * a - b * b)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (k + a - 1) * (k + b - 1) * c
        prev, cur = cur, ((a2 + a3 * u) * cur - a4 * prev) / a1
    return cur


def jacobi_normalized(a: float, b: float, n: int, u):
    """``P_n^{(a, b)}(u) / P_n^{(a, b)}(1)``, with ``P_n(1) = binom(n + a, n)``."""
    at_one = math.exp(gammaln(n + a + 1) - gammaln(n + 1) - gammaln(a + 1))
    return jacobi_eval(a, b, n, u) / at_one


@dataclass(frozen=True)
class ClassicalPolyTable:
    """Values of a classical family for degrees ``0..n_max``.

    ``family`` is ``"chebyshev-U"``, ``"gegenbauer"`` (``params = (mu,)``) or
    ``"jacobi"`` (``params = (a, b)``).
    """

    family: str
    params: tuple = ()
    n_max: int = 20

    def __call__(self, n: int, u):
        if not 0 <= n <= self.n_max:
            raise ValueError(f"degree {n} outside 0..{self.n_max}")
        if self.family == "chebyshev-U":
            return gegenbauer_eval(1.0, n, u)
        if self.family == "gegenbauer":
            return gegenbauer_eval(self.params[0], n, u)
        if self.family == "jacobi":
            return jacobi_eval(self.params[0], self.params[1], n, u)
        raise ValueError(f"unknown family {self.family!r}")

    def value_at_one(self, n: int) -> float:
        """Closed form at ``u = 1``."""
        if self.family == "chebyshev-U":
            return float(n + 1)
        if self.family == "gegenbauer":
            mu = self.params[0]
            return math.exp(gammaln(n + 2 * mu) - gammaln(n + 1) - gammaln(2 * mu))
        a = self.params[0]
        return math.exp(gammaln(n + a + 1) - gammaln(n + 1) - gammaln(a + 1))


# ---------------------------------------------------------------------------
# circle heat kernel


def circle_heat_kernel(x, y, t: float, period: float, method: str = "theta"):
    """Heat kernel of ``d^2/dx^2`` on a circle of length ``period``.

    ``method="theta"`` sums ``(1/L) sum_n exp(-(2 pi n/L)^2 t) e^{2 pi i n (x-y)/L}``;
    ``method="images"`` sums the Gaussians ``(4 pi t)^{-1/2} exp(-(x-y-kL)^2/(4t))``.
    Both are truncated where the next term is below ``1e-17`` of the leading one.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    L = float(period)
    if method == "theta":
        q = (2 * math.pi / L) ** 2 * t
        nmax = int(math.ceil(math.sqrt(40.0 / q))) + 1
        n = np.arange(1, nmax + 1)
        phase = 2 * math.pi / L * d[..., None] * n
        return (1.0 + 2.0 * np.sum(np.exp(-q * n**2) * np.cos(phase), axis=-1)) / L
    if method == "images":
        kmax = int(math.ceil(math.sqrt(160.0 * t) / L)) + 2
        k = np.arange(-kmax, kmax + 1)
        r = d[..., None] - k * L
        return np.sum(np.exp(-(r**2) / (4 * t)), axis=-1) / math.sqrt(4 * math.pi * t)
    raise ValueError(f"unknown method {method!r}")


def folded_circle_kernel(x, y, t: float, period: float, method: str = "theta"):
    """Kernel for even functions: ``k(x - y) + k(x + y)``."""
    return circle_heat_kernel(x, y, t, period, method) + circle_heat_kernel(x, -np.asarray(y), t, period, method)


# ---------------------------------------------------------------------------
# weight masses


def wallis_mass(m: float) -> float:
    """``int_0^pi (2 sin u)^m du = 2^m sqrt(pi) Gamma((m+1)/2) / Gamma(m/2 + 1)``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return math.exp(m * math.log(2.0) + 0.5 * math.log(math.pi) + gammaln((m + 1) / 2) - gammaln(m / 2 + 1))


def bc1_mass(m_short: float, m_long: float) -> float:
    """``int_0^{pi/2} |2 sin x|^{m_s} |2 sin 2x|^{m_l} dx`` via the Beta function."""
    if m_short < 0 or m_long < 0:
        raise ValueError("multiplicities must be nonnegative")
    p, q = (m_short + m_long + 1) / 2, (m_long + 1) / 2
    log_beta = gammaln(p) + gammaln(q) - gammaln(p + q)
    return 0.5 * math.exp((m_short + 2 * m_long) * math.log(2.0) + log_beta)


# ---------------------------------------------------------------------------
# finite differences

# central stencils, eighth order
_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
_OFFSETS = np.arange(-4, 5)


def finite_difference_apply(func, x, direction, order: int = 1, step: float = 1e-3):
    """Directional derivative of order 1 or 2 of ``func`` at ``x`` (eighth-order stencil)."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(direction, dtype=float)
    stencil = {1: _D1, 2: _D2}.get(order)
    if stencil is None:
        raise ValueError("order must be 1 or 2")
    pts = x[None, :] + step * _OFFSETS[:, None] * v[None, :]
    vals = np.asarray(func(pts))
    return np.tensordot(stencil, vals, axes=(0, 0)) / step**order


def gradient(func, x, step: float = 1e-3) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.array([finite_difference_apply(func, x, e, 1, step) for e in np.eye(len(x))])


def hessian_trace(func, x, step: float = 1e-3):
    x = np.asarray(x, dtype=float)
    return sum(finite_difference_apply(func, x, e, 2, step) for e in np.eye(len(x)))


def pointwise_Lm(func, x, roots, mults, step: float = 1e-3):
    """``Delta f + sum_a m_a cot<a, x> <a, grad f>`` at an interior point."""
    x = np.asarray(x, dtype=float)
    g = gradient(func, x, step)
    out = hessian_trace(func, x, step)
    for a, m in zip(np.asarray(roots, dtype=float), mults):
        out = out + m * (math.cos(a @ x) / math.sin(a @ x)) * (a @ g)
    return out


def pointwise_cherednik(func, x, xi, roots, mults, step: float = 1e-3):
    """``-i d_xi f + sum_a m_a <a, xi> (f(x) - f(s_a x)) / (1 - e^{-2i<a,x>}) - <rho, xi> f(x)``."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    roots = np.asarray(roots, dtype=float)
    rho = 0.5 * np.asarray(mults, dtype=float) @ roots
    fx = complex(np.asarray(func(x[None, :]))[0])
    out = -1j * finite_difference_apply(func, x, xi, 1, step) - (rho @ xi) * fx
    for a, m in zip(roots, mults):
        sx = x - 2 * (a @ x) / (a @ a) * a
        fs = complex(np.asarray(func(sx[None, :]))[0])
        out = out + m * (a @ xi) * (fx - fs) / (1 - np.exp(-2j * (a @ x)))
    return out
