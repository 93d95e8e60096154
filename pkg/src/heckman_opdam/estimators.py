"""scikit-learn style wrappers around the basis, the heat semigroup and the holomorphic transform.

Sampled functions are rows of ``X`` holding the values at the nodes of the
torus grid ``QuadratureGrid(rs, grid)`` (see ``grid_nodes_``).  ``fit`` builds
the Jacobi basis; it ignores ``X`` except for shape validation where a model
is fitted to data.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_points, check_samples, check_time
from .heat import HeatKernelEvaluator
from .innerprod import QuadratureGrid, SampledFunction
from .jacobi import build_basis
from .rootsys import build_root_system

__all__ = ["HeckmanOpdamTransform", "HeatSemigroup", "SegalBargmannTransform"]


class _BasisMixin:
    def _fit_basis(self):
        rs = build_root_system(self.system, self.multiplicities)
        self.basis_ = build_basis(rs, self.max_shell, backend=self.backend)
        self.grid_ = QuadratureGrid(rs, self.grid)
        self.grid_nodes_ = self.grid_.nodes
        self.weights_ = np.array(self.basis_.weights)
        self.n_features_in_ = len(self.grid_)
        return self

    def _sampled(self, X):
        X = check_samples(X, len(self.grid_))
        return [SampledFunction(self.grid_, row) for row in X]


class HeckmanOpdamTransform(_BasisMixin, TransformerMixin, BaseEstimator):
    """Map grid samples to the spectrum ``f_hat(lam)`` and back.

    Parameters
    ----------
    system : str
        Root system label (``A1``, ``BC1``, ``A2``, ``B2``, ``G2``, ``BC2``).
    multiplicities : float, sequence or mapping
        Multiplicity per root class.
    max_shell : float
        Largest ``|lam|`` in the basis.
    grid : int
        Torus grid resolution per dimension for the samples.
    backend : str
        Inner-product backend for the basis construction.
    """

    def __init__(self, system="A1", multiplicities=2.0, max_shell=10.0, grid=64, backend="auto"):
        self.system = system
        self.multiplicities = multiplicities
        self.max_shell = max_shell
        self.grid = grid
        self.backend = backend

    def fit(self, X=None, y=None):
        self._fit_basis()
        if X is not None:
            check_samples(X, len(self.grid_))
        return self

    def transform(self, X):
        check_is_fitted(self, "basis_")
        return np.array([self.basis_.transform(f) for f in self._sampled(X)])

    def inverse_transform(self, S):
        check_is_fitted(self, "basis_")
        S = np.atleast_2d(np.asarray(S, dtype=complex))
        if S.shape[1] != len(self.basis_):
            raise ValueError(f"expected {len(self.basis_)} spectral coefficients per row")
        return np.array([self.basis_.synthesize(self.grid_, self.basis_.r * s).values for s in S])


class HeatSemigroup(_BasisMixin, TransformerMixin, BaseEstimator):
    """``H(t)`` on grid samples; ``fit`` on one sampled function enables ``predict`` at points.

    Parameters are those of :class:`HeckmanOpdamTransform` plus ``t`` and the
    truncation tolerance ``eps``.
    """

    def __init__(self, system="A1", multiplicities=2.0, max_shell=20.0, grid=64, backend="auto", t=0.1, eps=1e-8):
        self.system = system
        self.multiplicities = multiplicities
        self.max_shell = max_shell
        self.grid = grid
        self.backend = backend
        self.t = t
        self.eps = eps

    def fit(self, X=None, y=None):
        check_time(self.t, allow_zero=True)
        self._fit_basis()
        self.evaluator_ = HeatKernelEvaluator(self.basis_, tolerance=self.eps)
        if X is not None:
            (f,) = self._sampled(np.atleast_2d(np.asarray(X))[:1])
            self.spectrum_ = np.exp(-self.basis_.theta * self.t) * self.basis_.transform(f)
        return self

    def transform(self, X):
        check_is_fitted(self, "evaluator_")
        if self.t == 0:
            return check_samples(X, len(self.grid_))
        damp = np.exp(-self.basis_.theta * self.t)
        out = []
        for f in self._sampled(X):
            out.append(self.basis_.synthesize(self.grid_, self.basis_.r * damp * self.basis_.transform(f)).values)
        return np.array(out)

    def predict(self, points):
        """``H(t) f`` at real points for the function given to ``fit``."""
        check_is_fitted(self, "spectrum_")
        P = check_points(points, self.basis_.rs.rank)
        return self.basis_.evaluate_R(P) @ (self.basis_.r * self.spectrum_)


class SegalBargmannTransform(HeatSemigroup):
    """Holomorphic extension ``z -> H(t) f(z)``; ``predict`` accepts complex points."""

    def __init__(self, system="A1", multiplicities=2.0, max_shell=20.0, grid=64, backend="auto", t=0.1, eps=1e-8):
        super().__init__(system, multiplicities, max_shell, grid, backend, t, eps)

    def fit(self, X=None, y=None):
        check_time(self.t)
        return super().fit(X, y)

    def predict(self, points):
        check_is_fitted(self, "spectrum_")
        Z = check_points(points, self.basis_.rs.rank, allow_complex=True)
        return self.basis_.evaluate_R(Z) @ (self.basis_.r * self.spectrum_)
