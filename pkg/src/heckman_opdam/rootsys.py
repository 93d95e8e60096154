"""Root systems of rank <= 2, their Weyl groups, weight lattices and alcoves.

Conventions
-----------
The weight lattice is ``Lambda = {lam : <lam, a>/<a, a> in Z for all roots a}``,
which is twice the usual weight lattice of a reduced system.  Weights are
stored by integer coordinates with respect to the basis ``omega_1, ..., omega_r``
dual to the functionals ``lam -> lam_b = <lam, b>/<b, b>`` where ``b`` runs over
the *lattice simple roots* (the simple root ``a``, or ``2a`` when ``2a`` is a
root).  With this choice the coordinate ``k`` of a weight equals the index it
occupies in the discrete Fourier transform of the torus ``a / pi Q^vee``.

Cartesian embeddings (fixed, so file formats are deterministic):

======  ==========================================================
A1      a = sqrt(2)
BC1     a = 1 (short), 2a = 2 (long)
A2      orthonormal coordinates of the plane sum(x) = 0 in R^3,
        a1 = (sqrt 2, 0), a2 = (-sqrt(2)/2, sqrt(6)/2)
B2      short e1, e2; long e1 - e2, e1 + e2
G2      short a1 = (1, 0); long a2 = (-3/2, sqrt(3)/2)
BC2     short e1, e2; middle e1 - e2, e1 + e2; long 2 e1, 2 e2
======  ==========================================================
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "RootSystem",
    "RootSystemError",
    "Weight",
    "build_root_system",
    "rho",
    "weyl_orbit",
    "dominant_weights_below",
    "dominant_weights_in_ball",
    "dominant_weight_array",
    "fold_to_alcove",
    "alcove_points",
    "MULTIPLICITY_CLASSES",
    "WEYL_ORDERS",
]

_S2 = math.sqrt(2.0)
_S3 = math.sqrt(3.0)
_S6 = math.sqrt(6.0)

# positive roots, class label per root, indivisible simple roots
_TABLES = {
    "A1": (
        [(_S2,)],
        ["short"],
        [(_S2,)],
    ),
    "BC1": (
        [(1.0,), (2.0,)],
        ["short", "long"],
        [(1.0,)],
    ),
    "A2": (
        [(_S2, 0.0), (-_S2 / 2, _S6 / 2), (_S2 / 2, _S6 / 2)],
        ["short"] * 3,
        [(_S2, 0.0), (-_S2 / 2, _S6 / 2)],
    ),
    "B2": (
        [(1.0, 0.0), (0.0, 1.0), (1.0, -1.0), (1.0, 1.0)],
        ["short", "short", "long", "long"],
        [(1.0, -1.0), (0.0, 1.0)],
    ),
    "G2": (
        [
            (1.0, 0.0),
            (-1.5, _S3 / 2),
            (-0.5, _S3 / 2),
            (0.5, _S3 / 2),
            (1.5, _S3 / 2),
            (0.0, _S3),
        ],
        ["short", "long", "short", "short", "long", "long"],
        [(1.0, 0.0), (-1.5, _S3 / 2)],
    ),
    "BC2": (
        [
            (1.0, 0.0),
            (0.0, 1.0),
            (1.0, -1.0),
            (1.0, 1.0),
            (2.0, 0.0),
            (0.0, 2.0),
        ],
        ["short", "short", "middle", "middle", "long", "long"],
        [(1.0, -1.0), (0.0, 1.0)],
    ),
}

MULTIPLICITY_CLASSES = {
    "A1": ("short",),
    "BC1": ("short", "long"),
    "A2": ("short",),
    "B2": ("short", "long"),
    "G2": ("short", "long"),
    "BC2": ("short", "middle", "long"),
}

WEYL_ORDERS = {"A1": 2, "BC1": 2, "A2": 6, "B2": 8, "G2": 12, "BC2": 8}

_TOL = 1e-9


class RootSystemError(ValueError):
    """Invalid root system label or multiplicity data."""


@dataclass(frozen=True)
class Weight:
    """An element of the weight lattice.

    Equality and hashing use the integer coordinates only.
    """

    coords: tuple[int, ...]
    cartesian: tuple[float, ...]

    def __eq__(self, other):
        if isinstance(other, Weight):
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.cartesian))


def _reflection(a: np.ndarray) -> np.ndarray:
    return np.eye(len(a)) - 2.0 * np.outer(a, a) / (a @ a)


class RootSystem:
    """Root system data together with lattice and alcove geometry.

    Instances are treated as immutable; the arrays they expose are read-only.
    Use :func:`build_root_system` to construct one.
    """

    def __init__(self, name: str, multiplicities: Mapping[str, float]):
        if name not in _TABLES:
            raise RootSystemError(
                f"unknown root system {name!r}; expected one of {sorted(_TABLES)}"
            )
        roots, classes, simple = _TABLES[name]
        expected = MULTIPLICITY_CLASSES[name]
        mult = dict(multiplicities)
        if set(mult) != set(expected):
            raise RootSystemError(
                f"{name} needs multiplicities for classes {list(expected)}, got {sorted(mult)}"
            )
        for key, value in mult.items():
            if not np.isfinite(value) or value < 0:
                raise RootSystemError(f"multiplicity {key}={value} must be a nonnegative real")

        self.name = name
        self.multiplicities = {k: float(mult[k]) for k in expected}
        self.positive_roots = _frozen(np.array(roots, dtype=float))
        self.root_classes = tuple(classes)
        self.simple_roots = _frozen(np.array(simple, dtype=float))
        self.rank = self.positive_roots.shape[1]

        mult_per_root = [self.multiplicities[c] for c in classes]
        self.root_multiplicities = _frozen(np.array(mult_per_root))
        # m_{a/2}, zero when a/2 is not a root
        half = []
        for a in self.positive_roots:
            j = self._root_index(a / 2)
            half.append(0.0 if j is None else mult_per_root[j])
        self.half_root_multiplicities = _frozen(np.array(half))

        lattice = []
        for a in self.simple_roots:
            lattice.append(2 * a if self._root_index(2 * a) is not None else a)
        self.lattice_simple_roots = _frozen(np.array(lattice))
        # dual basis to lam -> <lam, b>/<b, b>
        functionals = self.lattice_simple_roots / np.sum(self.lattice_simple_roots**2, axis=1)[:, None]
        self.fundamental_weights = _frozen(np.linalg.inv(functionals).T)
        # basis of the coroot lattice Q^vee: coroots of the lattice simple roots
        self.coroot_basis = _frozen(
            2 * self.lattice_simple_roots / np.sum(self.lattice_simple_roots**2, axis=1)[:, None]
        )

        self.weyl_elements = tuple(_frozen(w) for w in self._generate_weyl())
        self.weyl_coord_actions = tuple(_frozen(self._coord_action(w)) for w in self.weyl_elements)
        self.simple_reflections = tuple(_frozen(_reflection(a)) for a in self.simple_roots)
        self.simple_coord_actions = tuple(
            _frozen(self._coord_action(s)) for s in self.simple_reflections
        )
        # integer coordinates of 2a and the functional lam -> lam_a, per positive root
        self.double_root_coords = _frozen(
            np.array([self.coords_of(2 * a) for a in self.positive_roots], dtype=np.int64)
        )
        self._root_functionals = self.fundamental_weights @ (
            self.positive_roots / np.sum(self.positive_roots**2, axis=1)[:, None]
        ).T
        self.alcove_vertices = _frozen(self._alcove_vertices())

    # -- construction helpers ------------------------------------------------

    def _root_index(self, v: np.ndarray):
        for i, a in enumerate(self.positive_roots):
            if np.allclose(a, v, atol=_TOL):
                return i
        return None

    def _generate_weyl(self) -> list[np.ndarray]:
        gens = [_reflection(a) for a in self.simple_roots]
        key = lambda m: tuple(np.round(m, 8).ravel())  # noqa: E731
        found = {key(np.eye(self.rank)): np.eye(self.rank)}
        frontier = [np.eye(self.rank)]
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    ws = s @ w
                    k = key(ws)
                    if k not in found:
                        found[k] = ws
                        nxt.append(ws)
            frontier = nxt
        # deterministic order: identity first, then by word length of discovery
        return list(found.values())

    def _coord_action(self, w: np.ndarray) -> np.ndarray:
        functionals = self.lattice_simple_roots / np.sum(self.lattice_simple_roots**2, axis=1)[:, None]
        a = self.fundamental_weights @ w.T @ functionals.T
        ai = np.rint(a)
        if not np.allclose(a, ai, atol=1e-8):
            raise RootSystemError("Weyl group does not preserve the weight lattice")
        return ai.astype(np.int64)

    def _alcove_vertices(self) -> np.ndarray:
        # constraints <a, x> >= 0 and <a, x> <= pi for each positive root
        normals = []
        offsets = []
        for a in self.positive_roots:
            normals += [a, a]
            offsets += [0.0, math.pi]
        verts = []
        for idx in itertools.combinations(range(len(normals)), self.rank):
            A = np.array([normals[i] for i in idx])
            if abs(np.linalg.det(A)) < 1e-12:
                continue
            x = np.linalg.solve(A, np.array([offsets[i] for i in idx]))
            if self.in_alcove(x, tol=1e-9) and not any(np.allclose(x, v, atol=1e-9) for v in verts):
                verts.append(x)
        verts.sort(key=lambda v: (round(float(np.linalg.norm(v)), 9), tuple(np.round(v, 9))))
        return np.array(verts)

    # -- lattice coordinates -------------------------------------------------

    def cartesian(self, coords) -> np.ndarray:
        """Cartesian vector(s) of weight coordinates (shape ``(..., rank)``)."""
        return np.asarray(coords, dtype=float) @ self.fundamental_weights

    def coords_of(self, vec) -> tuple[int, ...]:
        """Integer coordinates of a Cartesian lattice vector; raises if ``vec`` is not in Lambda."""
        functionals = self.lattice_simple_roots / np.sum(self.lattice_simple_roots**2, axis=1)[:, None]
        c = functionals @ np.asarray(vec, dtype=float)
        ci = np.rint(c)
        if not np.allclose(c, ci, atol=1e-8):
            raise RootSystemError(f"{vec} is not in the weight lattice")
        return tuple(int(v) for v in ci)

    def weight(self, coords: Sequence[int]) -> Weight:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise RootSystemError(f"weight needs {self.rank} coordinates, got {len(coords)}")
        return Weight(coords, tuple(float(v) for v in self.cartesian(coords)))

    def root_coordinates(self, coords) -> np.ndarray:
        """Values ``lam_a = <lam, a>/<a, a>`` for every positive root (integers for weights)."""
        return np.asarray(coords, dtype=float) @ self._root_functionals

    def root_values(self, vec) -> np.ndarray:
        """``<x, a>/<a, a>`` per positive root for a Cartesian vector ``x`` (e.g. rho)."""
        roots = self.positive_roots
        return roots @ np.asarray(vec, dtype=float) / np.sum(roots**2, axis=1)

    def is_dominant(self, coords) -> bool:
        return all(c >= 0 for c in coords)

    def norm(self, coords) -> float:
        return float(np.linalg.norm(self.cartesian(coords)))

    def inner(self, u, v) -> float:
        return float(self.cartesian(u) @ self.cartesian(v))

    def sort_key(self, coords):
        """Total order refining dominance: ``(|mu|, coords)`` with ``|mu|`` rounded."""
        return (round(self.norm(coords), 9), tuple(coords))

    def simple_root_expansion(self, coords) -> np.ndarray:
        """Coefficients of a weight in the basis of indivisible simple roots."""
        return np.linalg.solve(self.simple_roots.T, self.cartesian(coords))

    def dominates(self, lam, mu) -> bool:
        """``mu <= lam`` in the dominance order, i.e. ``lam - mu`` lies in Q^+."""
        diff = np.asarray(lam) - np.asarray(mu)
        c = self.simple_root_expansion(diff)
        ci = np.rint(c)
        return bool(np.allclose(c, ci, atol=1e-8) and np.all(ci >= 0))

    # -- geometry ------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.weyl_elements)

    @property
    def cell_volume(self) -> float:
        """Volume of the torus ``a / pi Q^vee``."""
        return float(math.pi**self.rank * abs(np.linalg.det(self.coroot_basis)))

    @property
    def alcove_volume(self) -> float:
        v = self.alcove_vertices
        if self.rank == 1:
            return float(abs(v[1, 0] - v[0, 0]))
        # rank-2 alcoves are triangles
        e1, e2 = v[1] - v[0], v[2] - v[0]
        return float(abs(e1[0] * e2[1] - e1[1] * e2[0]) / 2)

    def in_alcove(self, x, tol: float = 1e-12) -> bool:
        p = self.positive_roots @ np.asarray(x, dtype=float)
        return bool(np.all(p >= -tol) and np.all(p <= math.pi + tol))

    def rho(self) -> np.ndarray:
        return 0.5 * (self.root_multiplicities @ self.positive_roots)

    def theta(self, coords) -> float:
        """Eigenvalue ``<lam, lam + 2 rho>``."""
        lam = self.cartesian(coords)
        return float(lam @ (lam + 2 * self.rho()))

    def spec(self) -> dict:
        return {"type": self.name, "multiplicities": dict(self.multiplicities)}

    def same_as(self, other: "RootSystem") -> bool:
        return self.name == other.name and self.multiplicities == other.multiplicities

    def __repr__(self):
        mult = ", ".join(f"{k}={v:g}" for k, v in self.multiplicities.items())
        return f"RootSystem({self.name}, {mult})"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


def build_root_system(name: str, multiplicities) -> RootSystem:
    """Instantiate a supported root system.

    Args:
        name: one of ``A1, BC1, A2, B2, G2, BC2``.
        multiplicities: mapping class -> value, or a sequence of values in the
            class order of :data:`MULTIPLICITY_CLASSES` (a bare number is
            accepted for single-class types).
    """
    if name not in MULTIPLICITY_CLASSES:
        raise RootSystemError(f"unknown root system {name!r}; expected one of {sorted(_TABLES)}")
    classes = MULTIPLICITY_CLASSES[name]
    if isinstance(multiplicities, Mapping):
        mult = multiplicities
    else:
        values = np.atleast_1d(np.asarray(multiplicities, dtype=float)).tolist()
        if len(values) != len(classes):
            raise RootSystemError(
                f"{name} needs {len(classes)} multiplicities {list(classes)}, got {len(values)}"
            )
        mult = dict(zip(classes, values))
    return RootSystem(name, mult)


def rho(rs: RootSystem) -> np.ndarray:
    """Half the multiplicity-weighted sum of positive roots."""
    return rs.rho()


def weyl_orbit(rs: RootSystem, lam) -> set[tuple[int, ...]]:
    """The W-orbit of a weight, as a set of coordinate tuples."""
    c = np.asarray(getattr(lam, "coords", lam), dtype=np.int64)
    return {tuple(int(v) for v in c @ a) for a in rs.weyl_coord_actions}


def dominant_weights_below(rs: RootSystem, lam) -> list[tuple[int, ...]]:
    """All dominant ``mu`` with ``mu <= lam``, sorted by ``(|mu|, coords)``.

    Candidates are scanned over dominant weights with ``|mu| <= |lam|``, which
    contains every dominated dominant weight.
    """
    lam = tuple(int(v) for v in getattr(lam, "coords", lam))
    if not rs.is_dominant(lam):
        raise RootSystemError(f"{lam} is not dominant")
    out = [mu for mu in dominant_weights_in_ball(rs, rs.norm(lam)) if rs.dominates(lam, mu)]
    return out


def dominant_weight_array(rs: RootSystem, radius: float, inner: float = -1.0) -> np.ndarray:
    """Coordinates of dominant weights with ``inner < |mu| <= radius`` as an integer array,
    sorted by ``(|mu|, coords)``."""
    # |mu| >= c_k * |omega_k-part| via projection on the dual basis
    dual = np.linalg.inv(rs.fundamental_weights).T  # rows: dual vectors to omega_k
    bounds = [int(math.floor(radius * np.linalg.norm(d) + 1e-9)) + 1 for d in dual]
    c = np.indices(bounds).reshape(rs.rank, -1).T
    n = np.linalg.norm(c @ rs.fundamental_weights, axis=1)
    keep = (n <= radius + 1e-9) & (n > inner + 1e-9)
    c, n = c[keep], np.round(n[keep], 9)
    order = np.lexsort(tuple(c[:, k] for k in range(rs.rank - 1, -1, -1)) + (n,))
    return c[order]


def dominant_weights_in_ball(rs: RootSystem, radius: float) -> list[tuple[int, ...]]:
    """Dominant weights with ``|mu| <= radius``, sorted by ``(|mu|, coords)``."""
    return [tuple(int(v) for v in row) for row in dominant_weight_array(rs, radius)]


def alcove_points(rs: RootSystem, n: int, interior: bool = False) -> np.ndarray:
    """About ``n`` points of a uniform grid on the closed alcove (at least ``n``).

    Rank one uses equispaced points; rank two a barycentric lattice on the
    triangle.  ``interior=True`` shrinks the grid away from the walls.
    """
    verts = rs.alcove_vertices
    if rs.rank == 1:
        s = np.linspace(0.0, 1.0, n)
        if interior:
            s = (np.arange(n) + 0.5) / n
        return verts[0] + s[:, None] * (verts[1] - verts[0])
    k = 1
    while (k + 1) * (k + 2) // 2 < n:
        k += 1
    pts = []
    for i in range(k + 1):
        for j in range(k + 1 - i):
            b = np.array([i, j, k - i - j], dtype=float)
            if interior:
                b = (b + 1.0 / 3.0) / (k + 1.0)
            else:
                b = b / k
            pts.append(b @ verts)
    return np.array(pts)


def fold_to_alcove(rs: RootSystem, x, max_iter: int = 10_000) -> np.ndarray:
    """Map a point to its representative in the closed alcove under ``W_aff``."""
    y = np.array(x, dtype=float)
    roots = rs.positive_roots
    norms = np.sum(roots**2, axis=1)
    for _ in range(max_iter):
        p = roots @ y
        low = np.flatnonzero(p < -1e-13)
        if low.size:
            i = low[0]
            y = y - 2 * p[i] / norms[i] * roots[i]
            continue
        high = np.flatnonzero(p > math.pi + 1e-13)
        if high.size:
            i = high[0]
            y = y - 2 * (p[i] - math.pi) / norms[i] * roots[i]
            continue
        return y
    raise RuntimeError("fold_to_alcove did not converge; alcove geometry is inconsistent")
