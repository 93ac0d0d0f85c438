"""Finitely generated convex cones: membership, interiors, dual cones.

Supported families and their closed-form duals:

==========  =============================================  =======================
kind        set                                            dual
==========  =============================================  =======================
orthant     ``{v : v >= 0}``                               itself
wedge       product of planar sectors ``|arg z_i| <= a_i``  wedge with ``pi/2 - a_i``
generated   ``{G u : u >= 0}``                             (not computed)
product     cartesian product of factor cones              product of factor duals
slice       base cone intersected with ``N^T v = 0``       base dual + span of N
==========  =============================================  =======================

Wedges live on consecutive coordinate pairs ``(x_i, y_i)`` of the ambient
space, matching the real embedding of complex vectors.  Every cone exposes a
generator matrix ``G`` with ``cone = {G u : u >= 0}`` (intersected with the
slice constraints when present); membership for the structured kinds uses
exact closed-form distances, and falls back to a nonnegative least-squares
projection onto the generators otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .nnls import nnls

__all__ = [
    "ConeSpec",
    "orthant",
    "wedge",
    "generated",
    "product",
    "slice_cone",
    "distance",
    "contains",
    "interior_contains",
    "dual",
    "generators",
    "interior_point",
    "sample_members",
    "cone_to_dict",
    "cone_from_dict",
]

DEFAULT_TOL = 1e-9

_KINDS = ("orthant", "wedge", "generated", "product", "slice")


@dataclass(frozen=True)
class ConeSpec:
    """A finitely generated convex cone.  Immutable; all operations are pure."""

    kind: str
    dim: int
    half_angles: tuple = ()
    gens: np.ndarray | None = None
    factors: tuple = ()
    base: "ConeSpec | None" = None
    normals: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("ambient dimension must be positive")


def orthant(n):
    """The nonnegative orthant in ``R^n``."""
    if n < 1:
        raise ValueError("orthant dimension must be positive")
    return ConeSpec(kind="orthant", dim=int(n))


def wedge(half_angles):
    """Product of planar sectors ``{(x, y) : |atan2(y, x)| <= a}``.

    ``half_angles`` is one angle per coordinate pair, each strictly inside
    ``(0, pi/2)``; the ambient dimension is twice the number of angles.
    """
    if np.isscalar(half_angles):
        half_angles = (float(half_angles),)
    angles = tuple(float(a) for a in np.atleast_1d(half_angles))
    if not angles:
        raise ValueError("at least one half-angle is required")
    for i, a in enumerate(angles):
        if not (0.0 < a < math.pi / 2):
            raise ValueError(f"half_angles[{i}] = {a} outside the open interval (0, pi/2)")
    return ConeSpec(kind="wedge", dim=2 * len(angles), half_angles=angles)


def generated(gens):
    """The cone ``{G u : u >= 0}`` for a matrix of generator columns."""
    g = np.asarray(gens, dtype=float)
    if g.ndim != 2 or g.shape[1] == 0:
        raise ValueError("generator matrix must have at least one column")
    if not np.all(np.isfinite(g)):
        raise ValueError("generator matrix contains non-finite entries")
    norms = np.linalg.norm(g, axis=0)
    if np.any(norms == 0):
        raise ValueError("generator columns must be nonzero")
    return ConeSpec(kind="generated", dim=g.shape[0], gens=g)


def product(*factors):
    """Cartesian product of cones; generators are the block-diagonal union."""
    if len(factors) < 2:
        raise ValueError("a product needs at least two factors")
    return ConeSpec(kind="product", dim=sum(f.dim for f in factors), factors=tuple(factors))


def slice_cone(base, normals):
    """``base`` intersected with the subspace ``{v : N^T v = 0}``.

    ``normals`` holds the constraint normals as columns of an
    ``ambient_dim x q`` matrix.
    """
    n = np.asarray(normals, dtype=float)
    if n.ndim == 1:
        n = n[:, np.newaxis]
    if n.shape[0] != base.dim:
        raise ValueError(f"normals have dimension {n.shape[0]}, expected {base.dim}")
    if not np.all(np.isfinite(n)):
        raise ValueError("slice normals contain non-finite entries")
    if np.any(np.linalg.norm(n, axis=0) == 0):
        raise ValueError("slice normals must be nonzero")
    if base.kind == "slice":
        return slice_cone(base.base, np.hstack([base.normals, n]))
    return ConeSpec(kind="slice", dim=base.dim, base=base, normals=n)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def generators(cone):
    """Generator matrix ``G`` with ``cone = {G u : u >= 0}``.

    For slices the base generators are returned; the equality constraints
    are carried separately in ``cone.normals``.
    """
    if cone.kind == "orthant":
        return np.eye(cone.dim)
    if cone.kind == "wedge":
        blocks = []
        for a in cone.half_angles:
            blocks.append(np.array([[math.cos(a), math.cos(a)], [math.sin(a), -math.sin(a)]]))
        g = np.zeros((cone.dim, cone.dim))
        for i, blk in enumerate(blocks):
            g[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = blk
        return g
    if cone.kind == "generated":
        return cone.gens.copy()
    if cone.kind == "product":
        mats = [generators(f) for f in cone.factors]
        rows = sum(m.shape[0] for m in mats)
        cols = sum(m.shape[1] for m in mats)
        g = np.zeros((rows, cols))
        r = c = 0
        for m in mats:
            g[r : r + m.shape[0], c : c + m.shape[1]] = m
            r += m.shape[0]
            c += m.shape[1]
        return g
    if cone.kind == "slice":
        return generators(cone.base)
    raise ValueError(f"unknown cone kind {cone.kind!r}")


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def _check_vector(cone, v):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != cone.dim:
        raise ValueError(f"vector has shape {arr.shape}, expected ({cone.dim},)")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector contains non-finite entries")
    return arr


def _wedge_block_distance(x, y, a):
    r = math.hypot(x, y)
    if r == 0.0:
        return 0.0
    theta = abs(math.atan2(y, x))
    if theta <= a:
        return 0.0
    excess = theta - a
    if excess >= math.pi / 2:
        return r
    return r * math.sin(excess)


def _slice_residual(cone, v):
    # Distance from v to the subspace ker(N^T): norm of the projection
    # onto span(N).
    n = cone.normals
    coef, *_ = np.linalg.lstsq(n, v, rcond=None)
    return float(np.linalg.norm(n @ coef))


def distance(cone, v):
    """Euclidean distance from ``v`` to the cone.

    Exact for orthants, wedges, and their products; for generated cones it
    is the residual of the nonnegative least-squares projection onto the
    generators.  For slices the base distance and the subspace residual are
    combined in quadrature, a two-sided approximation of the true distance
    to the intersection (exact whenever one of the two parts vanishes).
    """
    v = _check_vector(cone, v)
    if cone.kind == "orthant":
        return float(np.linalg.norm(np.minimum(v, 0.0)))
    if cone.kind == "wedge":
        total = 0.0
        for i, a in enumerate(cone.half_angles):
            total += _wedge_block_distance(v[2 * i], v[2 * i + 1], a) ** 2
        return math.sqrt(total)
    if cone.kind == "product":
        total = 0.0
        offset = 0
        for f in cone.factors:
            total += distance(f, v[offset : offset + f.dim]) ** 2
            offset += f.dim
        return math.sqrt(total)
    if cone.kind == "generated":
        return nnls(cone.gens, v, kkt_tol=1e-12).residual_norm
    if cone.kind == "slice":
        return math.hypot(distance(cone.base, v), _slice_residual(cone, v))
    raise ValueError(f"unknown cone kind {cone.kind!r}")


def contains(cone, v, tol=DEFAULT_TOL):
    """True iff the distance from ``v`` to the cone is at most ``tol``."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return distance(cone, v) <= tol


def is_solid(cone):
    """Whether the cone has nonempty interior (relative to the slice
    subspace for slice cones)."""
    if cone.kind in ("orthant", "wedge"):
        return True
    if cone.kind == "product":
        return all(is_solid(f) for f in cone.factors)
    if cone.kind == "generated":
        return np.linalg.matrix_rank(cone.gens) == cone.dim
    if cone.kind == "slice":
        return is_solid(cone.base)
    raise ValueError(f"unknown cone kind {cone.kind!r}")


def interior_contains(cone, v, tol=1e-6):
    """Margin test for interior membership.

    Orthant: every coordinate at least ``tol``.  Wedge: every block has
    radius at least ``tol`` and angular slack at least ``tol``.  Generated
    cones use a scaled cross-polytope probe (``v +- tol*sqrt(n)*e_i`` all
    members), which certifies that the ``tol``-ball lies inside the cone.
    Slice cones test the relative interior: base margin plus the equality
    residual within ``tol``.

    Raises ``ValueError`` for cones without interior (the solidity
    assumption fails there, so the test is undefined).
    """
    v = _check_vector(cone, v)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if not is_solid(cone):
        raise ValueError("cone is not solid: interior membership is undefined")
    if cone.kind == "orthant":
        return bool(np.min(v) >= tol)
    if cone.kind == "wedge":
        for i, a in enumerate(cone.half_angles):
            x, y = v[2 * i], v[2 * i + 1]
            r = math.hypot(x, y)
            if r < tol:
                return False
            if abs(math.atan2(y, x)) > a - tol:
                return False
        return True
    if cone.kind == "product":
        offset = 0
        for f in cone.factors:
            if not interior_contains(f, v[offset : offset + f.dim], tol):
                return False
            offset += f.dim
        return True
    if cone.kind == "generated":
        step = tol * math.sqrt(cone.dim)
        inner = 1e-12 * (1.0 + float(np.linalg.norm(v)))
        for i in range(cone.dim):
            e = np.zeros(cone.dim)
            e[i] = step
            if distance(cone, v + e) > inner or distance(cone, v - e) > inner:
                return False
        return True
    if cone.kind == "slice":
        if _slice_residual(cone, v) > tol:
            return False
        return interior_contains(cone.base, v, tol)
    raise ValueError(f"unknown cone kind {cone.kind!r}")


# ---------------------------------------------------------------------------
# Dual cones
# ---------------------------------------------------------------------------


def dual(cone):
    """The positive dual cone ``{u : <u, v> >= 0 for all v in cone}``.

    Computed in closed form per family; the dual of a wedge with
    half-angle ``a`` is the wedge with half-angle ``pi/2 - a``.  Duals of
    bare ``generated`` cones are not supported.
    """
    if cone.kind == "orthant":
        return cone
    if cone.kind == "wedge":
        return wedge(tuple(math.pi / 2 - a for a in cone.half_angles))
    if cone.kind == "product":
        return product(*(dual(f) for f in cone.factors))
    if cone.kind == "slice":
        base_dual = dual(cone.base)
        return generated(np.hstack([generators(base_dual), cone.normals, -cone.normals]))
    raise ValueError(f"dual cone of kind {cone.kind!r} is not supported")


# ---------------------------------------------------------------------------
# Interior points and sampling
# ---------------------------------------------------------------------------


def interior_point(cone):
    """A canonical strict member: the normalized generator barycenter,
    projected onto the slice subspace when equality constraints are
    present."""
    g = generators(cone)
    p = g.mean(axis=1)
    if cone.kind == "slice":
        n = cone.normals
        coef, *_ = np.linalg.lstsq(n, p, rcond=None)
        p = p - n @ coef
    return p


def sample_members(cone, count, rng, scale=1.0):
    """Random members ``G u`` with exponential nonnegative coefficients.

    Slice cones use rejection: base samples are projected onto the
    equality subspace and kept only if they remain in the base cone.
    """
    g = generators(cone)
    out = np.empty((count, cone.dim))
    if cone.kind != "slice":
        coeffs = rng.exponential(scale=scale, size=(count, g.shape[1]))
        return coeffs @ g.T
    n = cone.normals
    proj = np.eye(cone.dim) - n @ np.linalg.pinv(n)
    filled = 0
    attempts = 0
    while filled < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("slice-cone sampling failed to find enough members")
        u = rng.exponential(scale=scale, size=g.shape[1])
        v = proj @ (g @ u)
        if contains(cone.base, v, 1e-9):
            out[filled] = v
            filled += 1
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def cone_to_dict(cone):
    d = {"kind": cone.kind, "dim": cone.dim}
    if cone.kind == "wedge":
        d["half_angles"] = list(cone.half_angles)
    elif cone.kind == "generated":
        d["generators"] = cone.gens.T.tolist()
    elif cone.kind == "product":
        d["factors"] = [cone_to_dict(f) for f in cone.factors]
    elif cone.kind == "slice":
        d["base"] = cone_to_dict(cone.base)
        d["slice_normals"] = cone.normals.T.tolist()
    return d


def cone_from_dict(d):
    """Inverse of :func:`cone_to_dict`.  ``generators`` and
    ``slice_normals`` are lists of vectors."""
    kind = d.get("kind")
    if kind == "orthant":
        return orthant(d["dim"])
    if kind == "wedge":
        c = wedge(d["half_angles"])
        if c.dim != d.get("dim", c.dim):
            raise ValueError("wedge dim inconsistent with half_angles")
        return c
    if kind == "generated":
        return generated(np.asarray(d["generators"], dtype=float).T)
    if kind == "product":
        return product(*(cone_from_dict(f) for f in d["factors"]))
    if kind == "slice":
        return slice_cone(cone_from_dict(d["base"]), np.asarray(d["slice_normals"], dtype=float).T)
    raise ValueError(f"unknown cone kind {kind!r}")
