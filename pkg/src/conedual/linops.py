"""Dense linear operators, bilinear pairings, and the complex-to-real embedding.

Operators are plain dense matrices.  Each operator knows the pairing of its
domain and codomain so that ``adjoint_apply`` satisfies the identity
``<A x, y>_Y == <x, A^T y>_X`` exactly, including under weighted-quadrature
pairings where the adjoint matrix is ``W_X^-1 A^T W_Y`` rather than the bare
transpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PairingSpec",
    "EUCLIDEAN",
    "euclidean",
    "weighted_quadrature",
    "complex_real_part",
    "pairing",
    "pairing_norm",
    "OperatorSpec",
    "apply",
    "adjoint_apply",
    "adjoint_matrix",
    "ComplexEmbedding",
    "complex_embed",
    "AdjointCheckReport",
    "adjoint_identity_check",
]

_PAIRING_KINDS = ("euclidean_dot", "weighted_quadrature", "complex_real_part")


def _as_vector(v, dim=None, name="vector"):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    return arr


@dataclass(frozen=True)
class PairingSpec:
    """A bilinear symmetric pairing on a coordinate space.

    ``euclidean_dot`` and ``complex_real_part`` are both the plain dot
    product (the latter acts on real embeddings of complex vectors and is
    kept as a distinct tag for reporting).  ``weighted_quadrature`` is
    ``<u, v> = sum_i w_i u_i v_i`` with strictly positive weights, the
    discrete stand-in for an integral pairing.
    """

    kind: str = "euclidean_dot"
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _PAIRING_KINDS:
            raise ValueError(f"unknown pairing kind {self.kind!r}")
        if self.kind == "weighted_quadrature":
            if self.weights is None:
                raise ValueError("weighted_quadrature pairing requires weights")
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 1 or not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ValueError("quadrature weights must be a finite positive vector")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise ValueError(f"pairing kind {self.kind!r} does not take weights")

    def weight_vector(self, dim):
        if self.kind == "weighted_quadrature":
            if self.weights.shape[0] != dim:
                raise ValueError(
                    f"pairing weights have dimension {self.weights.shape[0]}, expected {dim}"
                )
            return self.weights
        return np.ones(dim)


EUCLIDEAN = PairingSpec()


def euclidean():
    return EUCLIDEAN


def weighted_quadrature(weights):
    return PairingSpec(kind="weighted_quadrature", weights=np.asarray(weights, dtype=float))


def complex_real_part():
    return PairingSpec(kind="complex_real_part")


def pairing(p, u, v):
    """Evaluate ``<u, v>`` under pairing ``p``.

    The product ``u * v`` is formed before any weighting so the value is
    exactly symmetric in its arguments.
    """
    u = _as_vector(u, name="u")
    v = _as_vector(v, dim=u.shape[0], name="v")
    prod = u * v
    if p is None or p.kind != "weighted_quadrature":
        return float(prod.sum())
    return float((prod * p.weight_vector(u.shape[0])).sum())


def pairing_norm(p, u):
    """``sqrt(<u, u>)`` under pairing ``p``."""
    return float(np.sqrt(max(pairing(p, u, u), 0.0)))


@dataclass(frozen=True)
class OperatorSpec:
    """A dense linear map together with the pairings of its two spaces.

    ``adjoint_override`` lets callers install an independently constructed
    adjoint matrix (for example one discretized from a separate formula);
    ``adjoint_identity_check`` then measures how far it is from the exact
    pairing adjoint.  When absent, the exact adjoint is used.
    """

    matrix: np.ndarray
    label: str = ""
    pairing_domain: PairingSpec = field(default_factory=PairingSpec)
    pairing_codomain: PairingSpec = field(default_factory=PairingSpec)
    adjoint_override: np.ndarray | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise ValueError(f"operator matrix must be two-dimensional, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator matrix contains non-finite entries")
        object.__setattr__(self, "matrix", m)
        if self.adjoint_override is not None:
            a = np.asarray(self.adjoint_override, dtype=float)
            if a.shape != (m.shape[1], m.shape[0]):
                raise ValueError(
                    f"adjoint override has shape {a.shape}, expected {(m.shape[1], m.shape[0])}"
                )
            object.__setattr__(self, "adjoint_override", a)

    @property
    def codomain_dim(self):
        return self.matrix.shape[0]

    @property
    def domain_dim(self):
        return self.matrix.shape[1]


def apply(op, x):
    """``y = A x``."""
    x = _as_vector(x, dim=op.domain_dim, name="x")
    return op.matrix @ x


def adjoint_matrix(op):
    """The matrix of the pairing adjoint, ``W_X^-1 A^T W_Y``.

    For plain dot-product pairings this is the transpose.  The override, if
    installed, takes precedence.
    """
    if op.adjoint_override is not None:
        return op.adjoint_override
    at = op.matrix.T
    wx = op.pairing_domain.weight_vector(op.domain_dim)
    wy = op.pairing_codomain.weight_vector(op.codomain_dim)
    if op.pairing_domain.kind != "weighted_quadrature" and op.pairing_codomain.kind != "weighted_quadrature":
        return at
    return (at * wy[np.newaxis, :]) / wx[:, np.newaxis]


def adjoint_apply(op, y):
    """``x = A^T y`` with the adjoint taken against the declared pairings."""
    y = _as_vector(y, dim=op.codomain_dim, name="y")
    return adjoint_matrix(op) @ y


# ---------------------------------------------------------------------------
# Complex-to-real embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexEmbedding:
    """The realification C^m -> R^(2m), z -> (Re z_1, Im z_1, ..., Re z_m, Im z_m).

    A complex matrix entry a = p + qi becomes the 2x2 block [[p, -q], [q, p]]
    and conjugate transposition becomes block transposition.  The real-part
    pairing Re(z, w) = Re(sum conj(z_i) w_i) equals the Euclidean dot product
    of the embeddings.
    """

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("complex dimension must be at least 1")

    @property
    def real_dim(self):
        return 2 * self.m

    def embed_vector(self, z):
        z = np.asarray(z, dtype=complex)
        if z.ndim != 1 or z.shape[0] != self.m:
            raise ValueError(f"expected complex vector of dimension {self.m}")
        out = np.empty(2 * self.m)
        out[0::2] = z.real
        out[1::2] = z.imag
        return out

    def lift_vector(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.shape[0] != 2 * self.m:
            raise ValueError(f"expected real vector of dimension {2 * self.m}")
        return x[0::2] + 1j * x[1::2]

    def embed_matrix(self, a):
        a = np.asarray(a, dtype=complex)
        if a.ndim != 2:
            raise ValueError("expected a complex matrix")
        rows, cols = a.shape
        out = np.zeros((2 * rows, 2 * cols))
        out[0::2, 0::2] = a.real
        out[0::2, 1::2] = -a.imag
        out[1::2, 0::2] = a.imag
        out[1::2, 1::2] = a.real
        return out


def complex_embed(m):
    """Embedding descriptor for ``C^m``."""
    return ComplexEmbedding(m)


# ---------------------------------------------------------------------------
# Adjoint identity diagnostics
# ---------------------------------------------------------------------------


@dataclass
class AdjointCheckReport:
    max_residual: float
    n_samples: int
    tol: float
    passed: bool


def adjoint_identity_check(op, p_X=None, p_Y=None, n_samples=100, tol=1e-10, seed=0):
    """Sample ``|<A x, y>_Y - <x, A^T y>_X|`` and compare against ``tol``.

    With the exact pairing adjoint the residual is at machine-precision
    level; a discrepancy flags an inconsistent ``adjoint_override`` or a
    mismatched pairing.
    """
    p_X = op.pairing_domain if p_X is None else p_X
    p_Y = op.pairing_codomain if p_Y is None else p_Y
    rng = np.random.default_rng(seed)
    at = adjoint_matrix(op)
    worst = 0.0
    for _ in range(n_samples):
        x = rng.standard_normal(op.domain_dim)
        y = rng.standard_normal(op.codomain_dim)
        lhs = pairing(p_Y, op.matrix @ x, y)
        rhs = pairing(p_X, x, at @ y)
        worst = max(worst, abs(lhs - rhs))
    return AdjointCheckReport(max_residual=worst, n_samples=n_samples, tol=float(tol), passed=worst <= tol)
