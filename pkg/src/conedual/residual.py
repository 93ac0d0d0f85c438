"""Residual minimization over cone images and separating vectors.

The residual problem is ``min <z, z>  over  z in {A x - b : x in S}``.  With
``S = {G u : u >= 0}`` this is the nonnegative least-squares problem
``min ||(A G) u - b||_W^2`` over ``u >= 0``; weighted pairings are folded in
by row scaling so the active-set solver always works in Euclidean geometry.

When the minimum value is positive, the minimizer ``gamma`` generates a
strict separator between ``b`` and the image cone: ``alpha = gamma - b``
satisfies ``<alpha, b> < 0 <= <alpha, A x>`` for every ``x in S``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import generators
from .linops import pairing
from .nnls import nnls

__all__ = ["ResidualResult", "residual_minimize", "variational_check", "separating_vector"]

_SLICE_PENALTY = 1e8


@dataclass
class ResidualResult:
    """Outcome of a residual minimization.

    ``gamma`` lies in the image cone ``C_A = {A x : x in S}``,
    ``coefficients`` is the nonnegative preimage with
    ``gamma = A G coefficients``, and ``value = <gamma - b, gamma - b>``.
    """

    gamma: np.ndarray
    coefficients: np.ndarray
    value: float
    iterations: int
    kkt_residual: float


def residual_minimize(A, b, S, p=None, tol=1e-10):
    """Minimize ``<A x - b, A x - b>`` over ``x in S``.

    Parameters
    ----------
    A : OperatorSpec
    b : (dim Y,) array
    S : ConeSpec
        Finitely generated; slice constraints are honored via penalty rows
        and re-verified on the result.
    p : PairingSpec, optional
        Codomain pairing; defaults to the operator's declared one.
    tol : float
        Stationarity tolerance for the active-set iteration.

    The minimum always exists: the objective is coercive on the closed
    polyhedral image cone.
    """
    p = A.pairing_codomain if p is None else p
    b = np.asarray(b, dtype=float)
    if b.shape != (A.codomain_dim,):
        raise ValueError(f"b has shape {b.shape}, expected ({A.codomain_dim},)")
    g = generators(S)
    if g.shape[0] != A.domain_dim:
        raise ValueError(f"cone dimension {g.shape[0]} does not match operator domain {A.domain_dim}")

    m_img = A.matrix @ g
    sqrt_w = np.sqrt(p.weight_vector(A.codomain_dim))
    rows = m_img * sqrt_w[:, np.newaxis]
    rhs = b * sqrt_w
    if S.kind == "slice":
        pen = np.sqrt(_SLICE_PENALTY) * (S.normals.T @ g)
        rows = np.vstack([rows, pen])
        rhs = np.concatenate([rhs, np.zeros(pen.shape[0])])

    result = nnls(rows, rhs, kkt_tol=tol)
    u = result.u
    gamma = m_img @ u
    diff = gamma - b
    value = pairing(p, diff, diff)
    return ResidualResult(
        gamma=gamma,
        coefficients=u,
        value=float(value),
        iterations=result.iterations,
        kkt_residual=result.kkt_residual,
    )


def variational_check(gamma, b, samples, p=None, tol=1e-8):
    """Certify minimality of ``gamma`` over the sampled hull.

    ``gamma`` minimizes ``<x - b, x - b>`` over a convex set containing the
    samples if and only if ``<gamma - b, x - gamma> >= 0`` for every member
    ``x``; this checks the inequality at each sample with slack ``tol``.
    """
    gamma = np.asarray(gamma, dtype=float)
    b = np.asarray(b, dtype=float)
    direction = gamma - b
    for x in samples:
        if pairing(p, direction, np.asarray(x, dtype=float) - gamma) < -tol:
            return False
    return True


def separating_vector(A, b, S, p=None, tol=1e-8):
    """A vector ``alpha`` with ``<alpha, b> < 0 <= <A^T alpha, x>`` on ``S``.

    Returns ``None`` when ``b`` lies in the image cone within tolerance
    (residual value at most ``tol**2``), since no separator exists there.
    The returned ``alpha = gamma - b`` additionally satisfies
    ``<alpha, b> = -<alpha, alpha>``.
    """
    res = residual_minimize(A, b, S, p=p, tol=1e-12)
    if res.value <= tol * tol:
        return None
    return res.gamma - b
