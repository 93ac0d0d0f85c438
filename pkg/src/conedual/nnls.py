"""Active-set solver for nonnegative least squares.

Solves ``min_u || M u - b ||_2  subject to  u >= 0`` by the classical
passive/active set iteration, with the entering index chosen as the
*smallest* index whose dual value exceeds the tolerance (Bland-style
selection, which rules out cycling on degenerate problems just as it does
for the simplex method).  The subproblems on the passive set are solved by
``numpy.linalg.lstsq``, so rank-deficient passive sets are handled.

Termination is exact on dense desk-scale problems: every outer iteration
either strictly decreases the residual or grows the passive set, and the
inner loop strictly shrinks it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverFailure

__all__ = ["NNLSResult", "nnls"]


@dataclass
class NNLSResult:
    u: np.ndarray
    residual_norm: float
    iterations: int
    kkt_residual: float


def nnls(M, b, kkt_tol=1e-10, max_iter=None):
    """Minimize ``||M u - b||_2`` over ``u >= 0``.

    Parameters
    ----------
    M : (m, k) array
    b : (m,) array
    kkt_tol : float
        Stationarity tolerance on the dual vector ``M^T (b - M u)``.
    max_iter : int, optional
        Outer-iteration cap; defaults to ``100 * (k + m)``.

    Returns
    -------
    NNLSResult
        ``u`` is exactly nonnegative.  ``kkt_residual`` is the largest
        positive entry of the dual vector at the returned point (zero when
        the KKT conditions hold to working precision).

    Raises
    ------
    SolverFailure
        If the iteration cap trips; the best iterate is attached to
        ``detail["u"]``.
    """
    M = np.asarray(M, dtype=float)
    b = np.asarray(b, dtype=float)
    if M.ndim != 2:
        raise ValueError("M must be a matrix")
    if b.ndim != 1 or b.shape[0] != M.shape[0]:
        raise ValueError(f"b has shape {b.shape}, expected ({M.shape[0]},)")
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite entries in NNLS data")

    m, k = M.shape
    if max_iter is None:
        max_iter = 100 * (k + m)

    u = np.zeros(k)
    passive = np.zeros(k, dtype=bool)
    w = M.T @ b  # dual vector at u = 0
    iterations = 0

    while True:
        free = ~passive
        if not np.any(free) or np.max(w[free], initial=-np.inf) <= kkt_tol:
            break
        iterations += 1
        if iterations > max_iter:
            raise SolverFailure(
                "NNLS iteration cap exceeded",
                detail={"u": u, "kkt": float(max(np.max(w[free], initial=0.0), 0.0))},
            )
        # Smallest eligible index enters the passive set.
        j = int(np.flatnonzero(free & (w > kkt_tol))[0])
        passive[j] = True

        while True:
            idx = np.flatnonzero(passive)
            z = np.zeros(k)
            z[idx] = np.linalg.lstsq(M[:, idx], b, rcond=None)[0]
            if np.all(z[idx] > 0):
                u = z
                break
            # Step toward z until the first passive component hits zero.
            blocking = idx[z[idx] <= 0]
            ratios = u[blocking] / (u[blocking] - z[blocking])
            alpha = float(np.min(ratios))
            u = u + alpha * (z - u)
            u[blocking[ratios <= alpha + 1e-15]] = 0.0
            passive &= u > 0.0

        u[~passive] = 0.0
        w = M.T @ (b - M @ u)

    residual = b - M @ u
    free = ~passive
    kkt = max(float(np.max(w[free], initial=0.0)), 0.0)
    return NNLSResult(
        u=u,
        residual_norm=float(np.linalg.norm(residual)),
        iterations=iterations,
        kkt_residual=kkt,
    )
