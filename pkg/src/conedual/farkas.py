"""Constructive Farkas alternatives with independently verifiable outcomes.

For the primal pair the alternative is between

* system (I):  ``A x = b`` with ``x in S``, and
* system (II): ``-A^T alpha in S*`` with ``<alpha, -b> < 0``,

and exactly one of the two admits a solution.  The decision is driven by the
residual minimizer ``gamma`` over the image cone: a near-zero residual value
yields a solution of (I) from the nonnegative preimage, a clearly positive
one yields the certificate ``alpha = b - gamma`` of (II).  The dual-side
alternative swaps the roles of the operator and its adjoint; there the
certificate is ``x = gamma - c`` and satisfies ``A x in T*`` with
``<x, c> < 0``.  (The two sign conventions differ because system (II)
carries ``-A`` while its dual counterpart carries ``A``; both were frozen
against a brute-force search over small instances, see the tests.)

Residual values inside ``(tol^2, 10 tol^2)`` are reported as indeterminate
rather than forced into a branch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import contains, dual, generators
from .errors import IndeterminateAlternative
from .linops import adjoint_apply, apply, pairing, pairing_norm
from .residual import residual_minimize

__all__ = ["FarkasOutcome", "farkas_primal", "farkas_dual", "verify_outcome", "outcome_to_dict"]

INDETERMINATE_FACTOR = 10.0


@dataclass
class FarkasOutcome:
    """Tagged outcome of a Farkas decision.

    Exactly one of ``point`` (solution branch) and ``certificate``
    (certificate branch) is populated.  Residuals are recorded at
    construction time; ``verify_outcome`` recomputes them from scratch.
    """

    branch: str  # "solution" | "certificate"
    side: str  # "primal" | "dual"
    point: np.ndarray | None = None
    certificate: np.ndarray | None = None
    eq_residual: float = 0.0
    cone_residual: float = 0.0
    strict_margin: float = 0.0
    residual_value: float = 0.0

    @property
    def residuals(self):
        return {
            "eq_residual": self.eq_residual,
            "cone_residual": self.cone_residual,
            "strict_margin": self.strict_margin,
        }


def _dual_membership_residual(cone, v):
    """Distance from ``v`` to the positive dual of ``cone`` (Euclidean
    representation; coincides with the pairing dual for orthants under any
    positive weights)."""
    from .cones import distance

    return distance(dual(cone), v)


def _classify(value, tol):
    if value <= tol * tol:
        return "solution"
    if value < INDETERMINATE_FACTOR * tol * tol:
        raise IndeterminateAlternative(
            f"residual value {value:.3e} falls in the indeterminate band for tol={tol:.1e}",
            value=value,
            tol=tol,
        )
    return "certificate"


def farkas_primal(A, b, S, p=None, tol=1e-8):
    """Decide ``{A x = b, x in S}`` against its separating system.

    Solution branch: ``x = G u`` from the nonnegative least-squares
    preimage, with ``||A x - b|| <= tol``.  Certificate branch:
    ``alpha = b - gamma`` normalized to unit length, satisfying
    ``-A^T alpha in S*`` and ``<alpha, -b> <= -strict_margin < 0``.
    """
    p = A.pairing_codomain if p is None else p
    b = np.asarray(b, dtype=float)
    res = residual_minimize(A, b, S, p=p, tol=1e-12)
    branch = _classify(res.value, tol)
    if branch == "solution":
        x = generators(S) @ res.coefficients
        return FarkasOutcome(
            branch="solution",
            side="primal",
            point=x,
            eq_residual=pairing_norm(p, apply(A, x) - b),
            residual_value=res.value,
        )
    alpha = b - res.gamma
    alpha = alpha / pairing_norm(p, alpha)
    margin = -pairing(p, alpha, -b)
    cone_res = _dual_membership_residual(S, -adjoint_apply(A, alpha))
    return FarkasOutcome(
        branch="certificate",
        side="primal",
        certificate=alpha,
        cone_residual=cone_res,
        strict_margin=margin,
        residual_value=res.value,
    )


def farkas_dual(A, c, T, p=None, tol=1e-8):
    """Decide ``{A^T y = c, y in T}`` against its separating system.

    Solution branch: ``y in T`` with ``||A^T y - c|| <= tol``.  Certificate
    branch: ``x = gamma - c`` (unit length) with ``A x in T*`` and
    ``<x, c> <= -strict_margin < 0``.
    """
    p = A.pairing_domain if p is None else p
    c = np.asarray(c, dtype=float)
    adj = _adjoint_operator(A)
    res = residual_minimize(adj, c, T, p=p, tol=1e-12)
    branch = _classify(res.value, tol)
    if branch == "solution":
        y = generators(T) @ res.coefficients
        return FarkasOutcome(
            branch="solution",
            side="dual",
            point=y,
            eq_residual=pairing_norm(p, adjoint_apply(A, y) - c),
            residual_value=res.value,
        )
    x = res.gamma - c
    x = x / pairing_norm(p, x)
    margin = -pairing(p, x, c)
    cone_res = _dual_membership_residual(T, apply(A, x))
    return FarkasOutcome(
        branch="certificate",
        side="dual",
        certificate=x,
        cone_residual=cone_res,
        strict_margin=margin,
        residual_value=res.value,
    )


def _adjoint_operator(A):
    from .linops import OperatorSpec, adjoint_matrix

    return OperatorSpec(
        matrix=adjoint_matrix(A),
        label=f"{A.label}^T" if A.label else "adjoint",
        pairing_domain=A.pairing_codomain,
        pairing_codomain=A.pairing_domain,
    )


def verify_outcome(outcome, A, rhs, cone, dual_cone=None, tol=1e-8):
    """Re-check the populated branch from the raw problem data.

    Never consults solver internals: equality residuals, cone memberships,
    and strict margins are recomputed from ``A``, ``rhs`` and the cones.
    For certificate branches the strict inequality must clear ``tol``.
    """
    rhs = np.asarray(rhs, dtype=float)
    if dual_cone is None:
        dual_cone = dual(cone)
    if outcome.side == "primal":
        p_eq = A.pairing_codomain
        if outcome.branch == "solution":
            if outcome.point is None:
                return False
            eq = pairing_norm(p_eq, apply(A, outcome.point) - rhs)
            return eq <= tol and contains(cone, outcome.point, tol)
        if outcome.certificate is None:
            return False
        alpha = outcome.certificate
        image = -adjoint_apply(A, alpha)
        margin = -pairing(p_eq, alpha, -rhs)
        return contains(dual_cone, image, tol) and margin > tol
    if outcome.side == "dual":
        p_eq = A.pairing_domain
        if outcome.branch == "solution":
            if outcome.point is None:
                return False
            eq = pairing_norm(p_eq, adjoint_apply(A, outcome.point) - rhs)
            return eq <= tol and contains(cone, outcome.point, tol)
        if outcome.certificate is None:
            return False
        x = outcome.certificate
        image = apply(A, x)
        margin = -pairing(p_eq, x, rhs)
        return contains(dual_cone, image, tol) and margin > tol
    raise ValueError(f"unknown outcome side {outcome.side!r}")


def outcome_to_dict(outcome):
    return {
        "branch": outcome.branch,
        "side": outcome.side,
        "point": None if outcome.point is None else outcome.point.tolist(),
        "cert": None if outcome.certificate is None else outcome.certificate.tolist(),
        "residuals": {k: float(v) for k, v in outcome.residuals.items()},
    }
