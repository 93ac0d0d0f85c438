"""Seeded instance generators for batch classification and testing.

Each generator takes a ``numpy.random.Generator`` so suites are exactly
reproducible from a single seed, and instances are independent across
indices (seed, index) for order-insensitive parallel runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cones import contains, dual, generators, orthant, wedge
from .duality import ConicProblem
from .errors import IndeterminateAlternative
from .farkas import farkas_primal
from .linops import OperatorSpec, pairing
from .residual import residual_minimize, separating_vector

__all__ = [
    "random_cone",
    "random_farkas_instance",
    "feasible_farkas_instance",
    "infeasible_farkas_instance",
    "interior_optimum_problem",
    "classify_instance",
    "farkas_batch",
    "interior_batch",
]


def random_cone(rng, dim, family="mixed"):
    """An orthant or a wedge product on ``dim`` coordinates.

    Wedges need an even ambient dimension; odd ``dim`` always yields the
    orthant.
    """
    if family == "wedge" and dim % 2 == 1:
        raise ValueError("wedge cones need an even ambient dimension")
    if family == "orthant" or dim % 2 == 1 or (family == "mixed" and rng.random() < 0.5):
        return orthant(dim)
    return wedge(rng.uniform(0.15, math.pi / 2 - 0.15, size=dim // 2))


def random_farkas_instance(rng, dim_range=(2, 6)):
    """Operator, right-hand side, and cone with U[-1, 1] entries."""
    dim_x = int(rng.integers(dim_range[0], dim_range[1] + 1))
    dim_y = int(rng.integers(dim_range[0], dim_range[1] + 1))
    a = OperatorSpec(matrix=rng.uniform(-1.0, 1.0, size=(dim_y, dim_x)))
    b = rng.uniform(-1.0, 1.0, size=dim_y)
    cone = random_cone(rng, dim_x)
    return a, b, cone


def feasible_farkas_instance(rng, dim_range=(2, 6)):
    """``b := A x0`` with ``x0`` a random cone member, so the equality
    system is solvable by construction."""
    a, _, cone = random_farkas_instance(rng, dim_range)
    g = generators(cone)
    x0 = g @ rng.uniform(0.2, 1.0, size=g.shape[1])
    return a, a.matrix @ x0, cone, x0


def infeasible_farkas_instance(rng, dim_range=(2, 6), shift=2.0, max_tries=200):
    """Shift a feasible right-hand side out of the image cone along a
    verified separator direction of a base instance.

    Draws base instances until one admits a separator (operators whose
    image cone covers the whole space admit none), then returns
    ``b := A x0 - shift * d`` with ``d`` the unit separator, which is
    provably outside the image cone.
    """
    for _ in range(max_tries):
        a, b_probe, cone = random_farkas_instance(rng, dim_range)
        d = separating_vector(a, b_probe, cone, tol=1e-8)
        if d is None:
            continue
        d = d / np.linalg.norm(d)
        g = generators(cone)
        x0 = g @ rng.uniform(0.2, 1.0, size=g.shape[1])
        b = a.matrix @ x0 - shift * d
        # d separates: <d, A x> >= 0 on the cone while <d, b> <= -shift.
        if pairing(None, d, b) <= -shift / 2:
            return a, b, cone, d
    raise RuntimeError("failed to construct an infeasible instance")


def interior_optimum_problem(rng, dim, family="mixed"):
    """A conic pair whose unique optima are interior on both sides.

    Take an invertible ``A``, an interior ``x0 = G u0`` (``u0 > 0``), and
    set ``b := A x0``; every feasible point satisfies
    ``<c, x> = <y0, A x - b> + <y0, b>`` for ``c := A^T y0`` with interior
    ``y0``, so the unique primal optimum is ``x0`` and, symmetrically, the
    unique dual optimum is ``y0``.
    """
    cone_s = random_cone(rng, dim, family)
    cone_t = random_cone(rng, dim, family)
    for _ in range(100):
        mat = rng.uniform(-1.0, 1.0, size=(dim, dim))
        if abs(np.linalg.det(mat)) > 1e-2:
            break
    g_s = generators(cone_s)
    g_t = generators(cone_t)
    x0 = g_s @ rng.uniform(0.5, 1.5, size=g_s.shape[1])
    y0 = g_t @ rng.uniform(0.5, 1.5, size=g_t.shape[1])
    a = OperatorSpec(matrix=mat)
    pb = ConicProblem(A=a, b=mat @ x0, c=mat.T @ y0, S=cone_s, T=cone_t)
    return pb, x0, y0


# ---------------------------------------------------------------------------
# Batch classification
# ---------------------------------------------------------------------------


@dataclass
class InstanceOutcome:
    index: int
    solution_verified: bool
    certificate_verified: bool
    indeterminate: bool


def classify_instance(a, b, cone, tol=1e-8):
    """Search both branches of the alternative independently.

    The solution branch comes from the nonnegative least-squares preimage,
    the certificate branch from the separating vector; each is verified
    from scratch.  At most one may verify on any instance.
    """
    solution_ok = False
    certificate_ok = False
    indeterminate = False
    dual_cone = dual(cone)

    res = residual_minimize(a, b, cone, tol=1e-12)
    if res.value <= tol * tol:
        x = generators(cone) @ res.coefficients
        eq = float(np.linalg.norm(a.matrix @ x - b))
        solution_ok = eq <= tol and contains(cone, x, tol)

    alpha = separating_vector(a, b, cone, tol=tol)
    if alpha is not None:
        alpha = alpha / np.linalg.norm(alpha)
        neg = -alpha  # certificate of the separating system carries -A
        image = -a.matrix.T @ neg
        certificate_ok = contains(dual_cone, image, tol) and pairing(None, neg, -b) < -tol

    if not solution_ok and not certificate_ok:
        try:
            farkas_primal(a, b, cone, tol=tol)
        except IndeterminateAlternative:
            indeterminate = True
    return solution_ok, certificate_ok, indeterminate


def farkas_batch(seed, count, tol=1e-8, dim_range=(2, 6)):
    """Classify ``count`` random instances; returns aggregate counts."""
    rows = []
    for index in range(count):
        rng = np.random.default_rng((seed, index))
        a, b, cone = random_farkas_instance(rng, dim_range)
        solution_ok, certificate_ok, indeterminate = classify_instance(a, b, cone, tol)
        rows.append(
            InstanceOutcome(
                index=index,
                solution_verified=solution_ok,
                certificate_verified=certificate_ok,
                indeterminate=indeterminate,
            )
        )
    return rows


def summarize_batch(rows):
    return {
        "instances": len(rows),
        "solutions": sum(r.solution_verified and not r.certificate_verified for r in rows),
        "certificates": sum(r.certificate_verified and not r.solution_verified for r in rows),
        "both_verified": sum(r.solution_verified and r.certificate_verified for r in rows),
        "indeterminate": sum(r.indeterminate for r in rows),
        "neither": sum(
            not (r.solution_verified or r.certificate_verified or r.indeterminate) for r in rows
        ),
    }


def interior_batch(seed, count, tol=1e-8, dim=3):
    """Run the interior-optima verification on constructed instances;
    returns (passes, violations, gaps)."""
    from .duality import verify_interior_optima
    from .errors import TheoremViolation

    passes = 0
    violations = 0
    gaps = []
    for index in range(count):
        rng = np.random.default_rng((seed, index))
        pb, _, _ = interior_optimum_problem(rng, dim)
        try:
            report = verify_interior_optima(pb, tol=tol)
        except TheoremViolation:
            violations += 1
            continue
        gaps.append(abs(report.gap))
        if report.flags.systems_solved == (True, True) and abs(report.gap) <= tol:
            passes += 1
    return passes, violations, gaps
