"""Primal-dual conic pairs, a desk-scale solver, and verification pipelines.

The pair solved here is

    primal:  min <c, x>   s.t.  A x - b in T*,  x in S
    dual:    max <y, b>   s.t.  -A^T y + c in S*,  y in T

Note the orientation: the primal slack lives in the *dual* of the cone that
constrains the dual variable.  Both problems are reduced to standard-form
linear programs through the generator parameterizations ``x = G_S u`` and
``y = G_T v`` (``u, v >= 0``) with the conic constraints rewritten through
the dual cones' generators, and solved by two-phase simplex with Bland's
rule.  Optimal values follow the usual conventions: ``+inf`` for an
infeasible primal, ``-inf`` for an infeasible dual, and the opposite
infinities for unbounded problems.

Two verification pipelines re-check the strong-duality statements:

* ``verify_interior_optima`` -- when a problem's returned optimizer lies in
  the interior of its cone (and the value is finite), the *other* side's
  equality system must be solvable and the duality gap must vanish.
* ``verify_strict_feasibility`` -- when both cones admit strictly feasible
  points whose operator images also stay in the dual cones, boundary
  feasible points exist, and both values are finite, both equality systems
  must be solvable with zero gap.

Both raise :class:`TheoremViolation` when a verified precondition holds but
the asserted conclusion fails at tolerance; unmet preconditions are
reported as notes, never as violations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cones import (
    ConeSpec,
    contains,
    cone_from_dict,
    cone_to_dict,
    distance,
    dual,
    generators,
    interior_contains,
    interior_point,
)
from .errors import TheoremViolation
from .farkas import farkas_dual, farkas_primal, verify_outcome
from .linops import (
    OperatorSpec,
    PairingSpec,
    adjoint_apply,
    adjoint_matrix,
    apply,
    pairing,
)
from .simplex import simplex_solve

__all__ = [
    "ConicProblem",
    "ReportFlags",
    "SolveReport",
    "feasible_primal",
    "feasible_dual",
    "solve",
    "complementarity",
    "verify_interior_optima",
    "verify_strict_feasibility",
    "problem_to_dict",
    "problem_from_dict",
    "report_to_dict",
]


@dataclass(frozen=True)
class ConicProblem:
    """The data ``(A, b, c, S, T)`` of a primal-dual conic pair.

    Construction validates dimensions and probes solidity of both cones by
    testing the generator barycenter for interior membership.
    """

    A: OperatorSpec
    b: np.ndarray
    c: np.ndarray
    S: ConeSpec
    T: ConeSpec
    pairing_X: PairingSpec = field(default_factory=PairingSpec)
    pairing_Y: PairingSpec = field(default_factory=PairingSpec)

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        c = np.asarray(self.c, dtype=float)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if self.A.codomain_dim != b.shape[0]:
            raise ValueError("b does not match the operator codomain")
        if self.A.domain_dim != c.shape[0]:
            raise ValueError("c does not match the operator domain")
        if self.S.dim != self.A.domain_dim:
            raise ValueError("S does not match the operator domain")
        if self.T.dim != self.A.codomain_dim:
            raise ValueError("T does not match the operator codomain")
        self.pairing_X.weight_vector(self.S.dim)
        self.pairing_Y.weight_vector(self.T.dim)
        for name, cone in (("S", self.S), ("T", self.T)):
            if not interior_contains(cone, interior_point(cone), 1e-9):
                raise ValueError(f"cone {name} failed the solidity probe (no interior point found)")

    def operator(self):
        """The operator with this problem's pairings attached."""
        return OperatorSpec(
            matrix=self.A.matrix,
            label=self.A.label,
            pairing_domain=self.pairing_X,
            pairing_codomain=self.pairing_Y,
            adjoint_override=self.A.adjoint_override,
        )


@dataclass
class ReportFlags:
    primal_interior_opt: bool = False
    dual_interior_opt: bool = False
    scaling_probe_ok: bool | None = None
    strict_primal_nonempty: bool | None = None
    strict_dual_nonempty: bool | None = None
    boundary_primal_found: bool | None = None
    boundary_dual_found: bool | None = None
    systems_solved: tuple = (False, False)


@dataclass
class SolveReport:
    v_primal: float
    v_dual: float
    x_star: np.ndarray | None
    y_star: np.ndarray | None
    gap: float
    comp_residuals: tuple | None
    flags: ReportFlags
    status_primal: str
    status_dual: str
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------


def feasible_primal(pb, x, tol=1e-8):
    """``x in S`` and ``A x - b in T*``."""
    op = pb.operator()
    return contains(pb.S, x, tol) and contains(dual(pb.T), apply(op, x) - pb.b, tol)


def feasible_dual(pb, y, tol=1e-8):
    """``y in T`` and ``c - A^T y in S*``."""
    op = pb.operator()
    return contains(pb.T, y, tol) and contains(dual(pb.S), pb.c - adjoint_apply(op, y), tol)


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------


def _weighted(p, dim, vec):
    return p.weight_vector(dim) * vec


def _primal_standard_form(pb):
    g_s = generators(pb.S)
    g_td = generators(dual(pb.T))
    k_s, k_td = g_s.shape[1], g_td.shape[1]
    a_img = pb.A.matrix @ g_s
    rows = [np.hstack([a_img, -g_td])]
    rhs = [pb.b]
    if pb.S.kind == "slice":
        rows.append(np.hstack([pb.S.normals.T @ g_s, np.zeros((pb.S.normals.shape[1], k_td))]))
        rhs.append(np.zeros(pb.S.normals.shape[1]))
    cost = np.concatenate([g_s.T @ _weighted(pb.pairing_X, pb.S.dim, pb.c), np.zeros(k_td)])
    return cost, np.vstack(rows), np.concatenate(rhs), g_s, k_s


def _dual_standard_form(pb):
    g_t = generators(pb.T)
    g_sd = generators(dual(pb.S))
    k_t, k_sd = g_t.shape[1], g_sd.shape[1]
    at = adjoint_matrix(pb.operator())
    rows = [np.hstack([at @ g_t, g_sd])]
    rhs = [pb.c]
    if pb.T.kind == "slice":
        rows.append(np.hstack([pb.T.normals.T @ g_t, np.zeros((pb.T.normals.shape[1], k_sd))]))
        rhs.append(np.zeros(pb.T.normals.shape[1]))
    cost = np.concatenate([-(g_t.T @ _weighted(pb.pairing_Y, pb.T.dim, pb.b)), np.zeros(k_sd)])
    return cost, np.vstack(rows), np.concatenate(rhs), g_t, k_t


def solve(pb, interior_tol=1e-6, lp_tol=1e-8):
    """Solve both problems of the pair and assemble a :class:`SolveReport`.

    Optimizers, when attained, are simplex vertices of the reduced LPs
    mapped back through the generators.  Interior flags classify the
    returned optimizers with margin ``interior_tol``; points within the
    margin band count as boundary.
    """
    notes = []

    cost, a_eq, b_eq, g_s, k_s = _primal_standard_form(pb)
    res_p = simplex_solve(cost, a_eq, b_eq, tol=lp_tol)
    if res_p.status == "optimal":
        x_star = g_s @ res_p.x[:k_s]
        v_primal = pairing(pb.pairing_X, pb.c, x_star)
        status_p = "optimal"
    elif res_p.status == "infeasible":
        x_star, v_primal, status_p = None, math.inf, "infeasible"
    else:
        x_star, v_primal, status_p = None, -math.inf, "unbounded"

    cost, a_eq, b_eq, g_t, k_t = _dual_standard_form(pb)
    res_d = simplex_solve(cost, a_eq, b_eq, tol=lp_tol)
    if res_d.status == "optimal":
        y_star = g_t @ res_d.x[:k_t]
        v_dual = pairing(pb.pairing_Y, y_star, pb.b)
        status_d = "optimal"
    elif res_d.status == "infeasible":
        y_star, v_dual, status_d = None, -math.inf, "infeasible"
    else:
        y_star, v_dual, status_d = None, math.inf, "unbounded"

    flags = ReportFlags()
    if x_star is not None:
        flags.primal_interior_opt = interior_contains(pb.S, x_star, interior_tol)
    if y_star is not None:
        flags.dual_interior_opt = interior_contains(pb.T, y_star, interior_tol)

    gap = v_primal - v_dual if math.isfinite(v_primal) and math.isfinite(v_dual) else math.nan
    comp = None
    if x_star is not None and y_star is not None:
        comp = complementarity(pb, x_star, y_star)
    return SolveReport(
        v_primal=float(v_primal),
        v_dual=float(v_dual),
        x_star=x_star,
        y_star=y_star,
        gap=float(gap),
        comp_residuals=comp,
        flags=flags,
        status_primal=status_p,
        status_dual=status_d,
        notes=notes,
    )


def complementarity(pb, x, y):
    """The slackness pair ``(<y, A x - b>, <c - A^T y, x>)``.

    Both are nonnegative for feasible pairs, their sum is the objective gap
    of the pair, and both vanish exactly at optimal pairs.
    """
    op = pb.operator()
    first = pairing(pb.pairing_Y, y, apply(op, x) - pb.b)
    second = pairing(pb.pairing_X, pb.c - adjoint_apply(op, y), x)
    return (float(first), float(second))


# ---------------------------------------------------------------------------
# Interior-optima pipeline
# ---------------------------------------------------------------------------


def verify_interior_optima(pb, tol=1e-8, interior_tol=1e-6):
    """Check the strong-duality statement driven by interior optima.

    Preconditions are evaluated on the returned optimizers only.  When the
    dual optimizer is interior (and the dual value finite), the primal
    equality system ``A x = b, x in S`` must be solvable; symmetrically for
    the primal side.  When both preconditions hold the values must agree
    within ``tol`` and the equality-system solutions must be optimal.
    """
    op = pb.operator()
    report = solve(pb, interior_tol=interior_tol)
    solved_primal_eq = False
    solved_dual_eq = False

    dual_precond = report.status_dual == "optimal" and report.flags.dual_interior_opt
    primal_precond = report.status_primal == "optimal" and report.flags.primal_interior_opt

    x_hat = y_hat = None
    if dual_precond:
        outcome = farkas_primal(op, pb.b, pb.S, p=pb.pairing_Y, tol=tol)
        ok = outcome.branch == "solution" and verify_outcome(
            outcome, op, pb.b, pb.S, dual(pb.S), tol=10 * tol
        )
        if not ok:
            raise TheoremViolation(
                "interior dual optimum with finite value, but the primal equality system "
                "has no verified solution",
                report=report,
            )
        solved_primal_eq = True
        x_hat = outcome.point
    else:
        report.notes.append("precondition not met: dual optimum not interior or not attained")

    if primal_precond:
        outcome = farkas_dual(op, pb.c, pb.T, p=pb.pairing_X, tol=tol)
        ok = outcome.branch == "solution" and verify_outcome(
            outcome, op, pb.c, pb.T, dual(pb.T), tol=10 * tol
        )
        if not ok:
            raise TheoremViolation(
                "interior primal optimum with finite value, but the dual equality system "
                "has no verified solution",
                report=report,
            )
        solved_dual_eq = True
        y_hat = outcome.point
    else:
        report.notes.append("precondition not met: primal optimum not interior or not attained")

    if primal_precond and dual_precond:
        # With both systems solvable, every solution of either system is
        # optimal and the values coincide; check all three claims.
        if abs(report.v_primal - report.v_dual) > tol:
            raise TheoremViolation(
                f"interior optima on both sides but gap {report.gap:.3e} exceeds {tol:.1e}",
                report=report,
            )
        scale = 1.0 + abs(report.v_primal)
        if abs(pairing(pb.pairing_X, pb.c, x_hat) - report.v_primal) > 10 * tol * scale:
            raise TheoremViolation("primal equality-system solution is not optimal", report=report)
        if abs(pairing(pb.pairing_Y, y_hat, pb.b) - report.v_dual) > 10 * tol * scale:
            raise TheoremViolation("dual equality-system solution is not optimal", report=report)
    report.flags.systems_solved = (solved_primal_eq, solved_dual_eq)
    return report


# ---------------------------------------------------------------------------
# Strict-feasibility pipeline
# ---------------------------------------------------------------------------


def _scaling_probe(cone, rng, n_points=1000, scales=(0.5, 2.0, 10.0)):
    """Sample points outside the cone's interior and check that positive
    scaling never moves them inside (the complement of the interior must be
    a cone).  Uses exterior points with clearance and exact boundary
    points, so margin artifacts cannot produce false violations."""
    probe_tol = 1e-9
    g = generators(cone)
    points = []
    attempts = 0
    while len(points) < n_points // 2 and attempts < 100 * n_points:
        attempts += 1
        v = rng.standard_normal(cone.dim)
        if distance(cone, v) >= 1e-6:
            points.append(v)
    for j in range(g.shape[1]):
        points.append(g[:, j])
    coeffs = rng.exponential(size=(n_points - len(points), g.shape[1]))
    if coeffs.shape[0] > 0:
        kill = rng.integers(0, g.shape[1], size=coeffs.shape[0])
        coeffs[np.arange(coeffs.shape[0]), kill] = 0.0
        points.extend(list(coeffs @ g.T))
    for v in points:
        if interior_contains(cone, v, probe_tol):
            continue
        for mu in scales:
            if interior_contains(cone, mu * v, probe_tol):
                return False
    return True


def _strict_member(pb, side, lp_tol=1e-8, min_margin=1e-7):
    """Search for a strictly interior feasible point whose operator image
    also lies in the dual cone, by maximizing the coefficient margin.

    Primal side: x = G_S u with u >= delta, A x - b in T*, A x in T*.
    Dual side:   y = G_T v with v >= delta, c - A^T y in S*, -A^T y in S*.
    Returns the point or None.
    """
    op = pb.operator()
    if side == "primal":
        g, cone, target = generators(pb.S), pb.S, pb.b
        g_dual = generators(dual(pb.T))
        m_img = op.matrix @ g
        dual_set = dual(pb.T)

        def images(x):
            return apply(op, x) - pb.b, apply(op, x)

    else:
        g, cone, target = generators(pb.T), pb.T, pb.c
        g_dual = generators(dual(pb.S))
        m_img = adjoint_matrix(op) @ g
        dual_set = dual(pb.S)

        def images(y):
            return pb.c - adjoint_apply(op, y), -adjoint_apply(op, y)

    k = g.shape[1]
    kd = g_dual.shape[1]
    dim_img = m_img.shape[0]
    sign = 1.0 if side == "primal" else -1.0
    # Variables: [u(k), w1(kd), w2(kd), delta, r(k), cap].
    n_var = k + 2 * kd + 1 + k + 1
    rows = []
    rhs = []
    r1 = np.zeros((dim_img, n_var))
    r1[:, :k] = m_img
    r1[:, k : k + kd] = -sign * g_dual
    rows.append(r1)
    rhs.append(target)
    r2 = np.zeros((dim_img, n_var))
    r2[:, :k] = m_img
    r2[:, k + kd : k + 2 * kd] = -sign * g_dual
    rows.append(r2)
    rhs.append(np.zeros(dim_img))
    r3 = np.zeros((k, n_var))
    r3[:, :k] = np.eye(k)
    r3[:, k + 2 * kd] = -1.0
    r3[:, k + 2 * kd + 1 : k + 2 * kd + 1 + k] = -np.eye(k)
    rows.append(r3)
    rhs.append(np.zeros(k))
    r4 = np.zeros((1, n_var))
    r4[0, k + 2 * kd] = 1.0
    r4[0, -1] = 1.0
    rows.append(r4)
    rhs.append(np.ones(1))
    if cone.kind == "slice":
        r5 = np.zeros((cone.normals.shape[1], n_var))
        r5[:, :k] = cone.normals.T @ g
        rows.append(r5)
        rhs.append(np.zeros(cone.normals.shape[1]))

    cost = np.zeros(n_var)
    cost[k + 2 * kd] = -1.0
    res = simplex_solve(cost, np.vstack(rows), np.concatenate(rhs), tol=lp_tol)
    if res.status != "optimal":
        return None
    delta = res.x[k + 2 * kd]
    if delta < min_margin:
        return None
    point = g @ res.x[:k]
    img_shift, img_pure = images(point)
    if not (
        interior_contains(cone, point, min(1e-9, delta / 10))
        and contains(dual_set, img_shift, 1e-7)
        and contains(dual_set, img_pure, 1e-7)
    ):
        return None
    return point


def _boundary_feasible_member(pb, side, report, lp_tol=1e-8):
    """An explicit feasible point with finite value that is *not* a strict
    member (fails interior membership or the pure-image condition)."""
    op = pb.operator()
    if side == "primal":
        cone, g = pb.S, generators(pb.S)
        dual_set = dual(pb.T)
        m_img = op.matrix @ g
        target = pb.b
        sign = 1.0
        opt = report.x_star

        def not_strict(x):
            return not interior_contains(cone, x, 1e-9) or not contains(dual_set, apply(op, x), 1e-8)

        def feasible(x):
            return feasible_primal(pb, x, 1e-7)

    else:
        cone, g = pb.T, generators(pb.T)
        dual_set = dual(pb.S)
        m_img = adjoint_matrix(op) @ g
        target = pb.c
        sign = -1.0
        opt = report.y_star

        def not_strict(y):
            return not interior_contains(cone, y, 1e-9) or not contains(
                dual_set, -adjoint_apply(op, y), 1e-8
            )

        def feasible(y):
            return feasible_dual(pb, y, 1e-7)

    zero = np.zeros(cone.dim)
    if feasible(zero) and not_strict(zero):
        return zero
    if opt is not None and not_strict(opt):
        return opt

    k = g.shape[1]
    g_dual = generators(dual_set)
    for pinned in range(k):
        n_var = k + g_dual.shape[1]
        rows = [np.hstack([m_img, -sign * g_dual])]
        rhs = [target]
        pin = np.zeros((1, n_var))
        pin[0, pinned] = 1.0
        rows.append(pin)
        rhs.append(np.zeros(1))
        if cone.kind == "slice":
            sl = np.zeros((cone.normals.shape[1], n_var))
            sl[:, :k] = cone.normals.T @ g
            rows.append(sl)
            rhs.append(np.zeros(cone.normals.shape[1]))
        res = simplex_solve(np.zeros(n_var), np.vstack(rows), np.concatenate(rhs), tol=lp_tol)
        if res.status == "optimal":
            point = g @ res.x[:k]
            if feasible(point) and not_strict(point):
                return point
    return None


def verify_strict_feasibility(pb, tol=1e-8, n_probe=1000, seed=0):
    """Check the strong-duality statement driven by strict feasibility.

    Pipeline: (1) probe that the complements of the cone interiors are
    closed under positive scaling; (2) find explicit strict members on both
    sides (interior, feasible, and with the pure operator image in the dual
    cone) by margin maximization; (3) find explicit boundary feasible
    members; (4) when every set is certified nonempty and both optimal
    values are finite, both equality systems must be solvable and the gap
    must vanish within ``tol``.
    """
    rng = np.random.default_rng(seed)
    op = pb.operator()
    report = solve(pb)
    flags = report.flags

    flags.scaling_probe_ok = _scaling_probe(pb.S, rng, n_probe) and _scaling_probe(pb.T, rng, n_probe)
    if not flags.scaling_probe_ok:
        report.notes.append("precondition not met: complement of a cone interior is not a cone")
        return report

    strict_p = _strict_member(pb, "primal")
    strict_d = _strict_member(pb, "dual")
    flags.strict_primal_nonempty = strict_p is not None
    flags.strict_dual_nonempty = strict_d is not None

    boundary_p = _boundary_feasible_member(pb, "primal", report)
    boundary_d = _boundary_feasible_member(pb, "dual", report)
    flags.boundary_primal_found = boundary_p is not None
    flags.boundary_dual_found = boundary_d is not None

    preconds = {
        "strict primal set": strict_p is not None,
        "strict dual set": strict_d is not None,
        "boundary primal set": boundary_p is not None,
        "boundary dual set": boundary_d is not None,
        "finite values": math.isfinite(report.v_primal) and math.isfinite(report.v_dual),
    }
    unmet = [name for name, ok in preconds.items() if not ok]
    if unmet:
        report.notes.append("precondition not met: " + ", ".join(unmet))
        return report

    out_p = farkas_primal(op, pb.b, pb.S, p=pb.pairing_Y, tol=tol)
    ok_p = out_p.branch == "solution" and verify_outcome(out_p, op, pb.b, pb.S, dual(pb.S), tol=10 * tol)
    out_d = farkas_dual(op, pb.c, pb.T, p=pb.pairing_X, tol=tol)
    ok_d = out_d.branch == "solution" and verify_outcome(out_d, op, pb.c, pb.T, dual(pb.T), tol=10 * tol)
    if not (ok_p and ok_d):
        raise TheoremViolation(
            "strict feasibility preconditions verified but an equality system has no solution "
            f"(primal solvable: {ok_p}, dual solvable: {ok_d})",
            report=report,
        )
    flags.systems_solved = (True, True)
    if abs(report.v_primal - report.v_dual) > tol:
        raise TheoremViolation(
            f"strict feasibility preconditions verified but gap {report.gap:.3e} exceeds {tol:.1e}",
            report=report,
        )
    return report


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _pairing_to_dict(p):
    d = {"kind": p.kind}
    if p.weights is not None:
        d["weights"] = p.weights.tolist()
    return d


def _pairing_from_dict(d):
    if d is None:
        return PairingSpec()
    return PairingSpec(
        kind=d.get("kind", "euclidean_dot"),
        weights=None if d.get("weights") is None else np.asarray(d["weights"], dtype=float),
    )


def operator_to_dict(op):
    return {
        "rows": op.codomain_dim,
        "cols": op.domain_dim,
        "data": op.matrix.ravel().tolist(),
        "complex": False,
    }


def operator_from_dict(d):
    rows, cols = int(d["rows"]), int(d["cols"])
    data = np.asarray(d["data"], dtype=float)
    if data.size != rows * cols:
        raise ValueError(f"operator data has {data.size} entries, expected {rows * cols}")
    return OperatorSpec(matrix=data.reshape(rows, cols), label=d.get("label", ""))


def problem_to_dict(pb):
    return {
        "type": "conic",
        "A": operator_to_dict(pb.A),
        "b": pb.b.tolist(),
        "c": pb.c.tolist(),
        "S": cone_to_dict(pb.S),
        "T": cone_to_dict(pb.T),
        "pairing_X": _pairing_to_dict(pb.pairing_X),
        "pairing_Y": _pairing_to_dict(pb.pairing_Y),
    }


def problem_from_dict(d):
    return ConicProblem(
        A=operator_from_dict(d["A"]),
        b=np.asarray(d["b"], dtype=float),
        c=np.asarray(d["c"], dtype=float),
        S=cone_from_dict(d["S"]),
        T=cone_from_dict(d["T"]),
        pairing_X=_pairing_from_dict(d.get("pairing_X")),
        pairing_Y=_pairing_from_dict(d.get("pairing_Y")),
    )


def report_to_dict(report):
    return {
        "v_primal": report.v_primal,
        "v_dual": report.v_dual,
        "x_star": None if report.x_star is None else report.x_star.tolist(),
        "y_star": None if report.y_star is None else report.y_star.tolist(),
        "gap": report.gap,
        "comp_residuals": None if report.comp_residuals is None else list(report.comp_residuals),
        "status_primal": report.status_primal,
        "status_dual": report.status_dual,
        "flags": {
            "primal_interior_opt": report.flags.primal_interior_opt,
            "dual_interior_opt": report.flags.dual_interior_opt,
            "scaling_probe_ok": report.flags.scaling_probe_ok,
            "strict_primal_nonempty": report.flags.strict_primal_nonempty,
            "strict_dual_nonempty": report.flags.strict_dual_nonempty,
            "boundary_primal_found": report.flags.boundary_primal_found,
            "boundary_dual_found": report.flags.boundary_dual_found,
            "systems_solved": list(report.flags.systems_solved),
        },
        "notes": list(report.notes),
    }
