"""Linear programs over complex argument cones, via realification.

A complex program

    min Re(c, z)   s.t.  A z - b in T*,  z in S

with argument cones ``S = {z : |arg z_i| <= alpha_i}`` and
``T = {w : |arg w_j| <= beta_j}`` becomes an ordinary conic pair over
``R^(2m)`` / ``R^(2n)``: each complex coordinate embeds as a ``(Re, Im)``
pair, each matrix entry as a 2x2 rotation-scaling block, the real-part
pairing as the Euclidean dot product, and each argument cone as a product
of planar wedges.  Conjugate transposition of the matrix corresponds to
plain transposition of the embedding, so the realified pair is exactly the
real conic pair of :mod:`conedual.duality`.

The optional ``game_slice`` adds the zero-imaginary-sum equality to both
cones, the extra structure carried by strategy cones of complex matrix
games.  Only the cone type is supported; game solution methods are not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cones import slice_cone, wedge
from .duality import ConicProblem, solve
from .errors import TheoremViolation
from .farkas import farkas_dual, farkas_primal, verify_outcome
from .linops import OperatorSpec, complex_embed, complex_real_part

__all__ = [
    "ComplexLPSpec",
    "build_complex_lp",
    "check_arg_condition",
    "BoundaryAngleReport",
    "classify_boundary_optima",
    "complex_spec_to_dict",
    "complex_spec_from_dict",
]

REAL_COORD_CUTOFF = 1e-9


@dataclass(frozen=True)
class ComplexLPSpec:
    """Data of a complex argument-cone program.

    ``alpha`` and ``beta`` hold the wedge half-angles of the primal and
    dual cones, one per complex coordinate, each strictly inside
    ``(0, pi/2)``.
    """

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    alpha: tuple
    beta: tuple
    game_slice: bool = False

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.A, dtype=complex))
        b = np.atleast_1d(np.asarray(self.b, dtype=complex))
        c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        n, m = a.shape
        if b.shape != (n,):
            raise ValueError(f"b has shape {b.shape}, expected ({n},)")
        if c.shape != (m,):
            raise ValueError(f"c has shape {c.shape}, expected ({m},)")
        alpha = tuple(float(x) for x in np.atleast_1d(self.alpha))
        beta = tuple(float(x) for x in np.atleast_1d(self.beta))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        if len(alpha) != m:
            raise ValueError(f"alpha has {len(alpha)} angles, expected {m}")
        if len(beta) != n:
            raise ValueError(f"beta has {len(beta)} angles, expected {n}")
        for name, angles in (("alpha", alpha), ("beta", beta)):
            for i, ang in enumerate(angles):
                if not (0.0 < ang < math.pi / 2):
                    raise ValueError(
                        f"half_angles[{i}] of {name}: {ang} outside the open interval (0, pi/2)"
                    )

    @property
    def m(self):
        return self.A.shape[1]

    @property
    def n(self):
        return self.A.shape[0]


def _imag_sum_normal(dim_complex):
    normal = np.zeros(2 * dim_complex)
    normal[1::2] = 1.0
    return normal


def build_complex_lp(spec):
    """Realify a :class:`ComplexLPSpec` into a :class:`ConicProblem`."""
    emb_x = complex_embed(spec.m)
    emb_y = complex_embed(spec.n)
    s_cone = wedge(spec.alpha)
    t_cone = wedge(spec.beta)
    if spec.game_slice:
        s_cone = slice_cone(s_cone, _imag_sum_normal(spec.m))
        t_cone = slice_cone(t_cone, _imag_sum_normal(spec.n))
    op = OperatorSpec(
        matrix=emb_y.embed_matrix(spec.A),
        label="complex",
        pairing_domain=complex_real_part(),
        pairing_codomain=complex_real_part(),
    )
    return ConicProblem(
        A=op,
        b=emb_y.embed_vector(spec.b),
        c=emb_x.embed_vector(spec.c),
        S=s_cone,
        T=t_cone,
        pairing_X=complex_real_part(),
        pairing_Y=complex_real_part(),
    )


def check_arg_condition(A, lo, hi, tol=1e-12):
    """Whether every nonzero entry of the complex matrix ``A`` has its
    argument inside ``[lo, hi]``.  Zero entries pass."""
    a = np.atleast_2d(np.asarray(A, dtype=complex))
    for entry in a.ravel():
        if entry == 0:
            continue
        arg = float(np.angle(entry))
        if arg < lo - tol or arg > hi + tol:
            return False
    return True


@dataclass
class BoundaryAngleReport:
    """Per-coordinate angle diagnostics of the returned optimizers.

    ``primal_angles`` / ``dual_angles`` hold ``(index, angle, half_angle,
    at_boundary)`` rows for every coordinate; real coordinates (imaginary
    part below the cutoff) are excluded from the boundary assertion.
    """

    primal_system_solvable: bool
    dual_system_solvable: bool
    v_primal: float
    v_dual: float
    characterization_applies: bool
    primal_angles: list
    dual_angles: list
    note: str = ""


def _angle_rows(z, half_angles, tol):
    rows = []
    for i, (coord, ang_bound) in enumerate(zip(z, half_angles)):
        if abs(coord.imag) <= REAL_COORD_CUTOFF:
            rows.append((i, float(np.angle(coord)), ang_bound, None))
            continue
        angle = float(np.angle(coord))
        rows.append((i, angle, ang_bound, abs(abs(angle) - ang_bound) <= tol))
    return rows


def classify_boundary_optima(spec, tol=1e-6, farkas_tol=1e-8):
    """Locate the optimizers of an argument-cone pair on their wedges.

    When neither equality system (``A z = b`` over the primal cone,
    ``A* w = c`` over the dual cone) is solvable yet both optimal values
    are finite, every optimal solution must sit on the boundary of its
    cone: each non-real coordinate of the returned optimizers must have its
    argument within ``tol`` of the wedge half-angle.  Raises
    :class:`TheoremViolation` if a coordinate is found strictly inside.

    When either system is solvable the characterization is vacuous and the
    report says so.
    """
    pb = build_complex_lp(spec)
    op = pb.operator()
    out_p = farkas_primal(op, pb.b, pb.S, tol=farkas_tol)
    primal_solvable = out_p.branch == "solution" and verify_outcome(
        out_p, op, pb.b, pb.S, tol=10 * farkas_tol
    )
    out_d = farkas_dual(op, pb.c, pb.T, tol=farkas_tol)
    dual_solvable = out_d.branch == "solution" and verify_outcome(
        out_d, op, pb.c, pb.T, tol=10 * farkas_tol
    )

    report = solve(pb)
    emb_x = complex_embed(spec.m)
    emb_y = complex_embed(spec.n)
    z_star = None if report.x_star is None else emb_x.lift_vector(report.x_star)
    w_star = None if report.y_star is None else emb_y.lift_vector(report.y_star)

    applies = (
        not primal_solvable
        and not dual_solvable
        and math.isfinite(report.v_primal)
        and math.isfinite(report.v_dual)
    )
    primal_rows = [] if z_star is None else _angle_rows(z_star, spec.alpha, tol)
    dual_rows = [] if w_star is None else _angle_rows(w_star, spec.beta, tol)
    result = BoundaryAngleReport(
        primal_system_solvable=primal_solvable,
        dual_system_solvable=dual_solvable,
        v_primal=report.v_primal,
        v_dual=report.v_dual,
        characterization_applies=applies,
        primal_angles=primal_rows,
        dual_angles=dual_rows,
    )
    if not applies:
        result.note = "systems solvable or values infinite, characterization vacuous"
        return result

    for label, rows in (("primal", primal_rows), ("dual", dual_rows)):
        for i, angle, bound, at_boundary in rows:
            if at_boundary is False:
                raise TheoremViolation(
                    f"{label} optimizer coordinate {i} has argument {angle:.9f}, "
                    f"not within {tol:.1e} of the wedge boundary {bound:.9f}",
                    report=result,
                )
    return result


# ---------------------------------------------------------------------------
# Serialization (complex entries as [re, im] pairs)
# ---------------------------------------------------------------------------


def _c2pair(z):
    return [float(z.real), float(z.imag)]


def _pair2c(p):
    return complex(float(p[0]), float(p[1]))


def complex_spec_to_dict(spec):
    return {
        "type": "complex_lp",
        "A": [[_c2pair(v) for v in row] for row in spec.A],
        "b": [_c2pair(v) for v in spec.b],
        "c": [_c2pair(v) for v in spec.c],
        "alpha": list(spec.alpha),
        "beta": list(spec.beta),
        "game_slice": spec.game_slice,
    }


def complex_spec_from_dict(d):
    return ComplexLPSpec(
        A=np.array([[_pair2c(v) for v in row] for row in d["A"]], dtype=complex),
        b=np.array([_pair2c(v) for v in d["b"]], dtype=complex),
        c=np.array([_pair2c(v) for v in d["c"]], dtype=complex),
        alpha=d["alpha"],
        beta=d["beta"],
        game_slice=bool(d.get("game_slice", False)),
    )
