"""Dense two-phase simplex for standard-form linear programs.

Solves ``min c^T x  subject to  A x = b, x >= 0`` on a dense tableau.
Bland's rule (smallest eligible index enters, smallest basic index breaks
ratio ties) is used in both phases, so the iteration terminates on
degenerate problems without cycling.  Intended for desk-scale instances;
every pivot is an O(m n) vectorized tableau update.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverFailure

__all__ = ["SimplexResult", "simplex_solve"]

_PIVOT_TOL = 1e-9
_RATIO_TOL = 1e-12


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float | None
    basis: list | None
    iterations: int
    phase1_objective: float = 0.0


def _pivot(tableau, basis, row, col):
    piv = tableau[row, col]
    tableau[row] /= piv
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    basis[row] = col


def _bland_entering(obj_row, eligible_cols, tol):
    reduced = obj_row[eligible_cols]
    neg = np.flatnonzero(reduced < -tol)
    if neg.size == 0:
        return None
    return int(eligible_cols[neg[0]])


def _bland_leaving(tableau, basis, col, n_rows):
    column = tableau[:n_rows, col]
    rhs = tableau[:n_rows, -1]
    cand = np.flatnonzero(column > _PIVOT_TOL)
    if cand.size == 0:
        return None
    ratios = rhs[cand] / column[cand]
    valid = ratios >= -_RATIO_TOL
    cand = cand[valid]
    ratios = ratios[valid]
    if cand.size == 0:
        return None
    ties = cand[ratios <= ratios.min() + _RATIO_TOL]
    # Bland tie-break: leave the row whose basic variable has smallest index.
    basis_arr = np.asarray(basis)
    return int(ties[np.argmin(basis_arr[ties])])


def _run_phase(tableau, basis, n_rows, eligible_cols, max_iter, iteration_count):
    while True:
        col = _bland_entering(tableau[-1], eligible_cols, _PIVOT_TOL)
        if col is None:
            return "optimal", iteration_count
        row = _bland_leaving(tableau, basis, col, n_rows)
        if row is None:
            return "unbounded", iteration_count
        iteration_count += 1
        if iteration_count > max_iter:
            raise SolverFailure(
                "simplex iteration cap exceeded (cycling guard)",
                detail={"basis": list(basis), "iterations": iteration_count},
            )
        _pivot(tableau, basis, row, col)


def simplex_solve(c, A, b, tol=1e-8, max_iter=None):
    """Two-phase simplex for ``min c^T x, A x = b, x >= 0``.

    Returns a :class:`SimplexResult`; ``status`` is ``"infeasible"`` when
    phase one terminates with a positive artificial objective (above
    ``tol`` scaled by the data), ``"unbounded"`` when phase two finds an
    improving ray.

    Raises :class:`SolverFailure` on an iteration-cap trip or a pivot
    breakdown, with the current basis attached.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    if A.ndim != 2:
        raise ValueError("constraint matrix must be two-dimensional")
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise ValueError("non-finite entries in LP data")
    if max_iter is None:
        max_iter = 200 * (m + n + 10)

    # Normalize to b >= 0 so the artificial basis is feasible.
    A = A.copy()
    b = b.copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Phase one tableau: [A | I | b] with artificial cost row.
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = A
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    basis = [n + i for i in range(m)]
    # Reduced artificial costs: subtract each constraint row from the cost row.
    tableau[-1, : n + m] = -tableau[:m, : n + m].sum(axis=0)
    tableau[-1, n : n + m] = 0.0
    tableau[-1, -1] = -b.sum()

    eligible = np.arange(n + m)
    status, iterations = _run_phase(tableau, basis, m, eligible, max_iter, 0)
    if status == "unbounded":  # cannot happen: phase-one objective is bounded below
        raise SolverFailure("phase one reported unbounded", detail={"basis": list(basis)})

    phase1_obj = -tableau[-1, -1]
    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    if phase1_obj > tol * scale:
        return SimplexResult(
            status="infeasible",
            x=None,
            objective=None,
            basis=None,
            iterations=iterations,
            phase1_objective=float(phase1_obj),
        )

    # Drive artificials out of the basis; rows that cannot pivot are redundant.
    keep_rows = list(range(m))
    for i in range(m):
        if basis[i] >= n:
            pivot_col = None
            for j in range(n):
                if abs(tableau[i, j]) > _PIVOT_TOL:
                    pivot_col = j
                    break
            if pivot_col is None:
                keep_rows.remove(i)
            else:
                _pivot(tableau, basis, i, pivot_col)
                iterations += 1

    rows = np.array(keep_rows, dtype=int)
    m2 = rows.size
    phase2 = np.zeros((m2 + 1, n + 1))
    phase2[:m2, :n] = tableau[rows][:, :n]
    phase2[:m2, -1] = tableau[rows][:, -1]
    basis2 = [basis[i] for i in keep_rows]
    phase2[-1, :n] = c
    for i, bv in enumerate(basis2):
        coef = phase2[-1, bv]
        if coef != 0.0:
            phase2[-1] -= coef * phase2[i]

    eligible = np.arange(n)
    status, iterations = _run_phase(phase2, basis2, m2, eligible, max_iter, iterations)
    if status == "unbounded":
        return SimplexResult(
            status="unbounded",
            x=None,
            objective=None,
            basis=list(basis2),
            iterations=iterations,
            phase1_objective=float(phase1_obj),
        )

    x = np.zeros(n)
    for i, bv in enumerate(basis2):
        x[bv] = phase2[i, -1]
    x[np.abs(x) < 1e-12] = 0.0
    np.maximum(x, 0.0, out=x)
    return SimplexResult(
        status="optimal",
        x=x,
        objective=float(c @ x),
        basis=list(basis2),
        iterations=iterations,
        phase1_objective=float(phase1_obj),
    )
