"""Dense two-phase primal simplex with Bland's rule.

Deliberately small and deterministic: the linear programs in this
library have a handful of variables, and reproducible slope outputs
require a fixed pivoting rule.  Bland's rule (smallest-index entering
and leaving variables) also rules out cycling on the degenerate
programs that show up here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError, UsageError

_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SimplexResult:
    status: str
    x: np.ndarray | None
    value: float | None


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int):
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: np.ndarray, ncols: int) -> str:
    """Iterate on tableau T (last row = objective, last col = rhs)."""
    max_iter = 10000
    for _ in range(max_iter):
        obj = T[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if obj[j] < -_TOL:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        col = T[:-1, entering]
        ratios = np.full(col.shape, np.inf)
        positive = col > _TOL
        ratios[positive] = T[:-1, -1][positive] / col[positive]
        if not np.any(positive):
            return UNBOUNDED
        best = np.min(ratios)
        # Bland: among minimal ratios, leave the basic var of smallest index
        rows = np.where(ratios <= best + _TOL)[0]
        leaving = rows[np.argmin(basis[rows])]
        _pivot(T, basis, leaving, entering)
    raise SolverError("simplex failed to terminate (iteration cap hit)")


def solve(
    c,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    free=None,
) -> SimplexResult:
    """min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq.

    Variables are nonnegative unless flagged in the boolean vector
    ``free`` (free variables are split internally).
    """
    c = np.atleast_1d(np.asarray(c, float))
    nvar = c.size
    free = np.zeros(nvar, bool) if free is None else np.asarray(free, bool)
    if free.size != nvar:
        raise UsageError("free mask length mismatch")

    rows_A, rows_b, is_eq = [], [], []
    if A_ub is not None:
        A_ub = np.atleast_2d(np.asarray(A_ub, float))
        b_ub = np.atleast_1d(np.asarray(b_ub, float))
        for a, b in zip(A_ub, b_ub):
            rows_A.append(a)
            rows_b.append(b)
            is_eq.append(False)
    if A_eq is not None:
        A_eq = np.atleast_2d(np.asarray(A_eq, float))
        b_eq = np.atleast_1d(np.asarray(b_eq, float))
        for a, b in zip(A_eq, b_eq):
            rows_A.append(a)
            rows_b.append(b)
            is_eq.append(True)
    m = len(rows_A)
    A = np.array(rows_A) if m else np.zeros((0, nvar))
    b = np.array(rows_b) if m else np.zeros(0)

    # split free variables: x_j = u_j - v_j
    split_idx = np.where(free)[0]
    A_std = np.hstack([A, -A[:, split_idx]]) if m else np.zeros((0, nvar + split_idx.size))
    c_std = np.concatenate([c, -c[split_idx]])
    nstd = c_std.size

    # slacks on inequality rows
    n_slack = sum(1 for e in is_eq if not e)
    S = np.zeros((m, n_slack))
    k = 0
    for i, e in enumerate(is_eq):
        if not e:
            S[i, k] = 1.0
            k += 1
    A_full = np.hstack([A_std, S]) if m else np.zeros((0, nstd + n_slack))
    c_full = np.concatenate([c_std, np.zeros(n_slack)])

    # normalize rhs signs
    for i in range(m):
        if b[i] < 0:
            A_full[i] *= -1.0
            b[i] *= -1.0

    ntot = A_full.shape[1]
    # phase 1: artificial basis
    T = np.zeros((m + 1, ntot + m + 1))
    T[:m, :ntot] = A_full
    T[:m, ntot : ntot + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, ntot : ntot + m] = 1.0
    basis = np.arange(ntot, ntot + m)
    # price out artificials
    for i in range(m):
        T[-1] -= T[i]
    status = _run_simplex(T, basis, ntot + m)
    if status != OPTIMAL or T[-1, -1] < -_TOL * max(1.0, np.max(np.abs(b), initial=1.0)):
        return SimplexResult(status=INFEASIBLE, x=None, value=None)
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= ntot and T[i, -1] <= _TOL:
            for j in range(ntot):
                if abs(T[i, j]) > _TOL:
                    _pivot(T, basis, i, j)
                    break

    # phase 2
    keep_rows = [i for i in range(m) if basis[i] < ntot]
    T2 = np.zeros((len(keep_rows) + 1, ntot + 1))
    for r, i in enumerate(keep_rows):
        T2[r, :ntot] = T[i, :ntot]
        T2[r, -1] = T[i, -1]
    basis2 = basis[keep_rows].copy()
    T2[-1, :ntot] = c_full
    for r in range(len(keep_rows)):
        T2[-1] -= T2[-1, basis2[r]] * T2[r]
    status = _run_simplex(T2, basis2, ntot)
    if status == UNBOUNDED:
        return SimplexResult(status=UNBOUNDED, x=None, value=None)

    x_full = np.zeros(ntot)
    for r, j in enumerate(basis2):
        x_full[j] = T2[r, -1]
    x = x_full[:nvar].copy()
    x[split_idx] -= x_full[nvar : nvar + split_idx.size]
    return SimplexResult(status=OPTIMAL, x=x, value=float(c @ x))
