"""Exact rational linear programming.

Two-phase primal simplex over exact rationals with Bland's (least-index)
pivoting rule, which guarantees termination on every input.  Intended for
the small systems this package builds (tens of variables and constraints),
not for large-scale LP.

Strict inequalities never appear in a problem; callers that need "p(B) > 1"
encode it as "p(B) >= 1 + eps" with eps a distinguished maximized variable
and treat the system as strictly satisfiable iff the optimum eps is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import ONE, ZERO, RationalLike, rational

LE = "<="
EQ = "=="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearConstraint:
    """`sum(coeff * var) relation rhs` with relation one of LE, EQ.

    `coeffs` is a tuple of (variable id, coefficient) pairs sorted by id,
    with at least one nonzero coefficient.
    """

    coeffs: tuple
    relation: str
    rhs: object


@dataclass(frozen=True)
class LPProblem:
    """Maximize a linear objective subject to LinearConstraints.

    `nonneg[i]` marks variable i as restricted to >= 0; other variables are
    free.  `objective` is a tuple of (variable id, coefficient) pairs.
    """

    num_vars: int
    nonneg: tuple
    constraints: tuple
    objective: tuple


@dataclass(frozen=True)
class LPResult:
    status: str
    point: Optional[tuple] = None
    value: Optional[object] = None


def constraint(coeffs: Mapping[int, RationalLike], relation: str, rhs: RationalLike) -> LinearConstraint:
    if relation not in (LE, EQ):
        raise ValueError(f"unknown relation {relation!r}")
    items = tuple(sorted((int(v), rational(c)) for v, c in coeffs.items() if rational(c) != 0))
    if not items:
        raise ValueError("constraint needs at least one nonzero coefficient")
    return LinearConstraint(items, relation, rational(rhs))


def lp_problem(
    num_vars: int,
    constraints: Sequence[LinearConstraint],
    objective: Mapping[int, RationalLike],
    nonneg: Optional[Sequence[bool]] = None,
) -> LPProblem:
    flags = tuple(nonneg) if nonneg is not None else (True,) * num_vars
    obj = tuple(sorted((int(v), rational(c)) for v, c in objective.items() if rational(c) != 0))
    return LPProblem(num_vars=num_vars, nonneg=flags, constraints=tuple(constraints), objective=obj)


def _validate(problem: LPProblem) -> None:
    if problem.num_vars < 1:
        raise ValueError("problem needs at least one variable")
    if len(problem.nonneg) != problem.num_vars:
        raise ValueError("nonneg flags do not match variable count")
    for con in problem.constraints:
        if not con.coeffs:
            raise ValueError("constraint without coefficients")
        for var, _ in con.coeffs:
            if not 0 <= var < problem.num_vars:
                raise ValueError(f"constraint references undeclared variable {var}")
    for var, _ in problem.objective:
        if not 0 <= var < problem.num_vars:
            raise ValueError(f"objective references undeclared variable {var}")


def check_point(problem: LPProblem, point: Sequence[RationalLike]) -> bool:
    """Exact feasibility check of a point against every constraint and flag."""
    if len(point) != problem.num_vars:
        raise ValueError("point dimension mismatch")
    values = [rational(x) for x in point]
    for flag, x in zip(problem.nonneg, values):
        if flag and x < 0:
            return False
    for con in problem.constraints:
        lhs = ZERO
        for var, coeff in con.coeffs:
            lhs += coeff * values[var]
        if con.relation == LE and not lhs <= con.rhs:
            return False
        if con.relation == EQ and lhs != con.rhs:
            return False
    return True


class _Tableau:
    """Dense simplex tableau with Bland's rule; all entries exact rationals."""

    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        inv = ONE / row[c]
        if inv != 1:
            self.rows[r] = row = [x * inv for x in row]
            self.rhs[r] = self.rhs[r] * inv
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            factor = other[c]
            if factor == 0:
                continue
            self.rows[k] = [a - factor * b for a, b in zip(other, row)]
            self.rhs[k] -= factor * self.rhs[r]
        self.basis[r] = c

    def reduce_cost_row(self, cost):
        """Eliminate basic columns from a raw cost row; returns (row, offset)."""
        offset = ZERO
        for r, b in enumerate(self.basis):
            factor = cost[b]
            if factor == 0:
                continue
            row = self.rows[r]
            cost = [a - factor * x for a, x in zip(cost, row)]
            offset += factor * self.rhs[r]
        return cost, offset

    def run(self, cost):
        """Maximize; `cost` must already be reduced w.r.t. the basis.

        Returns OPTIMAL or UNBOUNDED.  Entering: least-index column with
        positive reduced cost.  Leaving: least ratio, ties by least
        basic-variable index (Bland; terminates on every input).
        """
        while True:
            enter = -1
            for j in range(self.ncols):
                if cost[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            leave = -1
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if a <= 0:
                    continue
                ratio = self.rhs[r] / a
                if best is None or ratio < best or (ratio == best and self.basis[r] < self.basis[leave]):
                    best = ratio
                    leave = r
            if leave < 0:
                return UNBOUNDED
            factor = cost[enter]
            self.pivot(leave, enter)
            row = self.rows[leave]
            for j, b in enumerate(row):
                if b != 0:
                    cost[j] -= factor * b


def solve_lp(problem: LPProblem) -> LPResult:
    """Exact optimum, infeasibility, or unboundedness for the given problem."""
    _validate(problem)

    # Column layout: one column per nonnegative variable, two (x+ , x-) per
    # free variable, then one slack/surplus column per inequality row,
    # artificials appended last so they can be truncated after phase 1.
    col_of = []
    neg_col_of = {}
    ncols = 0
    for i in range(problem.num_vars):
        col_of.append(ncols)
        ncols += 1
        if not problem.nonneg[i]:
            neg_col_of[i] = ncols
            ncols += 1

    raw = []
    for con in problem.constraints:
        coeffs = [ZERO] * ncols
        for var, c in con.coeffs:
            coeffs[col_of[var]] += c
            if var in neg_col_of:
                coeffs[neg_col_of[var]] -= c
        rel, rhs = con.relation, con.rhs
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {LE: ">=", EQ: EQ}[rel]
        raw.append((coeffs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in raw if rel != EQ)
    n_art = sum(1 for _, rel, _ in raw if rel != LE)
    first_slack = ncols
    first_art = ncols + n_slack
    total = first_art + n_art

    rows, rhs_col, basis = [], [], []
    slack_at, art_at = first_slack, first_art
    for coeffs, rel, rhs in raw:
        row = coeffs + [ZERO] * (total - ncols)
        if rel == LE:
            row[slack_at] = ONE
            basis.append(slack_at)
            slack_at += 1
        elif rel == ">=":
            row[slack_at] = -ONE
            slack_at += 1
            row[art_at] = ONE
            basis.append(art_at)
            art_at += 1
        else:
            row[art_at] = ONE
            basis.append(art_at)
            art_at += 1
        rows.append(row)
        rhs_col.append(rhs)

    tab = _Tableau(rows, rhs_col, basis, total)

    if n_art:
        cost = [ZERO] * total
        for j in range(first_art, total):
            cost[j] = -ONE
        cost, _ = tab.reduce_cost_row(cost)
        tab.run(cost)
        infeas = ZERO  # artificials are nonbasic (zero) or carry their row's rhs
        for r, b in enumerate(tab.basis):
            if b >= first_art:
                infeas += tab.rhs[r]
        if infeas != 0:
            return LPResult(status=INFEASIBLE)
        # Drive any zero-valued basic artificials out, dropping redundant rows.
        for r in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[r] < first_art:
                continue
            target = next((j for j in range(first_art) if tab.rows[r][j] != 0), None)
            if target is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
            else:
                tab.pivot(r, target)
        tab.rows = [row[:first_art] for row in tab.rows]
        tab.ncols = first_art

    cost = [ZERO] * tab.ncols
    for var, c in problem.objective:
        cost[col_of[var]] += c
        if var in neg_col_of:
            cost[neg_col_of[var]] -= c
    cost, _ = tab.reduce_cost_row(cost)
    if tab.run(cost) == UNBOUNDED:
        return LPResult(status=UNBOUNDED)

    cell = {b: tab.rhs[r] for r, b in enumerate(tab.basis)}
    point = []
    for i in range(problem.num_vars):
        x = cell.get(col_of[i], ZERO)
        if i in neg_col_of:
            x -= cell.get(neg_col_of[i], ZERO)
        point.append(x)
    value = ZERO
    for var, c in problem.objective:
        value += c * point[var]
    return LPResult(status=OPTIMAL, point=tuple(point), value=value)
