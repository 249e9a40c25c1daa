"""Exact rational linear programming via bounded-variable primal simplex.

Variable bounds are handled implicitly (nonbasic variables sit at either
bound), so a tableau row is spent only on genuine linear constraints.  Bland's
smallest-index rule is used for both the entering and leaving choice, which
makes the method finite and the returned vertex deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .rational import Rat, ZERO, ONE, rat

_MAX_PIVOTS = 2_000_000


@dataclass(frozen=True)
class LpVariable:
    name: str
    lower: Rat = ZERO
    upper: Optional[Rat] = None

    def __post_init__(self):
        object.__setattr__(self, "lower", rat(self.lower))
        if self.upper is not None:
            object.__setattr__(self, "upper", rat(self.upper))


@dataclass(frozen=True)
class LpConstraint:
    coeffs: tuple[tuple[str, Rat], ...]
    sense: str  # "<=", ">=", "=="
    rhs: Rat

    def __post_init__(self):
        if self.sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown constraint sense {self.sense!r}")
        if isinstance(self.coeffs, Mapping):
            items = self.coeffs.items()
        else:
            items = self.coeffs
        object.__setattr__(self, "coeffs", tuple((n, rat(c)) for n, c in items))
        object.__setattr__(self, "rhs", rat(self.rhs))


@dataclass(frozen=True)
class LinearProgram:
    variables: tuple[LpVariable, ...]
    constraints: tuple[LpConstraint, ...]
    objective: tuple[tuple[str, Rat], ...]
    sense: str = "max"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        obj = self.objective.items() if isinstance(self.objective, Mapping) else self.objective
        object.__setattr__(self, "objective", tuple((n, rat(c)) for n, c in obj))
        if self.sense not in ("max", "min"):
            raise ValueError(f"unknown objective sense {self.sense!r}")
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable name")
        known = set(names)
        for row in self.constraints:
            for name, _ in row.coeffs:
                if name not in known:
                    raise ValueError(f"constraint references unknown variable {name!r}")
        for name, _ in self.objective:
            if name not in known:
                raise ValueError(f"objective references unknown variable {name!r}")


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal", "infeasible", "unbounded"
    value: Optional[Rat] = None
    point: Optional[dict[str, Rat]] = None


class _Tableau:
    """Dense simplex tableau over shifted variables y_j in [0, span_j]."""

    def __init__(self, rows: list[list[Rat]], rhs: list[Rat], span: list[Optional[Rat]],
                 basis: list[int], blocked: set[int]):
        self.rows = rows
        self.rhs = rhs          # current values of the basic variables
        self.span = span        # upper bound of each shifted variable (None = +inf)
        self.basis = basis
        self.at_upper: set[int] = set()
        self.blocked = blocked  # columns excluded from entering (pinned artificials)
        self.ncols = len(span)

    def value_of(self, col: int) -> Rat:
        for row, b in enumerate(self.basis):
            if b == col:
                return self.rhs[row]
        if col in self.at_upper:
            return self.span[col]
        return ZERO

    def price_out(self, cost: list[Rat]) -> tuple[list[Rat], Rat]:
        """Reduced-cost row and objective value for the current basis."""
        z = list(cost)
        val = ZERO
        for row, b in enumerate(self.basis):
            cb = z[b]
            if cb != 0:
                tab = self.rows[row]
                z = [zj - cb * tj for zj, tj in zip(z, tab)]
                val += cb * self.rhs[row]
        for col in self.at_upper:
            if cost[col] != 0:
                val += cost[col] * self.span[col]
        return z, val

    def simplex(self, cost: list[Rat]) -> tuple[str, Rat]:
        """Maximize cost over the current feasible basis.  Returns (status, value)."""
        z, val = self.price_out(cost)
        basic = set(self.basis)
        for _ in range(_MAX_PIVOTS):
            enter = -1
            for j in range(self.ncols):
                if j in basic or j in self.blocked:
                    continue
                if j in self.at_upper:
                    if z[j] < 0:
                        enter = j
                        break
                elif z[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal", val
            down = enter in self.at_upper  # moving away from the upper bound
            # ratio test: entering moves by theta >= 0
            theta = self.span[enter]  # full flip to the other bound
            blocker = enter if theta is not None else -1
            for row, b in enumerate(self.basis):
                t = self.rows[row][enter]
                if t == 0:
                    continue
                rate = -t if down else t
                if rate > 0:
                    limit = self.rhs[row] / rate
                elif self.span[b] is not None:
                    limit = (self.span[b] - self.rhs[row]) / (-rate)
                else:
                    continue
                if theta is None or limit < theta or (limit == theta and b < blocker):
                    theta = limit
                    blocker = b
            if theta is None:
                return "unbounded", val
            delta = -theta if down else theta
            if blocker == enter:  # bound flip, basis unchanged
                for row in range(len(self.basis)):
                    self.rhs[row] -= delta * self.rows[row][enter]
                val += z[enter] * delta
                if down:
                    self.at_upper.discard(enter)
                else:
                    self.at_upper.add(enter)
                continue
            row = self.basis.index(blocker)
            enter_value = (self.span[enter] if down else ZERO) + delta
            leave = self.basis[row]
            # leaving variable lands on one of its bounds
            t_pivot = self.rows[row][enter]
            leave_value = self.rhs[row] - delta * t_pivot
            for i in range(len(self.basis)):
                if i != row:
                    self.rhs[i] -= delta * self.rows[i][enter]
            self.rhs[row] = enter_value
            val += z[enter] * delta
            if leave_value != 0:
                self.at_upper.add(leave)
            self.at_upper.discard(enter)
            self.basis[row] = enter
            basic.discard(leave)
            basic.add(enter)
            # eliminate the entering column
            pivot_row = self.rows[row]
            inv = ONE / t_pivot
            pivot_row[:] = [c * inv for c in pivot_row]
            for i, other in enumerate(self.rows):
                if i == row:
                    continue
                f = other[enter]
                if f != 0:
                    other[:] = [a - f * p for a, p in zip(other, pivot_row)]
            f = z[enter]
            if f != 0:
                z = [a - f * p for a, p in zip(z, pivot_row)]
        raise RuntimeError("simplex pivot limit exceeded")


def lp_solve(lp: LinearProgram) -> LpResult:
    """Exact optimum of lp, or infeasible/unbounded status."""
    nvars = len(lp.variables)
    index = {v.name: j for j, v in enumerate(lp.variables)}
    span: list[Optional[Rat]] = []
    for v in lp.variables:
        if v.upper is not None:
            width = v.upper - v.lower
            if width < 0:
                return LpResult("infeasible")
            span.append(width)
        else:
            span.append(None)

    # rows over shifted variables, rhs adjusted by lower bounds, signs made >= 0
    raw_rows: list[tuple[dict[int, Rat], str, Rat]] = []
    for con in lp.constraints:
        coeffs: dict[int, Rat] = {}
        shift = ZERO
        for name, c in con.coeffs:
            j = index[name]
            coeffs[j] = coeffs.get(j, ZERO) + c
            shift += c * lp.variables[j].lower
        raw_rows.append((coeffs, con.sense, con.rhs - shift))

    nrows = len(raw_rows)
    slack_base = nvars
    art_cols: list[int] = []
    ncols = nvars
    # assign slack columns
    slack_of: list[Optional[int]] = []
    for coeffs, sense, rhs in raw_rows:
        if sense == "==":
            slack_of.append(None)
        else:
            slack_of.append(ncols)
            ncols += 1
    rows: list[list[Rat]] = []
    rhs_col: list[Rat] = []
    basis: list[int] = []
    need_art: list[bool] = []
    for i, (coeffs, sense, rhs) in enumerate(raw_rows):
        sign = ONE
        if rhs < 0:
            sign = -ONE
            rhs = -rhs
        row = [ZERO] * ncols
        for j, c in coeffs.items():
            row[j] = sign * c
        if slack_of[i] is not None:
            slack_sign = ONE if sense == "<=" else -ONE
            row[slack_of[i]] = sign * slack_sign
        rows.append(row)
        rhs_col.append(rhs)
        starts_feasible = slack_of[i] is not None and row[slack_of[i]] == ONE
        need_art.append(not starts_feasible)
        basis.append(slack_of[i] if starts_feasible else -1)

    total_art = sum(need_art)
    if total_art:
        for row in rows:
            row.extend([ZERO] * total_art)
        nxt = ncols
        for i in range(nrows):
            if need_art[i]:
                rows[i][nxt] = ONE
                basis[i] = nxt
                art_cols.append(nxt)
                nxt += 1
        ncols = nxt
    span.extend([None] * (ncols - nvars))

    tab = _Tableau(rows, rhs_col, span, basis, blocked=set())

    if art_cols:
        phase1 = [ZERO] * ncols
        for j in art_cols:
            phase1[j] = -ONE
        status, val = tab.simplex(phase1)
        if status != "optimal" or val != 0:
            return LpResult("infeasible")
        # pin artificials at zero; they never re-enter
        for j in art_cols:
            tab.span[j] = ZERO
            tab.at_upper.discard(j)
        tab.blocked = set(art_cols)

    sign = ONE if lp.sense == "max" else -ONE
    cost = [ZERO] * ncols
    for name, c in lp.objective:
        cost[index[name]] += sign * c
    status, _ = tab.simplex(cost)
    if status == "unbounded":
        return LpResult("unbounded")
    point = {
        v.name: v.lower + tab.value_of(j) for j, v in enumerate(lp.variables)
    }
    value = sum((c * point[name] for name, c in lp.objective), ZERO)
    return LpResult("optimal", value, point)
