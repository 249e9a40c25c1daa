import itertools
import random
from fractions import Fraction

import pytest

from recrobsp.lp import LinearProgram, LpConstraint, LpVariable, lp_solve
from recrobsp.rational import Rat


def solve_square(matrix, rhs):
    """Exact Gaussian elimination; None if singular.  Test-local oracle code."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def brute_force_lp(nvars, bounds, rows, objective, sense):
    """Enumerate candidate vertices from all tight-set choices.

    Constraints: rows are (coeffs, op, rhs); bounds are (lo, up) per var.
    Returns (status, value) with status in {"optimal", "infeasible"}.
    Only valid when all variable bounds are finite (polytope case).
    """
    eqs = []
    for coeffs, op, rhs in rows:
        eqs.append((coeffs, rhs))
    for j, (lo, up) in enumerate(bounds):
        row = [0] * nvars
        row[j] = 1
        eqs.append((row, lo))
        eqs.append((row, up))

    def feasible(point):
        for coeffs, op, rhs in rows:
            lhs = sum(Fraction(c) * x for c, x in zip(coeffs, point))
            if op == "<=" and lhs > rhs:
                return False
            if op == ">=" and lhs < rhs:
                return False
            if op == "==" and lhs != rhs:
                return False
        for x, (lo, up) in zip(point, bounds):
            if x < lo or x > up:
                return False
        return True

    best = None
    for chosen in itertools.combinations(range(len(eqs)), nvars):
        matrix = [eqs[i][0] for i in chosen]
        rhs = [eqs[i][1] for i in chosen]
        point = solve_square(matrix, rhs)
        if point is None or not feasible(point):
            continue
        value = sum(Fraction(c) * x for c, x in zip(objective, point))
        if best is None or (sense == "max" and value > best) or (sense == "min" and value < best):
            best = value
    if best is None:
        return "infeasible", None
    return "optimal", best


def test_single_variable_bound():
    lp = LinearProgram(
        variables=(LpVariable("t"),),
        constraints=(LpConstraint({"t": 1}, "<=", 1),),
        objective={"t": 1},
    )
    res = lp_solve(lp)
    assert res.status == "optimal" and res.value == 1 and res.point["t"] == 1


def test_box_budget():
    lp = LinearProgram(
        variables=(LpVariable("d1", 0, 1), LpVariable("d2", 0, 1)),
        constraints=(LpConstraint({"d1": 1, "d2": 1}, "<=", 1),),
        objective={"d1": 1, "d2": 1},
    )
    res = lp_solve(lp)
    assert res.status == "optimal" and res.value == 1


def test_infeasible():
    lp = LinearProgram(
        variables=(LpVariable("x", 0, 1),),
        constraints=(LpConstraint({"x": 1}, ">=", 2),),
        objective={"x": 1},
    )
    assert lp_solve(lp).status == "infeasible"


def test_unbounded():
    lp = LinearProgram(
        variables=(LpVariable("x"),),
        constraints=(),
        objective={"x": 1},
    )
    assert lp_solve(lp).status == "unbounded"


def test_min_sense_and_lower_bounds():
    lp = LinearProgram(
        variables=(LpVariable("x", Rat(-2), Rat(5)), LpVariable("y", Rat(1), Rat(3))),
        constraints=(LpConstraint({"x": 1, "y": 1}, ">=", 0),),
        objective={"x": 2, "y": -1},
        sense="min",
    )
    res = lp_solve(lp)
    # x as small as the row allows with y at its top: x = -2 needs y >= 2
    assert res.status == "optimal"
    assert res.value == 2 * Rat(-2) - 3
    assert res.point == {"x": Rat(-2), "y": Rat(3)}


def test_equality_rows():
    lp = LinearProgram(
        variables=(LpVariable("x", 0, 10), LpVariable("y", 0, 10)),
        constraints=(
            LpConstraint({"x": 1, "y": 2}, "==", 7),
            LpConstraint({"x": 1, "y": -1}, "<=", 1),
        ),
        objective={"x": 3, "y": 1},
    )
    res = lp_solve(lp)
    assert res.status == "optimal"
    assert res.point["x"] + 2 * res.point["y"] == 7
    assert res.value == 3 * res.point["x"] + res.point["y"]
    assert res.value == Rat(11)


def test_degenerate_cycling_guard():
    # Beale's cycling example; Bland's rule must terminate at 1/20
    lp = LinearProgram(
        variables=tuple(LpVariable(f"x{i}") for i in range(1, 5)),
        constraints=(
            LpConstraint({"x1": Rat(1, 4), "x2": -60, "x3": Rat(-1, 25), "x4": 9}, "<=", 0),
            LpConstraint({"x1": Rat(1, 2), "x2": -90, "x3": Rat(-1, 50), "x4": 3}, "<=", 0),
            LpConstraint({"x3": 1}, "<=", 1),
        ),
        objective={"x1": Rat(3, 4), "x2": -150, "x3": Rat(1, 50), "x4": -6},
    )
    res = lp_solve(lp)
    assert res.status == "optimal"
    assert res.value == Rat(1, 20)


def test_random_lps_match_vertex_enumeration():
    rng = random.Random(1234)
    for trial in range(120):
        nvars = rng.randrange(1, 4)
        nrows = rng.randrange(0, 4)
        bounds = []
        for _ in range(nvars):
            lo = rng.randrange(-3, 3)
            up = lo + rng.randrange(0, 5)
            bounds.append((lo, up))
        rows = []
        for _ in range(nrows):
            coeffs = [rng.randrange(-3, 4) for _ in range(nvars)]
            op = rng.choice(("<=", ">=", "=="))
            rhs = rng.randrange(-6, 7)
            rows.append((coeffs, op, rhs))
        objective = [rng.randrange(-4, 5) for _ in range(nvars)]
        sense = rng.choice(("max", "min"))

        lp = LinearProgram(
            variables=tuple(
                LpVariable(f"x{j}", Rat(lo), Rat(up)) for j, (lo, up) in enumerate(bounds)
            ),
            constraints=tuple(
                LpConstraint({f"x{j}": c for j, c in enumerate(coeffs)}, op, rhs)
                for coeffs, op, rhs in rows
            ),
            objective={f"x{j}": c for j, c in enumerate(objective)},
            sense=sense,
        )
        expected_status, expected_value = brute_force_lp(nvars, bounds, rows, objective, sense)
        res = lp_solve(lp)
        assert res.status == expected_status, f"trial {trial}"
        if expected_status == "optimal":
            assert res.value == expected_value, f"trial {trial}"
            # returned point must be feasible and achieve the value
            point = [res.point[f"x{j}"] for j in range(nvars)]
            for coeffs, op, rhs in rows:
                lhs = sum(Rat(c) * x for c, x in zip(coeffs, point))
                assert (
                    (op == "<=" and lhs <= rhs)
                    or (op == ">=" and lhs >= rhs)
                    or (op == "==" and lhs == rhs)
                )
            assert sum(Rat(c) * x for c, x in zip(objective, point)) == res.value


def test_deterministic_vertex():
    lp = LinearProgram(
        variables=(LpVariable("a", 0, 1), LpVariable("b", 0, 1)),
        constraints=(LpConstraint({"a": 1, "b": 1}, "<=", 1),),
        objective={"a": 1, "b": 1},
    )
    assert lp_solve(lp).point == lp_solve(lp).point
