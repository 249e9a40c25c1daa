"""Worst-case second-stage scenarios: exact max-min over the budgeted sets.

Continuous budget: a cutting-plane loop between an exact LP (distribute the
budget so the cheapest pooled recovery path is as expensive as possible) and
the recovery DP as separation oracle.  The LP value always upper-bounds the
true adversary value, so the loop is done exactly when the DP confirms it.

Discrete budget: enumerate extreme scenarios (deviating arcs at full cap).
Raising any arc cost never decreases the inner minimum, so full-cap
deviations on a largest allowed support are optimal.
"""

from __future__ import annotations

import itertools
import math

from .lp import LinearProgram, LpConstraint, LpVariable, lp_solve
from .model import (
    DEFAULT_PATH_CAP,
    Digraph,
    Instance,
    Path,
    Scenario,
    enumerate_st_paths,
    path_cost,
)
from .rational import Rat, ZERO
from .recovery import best_recovery, neighborhood_contains

DEFAULT_SUBSET_CAP = 10**6


class PoolOverflowError(RuntimeError):
    """The cutting-plane path pool exceeded its cap."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"recovery path pool exceeded {cap} paths")


class SubsetOverflowError(RuntimeError):
    """Discrete scenario enumeration would exceed its subset cap."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} candidate subsets exceed the cap {cap}")


def _pool_lp(g: Digraph, pool: list[Path], gamma: Rat) -> LinearProgram:
    """max t s.t. every pooled path costs at least t under deviations d.

    Only arcs on pooled paths get a variable: deviation mass anywhere else
    cannot raise any pooled path's cost, so zero is optimal there.
    """
    arc_ids = sorted({a for y in pool for a in y.arcs if g.arc_by_id[a].deviation_cap > 0})
    variables = [LpVariable("t")]
    variables += [LpVariable(f"d{a}", ZERO, g.arc_by_id[a].deviation_cap) for a in arc_ids]
    constraints = []
    for y in pool:
        coeffs = {"t": Rat(1)}
        for a in y.arcs:
            if g.arc_by_id[a].deviation_cap > 0:
                coeffs[f"d{a}"] = coeffs.get(f"d{a}", ZERO) - 1
        nominal = sum((g.arc_by_id[a].nominal for a in y.arcs), ZERO)
        constraints.append(LpConstraint(coeffs, "<=", nominal))
    constraints.append(LpConstraint({f"d{a}": 1 for a in arc_ids}, "<=", gamma))
    return LinearProgram(
        variables=tuple(variables),
        constraints=tuple(constraints),
        objective={"t": 1},
        sense="max",
    )


def _scenario_from_point(point) -> Scenario:
    return Scenario.from_map(
        {int(name[1:]): value for name, value in point.items() if name != "t" and value != 0}
    )


def worst_continuous(inst: Instance, x: Path, pool_cap: int = DEFAULT_PATH_CAP) -> tuple[Scenario, Rat]:
    """Optimal continuous-budget scenario against first-stage path x."""
    if inst.budget.kind != "continuous":
        raise ValueError("instance budget is not continuous")
    gamma = inst.budget.gamma
    nominal_path, nominal_value = best_recovery(inst, x, Scenario.nominal())
    if gamma == 0 or all(a.deviation_cap == 0 for a in inst.graph.arcs):
        return Scenario.nominal(), nominal_value
    pool = [nominal_path]
    seen = {nominal_path.arcs}
    while True:
        result = lp_solve(_pool_lp(inst.graph, pool, gamma))
        assert result.status == "optimal", f"adversary LP came back {result.status}"
        scenario = _scenario_from_point(result.point)
        target = result.value
        response, value = best_recovery(inst, x, scenario)
        if value == target:
            return scenario, value
        assert value < target and response.arcs not in seen
        if len(pool) >= pool_cap:
            raise PoolOverflowError(pool_cap)
        pool.append(response)
        seen.add(response.arcs)


def worst_continuous_full(inst: Instance, x: Path, path_cap: int = DEFAULT_PATH_CAP) -> tuple[Scenario, Rat]:
    """Oracle variant: one LP over the entire recovery neighborhood."""
    if inst.budget.kind != "continuous":
        raise ValueError("instance budget is not continuous")
    gamma = inst.budget.gamma
    pool = [
        y
        for y in enumerate_st_paths(inst.graph, cap=path_cap)
        if neighborhood_contains(x, y, inst.rule)
    ]
    if gamma == 0 or all(a.deviation_cap == 0 for a in inst.graph.arcs):
        best = min(
            (path_cost(inst.graph, y, "second", Scenario.nominal()) for y in pool),
        )
        return Scenario.nominal(), best
    result = lp_solve(_pool_lp(inst.graph, pool, gamma))
    assert result.status == "optimal", f"adversary LP came back {result.status}"
    return _scenario_from_point(result.point), result.value


def worst_discrete(inst: Instance, x: Path, subset_cap: int = DEFAULT_SUBSET_CAP) -> tuple[Scenario, Rat]:
    """Optimal discrete-budget scenario: full-cap deviations on a best support.

    Only supports of the largest allowed size are scanned; any smaller
    support is dominated by a superset because the recovery minimum is
    nondecreasing in every arc cost.  Ties keep the lexicographically
    smallest support.
    """
    if inst.budget.kind != "discrete":
        raise ValueError("instance budget is not discrete")
    uncertain = sorted(a.id for a in inst.graph.arcs if a.deviation_cap > 0)
    size = min(inst.budget.gamma, len(uncertain))
    count = math.comb(len(uncertain), size)
    if count > subset_cap:
        raise SubsetOverflowError(count, subset_cap)
    caps = {a.id: a.deviation_cap for a in inst.graph.arcs}
    best_scenario = None
    best_value = None
    for support in itertools.combinations(uncertain, size):
        scenario = Scenario(tuple((a, caps[a]) for a in support))
        _, value = best_recovery(inst, x, scenario)
        if best_value is None or value > best_value:
            best_scenario, best_value = scenario, value
    return best_scenario, best_value
