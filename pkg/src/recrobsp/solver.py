"""Outer minimization: exact optimum with witnesses.

Every first-stage candidate is enumerated lexicographically and scored by
first-stage cost plus exact adversary value.  Before scoring, a candidate is
discarded if its recovery value under the incumbent's worst scenario already
matches the incumbent: that scenario is feasible for the adversary, so the
true score can only be larger.  (This dominates the nominal-scenario bound,
which it generalizes, and costs the same single DP call.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .adversary import worst_continuous, worst_continuous_full, worst_discrete
from .model import (
    DEFAULT_PATH_CAP,
    Instance,
    Path,
    PathOverflowError,
    Scenario,
    enumerate_st_paths,
    path_cost,
    validate_instance,
)
from .rational import Rat, ZERO
from .recovery import best_recovery, neighborhood_contains


@dataclass(frozen=True)
class SolveResult:
    opt: Rat
    first_stage: Path
    worst_scenario: Scenario
    best_recovery: Path
    explored: int  # first-stage candidates scored with the full adversary


class SolveOverflowError(RuntimeError):
    """Path enumeration exceeded the cap; carries the best incumbent so far."""

    def __init__(self, cap: int, partial: Optional[SolveResult]):
        self.cap = cap
        self.partial = partial
        super().__init__(f"first-stage enumeration exceeded {cap} paths")


def _require_valid(inst: Instance) -> None:
    problems = validate_instance(inst)
    if problems:
        raise ValueError("invalid instance: " + "; ".join(problems))


def _run(inst: Instance, adversary: Callable, path_cap: int, prune: bool) -> SolveResult:
    g = inst.graph
    incumbent = None  # (score, x, scenario)
    explored = 0

    def finish() -> SolveResult:
        score, x, scenario = incumbent
        y, value = best_recovery(inst, x, scenario)
        assert path_cost(g, x, "first") + value == score
        return SolveResult(
            opt=score,
            first_stage=x,
            worst_scenario=scenario,
            best_recovery=y,
            explored=explored,
        )

    try:
        for x in enumerate_st_paths(g, cap=path_cap):
            c1 = path_cost(g, x, "first")
            if incumbent is not None and prune:
                if c1 >= incumbent[0]:
                    continue
                _, bound = best_recovery(inst, x, incumbent[2])
                if c1 + bound >= incumbent[0]:
                    continue
            scenario, value = adversary(inst, x)
            explored += 1
            score = c1 + value
            if incumbent is None or score < incumbent[0]:
                incumbent = (score, x, scenario)
    except PathOverflowError as err:
        raise SolveOverflowError(err.cap, incumbent and finish()) from err
    assert incumbent is not None, "validated instances have at least one s-t path"
    return finish()


def solve(inst: Instance, path_cap: int = DEFAULT_PATH_CAP) -> SolveResult:
    """Exact global optimum with pruning; deterministic lexicographic ties."""
    _require_valid(inst)
    adversary = worst_continuous if inst.budget.kind == "continuous" else worst_discrete
    return _run(inst, adversary, path_cap, prune=True)


def brute_solve(inst: Instance, path_cap: int = DEFAULT_PATH_CAP) -> SolveResult:
    """Independent oracle: no pruning, full-enumeration continuous adversary,
    exhaustive subset scan (all sizes) for the discrete adversary."""
    _require_valid(inst)
    if inst.budget.kind == "continuous":
        adversary = worst_continuous_full
    else:
        adversary = _discrete_all_subsets
    return _run(inst, adversary, path_cap, prune=False)


def _discrete_all_subsets(inst: Instance, x: Path) -> tuple[Scenario, Rat]:
    import itertools

    caps = {a.id: a.deviation_cap for a in inst.graph.arcs}
    uncertain = sorted(a for a, cap in caps.items() if cap > 0)
    best = None
    for size in range(0, min(inst.budget.gamma, len(uncertain)) + 1):
        for support in itertools.combinations(uncertain, size):
            scenario = Scenario(tuple((a, caps[a]) for a in support))
            _, value = best_recovery(inst, x, scenario)
            if best is None or value > best[1]:
                best = (scenario, value)
    return best
