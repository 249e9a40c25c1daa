"""Neighborhood membership and the inner recovery minimization.

All three neighborhood kinds reduce to one signed integer resource per arc:

    incl: w(e) = [e not in X],            feasible iff sum w <= k
    excl: w(e) = -[e in X],               feasible iff sum w <= k - |X|
    sym:  w(e) = [e not in X] - [e in X], feasible iff sum w <= k - |X|

best_recovery runs a backward sweep that keeps, per node, the Pareto staircase
of (suffix resource, suffix cost).  Two exact integer bounds on the prefix
resource let us drop labels no prefix can ever use and collapse labels every
prefix can use, and an escalating cost cap discards expensive labels whenever
a cheap feasible path exists, which keeps the staircases tiny in practice.
The witness path is rebuilt by a greedy forward walk choosing the smallest
arc id that still completes optimally, i.e. the lexicographically smallest
optimal recovery path.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Optional

from .model import Digraph, Instance, Path, RecoveryRule, Scenario, check_path, path_cost, topological_order
from .rational import Rat, ZERO


class RecoveryInfeasibleError(RuntimeError):
    """The recovery neighborhood is empty (cannot happen for a valid X)."""


def neighborhood_contains(x: Path, y: Path, rule: RecoveryRule) -> bool:
    """Membership of y in the recovery neighborhood of x."""
    xs, ys = x.arc_set, y.arc_set
    if rule.kind == "incl":
        return len(ys - xs) <= rule.k
    if rule.kind == "excl":
        return len(xs - ys) <= rule.k
    return len(ys - xs) + len(xs - ys) <= rule.k


def _resource(rule: RecoveryRule, x: Path) -> tuple[int, int, int]:
    """Arc weights (for arcs in x / not in x) and the feasibility cap."""
    if rule.kind == "incl":
        return 0, 1, rule.k
    if rule.kind == "excl":
        return -1, 0, rule.k - len(x.arcs)
    return -1, 1, rule.k - len(x.arcs)


def best_recovery(inst: Instance, x: Path, scenario: Scenario) -> tuple[Path, Rat]:
    """Minimum second-stage-cost path in the neighborhood of x under scenario.

    Ties are broken by lexicographically smallest arc-id sequence.
    """
    g = inst.graph
    check_path(g, x)
    x_set = x.arc_set
    w_in, w_out, kappa = _resource(inst.rule, x)
    arc_w = {arc.id: (w_in if arc.id in x_set else w_out) for arc in g.arcs}
    arc_c = {arc.id: arc.nominal + scenario.get(arc.id) for arc in g.arcs}

    order = topological_order(g)
    pre_min, pre_max = _prefix_resource_bounds(g, order, arc_w)

    # x itself is always in its own neighborhood, so its cost caps the answer
    ub = path_cost(g, x, "second", scenario)
    cap = ZERO + 1
    if ub < cap:
        cap = ub
    while True:
        labels = _suffix_labels(g, order, arc_w, arc_c, kappa, pre_min, pre_max, cap)
        value = _query(labels.get(g.source), kappa)
        if value is not None:
            return _reconstruct(g, labels, arc_w, arc_c, kappa, value), value
        if cap >= ub:
            raise RecoveryInfeasibleError("no feasible recovery path")
        cap = min(cap * 4, ub)


def _prefix_resource_bounds(g: Digraph, order, arc_w):
    """Exact min/max of the summed resource over s->v paths (None: unreachable)."""
    pre_min: list[Optional[int]] = [None] * g.node_count
    pre_max: list[Optional[int]] = [None] * g.node_count
    pre_min[g.source] = pre_max[g.source] = 0
    for node in order:
        if pre_min[node] is None:
            continue
        for arc in g.out_arcs[node]:
            w = arc_w[arc.id]
            head = arc.head
            lo, hi = pre_min[node] + w, pre_max[node] + w
            if pre_min[head] is None or lo < pre_min[head]:
                pre_min[head] = lo
            if pre_max[head] is None or hi > pre_max[head]:
                pre_max[head] = hi
    return pre_min, pre_max


def _suffix_labels(g, order, arc_w, arc_c, kappa, pre_min, pre_max, cap):
    """Backward Pareto staircases: per node, (resource asc, cost desc) pairs."""
    labels: dict[int, list[tuple[int, Rat]]] = {g.sink: [(0, ZERO)]}
    for node in reversed(order):
        if node == g.sink or pre_min[node] is None:
            continue
        drop_above = kappa - pre_min[node]
        clamp_at = kappa - pre_max[node]
        candidates: list[tuple[int, Rat]] = []
        for arc in g.out_arcs[node]:
            suffix = labels.get(arc.head)
            if not suffix:
                continue
            w, c = arc_w[arc.id], arc_c[arc.id]
            for r, cost in suffix:
                r2 = r + w
                if r2 > drop_above:
                    continue
                cost2 = c + cost
                if cost2 > cap:
                    continue
                if r2 < clamp_at:
                    r2 = clamp_at
                candidates.append((r2, cost2))
        if candidates:
            labels[node] = _pareto(candidates)
    return labels


def _pareto(candidates: list[tuple[int, Rat]]) -> list[tuple[int, Rat]]:
    candidates.sort()
    staircase: list[tuple[int, Rat]] = []
    for r, c in candidates:
        if staircase and staircase[-1][0] == r:
            continue  # same resource, later = larger or equal cost after sort
        if not staircase or c < staircase[-1][1]:
            staircase.append((r, c))
    return staircase


def _query(staircase, bound: int) -> Optional[Rat]:
    """Min suffix cost among labels with resource <= bound."""
    if not staircase:
        return None
    idx = bisect_right(staircase, bound, key=lambda item: item[0])
    if idx == 0:
        return None
    return staircase[idx - 1][1]


def _reconstruct(g, labels, arc_w, arc_c, kappa, value) -> Path:
    arcs: list[int] = []
    node = g.source
    used_r = 0
    used_c = ZERO
    while node != g.sink:
        for arc in g.out_arcs[node]:
            r2 = used_r + arc_w[arc.id]
            c2 = used_c + arc_c[arc.id]
            if c2 > value:
                continue
            rest = _query(labels.get(arc.head), kappa - r2)
            if rest is not None and c2 + rest == value:
                arcs.append(arc.id)
                node = arc.head
                used_r, used_c = r2, c2
                break
        else:
            raise AssertionError("witness reconstruction lost the optimal path")
    return Path(tuple(arcs))
