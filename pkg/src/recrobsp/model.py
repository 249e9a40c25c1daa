"""Problem data model: acyclic multigraph, costs, budgets, paths, scenarios.

Node ids are integers 0..node_count-1.  Arcs are identified by id only;
parallel arcs are allowed and common (the reduction gadgets need them).
Everything is immutable after construction and all arithmetic is exact.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Optional, Sequence

from .rational import Rat, ZERO, rat

NEIGHBORHOOD_KINDS = ("incl", "excl", "sym")
BUDGET_KINDS = ("continuous", "discrete")
ARC_ROLES = ("vertical", "diagonal", "dashed", "dotted", "solid-normal", "solid-fat", "plain")

DEFAULT_PATH_CAP = 10**6


class CycleError(ValueError):
    """Raised when a digraph that must be acyclic contains a cycle."""

    def __init__(self, cycle: Sequence[int]):
        self.cycle = tuple(cycle)
        super().__init__(f"cycle detected through nodes {self.cycle}")


class PathOverflowError(RuntimeError):
    """Raised when an enumeration would exceed its path cap."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"more than {cap} s-t paths")


class InvalidPathError(ValueError):
    pass


@dataclass(frozen=True)
class Arc:
    """One arc with first-stage cost C and second-stage interval [chat, chat+delta]."""

    id: int
    tail: int
    head: int
    first_stage_cost: Rat
    nominal: Rat
    deviation_cap: Rat
    role: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "first_stage_cost", rat(self.first_stage_cost))
        object.__setattr__(self, "nominal", rat(self.nominal))
        object.__setattr__(self, "deviation_cap", rat(self.deviation_cap))
        if self.tail == self.head:
            raise ValueError(f"arc {self.id}: self-loop at node {self.tail}")
        if self.first_stage_cost < 0 or self.nominal < 0 or self.deviation_cap < 0:
            raise ValueError(f"arc {self.id}: negative cost data")
        if self.role is not None and self.role not in ARC_ROLES:
            raise ValueError(f"arc {self.id}: unknown role {self.role!r}")


@dataclass(frozen=True)
class Digraph:
    """Directed multigraph with distinguished source and sink.

    Acyclicity is a property of valid instances but is deliberately not
    enforced here; ``topological_order`` and ``validate_instance`` check it.
    """

    node_count: int
    arcs: tuple[Arc, ...]
    source: int
    sink: int

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if self.node_count < 1:
            raise ValueError("node_count must be positive")
        for node in (self.source, self.sink):
            if not 0 <= node < self.node_count:
                raise ValueError(f"node id {node} out of range")
        seen = set()
        for arc in self.arcs:
            if arc.id in seen:
                raise ValueError(f"duplicate arc id {arc.id}")
            seen.add(arc.id)
            for node in (arc.tail, arc.head):
                if not 0 <= node < self.node_count:
                    raise ValueError(f"arc {arc.id}: node id {node} out of range")

    @cached_property
    def arc_by_id(self) -> Mapping[int, Arc]:
        return {arc.id: arc for arc in self.arcs}

    @cached_property
    def out_arcs(self) -> tuple[tuple[Arc, ...], ...]:
        """Outgoing arcs per node, sorted by arc id (drives lexicographic order)."""
        out: list[list[Arc]] = [[] for _ in range(self.node_count)]
        for arc in self.arcs:
            out[arc.tail].append(arc)
        return tuple(tuple(sorted(bucket, key=lambda a: a.id)) for bucket in out)

    @cached_property
    def in_arcs(self) -> tuple[tuple[Arc, ...], ...]:
        inc: list[list[Arc]] = [[] for _ in range(self.node_count)]
        for arc in self.arcs:
            inc[arc.head].append(arc)
        return tuple(tuple(sorted(bucket, key=lambda a: a.id)) for bucket in inc)


@dataclass(frozen=True)
class RecoveryRule:
    """Neighborhood kind and recovery parameter k.

    incl: |Y \\ X| <= k, excl: |X \\ Y| <= k, sym: |Y \\ X| + |X \\ Y| <= k.
    """

    kind: str
    k: int

    def __post_init__(self):
        if self.kind not in NEIGHBORHOOD_KINDS:
            raise ValueError(f"unknown neighborhood kind {self.kind!r}")
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError("k must be a nonnegative integer")


@dataclass(frozen=True)
class Budget:
    """Uncertainty budget: continuous caps total deviation, discrete caps support size."""

    kind: str
    gamma: Rat | int

    def __post_init__(self):
        if self.kind == "continuous":
            object.__setattr__(self, "gamma", rat(self.gamma))
            if self.gamma < 0:
                raise ValueError("continuous budget must be nonnegative")
        elif self.kind == "discrete":
            if not isinstance(self.gamma, int) or self.gamma < 0:
                raise ValueError("discrete budget must be a nonnegative integer")
        else:
            raise ValueError(f"unknown budget kind {self.kind!r}")

    @classmethod
    def continuous(cls, gamma) -> "Budget":
        return cls("continuous", rat(gamma))

    @classmethod
    def discrete(cls, gamma: int) -> "Budget":
        return cls("discrete", gamma)


@dataclass(frozen=True)
class Instance:
    graph: Digraph
    rule: RecoveryRule
    budget: Budget


@dataclass(frozen=True)
class Path:
    """An s-t path as an ordered arc-id sequence (arc sets are derived)."""

    arcs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))

    @cached_property
    def arc_set(self) -> frozenset[int]:
        return frozenset(self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.arcs)


@dataclass(frozen=True)
class Scenario:
    """Per-arc second-stage cost deviations; arcs not listed deviate by zero."""

    deviations: tuple[tuple[int, Rat], ...]

    def __post_init__(self):
        cleaned = tuple(
            (arc_id, rat(dev)) for arc_id, dev in sorted(self.deviations) if rat(dev) != 0
        )
        object.__setattr__(self, "deviations", cleaned)

    @classmethod
    def from_map(cls, deviations: Mapping[int, Rat]) -> "Scenario":
        return cls(tuple(deviations.items()))

    @classmethod
    def nominal(cls) -> "Scenario":
        return cls(())

    @cached_property
    def _table(self) -> Mapping[int, Rat]:
        return dict(self.deviations)

    def get(self, arc_id: int) -> Rat:
        return self._table.get(arc_id, ZERO)

    def total(self) -> Rat:
        return sum((dev for _, dev in self.deviations), ZERO)

    def support(self) -> tuple[int, ...]:
        return tuple(arc_id for arc_id, _ in self.deviations)


def topological_order(g: Digraph) -> list[int]:
    """Node order with every arc pointing forward; ties by ascending node id.

    Cached on the graph: instances are immutable and the solver's inner DP
    needs the order on every call.
    """
    cached = g.__dict__.get("_topo_order")
    if cached is None:
        cached = _compute_topological_order(g)
        g.__dict__["_topo_order"] = cached
    return list(cached)


def _compute_topological_order(g: Digraph) -> list[int]:
    indeg = [0] * g.node_count
    for arc in g.arcs:
        indeg[arc.head] += 1
    ready = [node for node in range(g.node_count) if indeg[node] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for arc in g.out_arcs[node]:
            indeg[arc.head] -= 1
            if indeg[arc.head] == 0:
                heapq.heappush(ready, arc.head)
    if len(order) < g.node_count:
        raise CycleError(_find_cycle(g, set(range(g.node_count)) - set(order)))
    return order


def _find_cycle(g: Digraph, candidates: set[int]) -> list[int]:
    """Walk forward inside the unresolved node set until a node repeats."""
    start = min(candidates)
    seen_at: dict[int, int] = {}
    walk = [start]
    seen_at[start] = 0
    node = start
    while True:
        node = next(arc.head for arc in g.out_arcs[node] if arc.head in candidates)
        if node in seen_at:
            return walk[seen_at[node]:]
        seen_at[node] = len(walk)
        walk.append(node)


def topological_positions(g: Digraph) -> list[int]:
    positions = [0] * g.node_count
    for pos, node in enumerate(topological_order(g)):
        positions[node] = pos
    return positions


def enumerate_st_paths(g: Digraph, cap: int = DEFAULT_PATH_CAP) -> Iterator[Path]:
    """Yield every s-t path once, in lexicographic arc-id order.

    Raises PathOverflowError as soon as a (cap+1)-th path is found.  In a DAG
    every walk is simple, so no visited set is needed; reaching the cap is
    the only failure mode (callers must ensure acyclicity first).
    """
    # skip nodes that cannot reach the sink, otherwise the DFS can stall
    can_reach = _reaches_sink(g)
    if not can_reach[g.source]:
        return
    count = 0
    stack: list[int] = []  # arc ids of the current partial path
    iters = [iter(arc for arc in g.out_arcs[g.source] if can_reach[arc.head])]
    arc_by_id = g.arc_by_id
    while iters:
        arc = next(iters[-1], None)
        if arc is None:
            iters.pop()
            if stack:
                stack.pop()
            continue
        stack.append(arc.id)
        if arc.head == g.sink:
            count += 1
            if count > cap:
                raise PathOverflowError(cap)
            yield Path(tuple(stack))
            stack.pop()
        else:
            iters.append(iter(a for a in g.out_arcs[arc.head] if can_reach[a.head]))


def _reaches_sink(g: Digraph) -> list[bool]:
    can = [False] * g.node_count
    can[g.sink] = True
    pending = [g.sink]
    while pending:
        node = pending.pop()
        for arc in g.in_arcs[node]:
            if not can[arc.tail]:
                can[arc.tail] = True
                pending.append(arc.tail)
    return can


def check_path(g: Digraph, path: Path) -> None:
    """Raise InvalidPathError unless path is a well-formed s-t path of g."""
    if not path.arcs:
        raise InvalidPathError("empty arc sequence")
    arcs = []
    for arc_id in path.arcs:
        arc = g.arc_by_id.get(arc_id)
        if arc is None:
            raise InvalidPathError(f"unknown arc id {arc_id}")
        arcs.append(arc)
    if arcs[0].tail != g.source:
        raise InvalidPathError(f"path starts at node {arcs[0].tail}, not the source")
    if arcs[-1].head != g.sink:
        raise InvalidPathError(f"path ends at node {arcs[-1].head}, not the sink")
    for prev, nxt in zip(arcs, arcs[1:]):
        if prev.head != nxt.tail:
            raise InvalidPathError(f"arcs {prev.id} and {nxt.id} do not chain")
    if len(path.arc_set) != len(path.arcs):
        raise InvalidPathError("repeated arc id")


def path_cost(g: Digraph, path: Path, stage: str, scenario: Optional[Scenario] = None) -> Rat:
    """Exact path cost: first stage sums C_e, second stage sums chat_e + d_e."""
    if stage == "first":
        if scenario is not None:
            raise ValueError("first-stage cost takes no scenario")
        return sum((_arc(g, a).first_stage_cost for a in path.arcs), ZERO)
    if stage == "second":
        if scenario is None:
            raise ValueError("second-stage cost needs a scenario")
        return sum((_arc(g, a).nominal + scenario.get(a) for a in path.arcs), ZERO)
    raise ValueError(f"unknown stage {stage!r}")


def _arc(g: Digraph, arc_id: int) -> Arc:
    arc = g.arc_by_id.get(arc_id)
    if arc is None:
        raise InvalidPathError(f"unknown arc id {arc_id}")
    return arc


def scenario_violations(inst: Instance, scenario: Scenario) -> list[str]:
    """Check deviation bounds and the budget constraint; empty list = valid."""
    problems = []
    g = inst.graph
    for arc_id, dev in scenario.deviations:
        arc = g.arc_by_id.get(arc_id)
        if arc is None:
            problems.append(f"deviation on unknown arc {arc_id}")
            continue
        if dev < 0:
            problems.append(f"arc {arc_id}: negative deviation {dev}")
        if dev > arc.deviation_cap:
            problems.append(f"arc {arc_id}: deviation {dev} exceeds cap {arc.deviation_cap}")
    budget = inst.budget
    if budget.kind == "continuous":
        total = scenario.total()
        if total > budget.gamma:
            problems.append(f"total deviation {total} exceeds budget {budget.gamma}")
    else:
        support = len(scenario.deviations)
        if support > budget.gamma:
            problems.append(f"{support} deviating arcs exceed budget {budget.gamma}")
    return problems


def validate_instance(inst: Instance) -> list[str]:
    """Global instance checks; violations are returned as data, not raised."""
    problems = []
    g = inst.graph
    try:
        topological_order(g)
    except CycleError as err:
        problems.append(f"cycle detected: {err.cycle}")
        return problems
    if g.source == g.sink:
        problems.append("source equals sink")
    if not _reaches_sink(g)[g.source]:
        problems.append("no s-t path exists")
    if inst.budget.kind == "discrete" and inst.budget.gamma > len(g.arcs):
        problems.append(
            f"discrete budget {inst.budget.gamma} exceeds arc count {len(g.arcs)}"
        )
    return problems
