"""Hardness-construction instance generators with machine-checkable metadata.

Two families:

* Hamiltonian-path reductions (continuous and discrete budget): a layered
  graph of n disjoint vertical s-t chains of 2n+1 arcs plus diagonal arcs
  mirroring the source digraph's arcs between consecutive even/odd layers.

* MAX-3-SAT reduction: one clause gadget per q-tuple of clauses.  Every
  non-contradictory q-tuple of literals gets a private "literal path" of
  exactly 2n+1 arcs (q solid-fat literal arcs, the rest dotted dummies with
  fresh interior nodes).  Horizontal solid-normal chains thread each
  variable/sign layer through all gadgets, passing through every literal arc
  of that layer, so a solid s-t path encodes an assignment and meets a
  literal path in exactly its satisfied components.  Literal paths begin and
  end with a dummy arc so gadget entry/exit nodes never join the chains;
  that keeps the solid-path count at exactly 2^n and rules out zero-nominal
  hybrid paths inside a gadget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import Arc, Budget, Digraph, Instance, InvalidPathError, Path, RecoveryRule
from .oracles import CnfFormula
from .rational import Rat, ZERO, rat


# ---------------------------------------------------------------------------
# Hamiltonian-path reductions


@dataclass(frozen=True)
class HpReductionMeta:
    n: int
    kind: str
    k: int
    big_m: Rat
    threshold: Rat
    vertical_paths: tuple[tuple[int, ...], ...]
    dashed_arcs: tuple[int, ...]


def _hp_recovery_k(n: int, kind: str) -> int:
    return 4 * n if kind == "sym" else 2 * n


def _build_hp_graph(n: int, source_arcs, arc_cost) -> tuple[Digraph, list[tuple[int, ...]], list[int]]:
    """Shared topology: vertical chains plus diagonals; costs via arc_cost(role)."""

    def grid(i: int, j: int) -> int:  # i in [0,n), j in [1,2n]
        return 1 + (j - 1) * n + i

    s, t = 0, 2 * n * n + 1
    arcs = []
    vertical_paths = []
    dashed = []

    def add(tail, head, role):
        c1, chat, delta = arc_cost(role)
        arcs.append(Arc(len(arcs), tail, head, c1, chat, delta, role))
        return len(arcs) - 1

    for i in range(n):
        chain = [add(s, grid(i, 1), "dashed")]
        dashed.append(chain[0])
        for j in range(1, 2 * n):
            chain.append(add(grid(i, j), grid(i, j + 1), "vertical"))
        chain.append(add(grid(i, 2 * n), t, "vertical"))
        vertical_paths.append(tuple(chain))
    for j in range(1, n):
        for (u, w) in sorted(set(source_arcs)):
            add(grid(u, 2 * j), grid(w, 2 * j + 1), "diagonal")
    g = Digraph(node_count=2 * n * n + 2, arcs=tuple(arcs), source=s, sink=t)
    return g, vertical_paths, dashed


def _check_hp_source(n: int, source_arcs) -> None:
    if n < 2:
        raise ValueError("source digraph needs at least 2 nodes")
    for (u, w) in source_arcs:
        if u == w:
            raise ValueError(f"self-loop at source node {u}")
        if not (0 <= u < n and 0 <= w < n):
            raise ValueError(f"source arc ({u}, {w}) out of range")


def reduce_hp_continuous(n: int, source_arcs: Sequence[tuple[int, int]], kind: str) -> tuple[Instance, HpReductionMeta]:
    """Continuous-budget instance: OPT = 1/n iff the source has a Hamiltonian path."""
    _check_hp_source(n, source_arcs)
    big_m = rat(2)  # any value above the budget works

    def cost(role):
        if role == "diagonal":
            return ZERO, big_m, ZERO
        return ZERO, ZERO, big_m  # dashed and vertical: interval [0, M]

    g, vertical, dashed = _build_hp_graph(n, source_arcs, cost)
    k = _hp_recovery_k(n, kind)
    inst = Instance(g, RecoveryRule(kind, k), Budget.continuous(1))
    meta = HpReductionMeta(
        n=n,
        kind=kind,
        k=k,
        big_m=big_m,
        threshold=Rat(1, n),
        vertical_paths=tuple(vertical),
        dashed_arcs=tuple(dashed),
    )
    return inst, meta


def reduce_hp_discrete(n: int, source_arcs: Sequence[tuple[int, int]], kind: str) -> tuple[Instance, HpReductionMeta]:
    """Discrete-budget variant: OPT = 0 iff the source has a Hamiltonian path."""
    _check_hp_source(n, source_arcs)

    def cost(role):
        if role == "diagonal":
            return ZERO, rat(1), ZERO
        if role == "dashed":
            return ZERO, ZERO, rat(1)
        return ZERO, ZERO, ZERO

    g, vertical, dashed = _build_hp_graph(n, source_arcs, cost)
    k = _hp_recovery_k(n, kind)
    inst = Instance(g, RecoveryRule(kind, k), Budget.discrete(n - 1))
    meta = HpReductionMeta(
        n=n,
        kind=kind,
        k=k,
        big_m=rat(1),
        threshold=ZERO,
        vertical_paths=tuple(vertical),
        dashed_arcs=tuple(dashed),
    )
    return inst, meta


def hp_witness_path(inst: Instance, meta: HpReductionMeta, order: Sequence[int]) -> Path:
    """First-stage path induced by a Hamiltonian node order of the source."""
    n = meta.n
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the source nodes")
    by_ends: dict[tuple[int, int], int] = {}
    for arc in inst.graph.arcs:
        key = (arc.tail, arc.head)
        if key not in by_ends or arc.id < by_ends[key]:
            by_ends[key] = arc.id

    def grid(i, j):
        return 1 + (j - 1) * n + i

    nodes = [0]
    for step, i in enumerate(order):
        j = 2 * step + 1
        nodes += [grid(i, j), grid(i, j + 1)]
    nodes.append(2 * n * n + 1)
    try:
        return Path(tuple(by_ends[(a, b)] for a, b in zip(nodes, nodes[1:])))
    except KeyError as missing:
        raise ValueError(f"order is not a Hamiltonian path: missing arc {missing}") from None


# ---------------------------------------------------------------------------
# MAX-3-SAT reduction


@dataclass(frozen=True)
class LiteralPathMeta:
    literals: tuple[int, ...]       # the q-tuple of signed literals
    arcs: tuple[int, ...]           # all 2n+1 arc ids in path order
    literal_arcs: tuple[int, ...]   # the q solid-fat arc ids in path order


@dataclass(frozen=True)
class GadgetMeta:
    clauses: tuple[int, ...]        # clause indices of this gadget's q-tuple
    entry_node: int
    exit_node: int
    dashed_arc: int
    dotted_arc: int
    literal_paths: tuple[LiteralPathMeta, ...]


@dataclass(frozen=True)
class SatReductionMeta:
    n: int
    m: int
    q: int
    kind: str
    k: int
    r: Optional[int]                # per-segment arc count, excl/sym only
    start_arc: int                  # the (s, u_1) arc
    segments: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    # segments[i] = (route for x_{i+1}=0, route for x_{i+1}=1), arc ids
    gadgets: tuple[GadgetMeta, ...]

    def encode_assignment(self, assignment: Sequence[int]) -> Path:
        if len(assignment) != self.n or any(v not in (0, 1) for v in assignment):
            raise ValueError("assignment must be n values in {0, 1}")
        arcs: list[int] = [self.start_arc]
        for i, value in enumerate(assignment):
            arcs.extend(self.segments[i][value])
        return Path(tuple(arcs))

    def decode_path(self, path: Path) -> tuple[int, ...]:
        assignment = []
        for i in range(self.n):
            if self.segments[i][1][0] in path.arc_set:
                assignment.append(1)
            elif self.segments[i][0][0] in path.arc_set:
                assignment.append(0)
            else:
                raise InvalidPathError(f"path selects no route for variable {i + 1}")
        if self.encode_assignment(assignment).arcs != path.arcs:
            raise InvalidPathError("path is not a solid assignment path")
        return tuple(assignment)


def _literal_layer(lit: int) -> int:
    # layers 0..2n-1: x_1, not-x_1, x_2, not-x_2, ...
    return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def _check_sat_preconditions(formula: CnfFormula, q: int) -> None:
    n = formula.variable_count
    if not 1 <= q < 2 * n:
        raise ValueError(f"q must satisfy 1 <= q < 2n = {2 * n}, got {q}")
    seen_positive = set()
    seen_negative = set()
    for idx, clause in enumerate(formula.clauses):
        literals = set(clause)
        for lit in literals:
            if -lit in literals:
                raise ValueError(
                    f"clause {idx + 1} contains variable {abs(lit)} and its negation"
                )
            (seen_positive if lit > 0 else seen_negative).add(abs(lit))
    for var in range(1, n + 1):
        if var not in seen_positive:
            raise ValueError(f"variable {var} never appears as a positive literal")
        if var not in seen_negative:
            raise ValueError(f"variable {var} never appears as a negative literal")


def reduce_max3sat(formula: CnfFormula, q: int, kind: str) -> tuple[Instance, SatReductionMeta]:
    """Instance whose optimum is 1 / (max satisfiable clause count)^q."""
    _check_sat_preconditions(formula, q)
    n, m = formula.variable_count, len(formula.clauses)
    layers = 2 * n
    path_len = layers + 1
    gadget_tuples = list(itertools.product(range(m), repeat=q))

    # literal tuples and the layer positions of their literal arcs
    gadget_lp: list[list[tuple[tuple[int, ...], list[tuple[int, int, int]]]]] = []
    for clause_tuple in gadget_tuples:
        tuples_here = []
        for literals in itertools.product(*(formula.clauses[c] for c in clause_tuple)):
            chosen = set(literals)
            if any(-lit in chosen for lit in chosen):
                continue  # contradictory literal tuple: no path
            components = sorted(
                ((_literal_layer(lit), j, lit) for j, lit in enumerate(literals))
            )
            # positions strictly increase and stay interior (2..2n) so literal
            # paths always start and end with a dummy arc
            positions = []
            for layer, j, lit in components:
                lo = max(layer + 1, 2, (positions[-1][0] + 1) if positions else 2)
                positions.append([lo, j, lit])
            for idx in range(len(positions) - 1, -1, -1):
                cap = layers - (len(positions) - 1 - idx)
                if positions[idx][0] > cap:
                    positions[idx][0] = cap
            placed = [(pos, j, lit) for pos, j, lit in positions]
            assert all(2 <= p <= layers for p, _, _ in placed)
            assert all(a[0] < b[0] for a, b in zip(placed, placed[1:]))
            tuples_here.append((literals, placed))
        gadget_lp.append(tuples_here)

    # node allocation
    next_node = 0

    def new_node() -> int:
        nonlocal next_node
        next_node += 1
        return next_node - 1

    s = new_node()
    u_nodes = [new_node() for _ in range(n)]
    t = new_node()
    entry = [new_node() for _ in gadget_tuples]
    exit_ = [new_node() for _ in gadget_tuples]
    in_node = [[new_node() for _ in range(layers)] for _ in gadget_tuples]
    out_node = [[new_node() for _ in range(layers)] for _ in gadget_tuples]
    # interior nodes of each literal path: positions 0..path_len map to
    # entry, chain[0..layers-2], exit
    lp_nodes = [
        [[new_node() for _ in range(layers - 1)] for _ in gadget_lp[gi]]
        for gi in range(len(gadget_tuples))
    ]

    def lp_node(gi: int, ti: int, pos: int) -> int:
        # node after arc position pos (0 = gadget entry, path_len = gadget exit)
        if pos == 0:
            return entry[gi]
        if pos == path_len:
            return exit_[gi]
        return lp_nodes[gi][ti][pos - 1]

    # copies per (gadget, layer): (tuple index, component, position), chained
    # in tuple-lexicographic order
    copies: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for gi in range(len(gadget_tuples)):
        for ti, (literals, placed) in enumerate(gadget_lp[gi]):
            for pos, j, lit in placed:
                copies.setdefault((gi, _literal_layer(lit)), []).append((ti, j, pos))
    for bucket in copies.values():
        bucket.sort()

    arcs: list[Arc] = []

    def add(tail: int, head: int, role: str) -> int:
        cost = {
            "solid-normal": (ZERO, rat(2), ZERO),
            "solid-fat": (ZERO, ZERO, ZERO),
            "dotted": (rat(2), ZERO, ZERO),
            "dashed": (rat(2), ZERO, rat(1)),
        }[role]
        arcs.append(Arc(len(arcs), tail, head, *cost, role))
        return len(arcs) - 1

    def chain_arc_count(gi: int, layer: int) -> int:
        """Arcs the horizontal chain uses inside gadget gi's given layer."""
        bucket = copies.get((gi, layer), [])
        if not bucket:
            return 1
        count = len(bucket) + 2  # copies + entry/exit connectors
        for (ti, _, pos), (ti2, _, pos2) in zip(bucket, bucket[1:]):
            if not (ti == ti2 and pos2 == pos + 1):  # fused pairs need none
                count += 1
        return count

    split_target = None
    if kind in ("excl", "sym"):
        split_target = len(gadget_tuples) * (q * 3**q + 1) + 1

    start_arc = add(s, u_nodes[0], "solid-normal")
    literal_arc_id: dict[tuple[int, int, int], int] = {}
    segments: list[list[tuple[int, ...]]] = [[(), ()] for _ in range(n)]
    for i in range(n):
        for sign_value in (1, 0):
            layer = 2 * i + (0 if sign_value else 1)
            natural = 2 + (len(gadget_tuples) - 1) + sum(
                chain_arc_count(gi, layer) for gi in range(len(gadget_tuples))
            )
            if split_target is None:
                first_len = 1
            else:
                assert natural <= split_target, "segment exceeds the split target"
                first_len = split_target - natural + 1
            segment: list[int] = []
            node = u_nodes[i]
            for _ in range(first_len - 1):
                mid = new_node()
                segment.append(add(node, mid, "solid-normal"))
                node = mid
            segment.append(add(node, in_node[0][layer], "solid-normal"))
            for gi in range(len(gadget_tuples)):
                cur = in_node[gi][layer]
                for ti, j, pos in copies.get((gi, layer), []):
                    tail = lp_node(gi, ti, pos - 1)
                    head = lp_node(gi, ti, pos)
                    if tail != cur:
                        segment.append(add(cur, tail, "solid-normal"))
                    arc_id = add(tail, head, "solid-fat")
                    literal_arc_id[(gi, ti, j)] = arc_id
                    segment.append(arc_id)
                    cur = head
                segment.append(add(cur, out_node[gi][layer], "solid-normal"))
                if gi + 1 < len(gadget_tuples):
                    segment.append(
                        add(out_node[gi][layer], in_node[gi + 1][layer], "solid-normal")
                    )
            last = out_node[len(gadget_tuples) - 1][layer]
            target = u_nodes[i + 1] if i + 1 < n else t
            segment.append(add(last, target, "solid-normal"))
            if split_target is not None:
                assert len(segment) == split_target
            segments[i][sign_value] = tuple(segment)

    gadget_metas = []
    for gi, clause_tuple in enumerate(gadget_tuples):
        dashed_arc = add(s, entry[gi], "dashed")
        lp_metas = []
        for ti, (literals, placed) in enumerate(gadget_lp[gi]):
            by_pos = {pos: (ti, j) for pos, j, lit in placed}
            path_arcs = []
            fat_arcs = []
            for pos in range(1, path_len + 1):
                if pos in by_pos:
                    arc_id = literal_arc_id[(gi, ti, by_pos[pos][1])]
                    fat_arcs.append(arc_id)
                else:
                    arc_id = add(lp_node(gi, ti, pos - 1), lp_node(gi, ti, pos), "dotted")
                path_arcs.append(arc_id)
            assert len(path_arcs) == path_len and len(fat_arcs) == q
            lp_metas.append(LiteralPathMeta(literals, tuple(path_arcs), tuple(fat_arcs)))
        dotted_arc = add(exit_[gi], t, "dotted")
        gadget_metas.append(
            GadgetMeta(
                clauses=clause_tuple,
                entry_node=entry[gi],
                exit_node=exit_[gi],
                dashed_arc=dashed_arc,
                dotted_arc=dotted_arc,
                literal_paths=tuple(lp_metas),
            )
        )

    if kind == "incl":
        k = 2 * n + 3 - q
    elif kind == "excl":
        k = n * split_target + 1 - q
    else:
        k = (2 * n + 3) + (n * split_target + 1) - 2 * q

    g = Digraph(node_count=next_node, arcs=tuple(arcs), source=s, sink=t)
    inst = Instance(g, RecoveryRule(kind, k), Budget.continuous(1))
    meta = SatReductionMeta(
        n=n,
        m=m,
        q=q,
        kind=kind,
        k=k,
        r=split_target,
        start_arc=start_arc,
        segments=tuple((seg[0], seg[1]) for seg in segments),
        gadgets=tuple(gadget_metas),
    )
    return inst, meta
