"""Shared generators for seeded random instances.

Everything is driven by explicit random.Random seeds so failures are
reproducible and CLI/golden outputs stay byte-identical across runs.
"""

from __future__ import annotations

import random

from recrobsp.model import Arc, Budget, Digraph, Instance, Path, RecoveryRule
from recrobsp.rational import Rat


def random_dag(rng: random.Random, nodes: int, extra_arcs: int, parallel_prob: float = 0.15) -> Digraph:
    """Random DAG on 0..nodes-1 with source 0, sink nodes-1 and an s-t spine."""
    arcs = []
    next_id = 0

    def add(tail, head):
        nonlocal next_id
        arcs.append(
            Arc(
                id=next_id,
                tail=tail,
                head=head,
                first_stage_cost=Rat(rng.randrange(0, 5)),
                nominal=Rat(rng.randrange(0, 5)),
                deviation_cap=Rat(rng.randrange(0, 4)),
            )
        )
        next_id += 1

    spine = sorted(rng.sample(range(1, nodes - 1), rng.randrange(0, max(1, nodes - 2))))
    spine = [0] + spine + [nodes - 1]
    for tail, head in zip(spine, spine[1:]):
        add(tail, head)
    for _ in range(extra_arcs):
        tail = rng.randrange(0, nodes - 1)
        head = rng.randrange(tail + 1, nodes)
        add(tail, head)
        if rng.random() < parallel_prob:
            add(tail, head)
    return Digraph(node_count=nodes, arcs=tuple(arcs), source=0, sink=nodes - 1)


def random_instance(rng: random.Random, max_nodes: int = 10, max_extra_arcs: int = 14,
                    kinds=("incl", "excl", "sym"), budget_kinds=("continuous", "discrete")) -> Instance:
    nodes = rng.randrange(3, max_nodes + 1)
    g = random_dag(rng, nodes, rng.randrange(0, max_extra_arcs + 1))
    rule = RecoveryRule(kind=rng.choice(kinds), k=rng.randrange(0, 7))
    if rng.choice(budget_kinds) == "continuous":
        budget = Budget.continuous(Rat(rng.randrange(0, 9), rng.choice((1, 2, 4))))
    else:
        budget = Budget.discrete(rng.randrange(0, 4))
    return Instance(graph=g, rule=rule, budget=budget)


def chain_digraph(costs) -> Digraph:
    """Simple chain with given (c1, chat, delta) triples per arc."""
    arcs = tuple(
        Arc(id=i, tail=i, head=i + 1, first_stage_cost=c1, nominal=chat, deviation_cap=delta)
        for i, (c1, chat, delta) in enumerate(costs)
    )
    return Digraph(node_count=len(costs) + 1, arcs=arcs, source=0, sink=len(costs))
