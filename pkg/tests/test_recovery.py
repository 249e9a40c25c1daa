import random

from recrobsp.model import (
    Arc,
    Budget,
    Digraph,
    Instance,
    Path,
    RecoveryRule,
    Scenario,
    enumerate_st_paths,
    path_cost,
)
from recrobsp.rational import Rat
from recrobsp.recovery import best_recovery, neighborhood_contains

from conftest import random_instance


def brute_recovery(inst, x, scenario):
    """Oracle: filter all s-t paths by neighborhood membership, take the min.

    Independent of the DP: relies only on enumeration and set arithmetic.
    """
    best = None
    for y in enumerate_st_paths(inst.graph):
        if not neighborhood_contains(x, y, inst.rule):
            continue
        cost = path_cost(inst.graph, y, "second", scenario)
        key = (cost, y.arcs)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return Path(best[1]), best[0]


def random_scenario(rng, inst):
    devs = {}
    budget = inst.budget
    if budget.kind == "discrete":
        eligible = [a for a in inst.graph.arcs if a.deviation_cap > 0]
        rng.shuffle(eligible)
        for arc in eligible[: budget.gamma]:
            devs[arc.id] = arc.deviation_cap
    else:
        left = budget.gamma
        for arc in inst.graph.arcs:
            if left <= 0 or arc.deviation_cap == 0 or rng.random() < 0.5:
                continue
            dev = min(arc.deviation_cap, left) * Rat(rng.randrange(0, 3), 2)
            dev = min(dev, arc.deviation_cap, left)
            if dev > 0:
                devs[arc.id] = dev
                left -= dev
    return Scenario.from_map(devs)


class TestNeighborhoodContains:
    def test_identical_paths_k0(self):
        x = Path((1, 2, 3))
        for kind in ("incl", "excl", "sym"):
            assert neighborhood_contains(x, x, RecoveryRule(kind, 0))

    def test_disjoint_paths_incl(self):
        x = Path((1, 2, 3))
        y = Path((4, 5, 6, 7, 8))
        assert not neighborhood_contains(x, y, RecoveryRule("incl", 4))
        assert neighborhood_contains(x, y, RecoveryRule("incl", 5))

    def test_containment_relations(self):
        rng = random.Random(99)
        universe = list(range(12))
        for _ in range(300):
            x = Path(tuple(rng.sample(universe, rng.randrange(1, 8))))
            y = Path(tuple(rng.sample(universe, rng.randrange(1, 8))))
            k = rng.randrange(0, 6)
            if neighborhood_contains(x, y, RecoveryRule("sym", k)):
                assert neighborhood_contains(x, y, RecoveryRule("incl", k))
                assert neighborhood_contains(x, y, RecoveryRule("excl", k))
            if neighborhood_contains(x, y, RecoveryRule("incl", k)) and neighborhood_contains(
                x, y, RecoveryRule("excl", k)
            ):
                assert neighborhood_contains(x, y, RecoveryRule("sym", 2 * k))


class TestBestRecovery:
    def test_large_k_gives_global_shortest(self):
        g = Digraph(
            3,
            (
                Arc(0, 0, 1, 0, 5, 0),
                Arc(1, 1, 2, 0, 5, 0),
                Arc(2, 0, 2, 0, 3, 0),
            ),
            0,
            2,
        )
        inst = Instance(g, RecoveryRule("incl", 10), Budget.continuous(0))
        y, value = best_recovery(inst, Path((0, 1)), Scenario.nominal())
        assert y.arcs == (2,) and value == 3

    def test_sym_k0_forces_x(self):
        g = Digraph(
            3,
            (
                Arc(0, 0, 1, 0, 5, 1),
                Arc(1, 1, 2, 0, 5, 0),
                Arc(2, 0, 2, 0, 0, 0),
            ),
            0,
            2,
        )
        inst = Instance(g, RecoveryRule("sym", 0), Budget.continuous(1))
        sc = Scenario(((0, Rat(1)),))
        y, value = best_recovery(inst, Path((0, 1)), sc)
        assert y.arcs == (0, 1)
        assert value == 5 + 1 + 5

    def test_lexicographic_tie_break(self):
        # two parallel zero-cost routes; the smaller arc ids must win
        g = Digraph(
            3,
            (
                Arc(0, 0, 1, 0, 0, 0),
                Arc(1, 1, 2, 0, 0, 0),
                Arc(2, 0, 1, 0, 0, 0),
                Arc(3, 1, 2, 0, 0, 0),
            ),
            0,
            2,
        )
        inst = Instance(g, RecoveryRule("incl", 4), Budget.continuous(0))
        y, value = best_recovery(inst, Path((2, 3)), Scenario.nominal())
        assert value == 0 and y.arcs == (0, 1)

    def test_oracle_equivalence_random(self):
        rng = random.Random(424242)
        for _ in range(250):
            inst = random_instance(rng)
            paths = list(enumerate_st_paths(inst.graph))
            x = rng.choice(paths)
            sc = random_scenario(rng, inst)
            got_path, got_value = best_recovery(inst, x, sc)
            want_path, want_value = brute_recovery(inst, x, sc)
            assert got_value == want_value
            assert got_path.arcs == want_path.arcs
            assert neighborhood_contains(x, got_path, inst.rule)

    def test_monotone_in_k_and_self_membership(self):
        rng = random.Random(5150)
        for _ in range(60):
            inst = random_instance(rng)
            paths = list(enumerate_st_paths(inst.graph))
            x = rng.choice(paths)
            sc = random_scenario(rng, inst)
            x_cost = path_cost(inst.graph, x, "second", sc)
            for kind in ("incl", "excl", "sym"):
                previous = None
                for k in range(0, 7):
                    rule = RecoveryRule(kind, k)
                    _, value = best_recovery(
                        Instance(inst.graph, rule, inst.budget), x, sc
                    )
                    assert value <= x_cost
                    if previous is not None:
                        assert value <= previous
                    previous = value
