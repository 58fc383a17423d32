import random

import pytest
from hypothesis import given, settings, strategies as st

from sdbuchi.errors import ValidationError
from sdbuchi.fixtures import example_a, example_diagram, relay, single
from sdbuchi.generate import Profile, random_diagram
from sdbuchi.graph import can_reach
from sdbuchi.romdp import ComponentEntrance as CE, Diagram, Leaf, Sum, Trace, cpi, monolithic_verdicts
from sdbuchi.refinement import (
    MaxEffectCache,
    Refiner,
    nested_iterates,
    operator_iterates,
    refine_verdicts,
    strat_ref,
)
from sdbuchi.shortcut import build_shortcut_graph
from sdbuchi.solution import Effect, max_effect_mask

E = Effect.of
B1 = CE((0, 0, 1), 1)


def test_open_relay_loses_in_one_round():
    r = strat_ref(single(relay(True)))
    assert r.live == frozenset() and r.iterations == 1


def test_buchi_free_loop_loses():
    d = Diagram(Trace(Leaf("R")), {"R": relay()})
    r = strat_ref(d)
    assert r.live == frozenset() and r.iterations == 2


def test_example_outcome():
    d = example_diagram()
    r = strat_ref(d)
    assert r.live == frozenset(cpi(d)) - {B1}
    assert r.iterations <= len(cpi(d)) + 1
    assert r.max_effect_calls <= (len(cpi(d)) + 1) ** 2


def test_operator_with_no_buchi_and_empty_x():
    d = Diagram(Sum(Leaf("R"), Trace(Leaf("R"))), {"R": relay()})
    r = Refiner(d)
    assert r.operator(set(), r.entrances) == frozenset()


def test_configuration_graph_can_reach():
    d = example_diagram()
    r = strat_ref(d, init="literal")
    first = r.events[0]
    assert first["pruned"] == [str(B1)]


def test_can_reach_on_a_chain():
    from sdbuchi.graph import MdpGraph
    g = MdpGraph.from_labels(["a", "c"], ["b"], [("a", "b"), ("b", "c")])
    assert can_reach(g, {g.index("c")}) == {0, 1, 2}
    assert can_reach(g, set()) == frozenset()


def test_cache_rules():
    c = MaxEffectCache("monotone")
    calls = []

    def compute():
        calls.append(1)
        return E([2])

    assert c.get("k", 0b111, compute) == E([2])
    assert c.get("k", 0b110, compute) == E([2])       # {2} ⊆ {2,3} ⊆ {1,2,3}
    assert (c.hits, c.misses, len(calls)) == (1, 1, 1)
    c.get("k", 0b001, lambda: E([1]))                 # not a superset of {2}
    assert c.misses == 2
    exact = MaxEffectCache("exact")
    exact.get("k", 0b111, compute)
    exact.get("k", 0b110, compute)
    assert exact.hits == 0
    with pytest.raises(ValidationError):
        MaxEffectCache("sometimes")


def test_repeated_leaf_hits_on_first_query():
    d = Diagram(Sum(Leaf("A"), Leaf("A")), {"A": example_a()})
    r = Refiner(d)
    for ce in r.entrances[:3]:
        r.max_effect(ce, 0b111)
    before = r.cache.hits
    r.max_effect(r.entrances[3], 0b111)
    assert r.cache.hits == before + 1


def test_bad_init():
    with pytest.raises(ValidationError):
        strat_ref(example_diagram(), init="eager")


def test_nested_iterates_on_a_toy_operator():
    steps = nested_iterates(lambda x, y: {1} & set(y) | ({2} if 1 in x else set()), {1, 2, 3})
    assert steps[-1][2] == {1, 2}
    assert steps[0] == (frozenset(), frozenset({1, 2, 3}), frozenset({1}))


seeds = st.integers(1, 10 ** 6)


@settings(max_examples=80, deadline=None)
@given(seeds, st.sampled_from(["off", "exact", "monotone"]), st.sampled_from(["repaired", "literal"]))
def test_refine_equals_monolithic(seed, cache, init):
    d = random_diagram(seed)
    r = strat_ref(d, cache=cache, init=init)
    ces = cpi(d)
    assert {ce: ce in r.live for ce in ces} == monolithic_verdicts(d, ces)
    assert r.iterations <= len(ces) + 1
    assert r.max_effect_calls <= (len(ces) + 1) ** 2


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_cache_is_transparent(seed):
    d = random_diagram(seed, Profile(share=0.7))
    runs = {m: strat_ref(d, cache=m) for m in ("off", "exact", "monotone")}
    ev = {m: [{k: v for k, v in e.items() if k != "cache"} for e in r.events] for m, r in runs.items()}
    assert ev["off"] == ev["exact"] == ev["monotone"]
    assert runs["monotone"].cache["hits"] >= runs["exact"].cache["hits"]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_live_set_shrinks(seed):
    d = random_diagram(seed)
    sizes = [len(e["live"]) for e in strat_ref(d).events]
    assert all(b <= a for a, b in zip(sizes, sizes[1:]))
    assert all(b < a for a, b in zip(sizes[:-2], sizes[1:-1]))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_operator_matches_plain_operator_on_shortcut_graph(seed):
    d = random_diagram(seed)
    fp, f = operator_iterates(d, build_shortcut_graph(d))
    assert fp == f


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_cached_max_effect_matches_direct(seed):
    rng = random.Random(seed)
    d = random_diagram(seed, Profile(share=0.7))
    r = Refiner(d)
    for _ in range(20):
        ce = rng.choice(r.entrances) if r.entrances else None
        if ce is None:
            return
        n = len(r.table[ce.path])
        allowed = rng.randrange(1 << n)
        assert r.max_effect(ce, allowed) == max_effect_mask(r.leaf[ce.path], ce.index, allowed)
