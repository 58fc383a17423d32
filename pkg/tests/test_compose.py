import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from sdbuchi.compose import bottom_up, bottom_up_check, seq_solutions, sum_solutions, trace_solution
from sdbuchi.errors import ArityError, SizeGuardError, ValidationError
from sdbuchi.fixtures import example_diagram, fork, loop_pair, relay, relay2x, sharing_diagram, single
from sdbuchi.generate import Profile, exitblow, random_diagram, random_leaf
from sdbuchi.romdp import (
    ComponentEntrance as CE,
    Diagram,
    Leaf,
    Seq,
    Sum,
    Trace,
    monolithic_verdicts,
    seq_compose,
    sum_compose,
    trace_compose,
)
from sdbuchi.solution import WIN, Effect, Solution, local_solution

E = Effect.of


def sol(*rows, n):
    return Solution([set(r) for r in rows], n)


def test_seq_examples():
    s2 = sol([E([1])], [E([2])], n=2)
    assert seq_solutions(sol([WIN], n=2), s2).row(1) == {WIN}
    assert seq_solutions(sol([E([1])], n=1), sol([], n=1)).row(1) == frozenset()
    s1 = sol([E([1, 2])], n=2)
    s2 = sol([E([1], True)], [E([1]), E([2])], n=2)
    assert seq_solutions(s1, s2).row(1) == {E([1], True), E([1, 2], True)}
    with pytest.raises(ArityError):
        seq_solutions(sol([E([1])], n=1), s2)


def test_sum_examples():
    r = local_solution(relay())
    assert sum_solutions(r, r).row(2) == {E([2])}
    empty = Solution([], 0)
    assert sum_solutions(r, empty) == r
    s = sum_solutions(local_solution(fork()), r)
    assert s.arity == (2, 3) and s.row(2) == {E([3])}


def test_trace_examples():
    s = local_solution(loop_pair())
    assert s.rows == (frozenset({E([2], True)}), frozenset({E([1])}))
    assert trace_solution(s).row(1) == {E([1], True)}
    assert trace_solution(sol([E([2])], [E([2])], n=2)).row(1) == frozenset()
    assert trace_solution(sol([E([2])], [E([2], True)], n=2)).row(1) == {WIN}
    with pytest.raises(ArityError):
        trace_solution(Solution([], 0))


def test_product_guard():
    s1 = sol([E([1, 2])], n=2)
    s2 = sol([E([1]), E([2]), E([1, 2])], [E([1]), E([2]), E([1, 2])], n=2)
    with pytest.raises(SizeGuardError):
        seq_solutions(s1, s2, guard=5)


def test_bottom_up_examples():
    assert bottom_up_check(single(relay(True)), 1) is False
    twice = Diagram(Trace(Trace(Seq(Leaf("F3"), Leaf("R2")))), {"F3": loop_pair(), "R2": relay2x()})
    res = bottom_up(twice)
    assert res.verdicts == {} and res.solution.arity == (0, 0)
    assert all(monolithic_verdicts(twice).values())
    d = example_diagram()
    assert bottom_up(d).verdicts == monolithic_verdicts(d, list(bottom_up(d).verdicts))
    assert bottom_up_check(d, 1) is True
    with pytest.raises(ValidationError):
        bottom_up_check(d, 2)


def test_bottom_up_guard_names_the_subtree():
    with pytest.raises(SizeGuardError) as err:
        bottom_up(exitblow(6), guard_effects=64)
    assert err.value.where.startswith("subtree r")


def test_sharing_example():
    d = sharing_diagram()
    st_ = bottom_up(d, sharing="solution").stats
    assert (st_.leaf_computations, st_.compositions, st_.hits) == (3, 2, 2)
    term = bottom_up(d, sharing="term").stats
    assert (term.leaf_computations, term.compositions) == (3, 3)
    off = bottom_up(d, sharing="off").stats
    assert (off.leaf_computations, off.compositions, off.hits) == (4, 3, 0)


def test_single_leaf_has_no_hits():
    assert bottom_up(single(fork())).stats.hits == 0


@pytest.mark.parametrize("k", [2, 3, 5])
def test_sum_tower_leaf_hits(k):
    t = Leaf("R")
    for _ in range(k - 1):
        t = Sum(t, Leaf("R"))
    st_ = bottom_up(Diagram(t, {"R": relay()})).stats
    assert st_.leaf_hits == k - 1 and st_.leaf_computations == 1


def test_unknown_sharing_mode():
    with pytest.raises(ValidationError):
        bottom_up(single(relay()), sharing="maybe")


seeds = st.integers(min_value=0, max_value=10 ** 6)


def pair(seed):
    rng = random.Random(seed)
    l = rng.randint(0, 3)
    a = random_leaf(rng, rng.randint(1, 3), l, max_vertices=8)
    b = random_leaf(rng, l, rng.randint(0, 3), max_vertices=8)
    return rng, a, b


@settings(max_examples=120, deadline=None)
@given(seeds)
def test_solutions_compose(seed):
    rng, a, b = pair(seed)
    sa, sb = local_solution(a), local_solution(b)
    assert local_solution(seq_compose(a, b)) == seq_solutions(sa, sb)
    assert local_solution(sum_compose(a, b)) == sum_solutions(sa, sb)
    if a.arity[0] and a.arity[1]:
        assert local_solution(trace_compose(a)) == trace_solution(sa)
    ab = seq_compose(a, b)
    if ab.arity[0] and ab.arity[1]:
        assert local_solution(trace_compose(ab)) == trace_solution(seq_solutions(sa, sb))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_sharing_modes_agree(seed):
    d = random_diagram(seed, Profile(share=0.6))
    ref = bottom_up(d, sharing="off")
    for mode in ("term", "solution"):
        got = bottom_up(d, sharing=mode)
        assert got.verdicts == ref.verdicts
        assert got.nodes == ref.nodes
    for s in ref.nodes.values():
        s.check_invariants()
