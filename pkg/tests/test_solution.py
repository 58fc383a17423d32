import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from sdbuchi.errors import ContractError, SizeGuardError, ValidationError
from sdbuchi.fixtures import deadend, example_a, fork, loop_pair, relay, single
from sdbuchi.generate import random_leaf
from sdbuchi.romdp import monolithic_check
from sdbuchi.solution import (
    SENTINEL,
    WIN,
    Effect,
    Solution,
    brute_force_local_solution,
    brute_force_solution,
    effect_join,
    effect_leq,
    effect_of,
    is_no_lose,
    local_solution,
    max_effect,
)

E = Effect.of


def strat(a, **choice):
    g = a.graph
    return {g.index(v): {g.index(w) for w in ws} for v, ws in choice.items()}


def test_join_and_order_examples():
    assert effect_join(E([1]), E([2], True)) == E([1, 2], True)
    assert effect_join(E([1]), E([1])) == E([1])
    assert not effect_leq(E([1], True), E([1]))
    assert effect_leq(E([1]), E([1], True))
    # a strictly smaller exit set is below, whatever the bits
    assert effect_leq(E([1], True), E([1, 2]))
    assert not effect_leq(E([2]), E([1], True))


def test_effect_rendering_and_validation():
    assert str(E([1, 3], True)) == "<{1,3},T>"
    assert str(SENTINEL) == "<{},F>"
    assert E([2, 1]).exits == {1, 2}
    with pytest.raises(ValidationError):
        E([0])


def test_is_no_lose_examples():
    a = relay()
    assert is_no_lose(a, 1, strat(a, i1=["p"]))
    assert not is_no_lose(a, 1, strat(a, i1=[]))
    f = deadend()
    assert not is_no_lose(f, 1, strat(f, i1=["p"]))


def test_is_no_lose_requires_locality():
    a = example_a()
    assert is_no_lose(a, 1, strat(a, a1=["p11"]))
    # a choice at a vertex unreachable from a1 breaks locality
    assert not is_no_lose(a, 1, strat(a, a1=["p11"], a3=["p3"]))
    with pytest.raises(ValidationError):
        is_no_lose(a, 4, strat(a, a1=["p11"]))


def test_effect_of_examples():
    assert effect_of(relay(True), 1, strat(relay(True), i1=["p"])) == E([1], True)
    f = fork()
    assert effect_of(f, 1, strat(f, i1=["r"])) == E([1, 2])
    assert effect_of(f, 1, strat(f, i1=["p"])) == E([1])
    with pytest.raises(ContractError):
        effect_of(deadend(), 1, strat(deadend(), i1=["p"]))


def test_max_effect_examples():
    f = fork()
    assert max_effect(f, 1, {1, 2}) == E([1, 2])
    assert max_effect(f, 1, set()) == SENTINEL
    assert max_effect(f, 1, {2}) == E([2])
    # first entrance of the worked example with its first exit disallowed
    assert max_effect(example_a(), 1, {2, 3}) == E([2])
    with pytest.raises(ValidationError):
        max_effect(f, 1, {3})


def test_local_solution_examples():
    assert local_solution(relay(True)).row(1) == {E([1], True)}
    assert local_solution(fork()).row(1) == {E([1]), E([2]), E([1, 2])}
    assert local_solution(deadend()).row(1) == frozenset()
    a = local_solution(example_a())
    assert a.rows == (frozenset({E([1]), E([2]), E([1, 2])}), frozenset({E([2, 3])}),
                      frozenset({E([3], True)}))


def test_brute_force_examples():
    assert brute_force_solution(relay(), 1) == {E([1])}
    assert brute_force_solution(loop_pair(), 2) == {E([1])}
    assert brute_force_local_solution(fork()) == local_solution(fork())


def test_guards():
    with pytest.raises(SizeGuardError):
        local_solution(fork(), guard_effects=4)
    with pytest.raises(SizeGuardError):
        brute_force_solution(fork(), 1, max_player1=2)


def test_solution_fingerprint_and_invariants():
    s = local_solution(fork())
    assert s.fingerprint() == "1->2|<{1},F> <{2},F> <{1,2},F>"
    s.check_invariants()
    with pytest.raises(AssertionError):
        Solution([{SENTINEL}], 1).check_invariants()
    with pytest.raises(AssertionError):
        Solution([{E([1]), E([2])}], 2).check_invariants()


seeds = st.integers(min_value=0, max_value=10 ** 6)


def sample_leaf(seed):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        return oracles.random_romdp(rng)
    return random_leaf(rng, rng.randint(1, 3), rng.randint(0, 3), max_vertices=9)


def small(a, limit=20000):
    return oracles.strategy_count(a.graph) <= limit


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_local_solution_matches_enumeration(seed):
    a = sample_leaf(seed)
    if not small(a):
        return
    sol = local_solution(a)
    sol.check_invariants()
    for i in range(1, len(a.entrances) + 1):
        want = {oracles.effect(a, a.entrances[i - 1], s) for s in oracles.no_lose_strategies(a, i)}
        assert sol.row(i) == want


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_max_effect_is_join_of_allowed_effects(seed):
    a = sample_leaf(seed)
    if not small(a, 10 ** 5) or not a.entrances:
        return
    sol = local_solution(a)
    n = len(a.exits)
    for i in range(1, len(a.entrances) + 1):
        for mask in range(1 << n):
            allowed = {k + 1 for k in range(n) if mask >> k & 1}
            acc = SENTINEL
            for e in sol.row(i):
                if e.exits <= allowed:
                    acc = effect_join(acc, e)
            assert max_effect(a, i, allowed) == acc


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_max_effect_is_monotone(seed):
    rng = random.Random(seed)
    a = sample_leaf(seed)
    n = len(a.exits)
    for i in range(1, len(a.entrances) + 1):
        small_set = {k for k in range(1, n + 1) if rng.random() < 0.5}
        big = small_set | {k for k in range(1, n + 1) if rng.random() < 0.5}
        assert effect_leq(max_effect(a, i, small_set), max_effect(a, i, big))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_local_win_iff_monolithic_win(seed):
    a = sample_leaf(seed)
    sol = local_solution(a)
    d = single(a)
    for i in range(1, len(a.entrances) + 1):
        assert (WIN in sol.row(i)) == monolithic_check(d, i)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_union_of_no_lose_strategies(seed):
    rng = random.Random(seed)
    a = sample_leaf(seed)
    if not small(a) or not a.entrances:
        return
    i = rng.randint(1, len(a.entrances))
    good = oracles.no_lose_strategies(a, i)
    if not good:
        return
    v0 = a.entrances[i - 1]
    for _ in range(5):
        s1, s2 = rng.choice(good), rng.choice(good)
        u = {v: s1.get(v, frozenset()) | s2.get(v, frozenset()) for v in set(s1) | set(s2)}
        assert is_no_lose(a, i, u)
        assert effect_of(a, i, u) == effect_join(oracles.effect(a, v0, s1), oracles.effect(a, v0, s2))
