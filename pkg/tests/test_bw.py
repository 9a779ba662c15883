import itertools

import numpy as np
import pytest

from mastermind.black import StrategyConfig
from mastermind.bw import (
    ColorPartition,
    adapt_bw_to_black,
    color_query,
    color_query_code,
    identify_secret_colors,
    learn_counts_and_superset,
    partition_colors,
    solve_bw,
)
from mastermind.engine import BLACK, BW, Answer, InconsistentAnswers, Oracle, random_secret, white_answer
from mastermind.suites import InvariantObserver


def test_color_query_examples():
    o = Oracle((1, 3, 3), 3, BW)
    assert color_query_code({3}, 3).tolist() == [3, 1, 1]
    assert color_query(o, {3}, 1, 3) == 1
    assert color_query(o, {2}, 1, 3) == 0
    assert color_query(o, {1, 2}, 1, 3) == 1
    assert o.queries == 3


def test_color_query_without_colour_one():
    o = Oracle((2, 3, 3), 3, BW)
    assert color_query(o, {1}, 0, 3) == 0
    assert color_query(o, {1, 3}, 0, 3) == 1
    assert color_query(o, set(), 0, 3) == 0


def test_color_query_exhaustive_small():
    for n in range(1, 4):
        for k in range(1, 5):
            for z in itertools.product(range(1, k + 1), repeat=n):
                b = z.count(1)
                o = Oracle(z, k, BW)
                for size in range(n + 1):
                    for X in itertools.combinations(range(1, k + 1), size):
                        assert color_query(o, X, b, n) == len(set(z) & set(X))


def test_color_query_detects_impossible_answer():
    with pytest.raises(InconsistentAnswers):
        color_query(lambda x: Answer(3, 0), {2}, 0, 3)


def test_learn_counts_examples():
    o = Oracle((1, 3, 3), 6, BW)
    assert learn_counts_and_superset(o, 3, 6, 1) == (2, [1, 2, 3])
    assert o.queries == 2
    o = Oracle((2, 2, 1), 3, BW)
    assert learn_counts_and_superset(o, 3, 3, 1) == (2, [1, 2, 3])


def test_learn_counts_additive():
    rng = np.random.default_rng(1)
    for _ in range(30):
        z = random_secret(5, 23, rng)
        n_star, C0 = learn_counts_and_superset(Oracle(z, 23, BW), 5, 23, z.count(1))
        assert n_star == len(set(z)) and set(z) <= set(C0)


def test_partition_example():
    z = (1, 3, 3)
    p = partition_colors(Oracle(z, 4, BW), [1, 2, 3, 4], 2, 1, 3, np.random.default_rng(0))
    assert len(p.parts) == 2 and all(len(part) == 2 for part in p.parts)
    assert set(p.parts[0]).isdisjoint(p.parts[1])
    assert sorted(len({1, 3} & set(part)) for part in p.parts) == [1, 1]


def test_partition_single_secret_colour():
    z = (4, 4)
    p = partition_colors(Oracle(z, 4, BW), [3, 4], 1, 0, 2, np.random.default_rng(0))
    assert len(p.parts) == 1 and 4 in p.parts[0]


def test_partition_gives_up_on_dishonest_answers():
    with pytest.raises(InconsistentAnswers):
        partition_colors(lambda x: Answer(0, 0), [1, 2, 3, 4], 2, 0, 2, np.random.default_rng(0))


def test_identify_examples():
    o = Oracle((1, 3, 3), 4, BW)
    singles = ColorPartition([(1,), (3,)])
    assert identify_secret_colors(o, singles, 1, 3, StrategyConfig(), np.random.default_rng(0)) == {1, 3}
    assert o.queries == 0
    pairs = ColorPartition([(1, 2), (3, 4)])
    assert identify_secret_colors(o, pairs, 1, 3, StrategyConfig(), np.random.default_rng(0)) == {1, 3}


@pytest.mark.parametrize("z,k", [((1, 1, 1, 1), 4), ((2, 1), 2), ((1,), 3), ((3, 1, 4, 1, 5), 9),
                                 ((6, 6, 6), 6), ((1, 2, 3, 4), 4)])
def test_solve_bw_examples(z, k):
    o = Oracle(z, k, BW)
    assert solve_bw(o) == z
    assert len(o.transcript) == o.queries


def test_solve_bw_monochromatic_one_is_immediate():
    o = Oracle((1,) * 8, 8, BW)
    assert solve_bw(o) == (1,) * 8 and o.queries == 1


def test_solve_bw_n8_k64():
    for t in range(5):
        z = random_secret(8, 64, np.random.default_rng([t, 0]))
        obs = InvariantObserver(z)
        o = Oracle(z, 64, BW)
        assert solve_bw(o, StrategyConfig(seed=[t, 1]), obs) == z
        assert obs.partitions == 1


def test_solve_bw_all_small_codes():
    for n, k in [(2, 3), (3, 3), (2, 5)]:
        for z in itertools.product(range(1, k + 1), repeat=n):
            assert solve_bw(Oracle(z, k, BW), StrategyConfig(seed=7), InvariantObserver(z)) == z


def test_adapter_matches_genuine_oracle():
    for n in range(1, 4):
        for k in range(1, 4):
            codes = list(itertools.product(range(1, k + 1), repeat=n))
            for z in codes:
                inner = Oracle(z, k, BLACK)
                adapter = adapt_bw_to_black(inner, n, k)
                assert inner.queries == adapter.setup_queries == k - 1
                for x in codes:
                    assert adapter.query(x) == Answer(sum(a == b for a, b in zip(z, x)), white_answer(z, x))


def test_adapter_monochromatic_guess():
    z = (2, 3, 2, 1)
    adapter = adapt_bw_to_black(Oracle(z, 3), 4, 3)
    for c in (1, 2, 3):
        assert adapter.query((c,) * 4) == Answer(z.count(c), 0)


def test_adapter_preserves_guess_sequence():
    z = random_secret(8, 20, np.random.default_rng(4))
    genuine = Oracle(z, 20, BW)
    inner = Oracle(z, 20, BLACK)
    cfg = StrategyConfig(seed=5)
    assert solve_bw(genuine, cfg) == solve_bw(adapt_bw_to_black(inner, 8, 20), cfg) == z
    assert inner.transcript.guesses()[19:] == genuine.transcript.guesses()
    assert inner.queries == genuine.queries + 19
