import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mastermind.engine import (
    BLACK,
    BW,
    Answer,
    CodeFound,
    InvalidInput,
    Oracle,
    answering,
    black_answer,
    random_secret,
    validate_code,
    white_answer,
)
from mastermind.verify import brute_force_white


def codes(n_max=6, k_max=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.integers(1, k_max).flatmap(
            lambda k: st.tuples(
                st.lists(st.integers(1, k), min_size=n, max_size=n),
                st.lists(st.integers(1, k), min_size=n, max_size=n),
            )))


def test_black_examples():
    assert black_answer((1, 2, 3), (1, 3, 3)) == 2
    assert black_answer((4, 4, 1), (4, 4, 1)) == 3
    assert black_answer((1, 1), (2, 2)) == 0


def test_white_examples():
    assert white_answer((1, 2, 3), (2, 1, 3)) == 2
    assert white_answer((1, 2, 2), (1, 2, 2)) == 0
    assert white_answer((1, 1, 2), (2, 2, 1)) == 2


def test_white_matches_permutation_definition_exhaustively():
    for n in range(1, 5):
        for k in range(1, 4):
            all_codes = list(itertools.product(range(1, k + 1), repeat=n))
            for z in all_codes:
                for x in all_codes:
                    assert white_answer(z, x) == brute_force_white(z, x)


@given(codes())
def test_black_plus_white_is_common_colour_count(pair):
    z, x = pair
    cz, cx = Counter(z), Counter(x)
    assert black_answer(z, x) + white_answer(z, x) == sum(min(cz[c], cx[c]) for c in cz)


@given(codes(), st.randoms(use_true_random=False))
def test_answers_symmetric_and_permutation_invariant(pair, rnd):
    z, x = pair
    assert black_answer(z, x) == black_answer(x, z)
    assert white_answer(z, x) == white_answer(x, z)
    perm = list(range(len(z)))
    rnd.shuffle(perm)
    zp, xp = [z[i] for i in perm], [x[i] for i in perm]
    assert black_answer(zp, xp) == black_answer(z, x)
    assert white_answer(zp, xp) == white_answer(z, x)


def test_length_mismatch_rejected():
    with pytest.raises(InvalidInput):
        black_answer((1, 2), (1,))


def test_oracle_query_examples():
    assert Oracle((2, 1), 2, BLACK).query((2, 2)) == Answer(1)
    assert Oracle((1, 2, 3), 3, BW).query((2, 1, 3)) == Answer(1, 2)


@given(codes())
def test_oracle_agrees_with_closed_forms(pair):
    z, x = pair
    k = max(z + x)
    a = Oracle(z, k, BW).query(x)
    assert a == Answer(black_answer(z, x), white_answer(z, x))
    assert Oracle(z, k, BLACK).query(x).white is None


def test_query_count_and_transcript():
    o = Oracle((1, 2, 3), 3, BW)
    for c in range(5):
        assert o.queries == c
        o.query((1, 1, 1))
    assert o.queries == len(o.transcript) == 5
    assert o.transcript[0].guess == (1, 1, 1)
    assert o.transcript.answers()[0] == Answer(1, 0)


def test_invalid_guesses_rejected_without_counting():
    o = Oracle((1, 2), 2)
    for bad in [(1,), (1, 3), (0, 1), (1.5, 1)]:
        with pytest.raises(InvalidInput):
            o.query(bad)
    assert o.queries == 0


def test_validate_code_and_bad_oracle():
    assert validate_code([1, 2], 2, 2).tolist() == [1, 2]
    with pytest.raises(InvalidInput):
        Oracle((1, 3), 2)
    with pytest.raises(InvalidInput):
        Oracle((1, 2), 2, mode="colour")


def test_secret_hidden_unless_inspectable():
    with pytest.raises(PermissionError):
        Oracle((1, 2), 2).inspect_secret()
    assert Oracle((1, 2), 2, inspectable=True).inspect_secret() == (1, 2)


def test_random_secret_reproducible_and_in_range():
    a = random_secret(50, 7, np.random.default_rng(3))
    assert a == random_secret(50, 7, np.random.default_rng(3))
    assert len(a) == 50 and set(a) <= set(range(1, 8))


def test_answering_raises_on_full_match():
    ask = answering(Oracle((2, 1), 2))
    assert ask((1, 1)).black == 1
    with pytest.raises(CodeFound) as info:
        ask((2, 1))
    assert info.value.code == (2, 1)
