import itertools

import numpy as np
import pytest

from mastermind.black import (
    DUMMY,
    CandidateState,
    PaddedGame,
    StrategyConfig,
    apply_round,
    endgame_per_position,
    find_dummy_colors,
    next_pow2,
    reduce_k_monochromatic,
    run_round,
    solve_adaptive,
    solve_random_guessing,
    wrap_padded_oracle,
)
from mastermind.engine import Answer, InconsistentAnswers, InvalidInput, Oracle, random_secret
from mastermind.suites import InvariantObserver


def answers_of(oracle):
    return [a.black for a in oracle.transcript.answers()]


def test_find_dummy_colors_examples():
    o = Oracle((2, 1, 2), 2)
    info = find_dummy_colors(o, 3, 2)
    assert answers_of(o) == [1, 2, 1, 2]
    assert info.ones == [1] and info.twos == [0, 2]
    assert info.dummies == (1, 2, 1)

    o = Oracle((3, 3, 3), 3)
    assert find_dummy_colors(o, 3, 3).dummies == (1, 1, 1)
    assert answers_of(o) == [0, 0, 0, 0]

    o = Oracle((1, 1), 2)
    assert find_dummy_colors(o, 2, 2).dummies == (2, 2)
    assert answers_of(o) == [2, 1, 0]


def test_dummies_never_match_exhaustively():
    for n in range(1, 4):
        for z in itertools.product(range(1, 4), repeat=n):
            d = find_dummy_colors(Oracle(z, 3), n, 3).dummies
            assert all(a != b for a, b in zip(d, z))


def test_inconsistent_dummy_answers():
    answers = iter([0, 2])
    with pytest.raises(InconsistentAnswers):
        find_dummy_colors(lambda x: next(answers), 1, 2)


def test_padding_extension_adds_its_matches():
    o = Oracle((1, 2, 3), 3)
    game = wrap_padded_oracle(o, 3, 3, (2, 1, 1))
    assert (game.N, game.K) == (4, 4)
    v = np.array([1, 2, 3, 1])
    assert game.query(v) == 3 + 1
    assert game.query(np.array([1, 2, 3, 2])) == 3
    assert o.queries == 2


def test_padding_virtual_colours_go_to_dummies():
    o = Oracle((7, 7), 5 + 2)
    game = wrap_padded_oracle(o, 2, 5, (1, 1))
    assert game.K == 8
    # colour 7 lies beyond the 5-colour alphabet: forwarded as the dummy
    assert game.query(np.array([7, 7])) == 0
    assert o.transcript[0].guess == (1, 1)
    assert game.query(np.array([DUMMY, 5])) == 0


def test_padding_identity_for_powers_of_two():
    o = Oracle((3, 1, 4, 2), 4)
    game = wrap_padded_oracle(o, 4, 4, (1, 2, 1, 1))
    for x in [(3, 1, 4, 2), (1, 1, 1, 1), (2, 3, 4, 1)]:
        assert game.query(np.array(x)) == Oracle((3, 1, 4, 2), 4).query(x).black


def test_next_pow2():
    assert [next_pow2(x) for x in (1, 2, 3, 5, 8, 9)] == [1, 2, 4, 8, 8, 16]


def test_reduce_k_examples():
    assert reduce_k_monochromatic(Oracle((3, 3), 4), 2, 4) == {1: 0, 2: 0, 3: 2, 4: 0}
    assert reduce_k_monochromatic(Oracle((1, 2), 3), 2, 3) == {1: 1, 2: 1, 3: 0}
    rng = np.random.default_rng(0)
    for _ in range(20):
        z = random_secret(6, 9, rng)
        assert sum(reduce_k_monochromatic(Oracle(z, 9), 6, 9).values()) == 6


def stub_game(answer, n=16, k=16):
    calls = []

    def ask(x):
        calls.append(x)
        return answer
    return PaddedGame(ask, n, [range(1, k + 1)] * n, [1] * n), calls


def fresh_state(n=16, k=16):
    state = CandidateState.initial(n, k)
    state.begin_phase(1, k)
    return state


def test_run_round_guard_rejects_high_answer():
    state = fresh_state()
    game, calls = stub_game(state.m // 2 + 1)
    out = run_round(game, state, StrategyConfig(), np.random.default_rng(0))
    assert not out.successful and out.queries == 1 and len(calls) == 1


def test_run_round_zero_answer_marks_all_blocks():
    state = fresh_state()
    game, calls = stub_game(0)
    out = run_round(game, state, StrategyConfig(), np.random.default_rng(0))
    assert out.successful and out.zero_blocks == list(range(state.m))
    assert out.weights == (0,) * state.m
    assert apply_round(state, out.r, out.zero_blocks) == 16


def test_zero_blocks_match_true_block_weights():
    # the observer compares reconstructed weights with direct per-block counts
    for seed in range(5):
        z = random_secret(16, 16, np.random.default_rng([seed, 50]))
        obs = InvariantObserver(z)
        assert solve_adaptive(Oracle(z, 16), StrategyConfig(seed=seed), obs) == z
        assert obs.rounds > 0


def test_apply_round_examples():
    state = CandidateState.initial(4, 8)
    state.begin_phase(1, 8)
    state.sets[0] = {1, 2, 3, 4}
    state.sizes[0] = 4
    state.sets[1].discard(3)
    state.sizes[1] = 7
    r = np.array([1, 3, 5, 5])
    # m = 4*4/8 = 2 blocks of 2 positions
    removed = apply_round(state, r, [0, 1])
    assert state.sets[0] == {1, 2, 3, 4}     # already at the floor
    assert state.sizes[1] == 7                # colour 3 already gone
    assert 5 not in state.sets[2] and state.sizes[2] == 7
    assert removed == 2
    assert apply_round(state, r, []) == 0


def padded_single(secret, k=8):
    o = Oracle(secret, k)
    game = PaddedGame(lambda x: o.query(x).black, len(secret), [range(1, k + 1)] * len(secret),
                      [1 if c != 1 else 2 for c in secret])
    return o, game


def test_endgame_examples():
    o, game = padded_single((4,))
    state = CandidateState.initial(1, 8)
    state.sets, state.sizes = [{4, 7}], np.array([2])
    assert endgame_per_position(game, state).tolist() == [4] and o.queries == 1

    o, game = padded_single((7,))
    state.sets, state.sizes = [{4, 7}], np.array([2])
    assert endgame_per_position(game, state).tolist() == [7] and o.queries == 1

    o, game = padded_single((3, 5))
    state = CandidateState.initial(2, 8)
    state.sets, state.sizes = [{3}, {5}], np.array([1, 1])
    assert endgame_per_position(game, state).tolist() == [3, 5] and o.queries == 0


def test_endgame_probe_exhaustive():
    for z in range(1, 9):
        for cands in itertools.combinations(range(1, 9), 3):
            if z not in cands:
                continue
            o, game = padded_single((z,))
            state = CandidateState.initial(1, 8)
            state.sets, state.sizes = [set(cands)], np.array([3])
            assert endgame_per_position(game, state).tolist() == [z]
            assert o.queries == min(sorted(cands).index(z) + 1, 2)


def test_endgame_empty_set_is_inconsistent():
    o, game = padded_single((2,))
    state = CandidateState.initial(1, 8)
    state.sets, state.sizes = [set()], np.array([0])
    with pytest.raises(InconsistentAnswers):
        endgame_per_position(game, state)


@pytest.mark.parametrize("z,k", [((3, 1, 4, 2), 4), ((2, 1), 2), ((1,), 1), ((2,), 2),
                                 ((1, 1, 1), 5), ((5, 5, 1, 2, 9, 9), 9), ((2, 2, 2, 2, 2), 2)])
def test_solve_adaptive_examples(z, k):
    o = Oracle(z, k)
    assert solve_adaptive(o) == z
    assert len(o.transcript) == o.queries


def test_solve_adaptive_all_small_codes():
    for n, k in [(2, 3), (3, 3), (3, 4)]:
        for z in itertools.product(range(1, k + 1), repeat=n):
            assert solve_adaptive(Oracle(z, k), StrategyConfig(seed=sum(z))) == z


@pytest.mark.parametrize("n,k", [(8, 8), (16, 16), (32, 32), (12, 5), (5, 40), (64, 64)])
def test_solve_adaptive_random_with_invariants(n, k):
    for t in range(4):
        z = random_secret(n, k, np.random.default_rng([n, k, t, 0]))
        obs = InvariantObserver(z)
        assert solve_adaptive(Oracle(z, k), StrategyConfig(seed=[n, k, t, 1]), obs) == z


def test_solve_adaptive_reproducible():
    z = random_secret(32, 32, np.random.default_rng(9))
    runs = []
    for _ in range(2):
        o = Oracle(z, 32)
        solve_adaptive(o, StrategyConfig(seed=4))
        runs.append(o.transcript.guesses())
    assert runs[0] == runs[1]


def test_tuning_parameters():
    z = random_secret(32, 32, np.random.default_rng(2))
    for cfg in [StrategyConfig(c_f=4.0, seed=3), StrategyConfig(endgame_threshold=2, seed=3),
                StrategyConfig(endgame_threshold=32, seed=3)]:
        assert solve_adaptive(Oracle(z, 32), cfg) == z
    with pytest.raises(InvalidInput):
        StrategyConfig(endgame_threshold=1)
    with pytest.raises(InvalidInput):
        StrategyConfig(c_f=0)


def test_random_guessing_small():
    for z in [(1,), (2,)]:
        o = Oracle(z, 2)
        assert solve_random_guessing(o, np.random.default_rng(0)) == z


def test_random_guessing_full_match_stops():
    class FullMatch:
        n, k, queries = 6, 9, 0

        def query(self, x):
            self.queries += 1
            self.first = tuple(int(c) for c in x)
            return Answer(6)

    o = FullMatch()
    assert solve_random_guessing(o, 0) == o.first and o.queries == 1
    # a single-colour game is determined without asking
    o = Oracle((1, 1, 1), 1)
    assert solve_random_guessing(o, 0) == (1, 1, 1) and o.queries == 0


def test_random_guessing_n16():
    z = random_secret(16, 16, np.random.default_rng([1, 0]))
    o = Oracle(z, 16)
    assert solve_random_guessing(o, np.random.default_rng([1, 1])) == z
    assert o.queries == len(o.transcript) > 0
