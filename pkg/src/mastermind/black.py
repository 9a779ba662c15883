"""Black-peg codebreakers: the coin-weighing phase strategy and random guessing.

The adaptive strategy works on a padded game with a power-of-two number of
positions and colours (:class:`PaddedGame`).  It shrinks every position's
candidate set by half per phase, using rounds of one random query followed
by random subset weighings of its blocks, and finishes with per-position
probes once the sets are small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from mastermind import coinweigh
from mastermind.engine import (
    Code,
    CodeFound,
    InconsistentAnswers,
    InvalidInput,
    answering,
)

DUMMY = 0
EXTENSION_COLOR = 1

BlackChannel = Callable[[np.ndarray], int]


def next_pow2(x: int) -> int:
    return 1 if x <= 1 else 1 << (x - 1).bit_length()


def black_channel(oracle) -> BlackChannel:
    """Adapt an oracle (anything with ``query``) or a callable to ``code -> int``."""
    if hasattr(oracle, "query"):
        return lambda x: oracle.query(x).black
    return oracle


def _channel_with_stop(oracle) -> BlackChannel:
    ask = answering(oracle)
    return lambda x: ask(x).black


@dataclass
class StrategyConfig:
    c_f: float = coinweigh.DEFAULT_CF
    endgame_threshold: int = 8
    round_cap_factor: float = 4.0
    seed: Optional[int | Sequence[int]] = 0
    node_budget: int = coinweigh.DEFAULT_NODE_BUDGET

    def __post_init__(self):
        if self.endgame_threshold < 2:
            raise InvalidInput("endgame_threshold must be at least 2")
        if self.round_cap_factor < 1:
            raise InvalidInput("round_cap_factor must be at least 1")
        if self.c_f <= 0:
            raise InvalidInput("c_f must be positive")


class Observer:
    """No-op hooks for watching a run; tests override them to check invariants."""

    def on_dummies(self, dummies: Code) -> None:
        pass

    def on_phase_start(self, game: "PaddedGame", state: "CandidateState") -> None:
        pass

    def on_round(self, game: "PaddedGame", state: "CandidateState",
                 outcome: "RoundOutcome") -> None:
        pass

    def on_phase_end(self, game: "PaddedGame", state: "CandidateState") -> None:
        pass

    def on_endgame(self, game: "PaddedGame", state: "CandidateState") -> None:
        pass

    def on_partition(self, partition) -> None:
        pass

    def on_secret_colors(self, colors: frozenset) -> None:
        pass


@dataclass
class DummyInfo:
    dummies: Code
    ones: list[int]
    twos: list[int]


def _find_dummies(ask: BlackChannel, alphabets: Sequence[Sequence[int]]) -> DummyInfo:
    n = len(alphabets)
    first = np.array([a[0] for a in alphabets], dtype=np.int64)
    second = np.array([a[1] for a in alphabets], dtype=np.int64)
    x = first.copy()
    prev = ask(x)
    dummies, ones, twos = [], [], []
    for i in range(n):
        x[i] = second[i]
        cur = ask(x)
        diff = cur - prev
        if diff == 1:
            twos.append(i)
            dummies.append(int(first[i]))
        elif diff == -1:
            ones.append(i)
            dummies.append(int(second[i]))
        elif diff == 0:
            dummies.append(int(first[i]))
        else:
            raise InconsistentAnswers(f"answer jumped by {diff} when changing one position")
        prev = cur
    return DummyInfo(tuple(dummies), ones, twos)


def find_dummy_colors(oracle, n: int, k: int) -> DummyInfo:
    """Locate colours 1 and 2 in the secret with n+1 queries.

    ``ones``/``twos`` are 0-based positions; ``dummies[i]`` is 1 unless the
    secret has colour 1 there, in which case it is 2.
    """
    if k < 2:
        raise InvalidInput("need at least two colours")
    return _find_dummies(black_channel(oracle), [(1, 2)] * n)


class PaddedGame:
    """A black-peg game on ``N = 2^a >= n`` positions and ``K = 2^b`` colours.

    Virtual colour ``c`` at real position ``i`` means ``alphabets[i][c-1]``;
    colours beyond the alphabet, and the sentinel :data:`DUMMY`, are sent as
    that position's dummy.  Positions ``n..N-1`` hold a self-chosen extension
    of constant colour :data:`EXTENSION_COLOR`, whose matches are added to
    the forwarded answer.  One query here is exactly one inner query.
    """

    def __init__(self, ask: BlackChannel, n: int, alphabets: Sequence[Sequence[int]],
                 dummies: Sequence[int], label: str = "secret"):
        if len(alphabets) != n or len(dummies) != n:
            raise InvalidInput("need one alphabet and one dummy per position")
        self._ask = ask
        self.n = n
        self.label = label
        self.alphabets = [tuple(a) for a in alphabets]
        self.dummies = tuple(int(d) for d in dummies)
        self.N = next_pow2(n)
        self.K = next_pow2(max((len(a) for a in self.alphabets), default=1))
        table = np.empty((n, self.K + 1), dtype=np.int64)
        for i, alpha in enumerate(self.alphabets):
            table[i, :] = self.dummies[i]
            table[i, 1:len(alpha) + 1] = alpha
        self._table = table
        self._rows = np.arange(n)

    def lower(self, v: np.ndarray) -> np.ndarray:
        """Real code forwarded for virtual code ``v`` (real positions only)."""
        return self._table[self._rows, np.asarray(v[:self.n])]

    def query(self, v: np.ndarray) -> int:
        v = np.asarray(v)
        extension = int(np.count_nonzero(v[self.n:] == EXTENSION_COLOR))
        return int(self._ask(self.lower(v))) + extension

    def lift(self, target: Sequence[int]) -> np.ndarray:
        """Virtual code of a real target string (used by invariant checks)."""
        v = np.full(self.N, EXTENSION_COLOR, dtype=np.int64)
        for i, colour in enumerate(target):
            v[i] = self.alphabets[i].index(colour) + 1
        return v


def wrap_padded_oracle(oracle, n: int, k: int, dummies: Sequence[int]) -> PaddedGame:
    return PaddedGame(black_channel(oracle), n, [range(1, k + 1)] * n, dummies)


def _monochromatic_counts(ask: BlackChannel, alphabets: Sequence[Sequence[int]],
                          dummies: Sequence[int]) -> dict[int, int]:
    """Counts per alphabet index ``c`` (1-based) of positions whose secret is its c-th colour."""
    width = max(len(a) for a in alphabets)
    counts = {}
    for c in range(1, width + 1):
        x = np.array([a[c - 1] if c <= len(a) else d
                      for a, d in zip(alphabets, dummies)], dtype=np.int64)
        counts[c] = int(ask(x))
    return counts


def reduce_k_monochromatic(oracle, n: int, k: int) -> dict[int, int]:
    """Occurrence count of every colour, via k monochromatic queries."""
    ask = black_channel(oracle)
    return {c: int(ask(np.full(n, c, dtype=np.int64))) for c in range(1, k + 1)}


@dataclass
class CandidateState:
    """Candidate colours per position of a padded game, plus phase bookkeeping."""

    sets: list[set[int]]
    sizes: np.ndarray
    phase: int = 0
    phase_size: int = 0
    sampling_sets: Optional[np.ndarray] = None
    rounds: int = 0
    total_rounds: int = 0
    capped: bool = False

    @classmethod
    def initial(cls, positions: int, colours: int) -> "CandidateState":
        return cls(sets=[set(range(1, colours + 1)) for _ in range(positions)],
                   sizes=np.full(positions, colours, dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.sets)

    @property
    def block_size(self) -> int:
        return self.phase_size // 4

    @property
    def m(self) -> int:
        return 4 * self.n // self.phase_size

    @property
    def floor(self) -> int:
        return self.phase_size // 2

    def blocks(self) -> list[range]:
        bs = self.block_size
        return [range(s * bs, (s + 1) * bs) for s in range(self.m)]

    def begin_phase(self, j: int, phase_size: int) -> None:
        self.phase = j
        self.phase_size = phase_size
        self.sampling_sets = np.array([sorted(c) for c in self.sets], dtype=np.int64)
        self.rounds = 0

    def phase_complete(self) -> bool:
        return bool((self.sizes == self.floor).all())


@dataclass
class RoundOutcome:
    r: np.ndarray
    answer: int
    queries: int
    zero_blocks: Optional[list[int]] = None
    weights: Optional[tuple[int, ...]] = None

    @property
    def successful(self) -> bool:
        return self.zero_blocks is not None


def run_round(game: PaddedGame, state: CandidateState, config: StrategyConfig,
              rng: np.random.Generator) -> RoundOutcome:
    """One random query plus, if its score is at most m/2, coin-weighing its blocks."""
    R = state.sampling_sets
    r = R[np.arange(state.n), rng.integers(0, R.shape[1], size=state.n)]
    answer = game.query(r)
    m, bs = state.m, state.block_size
    if answer > m // 2:
        return RoundOutcome(r, answer, 1)
    if answer == 0:
        # every weighing of a zero total reads 0; no need to ask
        return RoundOutcome(r, 0, 1, list(range(m)), (0,) * m)
    problem = coinweigh.WeighingProblem(m, answer)
    for y in coinweigh.sample_queries(m, coinweigh.f_default(m, config.c_f), rng):
        problem.record(y, game.query(np.where(np.repeat(y, bs), r, DUMMY)))
    weights = coinweigh.solve(problem, bs, config.node_budget)
    queries = 1 + len(problem.answers)
    if weights is None:
        return RoundOutcome(r, answer, queries)
    zero = [s for s, w in enumerate(weights) if w == 0]
    return RoundOutcome(r, answer, queries, zero, weights)


def apply_round(state: CandidateState, r: Sequence[int], zero_blocks: Sequence[int]) -> int:
    """Drop r_i from C_i at 0-block positions still above the phase floor.

    Returns the number of colours removed.
    """
    removed = 0
    bs, floor = state.block_size, state.floor
    for s in zero_blocks:
        for i in range(s * bs, (s + 1) * bs):
            if state.sizes[i] > floor:
                c = int(r[i])
                if c in state.sets[i]:
                    state.sets[i].discard(c)
                    state.sizes[i] -= 1
                    removed += 1
    return removed


def endgame_per_position(game: PaddedGame, state: CandidateState) -> np.ndarray:
    """Resolve each position with single-peg probes over dummies.

    Probing colour c at position i (dummies elsewhere) scores 1 exactly when
    z_i = c.  The last untested candidate needs no probe.
    """
    code = np.zeros(state.n, dtype=np.int64)
    for i, candidates in enumerate(state.sets):
        if not candidates:
            raise InconsistentAnswers(f"no candidate colour left at position {i}")
        ordered = sorted(candidates)
        for c in ordered[:-1]:
            probe = np.zeros(state.n, dtype=np.int64)
            probe[i] = c
            score = game.query(probe)
            if score == 1:
                code[i] = c
                break
            if score != 0:
                raise InconsistentAnswers(f"probe at position {i} scored {score}")
        else:
            code[i] = ordered[-1]
        state.sets[i] = {int(code[i])}
        state.sizes[i] = 1
    return code


def _play_phases(game: PaddedGame, config: StrategyConfig, rng: np.random.Generator,
                 observer: Observer) -> CandidateState:
    state = CandidateState.initial(game.N, game.K)
    threshold = max(math.sqrt(game.N), config.endgame_threshold)
    phase_size, j = game.K, 0
    while phase_size > threshold:
        j += 1
        state.begin_phase(j, phase_size)
        observer.on_phase_start(game, state)
        cap = math.ceil(config.round_cap_factor * 64 * phase_size)
        while not state.phase_complete():
            if state.rounds >= cap:
                state.capped = True
                return state
            outcome = run_round(game, state, config, rng)
            state.rounds += 1
            state.total_rounds += 1
            if outcome.successful:
                apply_round(state, outcome.r, outcome.zero_blocks)
            observer.on_round(game, state, outcome)
        observer.on_phase_end(game, state)
        phase_size //= 2
    return state


def solve_game(game: PaddedGame, config: StrategyConfig, rng: np.random.Generator,
               observer: Optional[Observer] = None) -> Code:
    """Run phases and endgame on a padded game; returns the real code."""
    observer = observer or Observer()
    state = _play_phases(game, config, rng, observer)
    observer.on_endgame(game, state)
    virtual = endgame_per_position(game, state)
    return tuple(int(c) for c in game.lower(virtual))


def solve_on_alphabets(ask: BlackChannel, alphabets: Sequence[Sequence[int]],
                       dummies: Sequence[int], config: StrategyConfig,
                       rng: np.random.Generator, observer: Optional[Observer] = None,
                       label: str = "secret") -> Code:
    """Black-peg solve where position i's secret lies in ``alphabets[i]``.

    Dummies must already be known.  When the alphabets are wider than the
    number of positions, monochromatic queries first discard alphabet
    indices that occur nowhere.
    """
    n = len(alphabets)
    alphabets = [tuple(a) for a in alphabets]
    if max(len(a) for a in alphabets) > n:
        counts = _monochromatic_counts(ask, alphabets, dummies)
        live = [c for c, cnt in counts.items() if cnt > 0]
        alphabets = [tuple(a[c - 1] for c in live if c <= len(a)) for a in alphabets]
        if any(not a for a in alphabets):
            raise InconsistentAnswers("a position lost every candidate colour")
    game = PaddedGame(ask, n, alphabets, dummies, label=label)
    return solve_game(game, config, rng, observer)


def solve_adaptive(oracle, config: Optional[StrategyConfig] = None,
                   observer: Optional[Observer] = None) -> Code:
    """Find the secret of a black-peg game with the phase/coin-weighing strategy.

    Order of work: dummy colours (n+1 queries), monochromatic colour
    reduction when k > n, padding to powers of two, halving phases while
    k' > max(sqrt(n_pad), endgame_threshold), then per-position probes.
    """
    config = config or StrategyConfig()
    observer = observer or Observer()
    rng = np.random.default_rng(config.seed)
    n, k = oracle.n, oracle.k
    if n < 1:
        raise InvalidInput("n must be positive")
    ask = _channel_with_stop(oracle)
    try:
        if k == 1:
            ask(np.ones(n, dtype=np.int64))
        info = _find_dummies(ask, [(1, 2)] * n)
        observer.on_dummies(info.dummies)
        return solve_on_alphabets(ask, [range(1, k + 1)] * n, info.dummies,
                                  config, rng, observer)
    except CodeFound as found:
        return found.code


def solve_random_guessing(oracle, rng: np.random.Generator | int | None = 0,
                          observer: Optional[Observer] = None) -> Code:
    """Non-adaptive random guessing: uniform guesses from [k]^n.

    A zero score rules out every guessed colour at its position; the run
    ends once each position has a single candidate left (or a guess scores
    n).
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    n, k = oracle.n, oracle.k
    ask = _channel_with_stop(oracle)
    alive = np.ones((n, k + 1), dtype=bool)
    alive[:, 0] = False
    sizes = np.full(n, k, dtype=np.int64)
    rows = np.arange(n)
    try:
        while (sizes > 1).any():
            guess = rng.integers(1, k + 1, size=n)
            if ask(guess) == 0:
                sizes -= alive[rows, guess]
                alive[rows, guess] = False
                if (sizes == 0).any():
                    raise InconsistentAnswers("a position lost every candidate colour")
    except CodeFound as found:
        return found.code
    return tuple(int(np.flatnonzero(alive[i])[0]) for i in range(n))
