"""Verification suites: each check reproduces one acceptance criterion.

Checks return :class:`CheckResult` rather than raising, so the CLI can
print a pass/fail line per check and the test-suite can assert on them.
"""

from __future__ import annotations

import itertools
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from mastermind import coinweigh, verify
from mastermind.black import EXTENSION_COLOR, Observer, StrategyConfig
from mastermind.bw import adapt_bw_to_black, color_query
from mastermind.engine import BLACK, BW, Oracle, black_answer, white_answer
from mastermind.harness import (
    ADAPTIVE,
    BW_COMPOSITE,
    RANDOM_GUESS,
    STRATEGIES,
    SweepConfig,
    game_seed,
    make_oracle,
    run_strategy,
    run_sweep,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


class InvariantViolation(AssertionError):
    pass


class InvariantObserver(Observer):
    """Checks strategy invariants against a known secret after every step."""

    def __init__(self, secret: Sequence[int], n: Optional[int] = None):
        self.secret = tuple(secret)
        self.n = n if n is not None else len(self.secret)
        self.colours = frozenset(self.secret)
        self.rounds = 0
        self.phases = 0
        self.partitions = 0
        self._targets: dict[int, np.ndarray] = {}
        self._prev_sizes: Optional[np.ndarray] = None

    def _fail(self, msg: str):
        raise InvariantViolation(msg)

    def _target(self, game) -> np.ndarray:
        key = id(game)
        if key not in self._targets:
            if game.label == "colors":
                real = [next(c for c in alpha if c in self.colours) for alpha in game.alphabets]
            else:
                real = self.secret
            self._targets = {key: game.lift(real)}
        return self._targets[key]

    def _check_membership(self, game, state) -> None:
        target = self._target(game)
        for i, cands in enumerate(state.sets):
            if int(target[i]) not in cands:
                self._fail(f"secret colour left candidate set at position {i}")
        if not np.array_equal(state.sizes, [len(c) for c in state.sets]):
            self._fail("size bookkeeping out of sync")

    def on_dummies(self, dummies) -> None:
        for i, d in enumerate(dummies):
            if d == self.secret[i]:
                self._fail(f"dummy colour {d} is correct at position {i}")

    def on_phase_start(self, game, state) -> None:
        self.phases += 1
        if not (state.sizes == state.phase_size).all():
            self._fail("phase started with unequal candidate sets")
        self._check_membership(game, state)
        self._prev_sizes = state.sizes.copy()

    def on_round(self, game, state, outcome) -> None:
        self.rounds += 1
        self._check_membership(game, state)
        if (state.sizes < state.floor).any():
            self._fail("candidate set dropped below the phase floor")
        if (state.sizes > self._prev_sizes).any():
            self._fail("candidate set grew")
        self._prev_sizes = state.sizes.copy()
        if outcome.successful:
            target = self._target(game)
            true = (outcome.r == target).reshape(state.m, state.block_size).sum(axis=1)
            if tuple(int(v) for v in true) != tuple(outcome.weights):
                self._fail("coin weighing reconstructed wrong block weights")

    def on_phase_end(self, game, state) -> None:
        if not (state.sizes == state.floor).all():
            self._fail("phase ended before every set reached the floor")

    def on_endgame(self, game, state) -> None:
        self._check_membership(game, state)

    def on_partition(self, partition) -> None:
        self.partitions += 1
        parts = partition.parts
        flat = [c for p in parts for c in p]
        if len(flat) != len(set(flat)):
            self._fail("partition parts overlap")
        bound = math.ceil(partition.pool_size / partition.n_star)
        if any(len(p) > bound or len(p) > self.n for p in parts):
            self._fail("partition part exceeds the size bound")
        if any(len(self.colours.intersection(p)) != 1 for p in parts):
            self._fail("a partition part does not hold exactly one secret colour")
        if len(parts) != len(self.colours):
            self._fail("wrong number of parts")

    def on_secret_colors(self, colours) -> None:
        if frozenset(colours) != self.colours:
            self._fail("identified colour set differs from the secret's")


def check_white_equivalence(max_n: int = 4, max_k: int = 3) -> CheckResult:
    pairs = 0
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            codes = list(itertools.product(range(1, k + 1), repeat=n))
            for z in codes:
                for x in codes:
                    pairs += 1
                    w = white_answer(z, x)
                    if w != verify.brute_force_white(z, x):
                        return CheckResult("white pegs vs permutation definition", False, f"z={z} x={x}")
                    if w != white_answer(x, z) or black_answer(z, x) != black_answer(x, z):
                        return CheckResult("white pegs vs permutation definition", False, f"asymmetric at z={z} x={x}")
    return CheckResult("white pegs vs permutation definition", True, f"{pairs} pairs, n<={max_n}, k<={max_k}")


def check_adaptive_correctness(sizes: Sequence[int] = (8, 16, 32, 64, 128, 256),
                               trials: int = 100, base_seed: int = 2) -> CheckResult:
    runs = wins = rounds = 0
    for si, n in enumerate(sizes):
        for t in range(trials):
            seed = game_seed(base_seed, si, t, 0)
            oracle = make_oracle(n, n, ADAPTIVE, seed, inspectable=True)
            obs = InvariantObserver(oracle.inspect_secret())
            try:
                code = run_strategy(oracle, ADAPTIVE, seed, observer=obs)
            except InvariantViolation as exc:
                return CheckResult("adaptive correctness", False, f"n={n} seed={seed}: {exc}")
            runs += 1
            rounds += obs.rounds
            wins += tuple(code) == oracle.inspect_secret()
    return CheckResult("adaptive correctness", wins == runs,
                       f"{wins}/{runs} exact, invariants held over {rounds} rounds")


def scaling_means(sizes: Sequence[int] = (64, 128, 256, 512), trials: int = 50,
                  base_seed: int = 3) -> dict[str, list[float]]:
    cfg = SweepConfig(sizes=list(sizes), k_rule="n", trials=trials, base_seed=base_seed,
                      strategies=(ADAPTIVE, RANDOM_GUESS))
    records = run_sweep(cfg)
    if not all(r.success for r in records):
        raise InvariantViolation("a scaling game returned the wrong code")
    means: dict[str, list[float]] = {ADAPTIVE: [], RANDOM_GUESS: []}
    for n in sizes:
        for strategy in means:
            qs = [r.queries for r in records if r.n == n and r.strategy == strategy]
            means[strategy].append(float(np.mean(qs)) / (n * math.log2(n)))
    return means


def check_scaling(sizes: Sequence[int] = (64, 128, 256, 512), trials: int = 50,
                  base_seed: int = 3, slack: float = 0.05, band: float = 2.0) -> CheckResult:
    means = scaling_means(sizes, trials, base_seed)
    ad, rg = means[ADAPTIVE], means[RANDOM_GUESS]
    decreasing = all(b < a * (1 + slack) for a, b in zip(ad, ad[1:]))
    banded = max(rg) <= band * min(rg)
    detail = ("adaptive q/(n log n) = " + ", ".join(f"{v:.3f}" for v in ad)
              + "; random q/(n log n) = " + ", ".join(f"{v:.3f}" for v in rg))
    return CheckResult("scaling separation", decreasing and banded, detail)


def hidden_block_weights(m: int, rng: np.random.Generator, n: int = 64) -> tuple[np.ndarray, int]:
    """Block contributions of a random query in an n=k game with m blocks.

    Blocks have size k'/4 with k' = 4n/m; each position matches with
    probability 1/k'.  Redrawn until the total is at most m/2.
    """
    phase_size = 4 * n // m
    block = phase_size // 4
    while True:
        v = rng.binomial(block, 1.0 / phase_size, size=m)
        if v.sum() <= m // 2:
            return v, block


def check_coinweigh(ms: Sequence[int] = (8, 16, 32), trials: int = 200, base_seed: int = 4,
                    threshold: float = 0.5) -> CheckResult:
    rates = []
    for m in ms:
        rng = np.random.default_rng([base_seed, m])
        ok = 0
        for _ in range(trials):
            v, bound = hidden_block_weights(m, rng)
            problem = coinweigh.WeighingProblem(m, int(v.sum()))
            for q in coinweigh.sample_queries(m, coinweigh.f_default(m), rng):
                problem.record(q, int(v[q].sum()))
            got = coinweigh.solve(problem, bound)
            if got is not None and tuple(got) != tuple(int(x) for x in v):
                return CheckResult("coin-weighing success rate", False, f"m={m}: wrong vector")
            if m <= 10:
                sols = coinweigh.enumerate_solutions(problem, bound)
                expected = sols[0] if len(sols) == 1 else None
                if expected != got:
                    return CheckResult("coin-weighing success rate", False,
                                       f"m={m}: verdict disagrees with enumeration")
            ok += got is not None
        rates.append(ok / trials)
    passed = all(r >= threshold for r in rates)
    detail = ", ".join(f"m={m}: {r:.1%}" for m, r in zip(ms, rates))
    return CheckResult("coin-weighing success rate", passed, detail)


def _subsets_up_to(k: int, size: int):
    for s in range(size + 1):
        yield from itertools.combinations(range(1, k + 1), s)


def check_color_queries(max_n: int = 4, max_k: int = 5, random_secrets: int = 200,
                        base_seed: int = 5) -> CheckResult:
    cases = 0
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            secrets = list(itertools.product(range(1, k + 1), repeat=n))
            rng = np.random.default_rng([base_seed, n, k])
            extra = [tuple(int(c) for c in rng.integers(1, k + 1, size=n)) for _ in range(random_secrets)]
            for z in secrets + extra:
                oracle = Oracle(z, k, BW)
                b = oracle.query([1] * n).black
                for X in _subsets_up_to(k, n):
                    cases += 1
                    if color_query(oracle, X, b, n) != len(set(z) & set(X)):
                        return CheckResult("colour-query exactness", False, f"z={z} X={X}")
    rng = np.random.default_rng([base_seed, 99])
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 17))
        z = tuple(int(c) for c in rng.integers(1, k + 1, size=n))
        size = int(rng.integers(0, min(n, k) + 1))
        X = tuple(int(c) for c in rng.choice(np.arange(1, k + 1), size=size, replace=False))
        oracle = Oracle(z, k, BW)
        b = oracle.query([1] * n).black
        cases += 1
        if color_query(oracle, X, b, n) != len(set(z) & set(X)):
            return CheckResult("colour-query exactness", False, f"z={z} X={X}")
    return CheckResult("colour-query exactness", True, f"{cases} colour queries exact")


def check_bw_composite(ns: Sequence[int] = (8, 16, 32), trials: int = 50,
                       base_seed: int = 6) -> CheckResult:
    runs = wins = 0
    for si, n in enumerate(ns):
        for ki, kk in enumerate(sorted({n, 2 * n, 4 * n, min(n * n, 1024)})):
            for t in range(trials):
                seed = game_seed(base_seed, si, ki * trials + t, 2)
                oracle = make_oracle(n, kk, BW_COMPOSITE, seed, inspectable=True)
                obs = InvariantObserver(oracle.inspect_secret())
                try:
                    code = run_strategy(oracle, BW_COMPOSITE, seed, observer=obs)
                except InvariantViolation as exc:
                    return CheckResult("bw composite", False, f"n={n} k={kk} seed={seed}: {exc}")
                runs += 1
                wins += tuple(code) == oracle.inspect_secret()
    return CheckResult("bw composite", wins == runs, f"{wins}/{runs} exact, partition postconditions held")


def check_adapter(max_n: int = 3, max_k: int = 3) -> CheckResult:
    checked = 0
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            codes = list(itertools.product(range(1, k + 1), repeat=n))
            for z in codes:
                inner = Oracle(z, k, BLACK)
                adapter = adapt_bw_to_black(inner, n, k)
                if inner.queries != k - 1:
                    return CheckResult("black-to-bw adapter", False, f"setup cost {inner.queries} != {k - 1}")
                genuine = Oracle(z, k, BW)
                for x in codes:
                    checked += 1
                    if adapter.query(x) != genuine.query(x):
                        return CheckResult("black-to-bw adapter", False, f"z={z} x={x}")
    return CheckResult("black-to-bw adapter", True, f"{checked} answers match, setup k-1")


def check_nonadaptive(cases: Sequence[tuple[int, int]] = ((2, 2), (3, 2), (2, 3), (3, 3)),
                      C: float = 8.0, attempts: int = 100, base_seed: int = 7) -> CheckResult:
    notes = []
    for n, k in cases:
        disagreements = []

        def cross_check(queries, ok, n=n, k=k):
            if ok != verify.splits_all_patterns(queries, n, k):
                disagreements.append(queries)

        rng = np.random.default_rng([base_seed, n, k])
        found = verify.find_identifying_set(n, k, rng, attempts=attempts, C=C, on_attempt=cross_check)
        if found is None:
            return CheckResult("non-adaptive identifiability", False, f"(n,k)=({n},{k}): none found")
        if disagreements:
            return CheckResult("non-adaptive identifiability", False, f"(n,k)=({n},{k}): formulations disagree")
        notes.append(f"({n},{k}) N={len(found)}")
    return CheckResult("non-adaptive identifiability", True, ", ".join(notes))


def check_determinism(sizes: Sequence[int] = (8, 16), trials: int = 3,
                      base_seed: int = 8) -> CheckResult:
    from mastermind.cli import cmd_bench

    with tempfile.TemporaryDirectory() as tmp:
        blobs = []
        for i in range(2):
            path = os.path.join(tmp, f"run{i}.csv")
            cfg = SweepConfig(sizes=list(sizes), trials=trials, base_seed=base_seed,
                              strategies=STRATEGIES, out=path)
            cmd_bench(cfg, write=lambda line: None)
            with open(path, "rb") as fh:
                blobs.append(fh.read())
    same = blobs[0] == blobs[1]
    rows = blobs[0].count(b"\n") - 1
    return CheckResult("bench determinism", same, f"{rows} rows, byte-identical={same}")


SUITES: dict[str, list[Callable[[], CheckResult]]] = {
    "oracle-equivalence": [check_white_equivalence, check_color_queries, check_adapter],
    "coinweigh": [check_coinweigh],
    "invariants": [check_adaptive_correctness, check_bw_composite, check_determinism],
    "nonadaptive": [check_nonadaptive],
    "scaling": [check_scaling],
}
