"""Seeded single games and benchmark sweeps with CSV output."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from mastermind.black import StrategyConfig, solve_adaptive, solve_random_guessing
from mastermind.bw import adapt_bw_to_black, solve_bw
from mastermind.engine import BLACK, BW, InvalidInput, Oracle, random_secret

ADAPTIVE = "adaptive"
RANDOM_GUESS = "random-guess"
BW_COMPOSITE = "bw-composite"
STRATEGIES = (ADAPTIVE, RANDOM_GUESS, BW_COMPOSITE)

K_RULES = ("n", "2n", "n2", "fixed")

CSV_HEADER = ("n", "k", "strategy", "seed", "queries", "success", "wall_time_ms")

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix(size_index: int, trial_index: int, strategy_index: int) -> int:
    return splitmix64((size_index << 40) ^ (trial_index << 8) ^ strategy_index)


def game_seed(base_seed: int, size_index: int, trial_index: int, strategy_index: int) -> int:
    return (base_seed ^ mix(size_index, trial_index, strategy_index)) & _MASK64


def resolve_k(n: int, k_rule: str, fixed_k: Optional[int] = None) -> int:
    if k_rule == "n":
        return n
    if k_rule == "2n":
        return 2 * n
    if k_rule == "n2":
        return n * n
    if k_rule == "fixed":
        if fixed_k is None:
            raise InvalidInput("k rule 'fixed' needs an explicit k")
        return fixed_k
    raise InvalidInput(f"unknown k rule {k_rule!r}")


@dataclass
class BenchRecord:
    n: int
    k: int
    strategy: str
    seed: int
    queries: int
    success: bool
    wall_time_ms: float = 0.0

    def row(self, timing: bool) -> list[str]:
        ms = f"{self.wall_time_ms:.3f}" if timing else "0"
        return [str(self.n), str(self.k), self.strategy, str(self.seed),
                str(self.queries), "true" if self.success else "false", ms]


@dataclass
class SweepConfig:
    sizes: Sequence[int]
    k_rule: str = "n"
    trials: int = 1
    base_seed: int = 0
    strategies: Sequence[str] = (ADAPTIVE,)
    out: Optional[str] = None
    fixed_k: Optional[int] = None
    timing: bool = False
    strategy_config: StrategyConfig = field(default_factory=StrategyConfig)

    def __post_init__(self):
        if not self.sizes:
            raise InvalidInput("sizes must be non-empty")
        if self.trials < 1:
            raise InvalidInput("trials must be at least 1")
        if not self.strategies:
            raise InvalidInput("strategy list must be non-empty")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise InvalidInput(f"unknown strategy {s!r}")
        if any(n < 1 for n in self.sizes):
            raise InvalidInput("sizes must be positive")
        resolve_k(1, self.k_rule, self.fixed_k)


def make_oracle(n: int, k: int, strategy: str, seed: int, mode: Optional[str] = None,
                inspectable: bool = False) -> Oracle:
    """Oracle with a secret drawn from the game's own secret stream."""
    if mode is None:
        mode = BW if strategy == BW_COMPOSITE else BLACK
    secret = random_secret(n, k, np.random.default_rng([seed, 0]))
    return Oracle(secret, k, mode, inspectable=inspectable)


def run_strategy(oracle, strategy: str, seed: int, config: Optional[StrategyConfig] = None,
                 observer=None):
    """Run one strategy on ``oracle``; the strategy stream is ``[seed, 1]``."""
    config = replace(config or StrategyConfig(), seed=[seed, 1])
    if strategy == ADAPTIVE:
        return solve_adaptive(oracle, config, observer)
    if strategy == RANDOM_GUESS:
        return solve_random_guessing(oracle, np.random.default_rng([seed, 1]), observer)
    if strategy == BW_COMPOSITE:
        if oracle.mode != BW:
            oracle = adapt_bw_to_black(oracle, oracle.n, oracle.k)
        return solve_bw(oracle, config, observer)
    raise InvalidInput(f"unknown strategy {strategy!r}")


def run_game(n: int, k: int, strategy: str, seed: int,
             config: Optional[StrategyConfig] = None) -> BenchRecord:
    oracle = make_oracle(n, k, strategy, seed, inspectable=True)
    start = time.perf_counter()
    code = run_strategy(oracle, strategy, seed, config)
    elapsed = (time.perf_counter() - start) * 1000.0
    success = tuple(code) == oracle.inspect_secret()
    return BenchRecord(n, k, strategy, seed, oracle.queries, success, elapsed)


def sweep_jobs(config: SweepConfig) -> list[tuple]:
    jobs = []
    for si, n in enumerate(config.sizes):
        k = resolve_k(n, config.k_rule, config.fixed_k)
        for ti in range(config.trials):
            for gi, strategy in enumerate(config.strategies):
                seed = game_seed(config.base_seed, si, ti, gi)
                jobs.append((n, k, strategy, seed, config.strategy_config))
    return jobs


def _run_job(job: tuple) -> BenchRecord:
    return run_game(*job)


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[BenchRecord]:
    """All games of a sweep, in (size, trial, strategy) order whatever ``jobs`` is."""
    work = sweep_jobs(config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_job, work, chunksize=1))
    return [_run_job(job) for job in work]


def records_to_csv(records: Sequence[BenchRecord], timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row(timing))
    return buf.getvalue()


def write_csv(records: Sequence[BenchRecord], path: str, timing: bool = False) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records, timing))
