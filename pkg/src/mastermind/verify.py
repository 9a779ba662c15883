"""Brute-force oracles for tiny games.

Everything here enumerates: permutations for white pegs, all k^n secrets
for identifiability, all difference patterns for the splitting criterion.
Oversized instances are refused with :class:`InstanceTooLarge` rather than
truncated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from mastermind.engine import Code, InvalidInput, black_answer

MAX_PERMUTATION_N = 8
MAX_SECRETS = 10**7


class InstanceTooLarge(ValueError):
    pass


def brute_force_white(z: Sequence[int], x: Sequence[int]) -> int:
    """White pegs by definition: best matching over all position permutations."""
    if len(z) != len(x):
        raise InvalidInput("length mismatch")
    n = len(z)
    if n > MAX_PERMUTATION_N:
        raise InstanceTooLarge(f"n={n} exceeds permutation limit {MAX_PERMUTATION_N}")
    best = max((sum(1 for i in range(n) if z[i] == x[rho[i]])
                for rho in itertools.permutations(range(n))), default=0)
    return best - black_answer(z, x)


@dataclass(frozen=True)
class DifferencePattern:
    positions: tuple[int, ...]
    colors_a: tuple[int, ...]
    colors_b: tuple[int, ...]

    def __post_init__(self):
        if not self.positions:
            raise InvalidInput("a difference pattern needs at least one position")
        if not (len(self.positions) == len(self.colors_a) == len(self.colors_b)):
            raise InvalidInput("positions and colour lists differ in length")
        if any(a == b for a, b in zip(self.colors_a, self.colors_b)):
            raise InvalidInput("pattern colours must differ at every position")

    @property
    def size(self) -> int:
        return len(self.positions)

    @classmethod
    def of(cls, z: Sequence[int], w: Sequence[int]) -> "DifferencePattern":
        idx = tuple(i for i in range(len(z)) if z[i] != w[i])
        return cls(idx, tuple(z[i] for i in idx), tuple(w[i] for i in idx))


def splits(pattern: DifferencePattern, x: Sequence[int]) -> bool:
    hits_a = sum(1 for i, c in zip(pattern.positions, pattern.colors_a) if x[i] == c)
    hits_b = sum(1 for i, c in zip(pattern.positions, pattern.colors_b) if x[i] == c)
    return hits_a != hits_b


def _guard(n: int, k: int) -> None:
    if k ** n > MAX_SECRETS:
        raise InstanceTooLarge(f"k^n = {k}^{n} exceeds {MAX_SECRETS}")


def all_codes(n: int, k: int) -> np.ndarray:
    _guard(n, k)
    return np.array(list(itertools.product(range(1, k + 1), repeat=n)),
                    dtype=np.int64).reshape(-1, n)


def _answer_matrix(queries: Sequence[Sequence[int]], n: int, k: int) -> np.ndarray:
    codes = all_codes(n, k)
    if len(queries) == 0:
        return codes, np.zeros((len(codes), 0), dtype=np.int64)
    Q = np.asarray(queries, dtype=np.int64).reshape(-1, n)
    return codes, (codes[:, None, :] == Q[None, :, :]).sum(axis=2)


def is_identified(queries: Sequence[Sequence[int]], z: Sequence[int], n: int, k: int) -> bool:
    """True iff no other secret gives the same answers as ``z`` to every query."""
    codes, answers = _answer_matrix(queries, n, k)
    target = np.array([black_answer(z, q) for q in queries], dtype=np.int64)
    same = (answers == target[None, :]).all(axis=1)
    return int(same.sum()) == 1


def identifies_all(queries: Sequence[Sequence[int]], n: int, k: int) -> bool:
    """True iff the answer vectors of all k^n secrets are pairwise distinct."""
    codes, answers = _answer_matrix(queries, n, k)
    return len(np.unique(answers, axis=0)) == len(codes)


def difference_patterns(n: int, k: int) -> Iterator[DifferencePattern]:
    """Every pattern up to swapping the two colour lists."""
    _guard(n, k)
    pairs = [(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1)]
    for d in range(1, n + 1):
        for idx in itertools.combinations(range(n), d):
            for choice in itertools.product(pairs, repeat=d):
                for flips in itertools.product((False, True), repeat=d - 1):
                    flips = (False,) + flips
                    ca = tuple(b if f else a for (a, b), f in zip(choice, flips))
                    cb = tuple(a if f else b for (a, b), f in zip(choice, flips))
                    yield DifferencePattern(idx, ca, cb)


def splits_all_patterns(queries: Sequence[Sequence[int]], n: int, k: int) -> bool:
    return all(any(splits(p, q) for q in queries) for p in difference_patterns(n, k))


def query_budget(n: int, k: int, C: float) -> int:
    """ceil(C * n * log2 k / max(log2(n/k), 1))."""
    return math.ceil(C * n * math.log2(k) / max(math.log2(n / k), 1.0))


def find_identifying_set(n: int, k: int, rng: np.random.Generator, attempts: int = 100,
                         size: Optional[int] = None, C: float = 8.0,
                         on_attempt: Optional[Callable[[list[Code], bool], None]] = None
                         ) -> Optional[list[Code]]:
    """First of up to ``attempts`` uniform random query sets that identifies every secret.

    ``size`` defaults to :func:`query_budget` with constant ``C``.
    ``on_attempt`` sees each sampled set with its verdict.
    """
    _guard(n, k)
    if size is None:
        size = query_budget(n, k, C)
    for _ in range(attempts):
        queries = [tuple(int(c) for c in row)
                   for row in rng.integers(1, k + 1, size=(size, n))]
        ok = identifies_all(queries, n, k)
        if on_attempt is not None:
            on_attempt(queries, ok)
        if ok:
            return queries
    return None
