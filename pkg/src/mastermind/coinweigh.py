"""Random subset weighings and exact reconstruction of block weights.

A weighing problem has ``m`` coins with unknown non-negative integer
weights, a known total, and a list of subset sums.  :func:`solve` decides
whether the recorded sums pin down a single weight vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from mastermind.engine import InvalidInput

DEFAULT_CF = 8.0
DEFAULT_NODE_BUDGET = 10**7


def f_default(m: int, c_f: float = DEFAULT_CF) -> int:
    """Number of random weighings used for ``m`` coins: ceil(c_f*m/log2(m+2))."""
    if m < 1:
        raise InvalidInput("m must be at least 1")
    return math.ceil(c_f * m / math.log2(m + 2))


def sample_queries(m: int, f: int, rng: np.random.Generator) -> np.ndarray:
    """``f`` independent uniform subsets of ``range(m)`` as an (f, m) bool array."""
    return rng.integers(0, 2, size=(f, m), dtype=np.int8).astype(bool)


def weigh(v: Sequence[int], q: Sequence[bool]) -> int:
    if len(v) != len(q):
        raise InvalidInput(f"length mismatch: {len(v)} weights vs {len(q)} flags")
    return int(sum(w for w, inc in zip(v, q) if inc))


@dataclass
class WeighingProblem:
    m: int
    total: int
    queries: list = field(default_factory=list)
    answers: list = field(default_factory=list)

    def record(self, query: Sequence[bool], answer: int) -> None:
        if len(query) != self.m:
            raise InvalidInput(f"query length {len(query)} != m={self.m}")
        self.queries.append(np.asarray(query, dtype=bool))
        self.answers.append(int(answer))

    def matrix(self) -> np.ndarray:
        if not self.queries:
            return np.zeros((0, self.m), dtype=np.int64)
        return np.vstack(self.queries).astype(np.int64)


class _BudgetExceeded(Exception):
    pass


def _propagate(rows: np.ndarray, rhs: np.ndarray, lb: np.ndarray, ub: np.ndarray):
    """Tighten ``lb``/``ub`` to bounds consistency; ``None`` if infeasible."""
    big = np.iinfo(np.int64).max // 4
    while True:
        low_sum = rows @ lb
        high_sum = rows @ ub
        if (low_sum > rhs).any() or (high_sum < rhs).any():
            return None
        cap = np.where(rows, (rhs - low_sum)[:, None] + lb[None, :], big).min(axis=0)
        floor = np.where(rows, (rhs - high_sum)[:, None] + ub[None, :], -big).max(axis=0)
        new_ub = np.minimum(ub, cap)
        new_lb = np.maximum(lb, floor)
        if (new_lb > new_ub).any():
            return None
        if (new_ub == ub).all() and (new_lb == lb).all():
            return lb, ub
        lb, ub = new_lb, new_ub


_PRIME = 2_147_483_647


def _rref_mod(aug: np.ndarray, ncols: int, p: int = _PRIME):
    """Reduced row echelon form of ``aug`` over GF(p), pivoting in ``ncols``.

    Returns the reduced matrix and the pivot column list.  Entries stay
    below 2**31 so the int64 products cannot overflow.
    """
    M = np.mod(aug.astype(np.int64), p)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == M.shape[0]:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = M[r] * pow(int(M[r, c]), p - 2, p) % p
        factors = M[:, c].copy()
        factors[r] = 0
        M = (M - factors[:, None] * M[r][None, :]) % p
        pivots.append(c)
        r += 1
    return M, pivots


def solve(problem: WeighingProblem, per_block_bound: int,
          node_budget: int = DEFAULT_NODE_BUDGET) -> Optional[tuple[int, ...]]:
    """The unique consistent weight vector, or ``None`` if not determined.

    The weighings plus the total form a linear system.  It is reduced
    exactly over GF(p) with p larger than any admissible weight, so every
    bounded integer solution equals the residue solution obtained from some
    choice of the free coins.  A depth-first search assigns the free coins
    (tightening per-coin bounds against every weighing, its complement and
    the total at each node), derives the pivot coins, and verifies each
    candidate over the integers.  Search stops at the second solution.
    Inconsistent problems, ambiguous problems and exhausted node budgets
    all return ``None``.
    """
    m, total, bound = problem.m, problem.total, per_block_bound
    if bound < 0 or total < 0:
        raise InvalidInput("bound and total must be non-negative")
    if bound >= _PRIME:
        raise InvalidInput("per-block bound too large")
    if total > bound * m or any(a < 0 or a > total for a in problem.answers):
        return None
    A = problem.matrix()
    b = np.asarray(problem.answers, dtype=np.int64)
    system = np.vstack([A, np.ones((1, m), dtype=np.int64)])
    target = np.concatenate([b, [total]]).astype(np.int64)

    reduced, pivots = _rref_mod(np.column_stack([system, target]), m)
    rank = len(pivots)
    if reduced[rank:, m].any():
        return None
    free = [c for c in range(m) if c not in set(pivots)]
    offsets = reduced[:rank, m]
    coupling = reduced[:rank, free]

    def complete(free_values: np.ndarray) -> Optional[tuple[int, ...]]:
        v = np.zeros(m, dtype=np.int64)
        v[free] = free_values
        if rank:
            v[pivots] = (offsets - coupling @ free_values) % _PRIME
        if (v > bound).any():
            return None
        if not np.array_equal(system @ v, target):
            return None
        return tuple(int(x) for x in v)

    if not free:
        return complete(np.zeros(0, dtype=np.int64))

    rows = np.vstack([A, 1 - A, np.ones((1, m), dtype=np.int64)])
    rhs = np.concatenate([b, total - b, [total]]).astype(np.int64)
    solutions: list[tuple[int, ...]] = []
    nodes = 0

    def descend(depth: int, lb: np.ndarray, ub: np.ndarray) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExceeded
        tightened = _propagate(rows, rhs, lb, ub)
        if tightened is None:
            return
        lb, ub = tightened
        if depth == len(free):
            found = complete(lb[free])
            if found is not None:
                solutions.append(found)
            return
        s = free[depth]
        for val in range(int(lb[s]), int(ub[s]) + 1):
            lb2, ub2 = lb.copy(), ub.copy()
            lb2[s] = ub2[s] = val
            descend(depth + 1, lb2, ub2)
            if len(solutions) > 1:
                return

    try:
        descend(0, np.zeros(m, dtype=np.int64), np.full(m, bound, dtype=np.int64))
    except _BudgetExceeded:
        return None
    if len(solutions) == 1:
        return solutions[0]
    return None


def enumerate_solutions(problem: WeighingProblem, per_block_bound: int) -> list[tuple[int, ...]]:
    """All consistent bounded vectors by plain enumeration (test oracle).

    Walks every composition of ``total`` into ``m`` bounded parts and keeps
    those matching each recorded weighing; no pruning beyond the sum.
    """
    m, total = problem.m, problem.total
    out = []
    queries = [list(map(bool, q)) for q in problem.queries]

    def compositions(prefix: list[int], remaining: int, slots: int):
        if slots == 0:
            if remaining == 0:
                yield tuple(prefix)
            return
        for v in range(min(per_block_bound, remaining) + 1):
            prefix.append(v)
            yield from compositions(prefix, remaining - v, slots - 1)
            prefix.pop()

    for vec in compositions([], total, m):
        if all(weigh(vec, q) == a for q, a in zip(queries, problem.answers)):
            out.append(vec)
    return out
