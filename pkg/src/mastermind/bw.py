"""Black/white-peg codebreaking through colour queries.

With black and white pegs, one query reveals ``col(X) = |C* ∩ X|``, the
number of colours of a set X (|X| <= n) that appear in the secret.  The
composite strategy learns which colours occur, splits them into disjoint
parts holding one secret colour each, identifies the secret colour of
every part by replaying a black-peg game on the parts, and finally solves
the black-peg game restricted to those colours.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from mastermind.black import (
    DUMMY,
    Observer,
    StrategyConfig,
    _find_dummies,
    solve_on_alphabets,
)
from mastermind.engine import (
    BW,
    Answer,
    Code,
    CodeFound,
    InconsistentAnswers,
    InvalidInput,
    Transcript,
    answering,
)


# consecutive rejected draws before the answers are declared inconsistent
MAX_PARTITION_MISSES = 500


def _bw_channel(oracle):
    return oracle if callable(oracle) and not hasattr(oracle, "query") else oracle.query


def color_query_code(X: Iterable[int], n: int) -> np.ndarray:
    """The guess used to measure col(X): sorted X, then colour 1 fillers."""
    colours = sorted(set(X))
    if len(colours) > n:
        raise InvalidInput(f"colour query of {len(colours)} colours exceeds n={n}")
    return np.array(colours + [1] * (n - len(colours)), dtype=np.int64)


def color_query(oracle, X: Iterable[int], b: int, n: int) -> int:
    """col(X) from one black/white answer, given b = number of 1s in the secret."""
    X = set(X)
    nu = len(X)
    answer = _bw_channel(oracle)(color_query_code(X, n))
    y = answer.black + (answer.white or 0)
    if 1 not in X or b == 0:
        col = y - min(n - nu, b)
    else:
        col = y - min(n - nu, b - 1)
    if col < 0 or col > nu:
        raise InconsistentAnswers(f"colour query on {sorted(X)} gave {col}")
    return col


def learn_counts_and_superset(oracle, n: int, k: int, b: int) -> tuple[int, list[int]]:
    """Number of distinct secret colours and a superset of them.

    Colours are cut into ceil(k/n) consecutive chunks of at most n; the
    superset is the union of chunks with a positive colour query.
    """
    total, superset = 0, []
    for start in range(1, k + 1, n):
        chunk = list(range(start, min(start + n, k + 1)))
        col = color_query(oracle, chunk, b, n)
        total += col
        if col > 0:
            superset.extend(chunk)
    return total, superset


@dataclass
class ColorPartition:
    parts: list[tuple[int, ...]]
    queries: int = 0
    pool_size: int = 0
    n_star: int = 0

    @property
    def part_bound(self) -> int:
        return max((len(p) for p in self.parts), default=0)


def partition_colors(oracle, C0: Sequence[int], n_star: int, b: int, n: int,
                     rng: np.random.Generator) -> ColorPartition:
    """Split C0 into n_star disjoint parts holding exactly one secret colour each.

    Repeatedly draws a uniform subset of size ceil(|C0|/n_star) from the
    colours still in C0 and keeps it when its colour query returns 1.
    """
    remaining = sorted(C0)
    pool_size, wanted = len(remaining), n_star
    parts: list[tuple[int, ...]] = []
    queries = misses = 0
    while n_star > 0:
        if not remaining:
            raise InconsistentAnswers("ran out of colours before finding every part")
        if misses >= MAX_PARTITION_MISSES:
            raise InconsistentAnswers("no colour query of the partition loop returned 1")
        size = min(math.ceil(len(remaining) / n_star), len(remaining))
        pick = rng.choice(len(remaining), size=size, replace=False)
        part = tuple(sorted(remaining[i] for i in pick))
        queries += 1
        if color_query(oracle, part, b, n) == 1:
            parts.append(part)
            chosen = set(part)
            remaining = [c for c in remaining if c not in chosen]
            n_star -= 1
            misses = 0
        else:
            misses += 1
    return ColorPartition(parts, queries, pool_size, wanted)


def identify_secret_colors(oracle, partition: ColorPartition, b: int, n: int,
                           config: StrategyConfig, rng: np.random.Generator,
                           observer: Optional[Observer] = None) -> frozenset:
    """The secret's colour set, one colour per part.

    Plays a black-peg game whose positions are the parts and whose hidden
    string picks each part's secret colour.  A guess choosing one colour
    per part scores col(chosen colours), since the parts are disjoint;
    positions left at the dummy are simply omitted from the colour query.
    """
    parts = partition.parts
    if all(len(p) == 1 for p in parts):
        return frozenset(p[0] for p in parts)

    def ask(x: np.ndarray) -> int:
        return color_query(oracle, (int(c) for c in x if c != DUMMY), b, n)

    code = solve_on_alphabets(ask, parts, [DUMMY] * len(parts), config, rng,
                              observer, label="colors")
    return frozenset(code)


def solve_bw(oracle, config: Optional[StrategyConfig] = None,
             observer: Optional[Observer] = None) -> Code:
    """Composite black/white strategy.

    1. query (1,...,1) to learn b, the number of 1s;
    2. ceil(k/n) colour queries give |C*| and a superset C0;
    3. split C0 into |C*| parts with one secret colour each;
    4. find C* by a black-peg game over the parts;
    5. solve the black-peg game over colours C* (white pegs ignored).
    """
    config = config or StrategyConfig()
    observer = observer or Observer()
    rng = np.random.default_rng(config.seed)
    n, k = oracle.n, oracle.k
    ask = answering(oracle)
    try:
        b = ask(np.ones(n, dtype=np.int64)).black
        n_star, C0 = learn_counts_and_superset(ask, n, k, b)
        if n_star < 1:
            raise InconsistentAnswers("no colour occurs in the secret")
        partition = partition_colors(ask, C0, n_star, b, n, rng)
        observer.on_partition(partition)
        colours = identify_secret_colors(ask, partition, b, n, config, rng, observer)
        observer.on_secret_colors(colours)
        alphabet = sorted(colours)

        def black(x: np.ndarray) -> int:
            return ask(x).black

        unused = next((c for c in range(1, k + 1) if c not in colours), None)
        if len(alphabet) == 1:
            return (alphabet[0],) * n
        if unused is not None:
            dummies = [unused] * n
        else:
            dummies = list(_find_dummies(black, [alphabet] * n).dummies)
            observer.on_dummies(tuple(dummies))
        return solve_on_alphabets(black, [alphabet] * n, dummies, config, rng, observer)
    except CodeFound as found:
        return found.code


class BlackToBWAdapter:
    """Serves black/white answers on top of a black-only oracle.

    Setup spends k-1 monochromatic queries to learn every colour's count
    (the k-th follows from n).  Afterwards white pegs are computed locally
    from those counts; only the black peg count is asked of the inner
    oracle.
    """

    mode = BW

    def __init__(self, inner, n: int, k: int):
        self.inner = inner
        self.n, self.k = n, k
        counts = np.zeros(k + 1, dtype=np.int64)
        for c in range(1, k):
            counts[c] = inner.query(np.full(n, c, dtype=np.int64)).black
        counts[k] = n - counts[1:k].sum()
        if counts[k] < 0:
            raise InconsistentAnswers("colour counts exceed n")
        self.counts = counts
        self.setup_queries = k - 1
        self.transcript = Transcript(k)
        self.queries = 0

    def query(self, x: Sequence[int]) -> Answer:
        arr = np.asarray(x, dtype=np.int64)
        black = self.inner.query(arr).black
        common = int(np.minimum(self.counts, np.bincount(arr, minlength=self.k + 1)).sum())
        answer = Answer(black, common - black)
        self.transcript.append(arr, answer)
        self.queries += 1
        return answer


def adapt_bw_to_black(oracle_black, n: int, k: int) -> BlackToBWAdapter:
    return BlackToBWAdapter(oracle_black, n, k)
