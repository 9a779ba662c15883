"""Codes, answers and the simulated Codemaker.

Colours are the integers ``1..k``.  Internally the strategies use ``0`` as
an "unset/dummy" sentinel, but it never reaches an :class:`Oracle`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

Code = tuple[int, ...]

BLACK = "black"
BW = "bw"
MODES = (BLACK, BW)


class InvalidInput(ValueError):
    """A code or query does not fit the game it is used in."""


class InconsistentAnswers(RuntimeError):
    """The answers received cannot come from any secret code."""


class CodeFound(Exception):
    """Raised internally when an answer reports a full positional match.

    Strategies let it propagate to their entry point, which returns
    ``code`` as the secret.
    """

    def __init__(self, code: Code):
        super().__init__(code)
        self.code = code


@dataclass(frozen=True)
class Answer:
    black: int
    white: Optional[int] = None

    @property
    def total(self) -> int:
        return self.black + (self.white or 0)


def _check_pair(z: Sequence[int], x: Sequence[int]) -> None:
    if len(z) != len(x):
        raise InvalidInput(f"length mismatch: {len(z)} vs {len(x)}")


def black_answer(z: Sequence[int], x: Sequence[int]) -> int:
    """Number of positions where ``z`` and ``x`` agree."""
    _check_pair(z, x)
    return sum(1 for a, b in zip(z, x) if a == b)


def white_answer(z: Sequence[int], x: Sequence[int]) -> int:
    """Correct colours in wrong positions, via the multiset-minimum form."""
    _check_pair(z, x)
    cz, cx = Counter(z), Counter(x)
    common = sum(min(cnt, cx[c]) for c, cnt in cz.items())
    return common - black_answer(z, x)


def validate_code(x: Sequence[int], n: int, k: int) -> np.ndarray:
    """Return ``x`` as an integer array, or raise :class:`InvalidInput`."""
    arr = np.asarray(x)
    if arr.shape != (n,):
        raise InvalidInput(f"expected a code of length {n}, got shape {arr.shape}")
    if n and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise InvalidInput("colours must be integers")
        arr = arr.astype(np.int64)
    if n and (arr.min() < 1 or arr.max() > k):
        raise InvalidInput(f"colours must lie in 1..{k}")
    return arr


class TranscriptEntry(NamedTuple):
    guess: Code
    answer: Answer


class Transcript:
    """Ordered record of (guess, answer) pairs.

    Guesses are kept as compact read-only arrays; long benchmark games at
    n=512 issue tens of thousands of queries.
    """

    def __init__(self, k: int = 255):
        self._dtype = np.min_scalar_type(max(k, 1))
        self._guesses: list[np.ndarray] = []
        self._answers: list[Answer] = []

    def append(self, guess: np.ndarray, answer: Answer) -> None:
        g = np.array(guess, dtype=self._dtype)
        g.flags.writeable = False
        self._guesses.append(g)
        self._answers.append(answer)

    def __len__(self) -> int:
        return len(self._answers)

    def __getitem__(self, i: int) -> TranscriptEntry:
        return TranscriptEntry(tuple(int(c) for c in self._guesses[i]), self._answers[i])

    def __iter__(self) -> Iterator[TranscriptEntry]:
        for i in range(len(self)):
            yield self[i]

    def guesses(self) -> list[Code]:
        return [tuple(int(c) for c in g) for g in self._guesses]

    def answers(self) -> list[Answer]:
        return list(self._answers)


class Oracle:
    """Simulated Codemaker holding a secret code.

    Strategies only see :meth:`query`.  The secret itself is readable
    through :meth:`inspect_secret` only when the oracle was built with
    ``inspectable=True``, which the tests and verification suites use for
    invariant checks.
    """

    def __init__(self, secret: Sequence[int], k: int, mode: str = BLACK,
                 *, inspectable: bool = False):
        if mode not in MODES:
            raise InvalidInput(f"unknown mode {mode!r}")
        if k < 1:
            raise InvalidInput("k must be positive")
        self.n = len(secret)
        self.k = k
        self.mode = mode
        self._secret = validate_code(secret, self.n, k).astype(np.int64)
        self._secret_counts = np.bincount(self._secret, minlength=k + 1)
        self._inspectable = inspectable
        self.transcript = Transcript(k)
        self.queries = 0

    def query(self, x: Sequence[int]) -> Answer:
        arr = validate_code(x, self.n, self.k)
        black = int(np.count_nonzero(arr == self._secret))
        if self.mode == BW:
            common = int(np.minimum(self._secret_counts,
                                    np.bincount(arr, minlength=self.k + 1)).sum())
            answer = Answer(black, common - black)
        else:
            answer = Answer(black)
        self.transcript.append(arr, answer)
        self.queries += 1
        return answer

    def inspect_secret(self) -> Code:
        if not self._inspectable:
            raise PermissionError("secret inspection requires inspectable=True")
        return tuple(int(c) for c in self._secret)

    def __repr__(self) -> str:
        return f"Oracle(n={self.n}, k={self.k}, mode={self.mode!r}, queries={self.queries})"


def random_secret(n: int, k: int, rng: np.random.Generator) -> Code:
    return tuple(int(c) for c in rng.integers(1, k + 1, size=n))


def answering(oracle) -> "callable":
    """Wrap ``oracle.query`` so a full match raises :class:`CodeFound`."""
    n = oracle.n

    def ask(x) -> Answer:
        answer = oracle.query(x)
        if answer.black == n:
            raise CodeFound(tuple(int(c) for c in x))
        return answer

    return ask
