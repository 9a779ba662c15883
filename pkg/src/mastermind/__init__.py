"""Query strategies for black-peg and black/white-peg Mastermind.

The package bundles a Codemaker simulator, the coin-weighing based
adaptive codebreaker, the colour-query strategy for the black/white game,
the random-guessing baseline, brute-force checkers and a benchmark CLI.
"""

from mastermind.engine import (
    Answer,
    InvalidInput,
    Oracle,
    Transcript,
    black_answer,
    white_answer,
)

__all__ = [
    "Answer",
    "InvalidInput",
    "Oracle",
    "Transcript",
    "black_answer",
    "white_answer",
]

__version__ = "0.1.0"
