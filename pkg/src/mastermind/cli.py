"""Command-line interface: play, bench, verify and interactive."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Callable, Optional, Sequence

from mastermind.black import StrategyConfig
from mastermind.engine import (
    BLACK,
    BW,
    Answer,
    InconsistentAnswers,
    InvalidInput,
    black_answer,
    validate_code,
    white_answer,
)
from mastermind.harness import (
    ADAPTIVE,
    BW_COMPOSITE,
    K_RULES,
    STRATEGIES,
    SweepConfig,
    make_oracle,
    records_to_csv,
    resolve_k,
    run_strategy,
    run_sweep,
    write_csv,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _fmt(code) -> str:
    return " ".join(str(c) for c in code)


def _fmt_answer(a: Answer) -> str:
    return f"black={a.black}" if a.white is None else f"black={a.black} white={a.white}"


class HumanOracle:
    """Oracle whose answers are typed by a person holding the secret."""

    def __init__(self, n: int, k: int, mode: str = BLACK,
                 read: Callable[[str], str] = input, write: Callable[[str], None] = print):
        self.n, self.k, self.mode = n, k, mode
        self.read, self.write = read, write
        self.queries = 0
        self.history: list[tuple[tuple[int, ...], Answer]] = []

    def consistent_with(self, code) -> bool:
        """True when ``code`` reproduces every answer given so far."""
        for guess, answer in self.history:
            if black_answer(code, guess) != answer.black:
                return False
            if answer.white is not None and white_answer(code, guess) != answer.white:
                return False
        return True

    def _parse(self, line: str) -> Optional[Answer]:
        parts = line.replace(",", " ").split()
        want = 1 if self.mode == BLACK else 2
        if len(parts) != want:
            return None
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            return None
        if any(v < 0 for v in vals) or sum(vals) > self.n:
            return None
        if self.mode == BW and vals[0] == self.n - 1 and vals[1] == 1:
            return None  # one misplaced peg cannot be the only mismatch
        return Answer(vals[0]) if self.mode == BLACK else Answer(vals[0], vals[1])

    def query(self, x) -> Answer:
        guess = tuple(int(c) for c in validate_code(x, self.n, self.k))
        self.write(f"guess {self.queries + 1}: {_fmt(guess)}")
        prompt = "black? " if self.mode == BLACK else "black white? "
        while True:
            answer = self._parse(self.read(prompt))
            if answer is not None:
                break
            limit = f"an integer in 0..{self.n}" if self.mode == BLACK else \
                f"two non-negative integers summing to at most {self.n}"
            self.write(f"please enter {limit}")
        self.queries += 1
        self.history.append((guess, answer))
        return answer


def _strategy_config(args) -> StrategyConfig:
    return StrategyConfig(c_f=args.cf, endgame_threshold=args.endgame_threshold)


def cmd_play(n: int, k: int, strategy: str, seed: int, mode: Optional[str] = None,
             config: Optional[StrategyConfig] = None, quiet: bool = False,
             write: Callable[[str], None] = print) -> int:
    oracle = make_oracle(n, k, strategy, seed, mode, inspectable=True)
    code = run_strategy(oracle, strategy, seed, config)
    if not quiet:
        for i, (guess, answer) in enumerate(oracle.transcript, 1):
            write(f"{i}: {_fmt(guess)} -> {_fmt_answer(answer)}")
    secret = oracle.inspect_secret()
    ok = tuple(code) == secret
    write(f"code: {_fmt(code)}")
    write(f"secret: {_fmt(secret)}")
    write(f"queries: {oracle.queries}")
    write("success" if ok else "FAILURE")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bench(config: SweepConfig, jobs: int = 1,
              write: Optional[Callable[[str], None]] = None) -> int:
    records = run_sweep(config, jobs)
    if write is None:
        # keep stdout pure CSV when no output file is given
        def write(line: str) -> None:
            print(line, file=sys.stderr if not config.out else sys.stdout)
    if config.out:
        write_csv(records, config.out, config.timing)
    else:
        sys.stdout.write(records_to_csv(records, config.timing))
    for n in dict.fromkeys(r.n for r in records):
        for s in config.strategies:
            qs = [r.queries for r in records if r.n == n and r.strategy == s]
            write(f"# n={n} {s}: mean queries {sum(qs) / len(qs):.1f} over {len(qs)} games")
    return EXIT_OK if all(r.success for r in records) else EXIT_FAIL


def cmd_verify(suite: str, write: Callable[[str], None] = print) -> int:
    from mastermind.suites import SUITES

    results = [check() for check in SUITES[suite]]
    for r in results:
        write(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_interactive(n: int, k: int, mode: str = BLACK, config: Optional[StrategyConfig] = None,
                    read: Callable[[str], str] = input,
                    write: Callable[[str], None] = print) -> int:
    oracle = HumanOracle(n, k, mode, read, write)
    write(f"think of a code of length {n} over colours 1..{k}")
    strategy = BW_COMPOSITE if mode == BW else ADAPTIVE
    try:
        code = run_strategy(oracle, strategy, (config or StrategyConfig()).seed or 0, config)
    except InconsistentAnswers:
        write("answers inconsistent with any code")
        return EXIT_FAIL
    except EOFError:
        write("aborted")
        return EXIT_FAIL
    if not oracle.consistent_with(code):
        write("answers inconsistent with any code")
        return EXIT_FAIL
    write(f"your code is {_fmt(code)} ({oracle.queries} queries)")
    return EXIT_OK


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {v}")
    return v


def _add_strategy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cf", type=float, default=8.0, help="weighings constant c_f")
    p.add_argument("--endgame-threshold", type=int, default=8,
                   help="phase size at which per-position probing takes over")


def _add_size_flags(p: argparse.ArgumentParser, many: bool) -> None:
    if many:
        p.add_argument("--n", type=_positive, nargs="+", required=True, help="code lengths")
    else:
        p.add_argument("--n", type=_positive, required=True, help="code length")
    p.add_argument("--k", type=_positive, help="number of colours (implies --k-rule fixed)")
    p.add_argument("--k-rule", choices=K_RULES, default=None, help="k as a function of n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mastermind", description="Mastermind query strategies")
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="simulate one game")
    _add_size_flags(play, many=False)
    play.add_argument("--strategy", choices=STRATEGIES, default=ADAPTIVE)
    play.add_argument("--seed", type=int, default=0)
    play.add_argument("--mode", choices=(BLACK, BW), default=None,
                      help="oracle answers (default: bw for bw-composite, else black)")
    play.add_argument("--quiet", action="store_true", help="omit the transcript")
    _add_strategy_flags(play)

    bench = sub.add_parser("bench", help="seeded benchmark sweep to CSV")
    _add_size_flags(bench, many=True)
    bench.add_argument("--strategy", action="append", default=None,
                       help="strategy to run; repeat or comma-separate for several")
    bench.add_argument("--trials", type=_positive, default=1)
    bench.add_argument("--seed", type=int, default=0, help="base seed")
    bench.add_argument("--out", default=None, help="CSV path (default: stdout)")
    bench.add_argument("--timing", action="store_true",
                       help="record wall_time_ms (breaks byte-identical output)")
    bench.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    _add_strategy_flags(bench)

    ver = sub.add_parser("verify", help="run a property suite")
    ver.add_argument("suite", choices=("oracle-equivalence", "coinweigh", "invariants",
                                       "nonadaptive", "scaling"))

    inter = sub.add_parser("interactive", help="you hold the secret, the tool guesses")
    _add_size_flags(inter, many=False)
    inter.add_argument("--mode", choices=(BLACK, BW), default=BLACK)
    inter.add_argument("--seed", type=int, default=0)
    _add_strategy_flags(inter)
    return parser


def _k_of(parser, args, n: int) -> tuple[str, Optional[int]]:
    if args.k is not None and args.k_rule not in (None, "fixed"):
        parser.error("--k conflicts with --k-rule " + args.k_rule)
    if args.k is not None:
        return "fixed", args.k
    rule = args.k_rule or "n"
    if rule == "fixed":
        parser.error("--k-rule fixed needs --k")
    return rule, None


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.suite)
        config = _strategy_config(args)
        if args.command == "bench":
            rule, fixed = _k_of(parser, args, args.n[0])
            names = [s for item in (args.strategy or [ADAPTIVE]) for s in item.split(",") if s]
            if not names:
                parser.error("empty strategy list")
            bad = [s for s in names if s not in STRATEGIES]
            if bad:
                parser.error(f"unknown strategy {bad[0]!r}")
            sweep = SweepConfig(sizes=args.n, k_rule=rule, trials=args.trials, base_seed=args.seed,
                                strategies=names, out=args.out, fixed_k=fixed, timing=args.timing,
                                strategy_config=config)
            try:
                return cmd_bench(sweep, args.jobs)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_FAIL
        rule, fixed = _k_of(parser, args, args.n)
        k = resolve_k(args.n, rule, fixed)
        if args.command == "play":
            return cmd_play(args.n, k, args.strategy, args.seed, args.mode, config, args.quiet)
        return cmd_interactive(args.n, k, args.mode, replace(config, seed=args.seed))
    except InvalidInput as exc:
        parser.error(str(exc))
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
