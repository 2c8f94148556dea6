"""Command-line entry point: ``ghzgame <subcommand> ...``.

Exit codes: 0 success or verified, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import classical, harness, noise, quantum
from .game import BitString, classical_bound

LEMMA_BRUTE_FORCE_LIMIT = 19


def _emit(text: str, out: str | None = None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _csv(rows: list[dict]) -> str:
    return noise.rows_to_csv(rows)


def cmd_bound(args) -> int:
    b = classical_bound(args.n)
    if args.json:
        _emit(_json({"n": args.n, "bound": str(b), "decimal": b.decimal()}))
    else:
        _emit(f"{b}  = {b.decimal()}")
    return 0


def cmd_quantum(args) -> int:
    if args.input is not None:
        x = BitString.parse(args.input)
        if len(x) != args.n:
            raise ValueError(f"--input has {len(x)} bits but --n is {args.n}")
        ref = quantum.analytic_distribution(x)
        doc = {"input": str(x), "analytic": {str(y): p for y, p in sorted(ref.items())}}
        ok = True
        if args.oracle:
            dist = quantum.oracle_answer_distribution(x)
            doc["oracle"] = {str(y): p for y, p in sorted(dist.items())}
            keys = set(ref) | set(dist)
            ok = all(abs(ref.get(y, 0.0) - dist.get(y, 0.0)) <= quantum.ATOL for y in keys)
            doc["oracle_matches"] = ok
        if args.json:
            _emit(_json(doc))
        else:
            _emit(f"question {x}: answers uniform over weight parity {quantum.target_parity(x)}")
            for y, p in sorted(ref.items()):
                extra = f"  oracle {doc['oracle'].get(str(y), 0.0):.12f}" if args.oracle else ""
                _emit(f"  {y}  {p:.12f}{extra}")
            if args.oracle:
                _emit(f"oracle matches: {ok}")
        return 0 if ok else 1

    if args.oracle:
        report = harness.exhaustive_verify(args.n, "quantum_perfect", oracle=True, seed=args.seed)
        if args.json:
            _emit(_json(report.to_json()))
        else:
            _emit(f"n={args.n}: {len(report.won_inputs)}/{len(report.per_input)} questions always won; "
                  f"state-vector cross-check passed")
        return 0 if report.all_won else 1

    stats = harness.run_match(
        harness.MatchConfig(args.n, "quantum_perfect", trials=args.trials, seed=args.seed)
    )
    if args.json:
        _emit(stats.to_json())
    else:
        _emit(f"n={args.n}: won {stats.wins}/{stats.trials}")
    return 0 if stats.wins == stats.trials else 1


def cmd_enumerate(args) -> int:
    best, optimal = classical.best_deterministic(args.n)
    rows = []
    for cls, prop in classical.class_table(args.n):
        rows.append({
            "k": cls.k,
            "flip_parity": cls.flip_parity,
            "strategies": classical.class_size(args.n, cls),
            "wins": classical.winning_count(args.n, cls),
            "proportion": str(prop),
            "decimal": prop.decimal(),
            "optimal": cls in optimal,
        })
    if args.json:
        _emit(_json({"n": args.n, "bound": str(best), "classes": rows}))
    elif args.csv:
        _emit(_csv(rows))
    else:
        _emit(f"{'k':>3} {'flip':>4} {'strategies':>12} {'wins':>8}  proportion")
        for r in rows:
            mark = "  *" if r["optimal"] else ""
            _emit(f"{r['k']:>3} {r['flip_parity']:>4} {r['strategies']:>12} {r['wins']:>8}  "
                  f"{r['proportion']} ({r['decimal']}){mark}")
        _emit(f"optimum {best} = {best.decimal()}  (* marks optimal classes)")
    return 0


def cmd_table1(args) -> int:
    s = classical.table1_strategy(args.n)
    prop = classical.proportion(s)
    bound = classical_bound(args.n)
    doc = {"n": args.n, "strategy": list(s.codes), "proportion": str(prop), "bound": str(bound)}
    ok = prop == bound
    if args.verify:
        report = harness.exhaustive_verify(args.n, "table1")
        exhaustive = Fraction(len(report.won_inputs), len(report.per_input))
        doc["exhaustive_proportion"] = str(exhaustive)
        ok = ok and exhaustive == prop
    doc["verified"] = ok
    if args.json:
        _emit(_json(doc))
    else:
        _emit(f"strategy: {s}")
        _emit(f"proportion {prop} = {prop.decimal()}; bound {bound}")
        if args.verify:
            _emit(f"exhaustive check: {doc['exhaustive_proportion']} -> {'ok' if ok else 'MISMATCH'}")
    return 0 if ok else 1


def cmd_conjecture(args) -> int:
    report = classical.conjecture_check(args.n, method=args.method)
    if args.json:
        _emit(_json(report.to_json()))
    else:
        _emit(f"n={args.n}: uniform mixture over {report.optimal_count} optimal strategies, "
              f"bound {report.bound} = {report.bound.decimal()}")
        for x, p in report.per_input.items():
            flag = "" if p == report.bound else "  <-- differs"
            _emit(f"  {x}  {p}{flag}")
        verdict = "every question at the bound" if report.all_equal_bound else (
            f"COUNTEREXAMPLES: {', '.join(map(str, report.counterexamples))}")
        _emit(verdict)
    return 0 if report.all_equal_bound else 1


def cmd_noise(args) -> int:
    if args.threshold:
        rows = noise.threshold_rows(range(3, args.n_max + 1))
        text = _json(rows) if args.json else _csv(rows)
    elif args.detector:
        if args.q is None:
            raise ValueError("--detector needs --q")
        p = noise.detector_to_flip(args.q)
        n_min = noise.min_players_for_advantage(p, args.n_max)
        row = {"q": args.q, "p": p, "n_max": args.n_max, "min_players": n_min}
        text = _json(row) if args.json else _csv([row])
    else:
        if args.n is None or args.p is None:
            raise ValueError("noise needs --n and --p, --threshold, or --detector")
        row = {
            "n": args.n,
            "p": args.p,
            "p_n": noise.noisy_success(args.n, args.p),
            "bound": float(classical_bound(args.n)),
            "e_n": noise.threshold(args.n),
            "beats_classical": noise.beats_classical(args.n, args.p),
        }
        text = _json(row) if args.json else _csv([row])
    _emit(text, args.out)
    return 0


def cmd_match(args) -> int:
    model = None
    if args.strategy == "quantum_noisy":
        if (args.p is None) == (args.q is None):
            raise ValueError("quantum_noisy needs exactly one of --p or --q")
        model = noise.NoiseModel.bit_flip(args.p) if args.p is not None else noise.NoiseModel.detector(args.q)
    elif args.p is not None or args.q is not None:
        raise ValueError("--p/--q only apply to quantum_noisy")
    strategy = classical.DeterministicStrategy.parse(args.code) if args.code else None
    mode = "fixed" if args.input else ("exhaustive" if args.exhaustive else "uniform_promise")
    cfg = harness.MatchConfig(
        args.n, args.strategy, trials=args.trials, seed=args.seed, noise=model,
        input_mode=mode, fixed_input=args.input, strategy=strategy,
        record_no_fire=model is not None and model.kind == "detector",
    )
    stats = harness.run_match(cfg, workers=args.workers)
    if args.json:
        _emit(stats.to_json())
    else:
        _emit(f"{args.strategy} n={args.n}: {stats.wins}/{stats.trials} = {stats.win_rate:.6f} "
              f"(95% CI {stats.ci_low:.6f}..{stats.ci_high:.6f})")
    return 0


def lemma_sweeps(n_max: int) -> dict:
    """Closed forms against direct sums (binomial mod 4) and against the set
    expansion and brute-force question counts (winning counts)."""
    mod4_failures = [
        (n, a) for n in range(0, n_max + 1) for a in range(4)
        if classical.binomial_sum_mod4(n, a) != classical.binomial_sum_mod4_direct(n, a)
    ]
    count_failures = []
    for n in range(3, n_max + 1):
        brute = classical.set_size_brute_force(n) if n <= LEMMA_BRUTE_FORCE_LIMIT else None
        for k in range(n + 1):
            closed = classical.matched_count(n, k)
            expansion = classical.set_size(n, k, 0, 0) + classical.set_size(n, k, 1, 1)
            if closed != expansion or (brute is not None and closed != brute[k, 0, 0] + brute[k, 1, 1]):
                count_failures.append((n, k))
    return {"binomial_mod4_failures": mod4_failures, "winning_count_failures": count_failures}


def cmd_lemmas(args) -> int:
    result = lemma_sweeps(args.n_max)
    ok = not result["binomial_mod4_failures"] and not result["winning_count_failures"]
    if args.json:
        _emit(_json({**result, "n_max": args.n_max, "passed": ok}))
    else:
        _emit(f"binomial sums mod 4, n=0..{args.n_max}: "
              f"{'ok' if not result['binomial_mod4_failures'] else result['binomial_mod4_failures']}")
        _emit(f"winning-count closed form, n=3..{args.n_max} "
              f"(brute force to {min(args.n_max, LEMMA_BRUTE_FORCE_LIMIT)}): "
              f"{'ok' if not result['winning_count_failures'] else result['winning_count_failures']}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghzgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="emit one JSON document")
        return p

    p = add("bound", cmd_bound, "exact classical bound")
    p.add_argument("--n", type=int, required=True)

    p = add("quantum", cmd_quantum, "run or cross-check the entangled strategy")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", help="question bits, player 1 first")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", action="store_true", help="cross-check with the state-vector simulation")

    p = add("enumerate", cmd_enumerate, "per-class proportion table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--csv", action="store_true")

    p = add("table1", cmd_table1, "simple optimal strategy for n players")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="also check by exhaustive play")

    p = add("conjecture", cmd_conjecture, "mixture of all optimal strategies, per question")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("dp", "enumerate"), default="dp")

    p = add("noise", cmd_noise, "noisy success, thresholds, detector efficiency")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--threshold", action="store_true")
    p.add_argument("--detector", action="store_true")
    p.add_argument("--q", type=float)
    p.add_argument("--n-max", type=int, default=400)
    p.add_argument("--csv", action="store_true", help="CSV output (the default)")
    p.add_argument("--out", help="write to FILE instead of stdout")

    p = add("match", cmd_match, "Monte Carlo match through the referee")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=harness.STRATEGY_KINDS, required=True)
    p.add_argument("--p", type=float, help="bit-flip reliability (quantum_noisy)")
    p.add_argument("--q", type=float, help="detector efficiency (quantum_noisy)")
    p.add_argument("--code", help="deterministic strategy codes, e.g. 11,11,11")
    p.add_argument("--input", help="fixed question")
    p.add_argument("--exhaustive", action="store_true", help="cycle through every question")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)

    p = add("lemmas", cmd_lemmas, "closed-form counting identity sweeps")
    p.add_argument("--n-max", type=int, default=64)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
