"""Command-line interface.

Exit status: 0 success, 1 a counterexample/mismatch record was emitted,
2 usage or input error, 3 internal invariant failure.

Every option can also come from an environment variable REPUNIT_<OPTION>
(upper case, dashes as underscores); command-line flags win over the
environment, which wins over the defaults shown in --help.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Callable

from . import core, screening, structure, valuation
from .numkernel import DEFAULT_ROUNDS, Effort
from .records import SCHEMA_VERSION, RecordWriter
from .scanning import CheckpointError, hits_up_to, run_scan

ENV_PREFIX = "REPUNIT_"
WITNESS_SCHEDULE_ID = "first-13-primes/strong-lucas-v1"
# not echoed into output headers: they change how a run executes, not what it finds
EXECUTION_ONLY = {"output", "csv", "checkpoint", "shards", "stop_after", "progress"}

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _bool(text: str) -> bool:
    return str(text).lower() in ("1", "true", "yes", "on")


def _effort(text: str) -> str:
    return Effort(text).value


class _Options:
    """Per-parser option defaults, resolved after parsing."""

    def __init__(self):
        self.defaults: dict[str, tuple[object, Callable]] = {}

    def add(self, parser, flag, type=int, default=None, help="", **kw):
        dest = flag.lstrip("-").replace("-", "_")
        self.defaults[dest] = (default, type)
        if type is _bool:
            parser.add_argument(flag, dest=dest, action="store_const", const=True, default=None, help=help)
        else:
            shown = f"{help} (default: {default})" if default is not None else help
            parser.add_argument(flag, dest=dest, type=type, default=None, help=shown, **kw)


def _common(parser, opts: _Options):
    opts.add(parser, "--output", str, None, "JSON-lines output file (stdout if omitted)")
    opts.add(parser, "--csv", str, None, "also write a CSV export here")
    opts.add(parser, "--full", _bool, False, "print every digit of large values")
    opts.add(parser, "--truncate-digits", int, core.DEFAULT_TRUNCATE_DIGITS, "abbreviate values longer than this")
    opts.add(parser, "--effort", _effort, Effort.DEFAULT.value, "effort level: low, default, high")
    opts.add(parser, "--oracle-digits", int, valuation.ORACLE_DIGITS, "largest value (in digits) an oracle may build")


def _scan_common(parser, opts: _Options):
    opts.add(parser, "--shards", int, 1, "worker processes")
    opts.add(parser, "--checkpoint", str, None, "checkpoint file to resume from and update")
    opts.add(parser, "--stop-after", int, None, "process at most this many new indices, then stop")
    opts.add(parser, "--progress", _bool, False, "print a counter to stderr")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, _Options]]:
    parser = argparse.ArgumentParser(prog="repunit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    table: dict[str, _Options] = {}

    def command(name, help):
        p = sub.add_parser(name, help=help)
        table[name] = opts = _Options()
        _common(p, opts)
        return p, opts

    p, o = command("eval", "evaluate R_n, E_{n,k}, R_p+ or f_n(a)")
    p.add_argument("family", choices=["R", "E", "Rplus", "F"])
    p.add_argument("indices", type=int, nargs="+")
    o.add(p, "--base", int, 10, "base a of f_n(a)")

    p, o = command("gcd-check", "gcd identities for repunits, initial numbers and prime powers")
    o.add(p, "--family", str, "repunit", "repunit, initial or prime-power", choices=["repunit", "initial", "prime-power"])
    o.add(p, "--max", int, None, "largest index (repunit: 200, initial: 40, prime-power: 3)")
    o.add(p, "--max-k", int, 5, "largest k for initial numbers")
    o.add(p, "--primes", str, "7,11,13", "comma-separated primes for prime-power")

    p, o = command("product-div", "whether R_a R_b divides R_ab")
    o.add(p, "--max", int, 60, "check all 1 <= a, b <= max")
    o.add(p, "--a", int, None, "single pair: a")
    o.add(p, "--b", int, None, "single pair: b")

    p, o = command("valuation", "p-adic valuation of repunits")
    o.add(p, "--prime", int, 3, "prime p (3 and 11 carry predictions)")
    o.add(p, "--max", int, 2000, "check all indices up to this")
    o.add(p, "--index", int, None, "single index")

    p, o = command("lemma-check", "prime-power divisor lemmas")
    p.add_argument("lemma", type=int, choices=[2, 4, 5])
    o.add(p, "--max-n", int, 4, "lemma 2: largest n")
    o.add(p, "--p", int, None, "lemmas 4/5: p (default: the pairs (7,239), (41,83), (2,11))")
    o.add(p, "--q", int, None, "lemmas 4/5: q")
    o.add(p, "--r-bound", int, 50, "lemma 4: r ranges below min(q, r-bound)")
    o.add(p, "--n-bound", int, 3, "lemmas 4/5: largest n")

    p, o = command("conjecture-check", "compare the conjectured gcd(R_ab, R_a R_b) with Euclid")
    o.add(p, "--max", int, 40, "check all 1 <= a, b <= max")

    p, o = command("screen", "compositeness screen for E_{n,k}, n > 1, k > 0")
    o.add(p, "--n", int, None, "single n")
    o.add(p, "--k", int, None, "single k")
    o.add(p, "--max-n", int, 8, "largest n")
    o.add(p, "--max-k", int, 8, "largest k")
    o.add(p, "--confirm", _bool, False, "confirm rule verdicts by bounded factoring")

    p = sub.add_parser("scan", help="bounded, resumable searches")
    scans = p.add_subparsers(dest="scan", required=True)

    def scan(name, help):
        sp = scans.add_parser(name, help=help)
        table[f"scan {name}"] = so = _Options()
        _common(sp, so)
        _scan_common(sp, so)
        return sp, so

    sp, so = scan("primes", "R_p for prime p")
    so.add(sp, "--max-index", int, 400, "largest index")
    so.add(sp, "--x-bound", int, screening.DEFAULT_SCAN_X_BOUND, "factor sieve 1 + 2px, x up to this")
    so.add(sp, "--rounds", int, DEFAULT_ROUNDS, "strong-pseudoprime rounds")
    sp, so = scan("squarefree", "primes q with q^2 | R_p")
    so.add(sp, "--max-p", int, 96, "largest p")
    so.add(sp, "--q-bound", int, screening.DEFAULT_Q_BOUND, "largest q")
    sp, so = scan("divisors", "prime divisors 1 + 2px of R_p")
    so.add(sp, "--max-p", int, 100, "largest p")
    so.add(sp, "--x-bound", int, screening.DEFAULT_SIEVE_X_BOUND, "largest x")
    sp, so = scan("epp", "E_{p-1,p-1} = R_(p^2)/R_p")
    so.add(sp, "--max-p", int, 61, "largest p")
    sp, so = scan("fermat", "generalized Fermat numbers a^(2^n) + 1")
    so.add(sp, "--max-n", int, 10, "largest n")
    so.add(sp, "--base", int, 10, "even base a > 2")
    so.add(sp, "--rounds", int, DEFAULT_ROUNDS, "strong-pseudoprime rounds")
    sp, so = scan("sophie", "2p + 1 divides R_p or R_p+")
    so.add(sp, "--max-p", int, 1000, "largest p")
    return parser, table


def resolve(args: argparse.Namespace, opts: _Options, env: dict[str, str]) -> dict:
    """Flags > REPUNIT_* environment > defaults."""
    config = {}
    for dest, (default, conv) in opts.defaults.items():
        value = getattr(args, dest, None)
        if value is None:
            raw = env.get(ENV_PREFIX + dest.upper())
            if raw is not None:
                try:
                    value = conv(raw)
                except ValueError as exc:
                    raise UsageError(f"{ENV_PREFIX}{dest.upper()}={raw!r}: {exc}") from None
        config[dest] = default if value is None else value
    return config


def _need(cond: bool, message: str):
    if not cond:
        raise UsageError(message)


class Runner:
    def __init__(self, config: dict, writer: RecordWriter):
        self.config = config
        self.writer = writer
        self.limit = None if config["full"] else config["truncate_digits"]

    def render(self, value: int) -> str:
        return core.render_value(value, self.limit)

    def emit(self, kind: str, payload: dict):
        self.writer.emit(kind, payload)


def _agree(flag: bool) -> str:
    return "agree" if flag else "mismatch"


def cmd_eval(r: Runner, args):
    fam, idx = args.family, args.indices
    arity = {"R": 1, "E": 2, "Rplus": 1, "F": 1}[fam]
    _need(len(idx) == arity, f"eval {fam} takes {arity} index argument(s), got {len(idx)}")
    if fam == "R":
        label, value = f"R_{idx[0]}", core.repunit_value(idx[0])
    elif fam == "E":
        label, value = f"E_{idx[0]},{idx[1]}", core.initial_value(tuple(idx))
    elif fam == "Rplus":
        label, value = f"R+_{idx[0]}", core.repunit_plus_value(idx[0])
    else:
        base = r.config["base"]
        _need(base > 2 and base % 2 == 0, f"--base must be even and > 2, got {base}")
        label, value = f"f_{idx[0]}({base})", core.generalized_fermat_value(idx[0], base)
    r.emit("evaluation", core.describe(label, value, r.limit))


def cmd_gcd_check(r: Runner, args):
    c = r.config
    fam = c["family"]
    bound = c["oracle_digits"]
    if fam == "repunit":
        top = c["max"] or 200
        _need(top >= 1, f"--max must be >= 1, got {top}")
        for a in range(1, top + 1):
            for b in range(1, top + 1):
                rep = structure.gcd_report(a, b, bound)
                r.emit("gcd-report", {
                    "family": fam, "a": a, "b": b, "fast_index": math.gcd(a, b),
                    "fast_result": r.render(rep.fast_result), "oracle_result": r.render(rep.oracle_result),
                    "agreement": rep.agreement, "verdict": _agree(rep.agreement),
                })
    elif fam == "initial":
        top = c["max"] or 40
        _need(top >= 2, f"--max must be >= 2, got {top}")
        _need(c["max_k"] >= 0, f"--max-k must be >= 0, got {c['max_k']}")
        for k in range(c["max_k"] + 1):
            for n in range(2, top + 1):
                for m in range(1, n):
                    fast = structure.gcd_initial(n, m, k)
                    oracle = structure.gcd_initial_oracle(n, m, k, bound)
                    r.emit("gcd-report", {
                        "family": fam, "n": n, "m": m, "k": k,
                        "fast_index": [math.gcd(n + 1, m + 1) - 1, k],
                        "fast_result": r.render(fast), "oracle_result": r.render(oracle),
                        "coprime": math.gcd(n + 1, m + 1) == 1,
                        "agreement": fast == oracle, "verdict": _agree(fast == oracle),
                    })
    else:
        top = c["max"] or 3
        try:
            primes = [int(x) for x in c["primes"].split(",")]
        except ValueError:
            raise UsageError(f"--primes must be comma-separated integers, got {c['primes']!r}") from None
        for p in primes:
            for k in range(1, top + 1):
                for t in range(1, k + 1):
                    for s in range(1, t + 1):
                        rep = structure.prime_power_gcd_check(p, k, t, s, bound)
                        r.emit("gcd-report", {
                            "family": fam, "p": p, "k": k, "t": t, "s": s,
                            "fast_result": "1", "oracle_result": r.render(rep.oracle_result),
                            "agreement": rep.agreement, "verdict": _agree(rep.agreement),
                        })


def _product_payload(r: Runner, a: int, b: int) -> dict:
    res = structure.product_divisibility(a, b, r.config["oracle_digits"])
    if isinstance(res, structure.DivisorWitness):
        return {"a": a, "b": b, "verdict": "witness", "subject": res.subject,
                "divisor": r.render(res.divisor), "quotient": r.render(res.quotient)}
    return {
        "a": a, "b": b, "verdict": "refusal" if res.bounds_hold else "mismatch",
        "gcd": r.render(res.gcd_value), "lower": r.render(res.lower), "upper": r.render(res.upper),
        "bounds_hold": res.bounds_hold, "conjectured": r.render(res.conjectured),
        "conjecture_formula": res.conjecture_formula, "conjecture_matches": res.conjecture_matches,
    }


def cmd_product_div(r: Runner, args):
    c = r.config
    if c["a"] is not None or c["b"] is not None:
        _need(c["a"] is not None and c["b"] is not None, "--a and --b go together")
        _need(c["a"] >= 1 and c["b"] >= 1, "--a and --b must be >= 1")
        pairs = [(c["a"], c["b"])]
    else:
        _need(c["max"] >= 1, f"--max must be >= 1, got {c['max']}")
        pairs = [(a, b) for a in range(1, c["max"] + 1) for b in range(1, c["max"] + 1)]
    for a, b in pairs:
        r.emit("divisor-witness", _product_payload(r, a, b))


def _valuation_payload(rep: valuation.ValuationReport) -> dict:
    return {"index": rep.index, "prime": rep.prime, "predicted": rep.predicted, "oracle": rep.oracle,
            "lemma": rep.lemma, "verdict": _agree(rep.agrees)}


def cmd_valuation(r: Runner, args):
    c = r.config
    p = c["prime"]
    if c["index"] is not None:
        _need(c["index"] >= 1, f"--index must be >= 1, got {c['index']}")
        indices = [c["index"]]
    else:
        _need(c["max"] >= 1, f"--max must be >= 1, got {c['max']}")
        indices = range(1, c["max"] + 1)
    for a in indices:
        r.emit("valuation", _valuation_payload(valuation.valuation_any(a, p)))


DEFAULT_LEMMA_PAIRS = ((7, 239), (41, 83), (2, 11))


def cmd_lemma_check(r: Runner, args):
    c = r.config
    if args.lemma == 2:
        _need(c["max_n"] >= 0, f"--max-n must be >= 0, got {c['max_n']}")
        for n in range(c["max_n"] + 1):
            aux = valuation.auxiliary_rn_check(n)
            r.emit("valuation", {"lemma": "lemma2", "n": n, "valuation": aux.valuation,
                                 "expected": aux.expected, "verdict": _agree(aux.holds)})
        return
    if c["p"] is not None or c["q"] is not None:
        _need(c["p"] is not None and c["q"] is not None, "--p and --q go together")
        pairs = [(c["p"], c["q"])]
    else:
        pairs = DEFAULT_LEMMA_PAIRS
    _need(c["n_bound"] >= 0, f"--n-bound must be >= 0, got {c['n_bound']}")
    for p, q in pairs:
        if args.lemma == 4:
            verdicts = valuation.lemma4_check(p, q, c["r_bound"], c["n_bound"])
        else:
            verdicts = [valuation.lemma5_check(p, q, n) for n in range(c["n_bound"] + 1)]
        for v in verdicts:
            r.emit("valuation", {"lemma": v.lemma, "p": v.p, "q": v.q, "index": v.index,
                                 "modulus_power": v.modulus_power,
                                 "verdict": "agree" if v.holds else "counterexample"})


def cmd_conjecture_check(r: Runner, args):
    top = r.config["max"]
    _need(top >= 1, f"--max must be >= 1, got {top}")
    for a in range(1, top + 1):
        for b in range(1, top + 1):
            rec = valuation.conjecture_check(a, b, r.config["oracle_digits"])
            r.emit("conjecture-record", {
                "a": a, "b": b, "d": rec.d, "L": rec.L, "S": rec.S, "c": rec.c, "formula": rec.formula,
                "predicted": r.render(rec.predicted), "actual": r.render(rec.actual), "verdict": rec.verdict,
            })


def cmd_screen(r: Runner, args):
    c = r.config
    if c["n"] is not None or c["k"] is not None:
        _need(c["n"] is not None and c["k"] is not None, "--n and --k go together")
        _need(c["n"] > 1 and c["k"] > 0, f"screen needs n > 1 and k > 0, got n={c['n']}, k={c['k']}")
        pairs = [(c["n"], c["k"])]
    else:
        _need(c["max_n"] >= 2 and c["max_k"] >= 1, "--max-n must be >= 2 and --max-k >= 1")
        pairs = [(n, k) for n in range(2, c["max_n"] + 1) for k in range(1, c["max_k"] + 1)]
    for n, k in pairs:
        v = screening.screen_initial(n, k, c["effort"])
        payload = {"n": n, "k": k}
        payload.update(v.to_payload())
        if c["confirm"] and v.verdict == screening.COMPOSITE_BY_RULE:
            ok = screening.confirm_composite(core.initial_value((n, k)), c["effort"])
            payload["confirmed"] = ok
            if not ok:
                payload["verdict"] = "mismatch"
        r.emit("screen-verdict", payload)


SCAN_BOUNDS = {
    "primes": ("max_index", 2),
    "squarefree": ("max_p", 2),
    "divisors": ("max_p", 5),
    "epp": ("max_p", 2),
    "fermat": ("max_n", 0),
    "sophie": ("max_p", 7),
}


def scan_params(which: str, c: dict) -> dict:
    if which == "primes":
        return {"x_bound": c["x_bound"], "rounds": c["rounds"]}
    if which == "squarefree":
        return {"q_bound": c["q_bound"]}
    if which == "divisors":
        return {"x_bound": c["x_bound"]}
    if which == "epp":
        return {"effort": c["effort"]}
    if which == "fermat":
        return {"base": c["base"], "rounds": c["rounds"]}
    return {}


def cmd_scan(r: Runner, args):
    c = r.config
    which = args.scan
    key, least = SCAN_BOUNDS[which]
    bound = c[key]
    flag = "--" + key.replace("_", "-")
    _need(bound >= least, f"{flag} must be >= {least}, got {bound}")
    _need(c["shards"] >= 1, f"--shards must be >= 1, got {c['shards']}")
    if which == "fermat":
        _need(c["base"] > 2 and c["base"] % 2 == 0, f"--base must be even and > 2, got {c['base']}")
    if c.get("rounds") is not None:
        _need(c["rounds"] >= 1, f"--rounds must be >= 1, got {c['rounds']}")
    progress = None
    if c["progress"]:
        def progress(done, total):
            print(f"{done}/{total}", file=sys.stderr)
    cp = run_scan(which, scan_params(which, c), bound, shards=c["shards"],
                  checkpoint_path=c["checkpoint"], stop_after=c["stop_after"], progress=progress)
    for hit in hits_up_to(cp, bound):
        r.emit("scan-hit", {"scan": which, **hit})


HANDLERS = {
    "eval": cmd_eval,
    "gcd-check": cmd_gcd_check,
    "product-div": cmd_product_div,
    "valuation": cmd_valuation,
    "lemma-check": cmd_lemma_check,
    "conjecture-check": cmd_conjecture_check,
    "screen": cmd_screen,
    "scan": cmd_scan,
}


def header_config(command: str, config: dict) -> dict:
    shown = {k: v for k, v in config.items() if k not in EXECUTION_ONLY}
    return {"command": command, "schema": SCHEMA_VERSION, "witness_schedule": WITNESS_SCHEDULE_ID, "config": shown}


def run_command(argv: list[str] | None = None, env: dict[str, str] | None = None,
                stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    env = os.environ if env is None else env
    parser, table = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    command = args.command if args.command != "scan" else f"scan {args.scan}"
    try:
        config = resolve(args, table[command], env)
        if args.command == "eval":
            config["indices"] = args.indices
            config["family"] = args.family
        if args.command == "lemma-check":
            config["lemma"] = args.lemma
        out = open(config["output"], "w") if config["output"] else stdout
    except (UsageError, OSError) as exc:
        print(f"repunit: error: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        writer = RecordWriter(out, header_config(command, config))
        HANDLERS[args.command](Runner(config, writer), args)
        if config["csv"]:
            with open(config["csv"], "w", newline="") as fh:
                writer.write_csv(fh)
    except (screening.InvariantViolation, AssertionError) as exc:
        print(f"repunit: internal assertion failed: {exc}", file=stderr)
        return EXIT_INTERNAL
    except (UsageError, ValueError, ArithmeticError, CheckpointError, OSError) as exc:
        print(f"repunit: error: {exc}", file=stderr)
        return EXIT_USAGE
    finally:
        if out is not stdout:
            out.close()
    return EXIT_COUNTEREXAMPLE if writer.counterexamples else EXIT_OK


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
