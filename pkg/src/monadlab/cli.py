"""Command-line interface: analyze, example, survey, verify-paper.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 indeterminate
fiberwise exactness, 5 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .analysis import NOT_APPLICABLE, AnalysisReport, CompositionError, NotExactError, analyze_monad
from .exactalg import MalformedInputError, field_from_tag
from .monad import (BUILTIN_NAMES, DEFAULT_NULLSTELLENSATZ_CAP, DegreeMismatchError, MalformedMonadError,
                    MonadError, MonadSyntaxError, builtin_example, parse_monad, serialize_monad)
from .sampler import SURVEY_FIELD, SampleConfig, survey

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_INDETERMINATE, EXIT_VERIFY = 0, 2, 3, 4, 5


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _dump(doc) -> None:
    print(json.dumps(_jsonable(doc), indent=2))


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like LO:HI") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("window needs LO <= HI")
    return lo, hi


def _field(text: str):
    try:
        return field_from_tag(text)
    except (MalformedInputError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def render_table(rep: AnalysisReport) -> str:
    tab = rep.table
    lo, hi = tab.window
    ts = list(range(lo, hi + 1))
    width = max(3, *(len(str(x)) for t in ts for x in tab.h[t]), *(len(str(t)) for t in ts))
    lines = []
    for i in (3, 2, 1, 0):
        lines.append(f"h^{i} | " + " ".join(str(x).rjust(width) for x in tab.row(i)))
    lines.append("-" * len(lines[0]))
    lines.append("  t | " + " ".join(str(t).rjust(width) for t in ts))
    return "\n".join(lines)


def render_report(rep: AnalysisReport, name: str = "") -> str:
    c = rep.classification
    ex = rep.exactness
    bound = "n/a" if c.regularity_bound_cmr is NOT_APPLICABLE else c.regularity_bound_cmr
    out = [
        f"monad {name or '(unnamed)'}  sha256 {rep.monad_hash[:16]}",
        f"exactness ({ex.method}): alpha {ex.alpha_fiberwise_injective.status}, "
        f"beta {ex.beta_fiberwise_surjective.status}",
        f"c1 = {c.chern[0]}, c2 = {c.chern[1]}",
        "",
        render_table(rep),
        "",
        "H^1 module dims: " + (", ".join(f"{t}:{d}" for t, d in rep.module.dims().items()) or "0"),
        f"H^1 generated in degrees: {c.h1_generation_degrees}",
        f"buchsbaum p = {c.buchsbaum_p}",
        f"regularity = {c.regularity_computed} (bound {bound})",
        f"instanton: {c.is_instanton}  natural: {c.has_natural_cohomology}  "
        f"supernatural: {c.is_supernatural}  't Hooft: {c.is_tHooft}  stable: {c.is_stable}",
        f"time {rep.timing:.3f}s",
    ]
    return "\n".join(out)


def cmd_analyze(args) -> int:
    try:
        with open(args.path) as fh:
            text = fh.read()
    except OSError as exc:
        _err(str(exc))
        return EXIT_PARSE
    try:
        m = parse_monad(text)
    except MonadSyntaxError as exc:
        _err(str(exc))
        return EXIT_PARSE
    except DegreeMismatchError as exc:
        _err(str(exc))
        return EXIT_VALIDATION
    except MalformedMonadError as exc:
        _err(str(exc))
        return EXIT_PARSE
    try:
        rep = analyze_monad(m, window=args.window, exactness=args.exactness,
                            max_degree=args.max_degree)
    except CompositionError as exc:
        _err(str(exc))
        return EXIT_VALIDATION
    except NotExactError as exc:
        _err(str(exc))
        return EXIT_VALIDATION if exc.report.refuted else EXIT_INDETERMINATE
    except MonadError as exc:
        _err(str(exc))
        return EXIT_VALIDATION
    if args.json:
        _dump(rep.to_json())
    else:
        print(render_report(rep, m.name))
    return EXIT_OK


def cmd_example(args) -> int:
    params = {k: getattr(args, k) for k in ("k", "a", "b", "d", "seed") if getattr(args, k) is not None}
    try:
        m = builtin_example(args.name, field=args.field, **params)
    except (ValueError, MonadError) as exc:
        _err(str(exc))
        return EXIT_VALIDATION
    text = serialize_monad(m)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_survey(args) -> int:
    if args.gnc:
        if None in (args.a, args.b, args.d):
            _err("--gnc needs --a, --b and --d")
            return EXIT_VALIDATION
        cfg = SampleConfig(shape=(args.a, args.b, args.d), variant=args.gnc, field=args.field,
                           seed=args.seed, exactness=args.exactness)
    else:
        if args.charge is None or args.charge < 1:
            _err("give --charge K >= 1 or --gnc E|F")
            return EXIT_VALIDATION
        cfg = SampleConfig(charge=args.charge, field=args.field, seed=args.seed, thooft=args.thooft,
                           exactness=args.exactness)
    try:
        res = survey(cfg, args.trials)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_VALIDATION
    if args.json:
        doc = res.to_json()
        doc["master_seed"] = args.seed
        doc["field"] = args.field.tag
        _dump(doc)
        return EXIT_OK
    what = f"gnc-{args.gnc}{cfg.shape}" if args.gnc else f"charge {args.charge}"
    print(f"survey {what} over {args.field.tag}, {args.trials} trials, master seed {args.seed}")
    print(f"valid trials: {res.trials_valid}/{res.trials_requested}")
    print("p histogram:")
    for p, n in res.histogram.items():
        print(f"  p = {p}: {n:3d} {'#' * n}")
    print("flags: " + ", ".join(f"{k} {v}" for k, v in res.flag_counts.items()))
    if res.outlier_seeds:
        print(f"outliers (p != {res.expected_p}): seeds {res.outlier_seeds}")
    for r in res.records:
        if r.error:
            print(f"  trial {r.index} (seed {r.seed}) failed: {r.error}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_claims

    echo = None if args.json else print
    results = run_claims(args.filter, seed=args.seed, echo=echo)
    if not results:
        _err(f"no claims match filter {args.filter!r}")
        return EXIT_VERIFY
    ok = all(r.passed for r in results)
    if args.json:
        _dump({"schema": "monadlab.verify/1", "seed": args.seed, "passed": ok,
               "claims": [{"name": r.name, "passed": r.passed, "computed": r.computed,
                           "expected": r.expected, "seconds": round(r.seconds, 3),
                           "time_limit": r.time_limit, "notes": r.notes} for r in results]})
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} claims passed")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    from .verify import DEFAULT_SEED

    ap = argparse.ArgumentParser(prog="monadlab", description="Cohomology of monads on P^3.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyse a monad document")
    a.add_argument("path")
    a.add_argument("--window", type=_window, help="twist window LO:HI (default: automatic)")
    a.add_argument("--exactness", choices=["nullstellensatz", "probabilistic"], default="nullstellensatz")
    a.add_argument("--max-degree", type=int, default=DEFAULT_NULLSTELLENSATZ_CAP)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("example", help="write a builtin monad document")
    e.add_argument("name", choices=BUILTIN_NAMES)
    e.add_argument("--k", type=int)
    e.add_argument("--a", type=int)
    e.add_argument("--b", type=int)
    e.add_argument("--d", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--field", type=_field, default="Q")
    e.add_argument("--output", "-o")
    e.set_defaults(func=cmd_example)

    s = sub.add_parser("survey", help="sample and analyse many monads")
    s.add_argument("--charge", type=int)
    s.add_argument("--gnc", choices=["E", "F"])
    s.add_argument("--a", type=int)
    s.add_argument("--b", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--field", type=_field, default=SURVEY_FIELD.tag)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--thooft", action="store_true", help="bias towards 't Hooft instantons")
    s.add_argument("--exactness", choices=["nullstellensatz", "probabilistic"], default="nullstellensatz")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_survey)

    v = sub.add_parser("verify-paper", help="re-run the published claims")
    v.add_argument("--filter")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return ap


def _glue_windows(argv: list[str]) -> list[str]:
    # "--window -6:4" would read as an option; glue it into "--window=-6:4"
    out = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            out.append(f"--window={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_windows(argv))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
