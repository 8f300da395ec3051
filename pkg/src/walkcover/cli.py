"""Command-line front end.

Every command emits a JSON envelope (schema shipped as
``output.schema.json``); tabular results (sweep, compare) can be emitted
as CSV instead.  A run is reproducible from the echoed parameters and
seed: exact and Monte Carlo results bit-identically, Green values within
their stated error bounds.

Exit codes: 0 success; 1 a theorem-shaped check found a violation (a bug
signal, not a usage problem); 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import sys
from dataclasses import asdict, dataclass
from typing import Any

from . import __version__, exact, green, hitting, lattice, montecarlo, reflect
from .rng import fresh_seed


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


@dataclass
class RunRecord:
    command: str
    parameters: dict
    seed: int | None
    started: str
    finished: str
    results: Any
    tool_version: str = __version__


def _envelope(command: str, params: dict, seed: int | None, started: str,
              results: Any, notes: list[str], exit_code: int) -> dict:
    return {
        "tool": "walkcover",
        "version": __version__,
        "command": command,
        "parameters": params,
        "seed": seed,
        "started": started,
        "finished": _now(),
        "results": results,
        "notes": notes,
        "exit_code": exit_code,
    }


def _read_path_file(path: str) -> lattice.Path:
    with open(path, "r", encoding="utf-8") as fh:
        return lattice.path_from_json(fh.read())


def _target_from_args(args) -> lattice.CoverTarget:
    p = _read_path_file(args.target)
    return lattice.CoverTarget.of_path(p, args.mode)


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _estimate_dict(est: montecarlo.Estimate) -> dict:
    return {"successes": est.successes, "n": est.n, "p_hat": est.p_hat,
            "stderr": est.stderr, "ci95": list(est.ci95)}


def _exact_dict(res: exact.ExactResult) -> dict:
    return {"favorable": str(res.favorable), "total": str(res.total),
            "probability_num": str(res.probability.numerator),
            "probability_den": str(res.probability.denominator),
            "probability": float(res.probability)}


# ---------------------------------------------------------------------------
# command implementations: each returns (results, notes, exit_code, csv_rows)
# ---------------------------------------------------------------------------

def _cmd_exact(args, seed):
    res = exact.exact_cover_probability(_target_from_args(args), args.d, args.L,
                                        args.budget)
    return _exact_dict(res), [], 0, None


def _cmd_mc(args, seed):
    cfg = montecarlo.SimConfig(d=args.d, L=args.L, n_walks=args.walks, seed=seed,
                               mode=args.mode, early_stop=not args.no_early_stop,
                               threads=args.threads)
    est = montecarlo.mc_cover_probability(_target_from_args(args), cfg)
    notes = ["L-step truncation estimates a lower bound on the infinite-horizon "
             "covering probability"]
    return _estimate_dict(est), notes, 0, None


def _cmd_compare(args, seed):
    with open(args.targets, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    paths = [lattice.validate_path(p) for p in data]
    targets = [lattice.CoverTarget.of_path(p, args.mode) for p in paths]
    cfg = montecarlo.SimConfig(d=args.d, L=args.L, n_walks=args.walks, seed=seed,
                               mode=args.mode, threads=args.threads)
    cmp_res = montecarlo.mc_compare(targets, cfg, common_rng=args.common_rng)
    rows = []
    for k, (p, est) in enumerate(zip(paths, cmp_res.estimates)):
        rows.append({"index": k, "path": json.dumps([list(q) for q in p.points]),
                     "successes": est.successes, "n": est.n,
                     "p_hat": est.p_hat, "stderr": est.stderr})
    diffs = []
    for a in range(len(targets)):
        for b in range(a + 1, len(targets)):
            delta, se = cmp_res.paired_diff(a, b)
            diffs.append({"i": a, "j": b, "diff": delta, "paired_stderr": se})
    results = {"estimates": rows, "paired_differences": diffs,
               "common_rng": args.common_rng}
    return results, [], 0, rows


def _cmd_green(args, seed):
    spec = (green.simple_walk(args.d) if args.walk == "simple"
            else green.diagonal_difference_walk(args.d))
    x = tuple(int(v) for v in args.x.split(","))
    gv = green.green_value(spec, x, tol=args.tol, method=args.method)
    results = {"walk": args.walk, "d": args.d, "x": list(x), "value": gv.value,
               "abs_error_bound": gv.abs_error_bound, "method": gv.method}
    return results, [], 0, None


def _cmd_hit(args, seed):
    start = tuple(int(v) for v in args.start.split(","))
    pts = json.loads(args.set)
    query = hitting.HittingQuery(start, tuple(tuple(int(c) for c in p) for p in pts),
                                 args.d)
    dist = hitting.first_entry_distribution(query, tol=args.tol)
    results = {"start": list(start),
               "distribution": [{"point": list(p), "probability": v}
                                for p, v in dist.items()],
               "hit_probability": sum(dist.values())}
    return results, [], 0, None


def _cmd_counterexample(args, seed):
    ce = hitting.counterexample_probabilities(tol=args.tol)
    results: dict[str, Any] = {
        "p_original": ce.p_original,
        "p_reflected": ce.p_reflected,
        "original_exceeds_reflected": ce.p_original > ce.p_reflected,
        "components": ce.components,
    }
    notes = list(ce.notes)
    code = 0 if ce.p_original > ce.p_reflected else 1
    if not args.skip_mc:
        o, y, z, w = (0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)
        original = lattice.validate_path([o, y, w, z])
        reflected = lattice.validate_path([o, y, w, y])
        cfg = montecarlo.SimConfig(d=3, L=args.L, n_walks=args.walks, seed=seed,
                                   mode=lattice.REPETITIONS, threads=args.threads)
        cmp_res = montecarlo.mc_compare(
            [lattice.CoverTarget.of_path(original, lattice.REPETITIONS),
             lattice.CoverTarget.of_path(reflected, lattice.REPETITIONS)], cfg)
        bias = hitting.truncation_bias_estimate(args.L, ce.p_original)
        results["mc"] = {
            "L": args.L, "walks": args.walks,
            "original": _estimate_dict(cmp_res.estimates[0]),
            "reflected": _estimate_dict(cmp_res.estimates[1]),
            "truncation_bias_estimate": bias,
        }
        notes.append(
            f"MC truncation bias estimate {bias:.2e} (covering completed only "
            "after step L; conditional-product form of the Green tail)")
    return results, notes, code, None


def _cmd_sweep(args, seed):
    table = green.asymptotic_sweep(args.dmin, args.dmax, tol=args.tol)
    rows = []
    for r in table.rows:
        rows.append({"d": r.d, "p_return": r.p_return,
                     "scaled_return": r.scaled_return,
                     "p_diagonal": r.p_diagonal,
                     "scaled_diagonal": r.scaled_diagonal,
                     "excess": r.excess, "scaled_excess": r.scaled_excess})
    results = {"rows": rows, "trend_failures": list(table.trend_failures)}
    return results, [table.note], 0 if table.trends_ok else 1, rows


def _cmd_staircase(args, seed):
    p = lattice.staircase_path(args.N, args.d)
    return {"points": [list(q) for q in p.points]}, [], 0, None


def _cmd_reduce(args, seed):
    path = _read_path_file(args.target)
    if not args.no_normalize:
        path = reflect.normalize_to_positive_orthant(path)
    chain = reflect.reduce_path(path)
    steps = [{"hyperplane": {"i": h.i, "j": h.j, "offset": h.offset},
              "points": [list(q) for q in p.points],
              "total_difference": lattice.total_difference(p)}
             for h, p in chain]
    results = {"start_total_difference": lattice.total_difference(path),
               "steps": steps}
    return results, [], 0, None


def _cmd_comb(args, seed):
    from .comb import all_collections, check_cover_inequality
    violations = []
    cases = 0
    for V in all_collections(args.n, args.m):
        cases += 1
        ok, witness = check_cover_inequality(V)
        if not ok:
            violations.append({"arcs": [sorted(a) for a in V.arcs],
                               "witness": sorted(witness)})
    results = {"n": args.n, "m": args.m, "collections": cases,
               "subsets_each": 2 ** args.n, "violations": violations}
    note = (f"cover-count inequality: {len(violations)} violations over "
            f"{cases} collections x {2**args.n} subsets")
    return results, [note], 0 if not violations else 1, None


def _cmd_verify_thm11(args, seed):
    report = exact.reflection_monotonicity_sweep(
        radius=args.radius, max_set_size=args.max_size,
        lengths=tuple(range(1, args.L + 1)))
    results = {"cases": report.cases, "lengths": list(report.lengths),
               "radius": report.radius, "max_set_size": report.max_set_size,
               "violations": [list(map(str, v)) for v in report.violations]}
    return results, [], 0 if report.passed else 1, None


def _cmd_verify_thm41(args, seed):
    report = exact.verify_staircase_max(args.N, args.d, args.L, args.cap)
    rows = [{"points": json.dumps([list(q) for q in r.points]),
             "probability_num": str(r.probability.numerator),
             "probability_den": str(r.probability.denominator),
             "probability": float(r.probability),
             "is_staircase": r.is_staircase} for r in report.rows]
    results = {"N": report.N, "d": report.d, "L": report.L, "cap": report.cap,
               "paths_ranked": rows,
               "staircase_is_max": report.staircase_is_max}
    notes = [f"enumeration capped at {report.cap} steps; the maximality claim "
             "ranges over connecting paths of any length"]
    return results, notes, 0 if report.staircase_is_max else 1, rows


_NEEDS_SEED = {"mc", "compare", "counterexample"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkcover",
        description="covering probabilities of lattice sets under simple random walk")
    parser.add_argument("--config", help="JSON file of default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=fn)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--record", help="also persist a run record to this path")
        return p

    p = add("exact", _cmd_exact, help="exact covering probability by enumeration")
    p.add_argument("--target", required=True, help="path file (JSON array of arrays)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--mode", choices=(lattice.TRACE, lattice.REPETITIONS),
                   default=lattice.TRACE)
    p.add_argument("--budget", type=int, default=exact.DEFAULT_BUDGET)

    p = add("mc", _cmd_mc, help="Monte Carlo covering probability")
    p.add_argument("--target", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--walks", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=(lattice.TRACE, lattice.REPETITIONS),
                   default=lattice.TRACE)
    p.add_argument("--threads", type=int, default=montecarlo.default_threads())
    p.add_argument("--no-early-stop", action="store_true")

    p = add("compare", _cmd_compare, help="estimate several targets on shared walks")
    p.add_argument("--targets", required=True, help="JSON file: list of paths")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--walks", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=(lattice.TRACE, lattice.REPETITIONS),
                   default=lattice.TRACE)
    p.add_argument("--threads", type=int, default=montecarlo.default_threads())
    p.add_argument("--common-rng", action=argparse.BooleanOptionalAction,
                   default=True,
                   help="evaluate every target on the same walks (paired errors)")

    p = add("green", _cmd_green, help="lattice Green's function value")
    p.add_argument("--walk", choices=("simple", "diagdiff"), default="simple")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--x", required=True, help="comma-separated coordinates")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--method", choices=("auto", "both", "stepsum", "fourier"),
                   default="auto")

    p = add("hit", _cmd_hit, help="first-entry distribution over a finite set")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--start", required=True, help="comma-separated coordinates")
    p.add_argument("--set", required=True, help="JSON array of points")
    p.add_argument("--tol", type=float, default=1e-5)

    p = add("counterexample", _cmd_counterexample,
            help="covering-with-repetitions counterexample pipeline")
    p.add_argument("--walks", type=int, default=100_000)
    p.add_argument("--L", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=montecarlo.default_threads())
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--skip-mc", action="store_true")

    p = add("sweep", _cmd_sweep, help="return-probability asymptotics table")
    p.add_argument("--dmin", type=int, default=3)
    p.add_argument("--dmax", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-3)

    p = add("staircase", _cmd_staircase, help="emit the staircase path")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = add("reduce", _cmd_reduce, help="reflection chain to the diagonal region")
    p.add_argument("--target", required=True)
    p.add_argument("--no-normalize", action="store_true",
                   help="fail instead of sign-flipping a negative endpoint")

    p = add("comb", _cmd_comb, help="exhaustive cover-count inequality check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("verify-thm11", _cmd_verify_thm11,
            help="exhaustive reflection-monotonicity sweep (d=2)")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--max-size", type=int, default=2)
    p.add_argument("--L", type=int, default=6)

    p = add("verify-thm41", _cmd_verify_thm41,
            help="staircase maximality ranking over short connecting paths")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--cap", type=int, default=3)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Config-file values become defaults; explicit flags win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    cfg_path = argv[idx + 1]
    with open(cfg_path, "r", encoding="utf-8") as fh:
        defaults = json.load(fh)
    rest = argv[:idx] + argv[idx + 2:]
    out = list(rest)
    given = {a.split("=")[0] for a in rest if a.startswith("--")}
    for key, value in defaults.items():
        flag = "--" + key.replace("_", "-")
        if flag in given:
            continue
        if isinstance(value, bool):
            if value:
                out.append(flag)
        else:
            out.extend([flag, str(value)])
    return out


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
    except (OSError, json.JSONDecodeError, IndexError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    started = _now()
    seed = None
    if args.command in _NEEDS_SEED:
        seed = args.seed if args.seed is not None else fresh_seed()
    try:
        results, notes, code, csv_rows = args.func(args, seed)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "command", "config", "out", "record", "format",
                           "seed") and v is not None}
    doc = _envelope(args.command, params, seed, started, results, notes, code)
    if args.format == "csv":
        if not csv_rows:
            print("csv format unavailable for this command", file=sys.stderr)
            return 2
        text = _csv_text(csv_rows)
    else:
        text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.record:
        record = RunRecord(args.command, params, seed, started, doc["finished"],
                           results)
        with open(args.record, "w", encoding="utf-8") as fh:
            json.dump(asdict(record), fh, indent=2)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
