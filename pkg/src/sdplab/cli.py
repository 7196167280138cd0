"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 parse error, 3 solver
failure (Stalled or NumericalFailure, output still written), 4 invariant
violation (non-monotone sweep, contradictory certificates).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import formats
from .errors import (DomainError, InconsistencyError, IoError, NumericalError, ParseError,
                     SdpLabError)
from .gallery import EXAMPLES, random_strongly_feasible
from .ipm import (AngleStart, IpmParams, Status, default_identity_start, run_potra_sheng,
                  run_zhang, standard_start)
from .model import SdpProblem
from .rays import HALF_PI, RaySchedule, SweepResult, ray_limit, theta_sweep
from .status import classify
from .symmat import min_eig

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SOLVER, EXIT_INVARIANT = 0, 1, 2, 3, 4

TRACE_FIELDS = ["iter", "t", "gap", "primal_mod", "dual_mod", "min_eig_X", "min_eig_S", "step"]
SWEEP_FIELDS = ["theta", "tan_theta", "kind", "value", "samples_json"]
SOLVE_FIELDS = ["status", "iterations", "t", "gap", "primal_mod", "dual_mod", "message"]
CLASSIFY_FIELDS = ["side", "verdict", "certificate_json"]
_RANDOM = re.compile(r"random-(\d+)-(\d+)$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _g(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _num(x):
    # 17 significant digits; json renders the resulting float exactly
    return float(format(float(x), ".17g"))


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (float, np.floating)):
        return _num(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sdplab", description="Limiting behaviour of perturbed SDP pairs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, problem=True):
        if problem:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--example", help="gallery name (1, 2, 3, strongly-infeasible, random-N-M)")
            src.add_argument("--input", help="problem file (SDPA .dat-s or JSON)")
        p.add_argument("--output", help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=0, help="seed for random-N-M examples")

    def solver(p):
        p.add_argument("--algorithm", choices=["zhang", "potra-sheng"], default="zhang")
        p.add_argument("--theta", type=float, help="angle start in (0, pi/2); default identity start")
        p.add_argument("--sigma", type=float, default=IpmParams.sigma)
        p.add_argument("--gamma", type=float, default=IpmParams.gamma)
        p.add_argument("--tol-gap", type=float, default=IpmParams.tol_gap)
        p.add_argument("--max-iter", type=int, default=IpmParams.max_iter)

    def schedule(p):
        p.add_argument("--t0", type=float, default=RaySchedule.t0)
        p.add_argument("--ratio", type=float, default=RaySchedule.ratio)
        p.add_argument("--steps", type=int, default=RaySchedule.steps)

    fmt = dict(choices=["csv", "json"], default="csv")
    p = sub.add_parser("solve", help="run an IPM and report the final bracket")
    common(p), solver(p)
    p.add_argument("--format", **{**fmt, "default": "json"})

    p = sub.add_parser("ipm-trace", help="run an IPM and emit every iterate")
    common(p), solver(p)
    p.add_argument("--format", **fmt)

    p = sub.add_parser("ray", help="limit of the value along one ray")
    common(p), schedule(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--format", **fmt)

    p = sub.add_parser("sweep", help="ray limits over a grid of angles")
    common(p), schedule(p)
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--theta", type=float, nargs="+", help="explicit angles")
    grid.add_argument("--thetas", type=int, help="K equispaced angles in [pi/36, pi/2 - pi/36]")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", **fmt)

    p = sub.add_parser("classify", help="strong feasibility / infeasibility verdicts")
    common(p)
    p.add_argument("--format", **{**fmt, "default": "json"})

    p = sub.add_parser("example", help="write a gallery problem")
    common(p)
    p.add_argument("--format", choices=["json", "sdpa"], default="json")
    return ap


def theta_grid(k: int) -> List[float]:
    """``k`` equispaced angles in ``[pi/36, pi/2 - pi/36]``."""
    lo, hi = math.pi / 36, HALF_PI - math.pi / 36
    if k < 1:
        raise UsageError("--thetas must be positive")
    if k == 1:
        return [0.5 * (lo + hi)]
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


def _validate(args) -> None:
    """Flag checks that must happen before any computation."""
    try:
        if hasattr(args, "sigma"):
            args.params = IpmParams(sigma=args.sigma, gamma=args.gamma, tol_gap=args.tol_gap,
                                    max_iter=args.max_iter)
            if args.theta is not None and not 0 < args.theta < HALF_PI:
                raise DomainError("--theta must lie in (0, pi/2)")
        if hasattr(args, "t0"):
            args.sched = RaySchedule(args.t0, args.ratio, args.steps)
        if args.command == "ray" and not 0 <= args.theta <= HALF_PI:
            raise DomainError("--theta must lie in [0, pi/2]")
        if args.command == "sweep":
            grid = theta_grid(args.thetas) if args.thetas is not None else sorted(args.theta)
            if any(not 0 <= th <= HALF_PI for th in grid):
                raise DomainError("angles must lie in [0, pi/2]")
            if args.jobs < 1:
                raise DomainError("--jobs must be positive")
            args.grid = grid
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def load_problem(args) -> SdpProblem:
    if args.input:
        return formats.read_problem(args.input)
    name = args.example
    m = _RANDOM.match(name)
    if m:
        n_, m_ = int(m.group(1)), int(m.group(2))
        try:
            return random_strongly_feasible(n_, m_, args.seed).problem
        except SdpLabError as exc:
            raise UsageError(str(exc)) from None
    if name not in EXAMPLES:
        raise UsageError(f"unknown example {name!r}; choose from "
                         f"{sorted(set(EXAMPLES))} or random-N-M")
    return EXAMPLES[name]().problem


# --------------------------------------------------------------------------
# emission


def _table(fields: Sequence[str], rows: List[dict], fmt: str, extra: Optional[dict] = None) -> str:
    if fmt == "json":
        doc = {**(extra or {}), "rows": [{k: _jsonable(r[k]) for k in fields} for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_g(r[k]) for k in fields])
    return buf.getvalue()


def trace_rows(trace) -> List[dict]:
    rows = []
    for k, (pt, mo) in enumerate(zip(trace.iterates, trace.modified)):
        rows.append({"iter": k, "t": pt.t, "gap": trace.gaps[k], "primal_mod": mo.primal,
                     "dual_mod": mo.dual, "min_eig_X": min_eig(pt.X), "min_eig_S": min_eig(pt.S),
                     "step": trace.steps[k - 1] if k > 0 else 0.0})
    return rows


def sweep_rows(results) -> List[dict]:
    rows = []
    for r in results:
        v = r.as_number()
        rows.append({"theta": r.theta, "tan_theta": math.tan(r.theta) if r.theta < HALF_PI else math.inf,
                     "kind": r.kind.value, "value": v,
                     "samples_json": json.dumps([[_num(t), _num(s)] for t, s in r.samples])})
    return rows


def emit_results(result, cfg) -> str:
    """Render a trace, sweep, ray list or classification per ``cfg.command`` and ``cfg.format``."""
    cmd = cfg.command
    if cmd == "ipm-trace":
        return _table(TRACE_FIELDS, trace_rows(result), cfg.format,
                      {"status": result.status.value, "message": result.message})
    if cmd == "solve":
        pt, mo = result.final, result.final_modified
        row = {"status": result.status.value, "iterations": len(result) - 1, "t": pt.t,
               "gap": pt.gap, "primal_mod": mo.primal,
               "dual_mod": mo.dual, "message": result.message}
        if cfg.format == "json":
            return json.dumps({k: _jsonable(v) for k, v in row.items()}, indent=1) + "\n"
        return _table(SOLVE_FIELDS, [row], "csv")
    if cmd in ("sweep", "ray"):
        results = result.results if isinstance(result, SweepResult) else list(result)
        extra = None
        if isinstance(result, SweepResult):
            extra = {"monotone": result.monotone,
                     "violations": [list(v) for v in result.violations]}
        return _table(SWEEP_FIELDS, sweep_rows(results), cfg.format, extra)
    if cmd == "classify":
        rows = [{"side": s.side.value, "verdict": s.verdict.value,
                 "certificate_json": json.dumps(_jsonable(_cert(s.certificate)))}
                for s in (result.primal, result.dual)]
        if cfg.format == "json":
            return json.dumps({"asymptotically_pd_feasible": result.asymptotically_pd_feasible.value,
                               "sides": [{"side": r["side"], "verdict": r["verdict"],
                                          "certificate": json.loads(r["certificate_json"]),
                                          "notes": s.notes}
                                         for r, s in zip(rows, (result.primal, result.dual))]},
                              indent=1) + "\n"
        text = _table(CLASSIFY_FIELDS, rows, "csv")
        return text + f"# asymptotically_pd_feasible,{result.asymptotically_pd_feasible.value}\n"
    raise ValueError(f"nothing to emit for {cmd!r}")


def _cert(c):
    if c is None:
        return None
    if isinstance(c, tuple):
        return {"y": c[0], "S": c[1]}
    return c


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from None


# --------------------------------------------------------------------------
# commands


def _run_solver(p: SdpProblem, args):
    mode = AngleStart(args.theta) if args.theta is not None else default_identity_start(p)
    pt, dirs = standard_start(p, mode)
    run = run_zhang if args.algorithm == "zhang" else run_potra_sheng
    return run(p, pt, dirs, args.params)


def _dispatch(args) -> int:
    if args.command == "example":
        p = load_problem(args)
        _write(formats.problem_to_json(p) + "\n" if args.format == "json" else formats.format_sdpa(p),
               args.output)
        return EXIT_OK
    p = load_problem(args)
    if args.command in ("solve", "ipm-trace"):
        trace = _run_solver(p, args)
        _write(emit_results(trace, args), args.output)
        if trace.status is not Status.CONVERGED:
            print(f"sdplab: solver finished with status {trace.status.value}: {trace.message}",
                  file=sys.stderr)
            return EXIT_SOLVER
        return EXIT_OK
    if args.command == "ray":
        r = ray_limit(p, None, args.theta, args.sched)
        _write(emit_results([r], args), args.output)
        return EXIT_OK
    if args.command == "sweep":
        res = theta_sweep(p, None, args.grid, args.sched, jobs=args.jobs)
        _write(emit_results(res, args), args.output)
        if not res.monotone:
            print(f"sdplab: sweep not monotone: {res.violations}", file=sys.stderr)
            return EXIT_INVARIANT
        return EXIT_OK
    if args.command == "classify":
        _write(emit_results(classify(p), args), args.output)
        return EXIT_OK
    raise UsageError(f"unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        return _dispatch(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except IoError as exc:
        print(f"sdplab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"sdplab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistencyError as exc:
        print(f"sdplab: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except NumericalError as exc:
        print(f"sdplab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SdpLabError as exc:
        print(f"sdplab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
