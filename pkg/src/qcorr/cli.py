"""Command-line interface: ``qcorr compute | verify | fuzz | gen``.

Exit codes: 0 success, 1 usage or input error, 2 verification anomaly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import fileio, verify
from .correlations import OptimizerConfig, correlation_report
from .qmat import BipartiteState, InvalidStateError, bell_state, dm, random_mixed, random_separable

EXIT_OK, EXIT_USAGE, EXIT_ANOMALY = 0, 1, 2
CSV_COLUMNS = ("suite", "trial", "seed", "d_a", "d_b", "residual_name", "residual_bits", "passed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _num(x: float) -> float:
    return float(fmt(x))


def _dims(text: str, n=None) -> list[int]:
    try:
        dims = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"dimensions must be positive integers, got {text!r}")
    return dims


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _emit(text: str, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def report_to_dict(rep) -> dict:
    return {
        "s_a": _num(rep.s_a),
        "s_b": _num(rep.s_b),
        "s_ab": _num(rep.s_ab),
        "mutual_info": _num(rep.mutual_info),
        "classical_corr": _num(rep.classical_corr),
        "discord": _num(rep.discord),
        "restarts_used": rep.restarts_used,
        "converged": rep.converged,
        "anomaly": rep.anomaly,
        "bound_checks": {k: _num(v) for k, v in rep.bound_checks.items()},
        "argmax_basis": [[[_num(z.real), _num(z.imag)] for z in row] for row in rep.argmax_basis.unitary],
    }


def cmd_compute(args) -> int:
    try:
        s = fileio.read_state(args.state)
    except (OSError, fileio.FileFormatError, InvalidStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cfg = OptimizerConfig(restarts=args.restarts, max_iters=args.max_iters, objective_tol=args.tol, seed=args.seed)
    rep = correlation_report(s, cfg)
    _emit(json.dumps(report_to_dict(rep), indent=1) + "\n", args.out)
    return EXIT_ANOMALY if rep.anomaly else EXIT_OK


def verify_rows(suites, trials: int, seed: int, dims=None, jobs: int = 1) -> list[tuple]:
    """CSV rows for every (suite, trial), in canonical order regardless of ``jobs``."""
    tasks = [(suite, k) for suite in suites for k in range(trials)]

    def run(task):
        suite, k = task
        d_a, d_b, recs = verify.run_trial(suite, seed, k, dims)
        return [(suite, k, seed, d_a, d_b, r.name, fmt(r.residual), int(r.passed)) for r in recs]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run, tasks))
    else:
        chunks = [run(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def cmd_verify(args) -> int:
    suites = verify.SUITES if args.suite == "all" else (args.suite,)
    if args.dims is not None and len(args.dims) != 2:
        raise UsageError("--dims takes two values")
    rows = verify_rows(suites, args.trials, args.seed, args.dims, args.jobs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    if args.csv:
        _emit(buf.getvalue(), args.csv)
    failed = {}
    for row in rows:
        if not row[-1]:
            failed.setdefault(row[0], set()).add(row[1])
    out = sys.stderr if args.csv == "-" else sys.stdout
    for suite in suites:
        n_fail = len(failed.get(suite, ()))
        status = "ok" if not n_fail else "FAIL"
        print(f"{suite:10s} trials={args.trials} failed={n_fail} {status}", file=out)
    return EXIT_ANOMALY if failed else EXIT_OK


def cmd_fuzz(args) -> int:
    if len(args.dims) != 2:
        raise UsageError("--dims takes two values")
    d_a, d_b = args.dims
    cfg = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    try:
        findings = verify.fuzz_conjecture_ii(
            d_a, d_b, args.trials, cfg, seed=args.seed, family=args.family, margin=args.margin
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = fileio.findings_to_dict(
        findings, dims=[d_a, d_b], trials=args.trials, seed=args.seed, margin_threshold=args.margin, family=args.family
    )
    _emit(json.dumps(data, indent=1) + "\n", args.out)
    print(f"{len(findings)} candidate(s) in {args.trials} trials", file=sys.stderr)
    return EXIT_OK


def _need(dims, n, family):
    if dims is None:
        return None
    if len(dims) != n:
        raise UsageError(f"--family {family} takes {n} dimensions")
    return dims


def generate(family: str, dims=None, seed: int = 0, rank=None, terms=None) -> BipartiteState:
    rng = np.random.default_rng(seed)
    if family == "bell":
        return bell_state()
    if family == "product":
        d_a, d_b = _need(dims, 2, family) or (2, 2)
        return BipartiteState.product(random_mixed(d_a, rank, rng), random_mixed(d_b, rank, rng))
    if family == "cc":
        d_a, d_b = _need(dims, 2, family) or (2, 2)
        k = min(d_a, d_b)
        rho = sum(dm(np.kron(np.eye(d_a)[i], np.eye(d_b)[i])) for i in range(k)) / k
        return BipartiteState(rho, d_a, d_b, separable=True)
    if family == "example":
        d_a, d_r = _need(dims, 2, family) or (2, 2)
        return verify.gen_example_family(d_a, d_r, rng)
    if family == "saturating":
        d_l, d_r, d_c = _need(dims, 3, family) or (2, 2, 2)
        return verify.gen_saturating_state(d_l, d_r, d_c, rng)
    if family == "random":
        d_a, d_b = _need(dims, 2, family) or (2, 2)
        return BipartiteState(random_mixed(d_a * d_b, rank, rng), d_a, d_b)
    if family == "separable":
        d_a, d_b = _need(dims, 2, family) or (2, 2)
        return random_separable(d_a, d_b, terms or d_a * d_b, rng)
    raise UsageError(f"unknown family {family!r}")


def cmd_gen(args) -> int:
    s = generate(args.family, args.dims, args.seed, args.rank, args.terms)
    if s.dim_a * s.dim_b > fileio.MAX_DIM:
        raise UsageError(f"total dimension exceeds {fileio.MAX_DIM}")
    _emit(fileio.write_state(s, None, family=args.family), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcorr", description="Classical correlation and discord of bipartite states.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="correlation report for one state file")
    c.add_argument("state")
    c.add_argument("--restarts", type=_positive, default=20)
    c.add_argument("--max-iters", type=_positive, default=500)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--seed", type=_seed, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="seeded verification sweeps")
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.add_argument("--trials", type=_positive, default=100)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--dims", type=_dims)
    v.add_argument("--csv")
    v.add_argument("--jobs", type=_positive, default=1)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fuzz", help="search for states with discord above S(rho_A)")
    f.add_argument("--dims", type=_dims, default=[2, 3])
    f.add_argument("--trials", type=_positive, default=100)
    f.add_argument("--seed", type=_seed, default=0)
    f.add_argument("--margin", type=float, default=verify.FUZZ_MARGIN)
    f.add_argument("--family", choices=("random", "near-pure", "separable", "example"), default="random")
    f.add_argument("--restarts", type=_positive, default=20)
    f.add_argument("--out")
    f.set_defaults(func=cmd_fuzz)

    g = sub.add_parser("gen", help="write a state file for a named family")
    g.add_argument("--family", required=True)
    g.add_argument("--dims", type=_dims)
    g.add_argument("--rank", type=_positive)
    g.add_argument("--terms", type=_positive)
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
