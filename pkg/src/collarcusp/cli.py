"""Command-line front end: single evaluations, verification suites, sweeps.

Exit codes: 0 all checks pass, 1 a checked inequality was violated,
2 usage or configuration error, 3 numerical failure (quadrature or ODE).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

from . import cusp_mass, degeneration, verify
from .collar_modes import ModeSolveError
from .cusp_mass import MassComputationError
from .reports import format_human, get_profile, render_csv, write_csv, write_json
from .specfun import (
    QuadratureError,
    SpectralParam,
    k_two_sided_bounds,
    mcdonald_k,
    whittaker_mode,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_CONFIG_KEYS = {
    "profile",
    "out_dir",
    "format",
    "lambda",
    "lgamma",
    "eps",
    "eta",
    "jmax",
    "quad_abs",
    "quad_rel",
}


def _parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, value = (s.strip() for s in line.partition("="))
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown configuration key {key!r}")
            values[key] = value
    for key in ("quad_abs", "quad_rel"):
        if key in values and not float(values[key]) > 0.0:
            raise ValueError(f"configuration tolerance {key} must be positive")
    return values


def _float_list(text: str) -> list[float]:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("empty schedule")
    return [float(s) for s in items]


def _emit_csv(out: str | None, schema: str, columns, rows) -> None:
    if out:
        write_csv(out, schema, columns, rows)
    else:
        sys.stdout.write(render_csv(schema, columns, rows))


def _cmd_specfun(args: argparse.Namespace) -> int:
    if args.which == "k":
        value = mcdonald_k(args.eps, args.y)
        print(format_human(value) if args.format == "human" else repr(value))
        return EXIT_OK
    if args.which == "bounds":
        lower, upper = k_two_sided_bounds(args.eps, args.y)
        value = mcdonald_k(args.eps, args.y)
        inside = lower <= value <= upper
        print(
            f"{format_human(lower)} <= K_{args.eps:g}({args.y:g}) = "
            f"{format_human(value)} <= {format_human(upper)}"
            + ("" if inside else "  [VIOLATED]")
        )
        return EXIT_OK if inside else EXIT_VIOLATION
    if args.which == "whittaker":
        param = SpectralParam(args.s)
        value = whittaker_mode(param, args.n, args.y)
        print(format_human(value) if args.format == "human" else repr(value))
        return EXIT_OK
    raise ValueError(f"unknown specfun subcommand {args.which!r}")


def _print_suite(result: verify.SuiteResult) -> None:
    for check in result.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} [{result.suite}] {check.name}: {check.detail}")
    n_fail = sum(not c.passed for c in result.checks)
    print(
        f"suite {result.suite}: {len(result.checks) - n_fail}/{len(result.checks)} checks passed"
    )


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.config:
        _parse_config_file(args.config)  # validated; profile applies via env
    if args.suite == "cusp":
        result = verify.verify_cusp()
    elif args.suite == "collar":
        result = verify.verify_collar(
            lam=args.lam, l_gammas=tuple(args.lgamma), eps=args.eps,
            eta=args.eta, j_max=args.jmax,
        )
    elif args.suite == "tail":
        result = verify.verify_tail()
    elif args.suite == "nodal":
        text = None
        if args.input:
            with open(args.input) as fh:
                text = fh.read()
        result = verify.verify_nodal(text)
        if text is not None and result.passed:
            print(result.summary.get("input_verdict", ""))
    elif args.suite == "all":
        result = verify.verify_all()
    else:
        raise ValueError(f"unknown suite {args.suite!r}")

    _print_suite(result)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for schema, (columns, rows) in result.tables.items():
            write_csv(os.path.join(args.out_dir, f"{schema}.csv"), schema, columns, rows)
        write_json(
            os.path.join(args.out_dir, f"verify_{result.suite}.json"),
            {
                "suite": result.suite,
                "passed": result.passed,
                "checks": [
                    {"name": c.name, "passed": c.passed, "detail": c.detail}
                    for c in result.checks
                ],
                "summary": result.summary,
            },
        )
    return EXIT_OK if result.passed else EXIT_VIOLATION


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.which == "degeneration":
        ls = _float_list(args.l)
        family = degeneration.PinchFamily(
            tuple(2.0 * math.pi * l for l in ls), tuple(0.1 for _ in ls)
        )
        r_grid = _float_list(args.r) if args.r else [0.0]
        metric = degeneration.metric_convergence_sweep(family, r_grid)
        potential = degeneration.potential_convergence_sweep(family, args.j, r_grid)
        rows = [
            (
                m.l_gamma, m.r_shifted, m.coeff, m.limit, m.coeff_err, m.gtt_err,
                p.potential, p.limit, p.rel_err,
            )
            for m, p in zip(metric, potential)
        ]
        _emit_csv(
            args.out,
            "degeneration",
            (
                "l_gamma", "r_shifted", "coeff", "coeff_limit", "coeff_err",
                "gtt_err", "potential", "potential_limit", "potential_rel_err",
            ),
            rows,
        )
        return EXIT_OK
    if args.which == "constants":
        eps_grid = _float_list(args.eps)
        rows = verify.constants_sweep(eps_grid, args.eta, args.lgamma, args.eps0)
        _emit_csv(args.out, "collar_constants", ("eps", "t0", "t1", "t2"), rows)
        return EXIT_OK
    if args.which == "tail-ratio":
        b_grid = _float_list(args.b) if args.b else list(verify.DEFAULT_B_GRID)
        n_values = range(1, args.nmax + 1)
        sweep = cusp_mass.khat_sweep(b_grid, n_values)
        _emit_csv(
            args.out, "cusp_tail_ratio", cusp_mass.TailRatioSweep.COLUMNS, sweep.rows
        )
        return EXIT_OK
    raise ValueError(f"unknown sweep {args.which!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collarcusp",
        description=(
            "Numerical checks for eigenfunction mass distribution on hyperbolic "
            "collars and cusps"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("specfun", help="single special-function evaluations")
    spec_sub = p_spec.add_subparsers(dest="which", required=True)
    p_k = spec_sub.add_parser("k", help="McDonald function value")
    p_k.add_argument("--eps", type=float, required=True, help="order in [0, 1/2]")
    p_k.add_argument("--y", type=float, required=True, help="argument (> 0)")
    p_k.add_argument("--format", choices=("human", "full"), default="human")
    p_b = spec_sub.add_parser("bounds", help="two-sided envelope at (eps, y)")
    p_b.add_argument("--eps", type=float, required=True)
    p_b.add_argument("--y", type=float, required=True)
    p_w = spec_sub.add_parser("whittaker", help="radial mode value")
    p_w.add_argument("--s", type=float, required=True, help="spectral parameter in [1/2, 1]")
    p_w.add_argument("--n", type=int, required=True, help="nonzero mode index")
    p_w.add_argument("--y", type=float, required=True)
    p_w.add_argument("--format", choices=("human", "full"), default="human")

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=("cusp", "collar", "tail", "nodal", "all"))
    p_verify.add_argument("--out-dir", help="directory for CSV/JSON reports")
    p_verify.add_argument("--config", help="key = value configuration file")
    p_verify.add_argument("--lambda", dest="lam", type=float, default=0.16)
    p_verify.add_argument("--lgamma", type=float, action="append",
                          help="core length (repeatable)")
    p_verify.add_argument("--eps", type=float, default=0.1)
    p_verify.add_argument("--eta", type=float, default=0.09)
    p_verify.add_argument("--jmax", type=int, default=4)
    p_verify.add_argument("--input", help="decomposition file for the nodal suite")

    p_sweep = sub.add_parser("sweep", help="emit a sweep as CSV")
    sweep_sub = p_sweep.add_subparsers(dest="which", required=True)
    p_deg = sweep_sub.add_parser("degeneration", help="metric/potential limit errors")
    p_deg.add_argument("--l", required=True, help="comma-separated reduced lengths")
    p_deg.add_argument("--r", help="comma-separated shifted radii (default 0)")
    p_deg.add_argument("--j", type=int, default=1)
    p_deg.add_argument("--out")
    p_con = sweep_sub.add_parser("constants", help="ratio constants along a threshold grid")
    p_con.add_argument("--eps", required=True, help="comma-separated thresholds")
    p_con.add_argument("--eta", type=float, default=0.09)
    p_con.add_argument("--lgamma", type=float, default=1e-3)
    p_con.add_argument("--eps0", type=float, default=0.5)
    p_con.add_argument("--out")
    p_tr = sweep_sub.add_parser("tail-ratio", help="cusp tail-ratio grid sweep")
    p_tr.add_argument("--b", help="comma-separated split heights")
    p_tr.add_argument("--nmax", type=int, default=8)
    p_tr.add_argument("--out")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "lgamma", None) is None and args.command == "verify":
        args.lgamma = [1e-2, 1e-3]
    try:
        get_profile()  # validates the environment override early
        if args.command == "specfun":
            return _cmd_specfun(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        raise ValueError(f"unknown command {args.command!r}")
    except (QuadratureError, ModeSolveError, MassComputationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
