"""Command line interface.

Four subcommands: verify (JSON report of the full check registry),
trajectory (CSV of the metric quadrature trajectory), disentangle
(factor coefficients for one parameter set), demo-divergence (CSV of
window norms for the naive and metric ground states).

Exit codes: 0 all checks pass, 1 at least one check failed (the report
is still written), 2 configuration error, 3 degenerate or unrepresentable
input. The IHOX_SEED environment variable overrides --seed.
"""

import argparse
import os
import sys

from .errors import (
    BranchCut,
    ConfigError,
    DegenerateDisentangle,
    DegenerateState,
    SignUnresolved,
    TruncationInadequate,
)
from .report import (
    RunConfig,
    disentangle_lines,
    divergence_table,
    format_csv,
    run_verification,
    trajectory_table,
)

_DEGENERATE = (
    BranchCut,
    DegenerateDisentangle,
    DegenerateState,
    SignUnresolved,
    TruncationInadequate,
)


def _add_config_args(p):
    p.add_argument("--n-trunc", type=int, default=128, help="Fock truncation")
    p.add_argument(
        "--sub-block",
        type=int,
        default=None,
        help="certified block size (default n_trunc/4)",
    )
    p.add_argument("--tol-exact", type=float, default=1e-10)
    p.add_argument("--tol-evolution", type=float, default=1e-6)
    p.add_argument("--tol-quadrature", type=float, default=1e-3)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--alpha-re", type=float, default=0.5)
    p.add_argument("--alpha-im", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument(
        "--unsafe",
        action="store_true",
        help="allow omega * t_max beyond the certified evolution window",
    )


def _config_from(args):
    seed = args.seed
    env_seed = os.environ.get("IHOX_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ConfigError("IHOX_SEED must be an integer, got %r" % env_seed)
    return RunConfig(
        n_trunc=args.n_trunc,
        sub_block=args.sub_block,
        tol_exact=args.tol_exact,
        tol_evolution=args.tol_evolution,
        tol_quadrature=args.tol_quadrature,
        hbar=args.hbar,
        mass=args.mass,
        omega=args.omega,
        alpha=complex(args.alpha_re, args.alpha_im),
        t_max=args.t_max,
        dt=args.dt,
        seed=seed,
        unsafe=args.unsafe,
    )


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "wb") as fh:
            fh.write(text.encode("utf-8"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ihox",
        description="certify the similarity map between the harmonic and "
        "inverted oscillators by truncated matrix computation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the full check registry")
    _add_config_args(p_verify)
    p_verify.add_argument("--output", default=None, help="write JSON here")

    p_traj = sub.add_parser("trajectory", help="metric quadrature trajectory CSV")
    _add_config_args(p_traj)
    p_traj.add_argument("--output", default=None, help="write CSV here")

    p_dis = sub.add_parser("disentangle", help="factor one combined exponential")
    p_dis.add_argument("--eps", type=float, required=True)
    p_dis.add_argument("--mu-plus", type=float, required=True)
    p_dis.add_argument("--mu-minus", type=float, required=True)
    p_dis.add_argument("--output", default=None)

    p_div = sub.add_parser(
        "demo-divergence", help="window norms of the two candidate ground states"
    )
    p_div.add_argument("--box-l", type=float, default=8.0)
    p_div.add_argument("--grid-n", type=int, default=2001)
    p_div.add_argument("--hbar", type=float, default=1.0)
    p_div.add_argument("--mass", type=float, default=1.0)
    p_div.add_argument("--omega", type=float, default=1.0)
    p_div.add_argument("--output", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            cfg = _config_from(args)
            report = run_verification(cfg)
            _emit(report.to_json(), args.output)
            return 0 if report.passed else 1
        if args.command == "trajectory":
            cfg = _config_from(args)
            cols, rows = trajectory_table(cfg)
            _emit(format_csv(cols, rows), args.output)
            return 0
        if args.command == "disentangle":
            lines = disentangle_lines(args.eps, args.mu_plus, args.mu_minus)
            _emit("\n".join(lines) + "\n", args.output)
            return 0
        if args.command == "demo-divergence":
            rows = divergence_table(
                box_l=args.box_l,
                grid_n=args.grid_n,
                hbar=args.hbar,
                mass=args.mass,
                omega=args.omega,
            )
            _emit(format_csv(("L", "naive_norm", "hermitian_norm"), rows),
                  args.output)
            return 0
    except ConfigError as exc:
        sys.stderr.write("config error: %s\n" % exc)
        return 2
    except _DEGENERATE as exc:
        sys.stderr.write("degenerate input: %s\n" % exc)
        return 3
    raise AssertionError("unreachable command %r" % args.command)


if __name__ == "__main__":
    sys.exit(main())
