"""Command-line frontend.

Subcommands write CSV or JSON to ``--output`` (``-`` for stdout). Exit codes:
0 on success, 1 when a computation rejects its inputs or fails, 2 for usage
errors (unknown flags, malformed numbers, unknown suite names).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import interference as itf
from . import io, kaon, pathsum, spectral, verify
from .exceptions import BievolveError, InvalidInputError
from .linops import hermitian_eigendecomposition, kernel_projector

PROFILE_HEADER = ["x", "re", "im", "log_abs", "norm_abs", "quad_approx"]
PATHSUM_HEADER = ["n", "norm", "log_norm", "binomial_log"]
ATTRACTOR_HEADER = ["N", "h_residual", "zero_energy_fidelity"]
DENSITY_PEAK = 0.5


class UsageError(Exception):
    pass


def _int_at_least(lo):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {value}")
        return value

    return parse


def _finite(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def thread_count() -> int:
    raw = os.environ.get("BIEVOLVE_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise UsageError(f"BIEVOLVE_THREADS must be a positive integer, got {raw!r}")
    return value


# -- interference -----------------------------------------------------------------


def _x_range(args):
    if args.tau is None:
        if args.lambda_min is not None or args.lambda_max is not None or args.lambda_sd is not None:
            raise UsageError("--lambda-min/--lambda-max/--lambda-sd need --tau")
        if args.x_min is None or args.x_max is None:
            raise UsageError("give --x-min and --x-max (or --tau with --lambda-min/--lambda-max)")
        return args.x_min, args.x_max, args.lambda_sd_x
    if args.tau <= 0:
        raise UsageError("--tau must be positive")
    if args.lambda_min is None or args.lambda_max is None:
        raise UsageError("--tau needs --lambda-min and --lambda-max")
    if args.x_min is not None or args.x_max is not None:
        raise UsageError("give either --x-min/--x-max or --lambda-min/--lambda-max, not both")
    sd = args.lambda_sd_x
    if args.lambda_sd is not None:
        sd = itf.phase_argument(args.tau, args.lambda_sd)
    return itf.phase_argument(args.tau, args.lambda_min), itf.phase_argument(args.tau, args.lambda_max), sd


def profile_rows(profile, density=None):
    for i, x in enumerate(profile.x):
        z = profile.value[i]
        row = [x, z.real, z.imag, profile.log_abs[i], profile.norm_abs[i], profile.quad_approx[i]]
        if density is not None:
            row.append(density[i])
        yield row


def cmd_interference(args) -> int:
    x_min, x_max, sd_x = _x_range(args)
    if args.with_density and (sd_x is None or sd_x <= 0):
        raise UsageError("--with-density needs a positive --lambda-sd-x (or --lambda-sd with --tau)")
    if not x_min < x_max:
        raise InvalidInputError(f"need x_min < x_max, got {x_min} and {x_max}")
    xs = np.linspace(x_min, x_max, args.steps)
    profile = itf.interference_profile(args.m, args.n, xs, normalize=args.normalize, n_jobs=thread_count())
    header = list(PROFILE_HEADER)
    density = None
    if args.with_density:
        # eigenvalue density of the ensemble, a Gaussian of width lambda_SD, drawn with peak 0.5
        density = DENSITY_PEAK * np.exp(-0.5 * (xs / sd_x) ** 2)
        profile.density = density
        header.append("density")
    io.write_text(args.output, io.csv_text(header, profile_rows(profile, density)))
    return 0


# -- regime ---------------------------------------------------------------------------


def cmd_regime(args) -> int:
    if (args.n is None) == (args.n_fraction is None):
        raise UsageError("give exactly one of --n and --n-fraction")
    model = spectral.EnsembleModel(
        f=args.f, total_particles=args.total_particles, lambda1=args.lambda1, tau=args.tau
    )
    n = args.n if args.n is not None else args.n_fraction * args.N
    report = spectral.regime_classify(
        model,
        args.N,
        n,
        broad_factor=args.broad_factor,
        narrow_factor=args.narrow_factor,
        sigma_multiplier=args.sigma_multiplier,
    )
    io.write_text(args.output, io.dumps(report.to_dict()))
    return 0


# -- kaon -------------------------------------------------------------------------------


def cmd_kaon(args) -> int:
    params = kaon.KaonParams(
        delta_m=args.delta_m,
        delta_gamma=args.delta_gamma,
        eps_abs=args.eps_abs,
        eps_arg=args.eps_arg,
        theta=args.theta,
    )
    io.write_text(args.output, io.dumps(kaon.kaon_report(params)))
    return 0


# -- pathsum ----------------------------------------------------------------------------


def cmd_pathsum(args) -> int:
    hf = io.read_matrix(args.hf)
    hb = io.read_matrix(args.hb)
    psi0 = io.read_state(args.psi0)
    bh = pathsum.BiHamiltonian(hf, hb, args.tau, args.theta)
    result = pathsum.symmetric_evolve(bh, psi0, args.N)
    condition = pathsum.check_nonzero_condition(bh, psi0)

    logs = result.log_norms()
    binom = result.binomial_logs()
    rows = [[n, result.norms[n], logs[n], binom[n]] for n in range(args.N + 1)]
    io.write_text(args.output, io.csv_text(PATHSUM_HEADER, rows))
    if args.state_output:
        io.write_text(args.state_output, io.dumps(io.state_to_json(result.total)))
    holds = "holds" if condition <= 1e-12 else "fails"
    print(f"kernel weight |Pi(0) psi0|/|psi0| = {io.fmt(condition)} (nonzero-eigenvalue condition {holds})", file=sys.stderr)
    return 0


# -- attractor --------------------------------------------------------------------------


def attractor_trace(h, psi0, tau, n_max, stride=1):
    """Rows ``(N, |H psi_N| / |psi_N|, |Pi(0) psi_N|^2 / |psi_N|^2)``."""
    decomp = hermitian_eigendecomposition(h)
    p0 = kernel_projector(decomp)
    scale = max(float(np.max(np.abs(decomp.eigenvalues))), 1e-300)
    rows = []
    for big_n in range(0, n_max + 1, stride):
        state = pathsum.attractor_evolve(h, psi0, tau, big_n).state
        norm = np.linalg.norm(state)
        if norm == 0.0:
            rows.append([big_n, math.nan, math.nan])
            continue
        residual = np.linalg.norm(h @ state) / (norm * scale)
        fidelity = np.linalg.norm(p0 @ state) ** 2 / norm**2
        rows.append([big_n, residual, fidelity])
    return rows


def cmd_attractor(args) -> int:
    if (args.h is None) == (args.energy is None):
        raise UsageError("give exactly one of --h and --energy")
    if args.h is not None:
        h = io.read_matrix(args.h)
    else:
        h = np.diag([0.0, args.energy]).astype(complex)
    if args.psi0 is not None:
        psi0 = io.read_state(args.psi0)
    else:
        psi0 = np.ones(h.shape[0], dtype=complex) / math.sqrt(h.shape[0])
    rows = attractor_trace(h, psi0, args.tau, args.N, args.stride)
    io.write_text(args.output, io.csv_text(ATTRACTOR_HEADER, rows))
    return 0


# -- verify -----------------------------------------------------------------------------


def cmd_verify(args) -> int:
    summary = verify.run(args.seed, args.suite)
    io.write_text(args.output, io.dumps(summary))
    for prop in summary["properties"]:
        if not prop["passed"]:
            print(f"FAILED [{prop['suite']}] {prop['property']}: max_error={io.fmt(prop['max_error'])}", file=sys.stderr)
    return 0 if summary["passed"] else 1


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bievolve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interference", help="sample I_{m,n} on an x = tau^2 lambda grid (CSV)")
    p.add_argument("--m", type=_int_at_least(0), required=True)
    p.add_argument("--n", type=_int_at_least(0), required=True)
    p.add_argument("--x-min", type=_finite)
    p.add_argument("--x-max", type=_finite)
    p.add_argument("--steps", type=_int_at_least(2), required=True)
    p.add_argument("--normalize", action="store_true", help="divide value and quad_approx by C(m+n, n)")
    p.add_argument("--with-density", action="store_true", help="add a density column (Gaussian, peak 0.5)")
    p.add_argument("--lambda-sd-x", type=_finite, help="density width in x units")
    p.add_argument("--tau", type=_finite, help="step size for converting lambda to x = tau^2 lambda")
    p.add_argument("--lambda-min", type=_finite)
    p.add_argument("--lambda-max", type=_finite)
    p.add_argument("--lambda-sd", type=_finite, help="density width in lambda units (needs --tau)")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_interference)

    p = sub.add_parser("regime", help="classify the interference regime of an ensemble (JSON)")
    p.add_argument("--f", type=_finite, required=True, help="fraction of particles that violate T")
    p.add_argument("--tau", type=_finite, default=spectral.PLANCK_TIME)
    p.add_argument("--N", type=_finite, required=True)
    p.add_argument("--n", type=_finite)
    p.add_argument("--n-fraction", type=_finite)
    p.add_argument("--total-particles", type=_finite, default=spectral.TOTAL_PARTICLES)
    p.add_argument("--lambda1", type=_finite, default=spectral.LAMBDA1)
    p.add_argument("--broad-factor", type=_finite, default=spectral.BROAD_FACTOR)
    p.add_argument("--narrow-factor", type=_finite, default=spectral.NARROW_FACTOR)
    p.add_argument("--sigma-multiplier", type=_finite, default=1.0)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("kaon", help="neutral-kaon commutator eigenvalue estimate (JSON)")
    p.add_argument("--delta-m", type=_finite, default=kaon.DELTA_M)
    p.add_argument("--delta-gamma", type=_finite, default=kaon.DELTA_GAMMA)
    p.add_argument("--eps-abs", type=_finite, default=kaon.EPS_ABS)
    p.add_argument("--eps-arg", type=_finite, default=kaon.EPS_ARG, help="radians")
    p.add_argument("--theta", type=_finite, default=0.0)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_kaon)

    p = sub.add_parser("pathsum", help="per-n path-sum norms (CSV) and total state (JSON)")
    p.add_argument("--hf", required=True, help="matrix JSON")
    p.add_argument("--hb", required=True, help="matrix JSON")
    p.add_argument("--psi0", required=True, help="vector JSON")
    p.add_argument("--N", type=_int_at_least(0), required=True)
    p.add_argument("--tau", type=_finite, required=True)
    p.add_argument("--theta", type=_finite, default=0.0)
    p.add_argument("--output", default="-", help="per-n CSV")
    p.add_argument("--state-output", help="total-state vector JSON")
    p.set_defaults(func=cmd_pathsum)

    p = sub.add_parser("attractor", help="convergence trace of T-invariant symmetric evolution (CSV)")
    p.add_argument("--h", help="matrix JSON")
    p.add_argument("--energy", type=_finite, help="use H = diag(0, E)")
    p.add_argument("--psi0", help="vector JSON (default: uniform superposition)")
    p.add_argument("--tau", type=_finite, required=True)
    p.add_argument("--N", type=_int_at_least(0), required=True)
    p.add_argument("--stride", type=_int_at_least(1), default=1)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("verify", help="run randomized property suites (JSON)")
    p.add_argument("--seed", type=_int_at_least(0), default=0)
    p.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) >= 2**64:
        parser.error("--seed must fit in 64 bits")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except BievolveError as exc:
        print(f"bievolve: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"bievolve: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
