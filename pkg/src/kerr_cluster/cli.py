"""Command-line interface: ``run``, ``sweep``, ``density`` and ``validate``."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from .circuits import Circuit
from .elements import KerrSite, apply_cross_kerr
from .experiment import (
    DEFAULT_ALPHA,
    DEFAULT_THETA,
    ExperimentConfig,
    run_experiment,
    run_shot,
    stats_to_csv,
    stats_to_json,
    sweep,
)
from .fock import (
    coherent_fock,
    quadrature_wavefunction,
    recommended_cutoff,
    validate_phase_label_model,
)
from .homodyne import outcome_density, quadrature_amplitude
from .state import InvalidParameterError, PolLabel, new_plus_product

VALIDATE_ALPHAS = (0.5, 1.0, 2.0, 4.0)
VALIDATE_THETAS = (0.1, 0.3, 0.6)


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--circuit", choices=[c.value for c in Circuit], default="chi")
    p.add_argument("--shots", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-feed-forward", dest="feed_forward", action="store_false")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes; output does not depend on this")
    p.add_argument("--format", choices=["json", "csv"], default=None,
                   help="default: from --out suffix, else json")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerr-cluster",
        description="Four-photon chi/cluster generation with cross-Kerr EPR entanglers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Monte-Carlo statistics for one circuit")
    run.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    run.add_argument("--theta", type=float, default=DEFAULT_THETA)
    run.add_argument("--records", default=None,
                     help="also write every shot's record as JSON lines")
    _add_experiment_flags(run)

    sw = sub.add_parser("sweep", help="statistics over an alpha x theta grid (CSV)")
    sw.add_argument("--alpha", type=_float_list, default=[DEFAULT_ALPHA],
                    help="comma-separated list")
    sw.add_argument("--theta", type=_float_list, default=[DEFAULT_THETA],
                    help="comma-separated list")
    _add_experiment_flags(sw)

    dens = sub.add_parser("density", help="homodyne density of one entangler (CSV)")
    dens.add_argument("--alpha", type=float, default=2.0)
    dens.add_argument("--theta", type=float, default=0.5)
    dens.add_argument("--points", type=int, default=401)
    dens.add_argument("--out", default=None)

    val = sub.add_parser("validate", help="Fock-space oracle deviation table (CSV)")
    val.add_argument("--out", default=None)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _format(args) -> str:
    if args.format:
        return args.format
    if args.out and args.out.endswith(".csv"):
        return "csv"
    return "json"


def density_table(alpha: float, theta: float, points: int = 401) -> str:
    state = new_plus_product(2, alpha, theta)
    state = apply_cross_kerr(state, KerrSite(0, PolLabel.H, +1))
    state = apply_cross_kerr(state, KerrSite(1, PolLabel.H, -1))
    x = np.linspace(2 * alpha * math.cos(theta) - 6, 2 * alpha + 6, points)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "density"])
    for xi, di in zip(x, outcome_density(state, x)):
        w.writerow([repr(float(xi)), repr(float(di))])
    return buf.getvalue()


def validate_table() -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "theta", "cutoff", "density_deviation", "kernel_deviation"])
    for alpha in VALIDATE_ALPHAS:
        for theta in VALIDATE_THETAS:
            n = recommended_cutoff(alpha)
            beta = alpha * complex(math.cos(theta), math.sin(theta))
            x = np.linspace(2 * beta.real - 8, 2 * beta.real + 8, 161)
            kernel = np.max(np.abs(quadrature_wavefunction(coherent_fock(beta, n), x)
                                   - quadrature_amplitude(x, beta)))
            w.writerow([alpha, theta, n,
                        f"{validate_phase_label_model(alpha, theta, n):.3e}",
                        f"{kernel:.3e}"])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("run", "sweep"):
            kwargs = dict(circuit=args.circuit, feed_forward=args.feed_forward,
                          workers=args.workers, format=_format(args), output_path=args.out)
            if args.command == "run":
                config = ExperimentConfig(alpha=args.alpha, theta=args.theta,
                                          shots=args.shots, seed=args.seed, **kwargs)
                stats = run_experiment(config)
                if config.format == "json":
                    _emit(stats_to_json(config, stats), args.out)
                else:
                    _emit(stats_to_csv([(config, stats)]), args.out)
                if args.records:
                    with open(args.records, "w") as fh:
                        for i in range(config.shots):
                            fh.write(run_shot(config, i).to_json() + "\n")
            else:
                rows = sweep(args.alpha, args.theta, args.shots, args.seed, **kwargs)
                _emit(stats_to_csv(rows), args.out)
        elif args.command == "density":
            _emit(density_table(args.alpha, args.theta, args.points), args.out)
        elif args.command == "validate":
            _emit(validate_table(), args.out)
    except InvalidParameterError as exc:
        parser.print_usage(sys.stderr)
        print(f"kerr-cluster: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"kerr-cluster: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
