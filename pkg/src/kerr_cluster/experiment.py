"""Monte-Carlo runner: many independent shots of one circuit, aggregated.

Shot ``i`` draws from its own stream ``PCG64(SeedSequence(seed, spawn_key=(i,)))``
so results do not depend on execution order or on the number of workers.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .circuits import Circuit, CircuitOptions, RunRecord, run_circuit
from .homodyne import Parity, error_probability, peak_separation
from .state import InvalidParameterError, check_probe_parameters

DEFAULT_ALPHA = 400.0
DEFAULT_THETA = 0.1


@dataclass(frozen=True)
class ExperimentConfig:
    circuit: Circuit = Circuit.CHI
    alpha: float = DEFAULT_ALPHA
    theta: float = DEFAULT_THETA
    shots: int = 10_000
    seed: int = 0
    feed_forward: bool = True
    output_path: str | None = None
    format: str = "json"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "circuit", Circuit(self.circuit))
        check_probe_parameters(self.alpha, self.theta)
        if self.shots < 1:
            raise InvalidParameterError("shots must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError("seed must be a 64-bit unsigned integer")
        if self.format not in ("json", "csv"):
            raise InvalidParameterError(f"unknown format {self.format!r}")


@dataclass
class ExperimentStats:
    shots: int
    heralded_success_fraction: float
    true_fidelity_mean: float | None
    misclassification_rate_empirical: float
    misclassification_rate_analytic: float
    parity_histogram: list[dict[str, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def shot_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def run_shot(config: ExperimentConfig, index: int) -> RunRecord:
    options = CircuitOptions(feed_forward=config.feed_forward)
    return run_circuit(config.circuit, config.alpha, config.theta,
                       shot_rng(config.seed, index), options)


def _summarize(record: RunRecord) -> tuple:
    return (
        tuple(r.outcome.parity is Parity.EVEN for r in record.entangler_records),
        sum(r.misclassified for r in record.entangler_records),
        record.fidelity_to_target,
        record.heralded,
    )


def _run_chunk(config: ExperimentConfig, start: int, stop: int) -> list[tuple]:
    return [_summarize(run_shot(config, i)) for i in range(start, stop)]


def _chunks(shots: int, n: int) -> list[tuple[int, int]]:
    size = math.ceil(shots / n)
    return [(s, min(s + size, shots)) for s in range(0, shots, size)]


def run_experiment(config: ExperimentConfig) -> ExperimentStats:
    if config.workers > 1 and config.shots > 1:
        spans = _chunks(config.shots, 4 * config.workers)
        with ProcessPoolExecutor(config.workers) as pool:
            parts = pool.map(_run_chunk, itertools.repeat(config),
                             [a for a, _ in spans], [b for _, b in spans])
            summaries = [s for part in parts for s in part]
    else:
        summaries = _run_chunk(config, 0, config.shots)
    return aggregate(config, summaries)


def aggregate(config: ExperimentConfig, summaries: list[tuple]) -> ExperimentStats:
    n = len(summaries)
    hist = [{"even": 0, "odd": 0} for _ in range(3)]
    misclassified = 0
    fidelities = []
    for evens, n_mis, fid, heralded in summaries:
        for h, is_even in zip(hist, evens):
            h["even" if is_even else "odd"] += 1
        misclassified += n_mis
        if heralded:
            fidelities.append(fid)
    return ExperimentStats(
        shots=n,
        heralded_success_fraction=len(fidelities) / n,
        true_fidelity_mean=math.fsum(fidelities) / len(fidelities) if fidelities else None,
        misclassification_rate_empirical=misclassified / (3 * n),
        misclassification_rate_analytic=error_probability(config.alpha, config.theta),
        parity_histogram=hist,
    )


def sweep(alphas, thetas, shots: int, seed: int, **kwargs) -> list[tuple[ExperimentConfig, ExperimentStats]]:
    """Run every ``(alpha, theta)`` pair with the same seed."""
    rows = []
    for alpha, theta in itertools.product(alphas, thetas):
        config = ExperimentConfig(alpha=alpha, theta=theta, shots=shots, seed=seed, **kwargs)
        rows.append((config, run_experiment(config)))
    return rows


CSV_FIELDS = [
    "circuit", "alpha", "theta", "x_d", "seed", "feed_forward", "shots",
    "heralded_success_fraction", "true_fidelity_mean",
    "misclassification_rate_empirical", "misclassification_rate_analytic",
] + [f"entangler{i}_{p}" for i in (1, 2, 3) for p in ("even", "odd")]


def _csv_row(config: ExperimentConfig, stats: ExperimentStats) -> dict:
    row = {
        "circuit": config.circuit.value,
        "alpha": repr(config.alpha),
        "theta": repr(config.theta),
        "x_d": repr(peak_separation(config.alpha, config.theta)),
        "seed": config.seed,
        "feed_forward": int(config.feed_forward),
        "shots": stats.shots,
        "heralded_success_fraction": repr(stats.heralded_success_fraction),
        "true_fidelity_mean": "" if stats.true_fidelity_mean is None else repr(stats.true_fidelity_mean),
        "misclassification_rate_empirical": repr(stats.misclassification_rate_empirical),
        "misclassification_rate_analytic": repr(stats.misclassification_rate_analytic),
    }
    for i, h in enumerate(stats.parity_histogram, start=1):
        row[f"entangler{i}_even"] = h["even"]
        row[f"entangler{i}_odd"] = h["odd"]
    return row


def stats_to_csv(rows: list[tuple[ExperimentConfig, ExperimentStats]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for config, stats in rows:
        writer.writerow(_csv_row(config, stats))
    return buf.getvalue()


def stats_to_json(config: ExperimentConfig, stats: ExperimentStats) -> str:
    doc = {
        "schema": 1,
        "circuit": config.circuit.value,
        "alpha": config.alpha,
        "theta": config.theta,
        "seed": config.seed,
        "feed_forward": config.feed_forward,
        **stats.to_dict(),
    }
    return json.dumps(doc, indent=2) + "\n"
