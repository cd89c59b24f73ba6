"""EPR entanglers and the two four-photon generation circuits.

Photons 1-4 live on modes 0-3.  Each entangler uses a fresh coherent probe:
the two Kerr sites (first mode H kicks +theta, second mode H kicks -theta)
leave even-parity strings at probe label 0 and odd-parity strings at +-1.
After the homodyne measurement an odd outcome is corrected by cancelling the
relative phase on the first mode and flipping the second mode.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .elements import (
    R_MINUS_45,
    KerrSite,
    apply_bit_flip,
    apply_cross_kerr_sites,
    apply_phase_shifter,
    apply_rotation,
)
from .homodyne import (
    HomodyneOutcome,
    Parity,
    collapse,
    make_outcome,
    sample_branch_x,
)
from .state import (
    DimensionMismatchError,
    HybridState,
    PolLabel,
    PolState,
    check_probe_parameters,
    fidelity,
    from_pairs,
    new_plus_product,
)


class Circuit(str, enum.Enum):
    CHI = "chi"
    CLUSTER = "cluster"


@dataclass(frozen=True)
class CircuitOptions:
    """Knobs for a single shot.

    ``force_parity`` and ``force_x`` hold one entry per entangler; ``None``
    leaves that entangler to sample.  A forced parity projects the probe onto
    that branch exactly (an ideal parity measurement); a forced ``x`` skips
    sampling the quadrature.
    """

    feed_forward: bool = True
    force_parity: Sequence[Optional[Parity]] = (None, None, None)
    force_x: Sequence[Optional[float]] = (None, None, None)


@dataclass(frozen=True)
class EntanglerRecord:
    mode_pair: tuple[int, int]
    outcome: HomodyneOutcome
    corrections: tuple[tuple, ...]

    @property
    def misclassified(self) -> bool:
        return self.outcome.misclassified

    def to_dict(self) -> dict:
        return {
            "modes": list(self.mode_pair),
            "x": self.outcome.x,
            "parity": self.outcome.parity.value,
            "misclassified": self.misclassified,
            "phi": self.outcome.phi,
            "corrections": [list(c) for c in self.corrections],
        }


@dataclass(frozen=True)
class RunRecord:
    circuit: Circuit
    entangler_records: tuple[EntanglerRecord, ...]
    final_state: PolState
    fidelity_to_target: float
    heralded: bool = True

    @property
    def any_misclassified(self) -> bool:
        return any(r.misclassified for r in self.entangler_records)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "circuit": self.circuit.value,
            "entanglers": [r.to_dict() for r in self.entangler_records],
            "final_state": [
                {"pols": t.pols, "re": t.amp.real, "im": t.amp.imag}
                for t in self.final_state.terms
            ],
            "fidelity": self.fidelity_to_target,
            "heralded": self.heralded,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def target_cluster() -> PolState:
    return PolState.from_amplitudes(
        {"HHHH": 0.5, "HHVV": 0.5, "VVHH": 0.5, "VVVV": -0.5}
    )


def target_chi() -> PolState:
    return PolState.from_amplitudes(
        {"HHHH": 0.5, "VVHH": 0.5, "HVVV": 0.5, "VHVV": 0.5}
    )


def chi_to_cluster(state: PolState) -> PolState:
    """R(-45) on photons 1 and 2 maps |chi> onto |cluster>."""
    if state.n_modes != 4:
        raise DimensionMismatchError("chi_to_cluster needs a 4-mode state")
    return apply_rotation(apply_rotation(state, 0, R_MINUS_45), 1, R_MINUS_45)


def to_hybrid(state: PolState, alpha: float, theta: float) -> HybridState:
    """Attach a fresh probe ``|alpha>`` to every term."""
    base = HybridState(state.n_modes, alpha, theta, ())
    return from_pairs(base, (((t.pols, 0), t.amp) for t in state.terms),
                      ordered=True)


def entangler_kerr(state: HybridState, a: int, b: int) -> HybridState:
    """The two Kerr interactions of one entangler (before the homodyne)."""
    if a == b:
        raise ValueError("entangler needs two distinct modes")
    if any(t.probe_k != 0 for t in state.terms):
        raise ValueError("entangler expects a fresh probe (all probe_k == 0)")
    return apply_cross_kerr_sites(
        state, (KerrSite(a, PolLabel.H, +1), KerrSite(b, PolLabel.H, -1))
    )


def entangler_measure(
    state: HybridState,
    a: int,
    b: int,
    rng: np.random.Generator,
    feed_forward: bool = True,
    target: Parity = Parity.EVEN,
    force_parity: Parity | None = None,
    force_x: float | None = None,
) -> tuple[HybridState, EntanglerRecord]:
    """Homodyne the probe, then steer the pair ``(a, b)`` to ``target`` parity.

    For an EVEN target, an odd outcome gets the phase correction plus a flip
    of ``b``.  For an ODD target, an odd outcome gets the phase correction
    only and an even outcome gets the flip of ``b``.
    """
    if force_x is None:
        x, branch = sample_branch_x(state, rng, force_parity)
    else:
        x, branch = force_x, force_parity
    outcome = make_outcome(state, x, branch)
    if force_parity is not None:
        outcome = HomodyneOutcome(outcome.x, force_parity, outcome.phi,
                                  outcome.p_even_branch, force_parity)
    pol = collapse(state, x, force_parity)

    corrections = []
    if feed_forward and outcome.parity is Parity.ODD:
        # Both phase corrections act on mode a; one phase shifter does the two.
        pol = apply_phase_shifter(pol, a, -outcome.phi, outcome.phi)
        corrections += [("phase", a, "H", -outcome.phi), ("phase", a, "V", outcome.phi)]
    if feed_forward:
        flip = outcome.parity is not target
    else:
        # The odd-target flip is the circuit's choice of three-photon state,
        # not a correction, so it stays on the post-selected path.
        flip = target is Parity.ODD and outcome.parity is Parity.EVEN
    if flip:
        pol = apply_bit_flip(pol, b)
        corrections.append(("flip", b))
    record = EntanglerRecord((a, b), outcome, tuple(corrections))
    return to_hybrid(pol, state.alpha, state.theta), record


def epr_entangle(
    state: HybridState,
    a: int,
    b: int,
    rng: np.random.Generator,
    feed_forward: bool = True,
    **kwargs,
) -> tuple[HybridState, EntanglerRecord]:
    """One full entangler: Kerr sites, homodyne, feed-forward."""
    return entangler_measure(entangler_kerr(state, a, b), a, b, rng, feed_forward, **kwargs)


def _entangle(state, a, b, rng, options: CircuitOptions, i: int, target=Parity.EVEN):
    return epr_entangle(state, a, b, rng, options.feed_forward, target=target,
                        force_parity=options.force_parity[i], force_x=options.force_x[i])


def prepare_chi(alpha: float, theta: float, rng: np.random.Generator,
                options: CircuitOptions | None = None):
    """Run the chi circuit up to (not including) the third homodyne.

    Returns the hybrid state after the third entangler's Kerr sites and the
    records of the first two entanglers.
    """
    options = options or CircuitOptions()
    check_probe_parameters(alpha, theta)
    state = new_plus_product(4, alpha, theta)
    state, r1 = _entangle(state, 0, 1, rng, options, 0)
    state, r2 = _entangle(state, 1, 2, rng, options, 1)
    for mode in (0, 1, 2):
        state = apply_rotation(state, mode, R_MINUS_45)
    return entangler_kerr(state, 2, 3), [r1, r2]


def prepare_cluster(alpha: float, theta: float, rng: np.random.Generator,
                    options: CircuitOptions | None = None):
    """Cluster-circuit counterpart of :func:`prepare_chi`."""
    options = options or CircuitOptions()
    check_probe_parameters(alpha, theta)
    state = new_plus_product(4, alpha, theta)
    state, r1 = _entangle(state, 0, 1, rng, options, 0)
    state, r2 = _entangle(state, 1, 2, rng, options, 1, target=Parity.ODD)
    state = apply_rotation(state, 2, R_MINUS_45)
    return entangler_kerr(state, 2, 3), [r1, r2]


def _finish(circuit: Circuit, hybrid: HybridState, records, rng, options, target):
    options = options or CircuitOptions()
    state, r3 = entangler_measure(
        hybrid, 2, 3, rng, options.feed_forward,
        force_parity=options.force_parity[2], force_x=options.force_x[2],
    )
    records = tuple(records) + (r3,)
    final = from_pairs(PolState(4, ()), (((t.pols,), t.amp) for t in state.terms),
                       ordered=True)
    heralded = options.feed_forward or all(
        r.outcome.parity is Parity.EVEN for r in records
    )
    return RunRecord(circuit, records, final, fidelity(final, target), heralded)


def run_chi(alpha: float, theta: float, rng: np.random.Generator,
            options: CircuitOptions | None = None) -> RunRecord:
    hybrid, records = prepare_chi(alpha, theta, rng, options)
    return _finish(Circuit.CHI, hybrid, records, rng, options, target_chi())


def run_cluster(alpha: float, theta: float, rng: np.random.Generator,
                options: CircuitOptions | None = None) -> RunRecord:
    hybrid, records = prepare_cluster(alpha, theta, rng, options)
    return _finish(Circuit.CLUSTER, hybrid, records, rng, options, target_cluster())


def run_circuit(circuit: Circuit | str, alpha: float, theta: float,
                rng: np.random.Generator, options: CircuitOptions | None = None) -> RunRecord:
    circuit = Circuit(circuit)
    runner = run_chi if circuit is Circuit.CHI else run_cluster
    return runner(alpha, theta, rng, options)
