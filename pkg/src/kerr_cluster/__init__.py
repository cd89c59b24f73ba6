"""Simulator for four-photon chi and cluster states built from cross-Kerr EPR entanglers."""

from .circuits import (
    Circuit,
    CircuitOptions,
    EntanglerRecord,
    RunRecord,
    chi_to_cluster,
    epr_entangle,
    prepare_chi,
    prepare_cluster,
    run_chi,
    run_cluster,
    target_chi,
    target_cluster,
)
from .elements import KerrSite, apply_bit_flip, apply_cross_kerr, apply_pol_phase, apply_rotation
from .homodyne import (
    HomodyneOutcome,
    Parity,
    classify_parity,
    collapse,
    error_probability,
    outcome_density,
    phase_phi,
    quadrature_amplitude,
    sample_outcome,
)
from .state import (
    BasisTerm,
    HybridState,
    PolLabel,
    PolState,
    coherent_overlap,
    fidelity,
    new_plus_product,
    normalize,
    simplify,
)

__version__ = "0.1.0"
