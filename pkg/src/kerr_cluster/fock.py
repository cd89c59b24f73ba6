"""Brute-force number-basis model of the probe.

Used only to certify the probe-label model and the homodyne kernel: the probe
is a truncated Fock vector, the cross-Kerr interaction is the exact diagonal
phase ``exp(i theta n_signal n)``, and quadrature wavefunctions are built from
normalized Hermite functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .elements import KerrSite, apply_cross_kerr
from .homodyne import outcome_density
from .state import BasisTerm, HybridState, PolLabel

TRUNCATION_TOL = 1e-10


class TruncationError(ValueError):
    """The Fock cutoff is too small for the requested coherent amplitude."""


@dataclass(frozen=True)
class FockVector:
    amps: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def overlap(self, other: "FockVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


def recommended_cutoff(alpha: float) -> int:
    a = abs(alpha)
    return int(math.ceil(a * a + 8 * a + 20))


def coherent_fock(alpha: complex, N: int) -> FockVector:
    """Coherent state ``|alpha>`` on number states ``0..N``."""
    if N < 1:
        raise ValueError("cutoff N must be >= 1")
    n = np.arange(N + 1)
    r = abs(alpha)
    if r == 0:
        amps = np.zeros(N + 1, dtype=complex)
        amps[0] = 1.0
        return FockVector(amps)
    log_mod = -r * r / 2 + n * math.log(r) - 0.5 * gammaln(n + 1)
    amps = np.exp(log_mod) * np.exp(1j * n * np.angle(alpha))
    return FockVector(amps)


def kerr_apply(probe: FockVector, n_signal: int, theta: float) -> FockVector:
    n = np.arange(probe.dim)
    return FockVector(probe.amps * np.exp(1j * theta * n_signal * n))


def hermite_functions(x, N: int) -> np.ndarray:
    """Quadrature eigenfunctions ``h_n(x)``, ``n = 0..N``, shape ``(N+1, len(x))``.

    Oscillator eigenfunctions in ``q = x / sqrt(2)``, rescaled by ``2^(-1/4)``
    so they are orthonormal in ``x``.
    """
    q = np.atleast_1d(np.asarray(x, dtype=float)) / math.sqrt(2)
    out = np.empty((N + 1, q.size))
    out[0] = math.pi ** -0.25 * np.exp(-q * q / 2)
    if N >= 1:
        out[1] = math.sqrt(2) * q * out[0]
    for n in range(1, N):
        out[n + 1] = math.sqrt(2 / (n + 1)) * q * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out * 2 ** -0.25


def quadrature_wavefunction(probe: FockVector, x):
    psi = probe.amps @ hermite_functions(x, probe.dim - 1)
    return complex(psi[0]) if np.ndim(x) == 0 else psi


def fock_entangler_density(alpha: float, theta: float, N: int, x) -> np.ndarray:
    """Homodyne density after one entangler on ``|+>|+>``, in full Fock space."""
    probe0 = coherent_fock(alpha, N)
    mass = probe0.norm() ** 2
    if 1 - mass > TRUNCATION_TOL:
        raise TruncationError(f"cutoff {N} loses {1 - mass:.3g} of |{alpha}>")
    dens = np.zeros(np.size(x))
    for pols in ("HH", "HV", "VH", "VV"):
        probe = probe0
        # First photon's H arm kicks +theta, second photon's H arm -theta.
        probe = kerr_apply(probe, int(pols[0] == "H"), theta)
        probe = kerr_apply(probe, int(pols[1] == "H"), -theta)
        dens += 0.25 * np.abs(quadrature_wavefunction(probe, np.atleast_1d(x))) ** 2
    return dens


def validate_phase_label_model(alpha: float, theta: float, N: int | None = None,
                               grid_points: int = 401) -> float:
    """Max deviation between the Fock-space and probe-label homodyne densities."""
    N = recommended_cutoff(alpha) if N is None else N
    lo = 2 * alpha * math.cos(theta) - 8
    hi = 2 * alpha + 8
    x = np.linspace(lo, hi, grid_points)
    fock = fock_entangler_density(alpha, theta, N, x)

    terms = tuple(BasisTerm(p, 0, 0.5 + 0j) for p in ("HH", "HV", "VH", "VV"))
    state = HybridState(2, alpha, theta, terms)
    state = apply_cross_kerr(state, KerrSite(0, PolLabel.H, +1))
    state = apply_cross_kerr(state, KerrSite(1, PolLabel.H, -1))
    return float(np.max(np.abs(fock - outcome_density(state, x))))
