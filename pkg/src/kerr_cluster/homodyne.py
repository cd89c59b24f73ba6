"""X-quadrature homodyne detection of the coherent probe.

Quadrature convention: ``x = a + a^dagger``, so a coherent state ``|beta>``
has the wavefunction

    <x|beta> = (2 pi)^(-1/4) exp(-(x - 2 Re beta)^2 / 4) exp(i (Im beta x - Re beta Im beta))

i.e. a unit-variance Gaussian centred at ``2 Re beta``.  A probe label ``k``
(amplitude ``alpha e^{ik theta}``) therefore produces outcomes around
``2 alpha cos(k theta)``: the zero-kick (even parity) peak sits at
``2 alpha`` and both one-kick (odd parity) peaks at ``2 alpha cos(theta)``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc
from scipy.stats import norm as _normal

from .state import CACHE_ATTR, HybridState, PolState, ZeroNormError, from_pairs, normalize

_KERNEL_NORM = (2 * math.pi) ** -0.25


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class HomodyneOutcome:
    x: float
    parity: Parity
    phi: float
    p_even_branch: float
    # Mixture component the sample was actually drawn from; None when x was
    # supplied externally.
    branch: Parity | None = None

    @property
    def misclassified(self) -> bool:
        return self.branch is not None and self.branch != self.parity


def quadrature_amplitude(x, beta: complex):
    """Coherent-state quadrature wavefunction ``<x|beta>``."""
    re, im = beta.real, beta.imag
    # Same reduction as phase_phi so feed-forward cancels the phase exactly.
    if np.ndim(x) == 0:
        phase = (im * x - re * im) % (2 * math.pi)
        return _KERNEL_NORM * math.exp(-((x - 2 * re) ** 2) / 4) * cmath.exp(1j * phase)
    x = np.asarray(x, dtype=float)
    phase = np.mod(im * x - re * im, 2 * math.pi)
    return _KERNEL_NORM * np.exp(-((x - 2 * re) ** 2) / 4) * np.exp(1j * phase)


def threshold(alpha: float, theta: float) -> float:
    """Midpoint ``x0 = alpha (1 + cos theta)`` between the two peaks."""
    return alpha * (1 + math.cos(theta))


def peak_separation(alpha: float, theta: float) -> float:
    """Distance ``x_d = 2 alpha (1 - cos theta)`` between the two peaks."""
    return 2 * alpha * (1 - math.cos(theta))


def classify_parity(x: float, alpha: float, theta: float) -> Parity:
    # Ties go to Odd.
    return Parity.EVEN if x > threshold(alpha, theta) else Parity.ODD


def phase_phi(x: float, alpha: float, theta: float) -> float:
    """Phase carried by the one-kick (+theta) component after measuring ``x``.

    Reduced to [0, 2 pi).  The (-theta) component carries the opposite phase.
    """
    re, im = alpha * math.cos(theta), alpha * math.sin(theta)
    return (im * x - re * im) % (2 * math.pi)


def error_probability(alpha: float, theta: float) -> float:
    """Probability that either branch lands on the wrong side of ``x0``."""
    return 0.5 * float(erfc(peak_separation(alpha, theta) / (2 * math.sqrt(2))))


def components(state: HybridState) -> list[tuple[int, float, float]]:
    """``(probe_k, weight, mean)`` for each probe-label group of ``state``."""
    cached = state.__dict__.get(CACHE_ATTR)
    if cached is None:
        cached = state.__dict__[CACHE_ATTR] = _components(state)
    return cached


def _components(state: HybridState) -> list[tuple[int, float, float]]:
    state.check_single_probe_label()
    weights: dict[int, float] = {}
    for t in state.terms:
        a = t.amp
        weights[t.probe_k] = weights.get(t.probe_k, 0.0) + a.real * a.real + a.imag * a.imag
    two_alpha = 2 * state.alpha
    return [(k, w, two_alpha * math.cos(k * state.theta)) for k, w in sorted(weights.items())]


def outcome_density(state: HybridState, x):
    """Probability density of the homodyne outcome ``x``."""
    x = np.asarray(x, dtype=float)
    dens = sum(w * _normal.pdf(x, loc=mu) for _, w, mu in components(state))
    return float(dens) if np.ndim(dens) == 0 else dens


def outcome_cdf(state: HybridState, x):
    x = np.asarray(x, dtype=float)
    cdf = sum(w * _normal.cdf(x, loc=mu) for _, w, mu in components(state))
    return float(cdf) if np.ndim(cdf) == 0 else cdf


def even_posterior(state: HybridState, x: float) -> float:
    """Posterior weight of the zero-kick group given outcome ``x``."""
    logs = {k: math.log(w) - (x - mu) ** 2 / 2 for k, w, mu in components(state) if w > 0}
    if 0 not in logs:
        return 0.0
    top = max(logs.values())
    total = sum(math.exp(v - top) for v in logs.values())
    return math.exp(logs[0] - top) / total


def make_outcome(state: HybridState, x: float, branch: Parity | None = None) -> HomodyneOutcome:
    return HomodyneOutcome(
        x=float(x),
        parity=classify_parity(x, state.alpha, state.theta),
        phi=phase_phi(x, state.alpha, state.theta),
        p_even_branch=even_posterior(state, x),
        branch=branch,
    )


def sample_branch_x(state: HybridState, rng: np.random.Generator,
                    branch: Parity | None = None) -> tuple[float, Parity]:
    """Draw a mixture component, then a Gaussian outcome from it.

    With ``branch`` given, only components of that parity are eligible
    (weights renormalized within the branch).
    """
    comps = components(state)
    if branch is not None:
        comps = [c for c in comps if (c[0] == 0) == (branch is Parity.EVEN)]
        if not comps:
            raise ZeroNormError(f"state has no {branch.value}-parity component")
    u = rng.random() * sum(w for _, w, _ in comps)
    for k, w, mu in comps:
        u -= w
        if u < 0:
            break
    x = mu + rng.standard_normal()
    return float(x), (Parity.EVEN if k == 0 else Parity.ODD)


def sample_outcome(state: HybridState, rng: np.random.Generator) -> HomodyneOutcome:
    x, branch = sample_branch_x(state, rng)
    return make_outcome(state, x, branch)


def sample_outcomes(state: HybridState, rng: np.random.Generator, size: int):
    """Vectorized sampling: returns ``(x, is_even_branch)`` arrays."""
    comps = components(state)
    weights = np.array([w for _, w, _ in comps])
    means = np.array([mu for _, _, mu in comps])
    idx = rng.choice(len(comps), size=size, p=weights / weights.sum())
    x = means[idx] + rng.standard_normal(size)
    is_even = np.array([k == 0 for k, _, _ in comps])[idx]
    return x, is_even


def collapse(state: HybridState, x: float, branch: Parity | None = None) -> PolState:
    """Condition on outcome ``x`` and discard the probe.

    ``branch`` additionally projects onto the zero-kick (EVEN) or non-zero-kick
    (ODD) probe labels, modelling an ideal parity measurement.
    """
    components(state)  # asserts the single-probe-label property
    kernel = {}
    terms = []
    for t in state.terms:
        if branch is not None and (t.probe_k == 0) != (branch is Parity.EVEN):
            continue
        if t.probe_k not in kernel:
            kernel[t.probe_k] = quadrature_amplitude(x, state.probe_amplitude(t.probe_k))
        terms.append(((t.pols,), t.amp * kernel[t.probe_k]))
    # Single-label states have unique strings, already in canonical order.
    return normalize(from_pairs(PolState(state.n_modes, ()), terms, ordered=True))
