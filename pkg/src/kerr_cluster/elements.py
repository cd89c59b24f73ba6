"""Optical elements acting on one polarization mode.

``apply_rotation`` takes the polarization rotation angle ``rho``; for a
waveplate at angle ``delta`` this is ``rho = 2 * delta``, so the ``R(-45)``
rotation used by the circuits is ``rho = -pi/4``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .state import InvalidParameterError, PolLabel, S, from_pairs

R_MINUS_45 = -math.pi / 4


@dataclass(frozen=True)
class KerrSite:
    """A polarization component routed through the cross-Kerr medium.

    Every photon in ``pol`` on ``mode`` kicks the probe phase by
    ``sign * theta``.
    """

    mode: int
    pol: PolLabel
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidParameterError("Kerr site sign must be +1 or -1")
        object.__setattr__(self, "pol", PolLabel(self.pol))


def _check_mode(state, mode: int) -> None:
    if not 0 <= mode < state.n_modes:
        raise IndexError(f"mode {mode} out of range for {state.n_modes} modes")


def _set(pols: str, mode: int, p: str) -> str:
    return pols[:mode] + p + pols[mode + 1:]


def apply_rotation(state: S, mode: int, rho: float) -> S:
    """H -> cos(rho) H + sin(rho) V,  V -> -sin(rho) H + cos(rho) V."""
    _check_mode(state, mode)
    c, s = math.cos(rho), math.sin(rho)
    out = []
    for t in state.terms:
        pols, rest, amp = t[0], t[1:-1], t[-1]
        head, tail = pols[:mode], pols[mode + 1:]
        h, v = (head + "H" + tail,) + rest, (head + "V" + tail,) + rest
        if pols[mode] == "H":
            out += [(h, c * amp), (v, s * amp)]
        else:
            out += [(h, -s * amp), (v, c * amp)]
    return from_pairs(state, out)


def apply_bit_flip(state: S, mode: int) -> S:
    _check_mode(state, mode)
    swap = {"H": "V", "V": "H"}
    return from_pairs(state, (
        ((_set(t[0], mode, swap[t[0][mode]]),) + t[1:-1], t[-1]) for t in state.terms
    ), distinct=True)


def apply_pol_phase(state: S, mode: int, pol: PolLabel, phase: float) -> S:
    """Multiply terms whose ``mode`` is in ``pol`` by ``exp(1j * phase)``."""
    if PolLabel(pol) is PolLabel.H:
        return apply_phase_shifter(state, mode, phase, 0.0)
    return apply_phase_shifter(state, mode, 0.0, phase)


def apply_phase_shifter(state: S, mode: int, phase_h: float, phase_v: float) -> S:
    """Phase ``phase_h`` on the H component of ``mode`` and ``phase_v`` on V."""
    _check_mode(state, mode)
    fh, fv = cmath.exp(1j * phase_h), cmath.exp(1j * phase_v)
    return from_pairs(state, (
        (t[:-1], t[-1] * (fh if t[0][mode] == "H" else fv)) for t in state.terms
    ), ordered=True)


def apply_cross_kerr(state, site: KerrSite):
    """Advance the probe label of every term whose ``site.mode`` is ``site.pol``."""
    return apply_cross_kerr_sites(state, (site,))


def apply_cross_kerr_sites(state, sites):
    """Several Kerr sites sharing one probe, applied in a single pass."""
    for site in sites:
        _check_mode(state, site.mode)
    kicks = [(site.mode, site.pol.value, site.sign) for site in sites]
    out = []
    for t in state.terms:
        pols, k = t.pols, t.probe_k
        for mode, p, sign in kicks:
            if pols[mode] == p:
                k += sign
        out.append(((pols, k), t.amp))
    return from_pairs(state, out, distinct=True)
