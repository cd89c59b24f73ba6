"""Hybrid signal/probe states and polarization-only states.

A :class:`HybridState` is a superposition of polarization strings over
``n_modes`` photons, each attached to a coherent probe label ``probe_k``
meaning the probe amplitude ``alpha * exp(1j * probe_k * theta)``.  After a
homodyne measurement the probe is discarded and a :class:`PolState` remains.

States are immutable; every operation returns a new state.  Terms are kept in
a canonical order (lexicographic in the polarization string, then probe label)
so that serialized states are byte-stable.
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass
from operator import itemgetter
from typing import Iterable, NamedTuple, TypeVar, Union

import numpy as np

PRUNE_TOL = 1e-14
# Per-instance slot for values derived from the (immutable) terms.
CACHE_ATTR = "_derived"
_first = itemgetter(0)
NORM_TOL = 1e-12


class InvalidParameterError(ValueError):
    """Raised when a physical parameter is outside its allowed range."""


class ZeroNormError(ValueError):
    """Raised when a state with (numerically) zero norm must be normalized."""


class DimensionMismatchError(ValueError):
    """Raised when two states with different mode counts are combined."""


class SingleProbeLabelError(AssertionError):
    """A polarization string carries more than one probe label."""


class PolLabel(str, enum.Enum):
    H = "H"
    V = "V"

    def flipped(self) -> "PolLabel":
        return PolLabel.V if self is PolLabel.H else PolLabel.H


class BasisTerm(NamedTuple):
    pols: str
    probe_k: int
    amp: complex


class PolTerm(NamedTuple):
    pols: str
    amp: complex


def _check_pols(pols: str, n_modes: int) -> None:
    if len(pols) != n_modes:
        raise DimensionMismatchError(
            f"polarization string {pols!r} does not have {n_modes} modes"
        )
    if pols.strip("HV"):
        raise InvalidParameterError(f"invalid polarization string {pols!r}")


def check_probe_parameters(alpha: float, theta: float) -> None:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")
    if not 0 < theta < math.pi / 2:
        raise InvalidParameterError(f"theta must lie in (0, pi/2), got {theta}")


@dataclass(frozen=True)
class HybridState:
    """Polarization strings entangled with coherent probe labels."""

    n_modes: int
    alpha: float
    theta: float
    terms: tuple[BasisTerm, ...]

    def __post_init__(self):
        if self.n_modes < 1:
            raise InvalidParameterError("n_modes must be positive")
        # theta = 0 is allowed here (indistinguishable probe labels); circuit
        # entry points enforce the open interval.
        if not self.alpha > 0 or not 0 <= self.theta < math.pi / 2:
            raise InvalidParameterError(
                f"invalid probe parameters alpha={self.alpha}, theta={self.theta}"
            )
        for t in self.terms:
            _check_pols(t.pols, self.n_modes)
            if not cmath.isfinite(t.amp):
                raise InvalidParameterError("non-finite amplitude")

    def with_terms(self, terms: Iterable[BasisTerm]) -> "HybridState":
        return simplify(_replace_terms(self, tuple(terms)))

    def probe_amplitude(self, k: int) -> complex:
        return self.alpha * complex(math.cos(k * self.theta), math.sin(k * self.theta))

    def amplitude(self, pols: str, probe_k: int = 0) -> complex:
        for t in self.terms:
            if t.pols == pols and t.probe_k == probe_k:
                return t.amp
        return 0j

    def groups(self) -> dict[int, list[BasisTerm]]:
        """Terms grouped by probe label, in increasing ``probe_k``."""
        out: dict[int, list[BasisTerm]] = {}
        for t in self.terms:
            out.setdefault(t.probe_k, []).append(t)
        return dict(sorted(out.items()))

    def check_single_probe_label(self) -> None:
        seen: dict[str, int] = {}
        for t in self.terms:
            if t.pols in seen and seen[t.pols] != t.probe_k:
                raise SingleProbeLabelError(
                    f"{t.pols} carries probe labels {seen[t.pols]} and {t.probe_k}"
                )
            seen[t.pols] = t.probe_k

    def reset_probe(self) -> "HybridState":
        return self.with_terms(t._replace(probe_k=0) for t in self.terms)

    def to_text(self) -> str:
        return "".join(
            f"{t.pols} {t.probe_k} {_fmt(t.amp.real)} {_fmt(t.amp.imag)}\n"
            for t in self.terms
        )


@dataclass(frozen=True)
class PolState:
    """Probe-free polarization state of ``n_modes`` photons."""

    n_modes: int
    terms: tuple[PolTerm, ...]

    def __post_init__(self):
        if self.n_modes < 1:
            raise InvalidParameterError("n_modes must be positive")
        for t in self.terms:
            _check_pols(t.pols, self.n_modes)
            if not cmath.isfinite(t.amp):
                raise InvalidParameterError("non-finite amplitude")

    def with_terms(self, terms: Iterable[PolTerm]) -> "PolState":
        return simplify(_replace_terms(self, tuple(terms)))

    def amplitude(self, pols: str) -> complex:
        for t in self.terms:
            if t.pols == pols:
                return t.amp
        return 0j

    def as_dict(self) -> dict[str, complex]:
        return {t.pols: t.amp for t in self.terms}

    def to_text(self) -> str:
        return "".join(
            f"{t.pols} {_fmt(t.amp.real)} {_fmt(t.amp.imag)}\n" for t in self.terms
        )

    @classmethod
    def from_amplitudes(cls, amps: dict[str, complex]) -> "PolState":
        n = len(next(iter(amps)))
        return simplify(cls(n, tuple(PolTerm(p, complex(a)) for p, a in amps.items())))


State = Union[HybridState, PolState]
S = TypeVar("S", HybridState, PolState)


def _replace_terms(state: S, terms: tuple) -> S:
    # Skips re-validation; callers only ever derive terms from valid ones.
    new = object.__new__(type(state))
    d = new.__dict__
    d.update(state.__dict__)
    d.pop(CACHE_ATTR, None)
    d["terms"] = terms
    return new


def _fmt(x: float) -> str:
    return f"{x + 0.0:.17g}"


def new_plus_product(n_modes: int, alpha: float, theta: float) -> HybridState:
    """``|+>^n`` for the signal photons with the probe in ``|alpha>``."""
    return _plus_product(n_modes, float(alpha), float(theta))


@functools.lru_cache(maxsize=64)
def _plus_product(n_modes: int, alpha: float, theta: float) -> HybridState:
    if n_modes < 1:
        raise InvalidParameterError("n_modes must be >= 1")
    check_probe_parameters(alpha, theta)
    amp = complex(2.0 ** (-n_modes / 2))
    pols = ("".join(p) for p in _product("HV", n_modes))
    return HybridState(n_modes, float(alpha), float(theta),
                       tuple(BasisTerm(p, 0, amp) for p in pols))


def _product(chars: str, n: int):
    if n == 0:
        yield ()
        return
    for head in chars:
        for tail in _product(chars, n - 1):
            yield (head,) + tail


def simplify(state: S) -> S:
    """Merge duplicate basis terms, drop negligible ones, sort canonically."""
    return from_pairs(state, ((t[:-1], t[-1]) for t in state.terms))


def from_pairs(state: S, pairs: Iterable[tuple[tuple, complex]],
               distinct: bool = False, ordered: bool = False) -> S:
    """Canonical state with the metadata of ``state`` and terms built from
    ``(key, amp)`` pairs, where ``key`` is the term without its amplitude.

    ``distinct=True`` promises the keys are already unique (the pairs came
    from a bijection of a canonical state) and skips the merge;
    ``ordered=True`` additionally promises canonical order and skips the sort.
    """
    if ordered:
        items = pairs
    elif distinct:
        items = sorted(pairs, key=_first)
    else:
        acc: dict[tuple, complex] = {}
        for key, amp in pairs:
            acc[key] = acc.get(key, 0j) + amp
        items = sorted(acc.items())
    cls = BasisTerm if isinstance(state, HybridState) else PolTerm
    new = tuple.__new__
    terms = tuple(new(cls, key + (amp,)) for key, amp in items if abs(amp) >= PRUNE_TOL)
    return _replace_terms(state, terms)


def norm(state: State) -> float:
    return math.sqrt(sum(abs(t.amp) ** 2 for t in state.terms))


def normalize(state: S) -> S:
    nrm = norm(state)
    if nrm == 0 or not math.isfinite(nrm):
        raise ZeroNormError("cannot normalize a zero-norm state")
    cls, new = type(state.terms[0]), tuple.__new__
    return _replace_terms(state, tuple(new(cls, t[:-1] + (t[-1] / nrm,)) for t in state.terms))


def inner(left: PolState, right: PolState) -> complex:
    """``<left|right>``."""
    if left.n_modes != right.n_modes:
        raise DimensionMismatchError(
            f"{left.n_modes} modes vs {right.n_modes} modes"
        )
    lookup = left.as_dict()
    return sum((lookup.get(t.pols, 0j).conjugate() * t.amp for t in right.terms), 0j)


def fidelity(state: PolState, target: PolState) -> float:
    """``|<target|state>|^2``, clipped to [0, 1] against rounding."""
    f = abs(inner(target, state)) ** 2
    return min(max(f, 0.0), 1.0)


def coherent_overlap(beta1: complex, beta2: complex) -> complex:
    """``<beta1|beta2>`` for coherent states."""
    return complex(np.exp(-abs(beta1) ** 2 / 2 - abs(beta2) ** 2 / 2
                          + np.conj(beta1) * beta2))


def from_text(text: str, alpha: float | None = None, theta: float | None = None) -> State:
    """Parse the canonical text form produced by ``to_text``.

    Four columns (``pols k re im``) give a :class:`HybridState`, which then
    needs ``alpha`` and ``theta``; three columns give a :class:`PolState`.
    """
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty state text")
    n = len(rows[0][0])
    if len(rows[0]) == 4:
        if alpha is None or theta is None:
            raise ValueError("hybrid state text needs alpha and theta")
        terms = tuple(BasisTerm(p, int(k), complex(float(re), float(im)))
                      for p, k, re, im in rows)
        return simplify(HybridState(n, alpha, theta, terms))
    terms = tuple(PolTerm(p, complex(float(re), float(im))) for p, re, im in rows)
    return simplify(PolState(n, terms))
