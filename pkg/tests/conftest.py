import itertools
import sys
from functools import reduce

import numpy as np
import pytest

from kerr_cluster.state import BasisTerm, HybridState, PolState, PolTerm, normalize


def basis_strings(n):
    return ["".join(p) for p in itertools.product("HV", repeat=n)]


def to_vector(state: PolState) -> np.ndarray:
    """Dense amplitude vector over H/V strings in lexicographic order."""
    index = {p: i for i, p in enumerate(basis_strings(state.n_modes))}
    vec = np.zeros(2**state.n_modes, dtype=complex)
    for t in state.terms:
        vec[index[t.pols]] += t.amp
    return vec


def kron_op(single: np.ndarray, mode: int, n: int) -> np.ndarray:
    """Dense operator acting with ``single`` on ``mode`` of ``n`` qubits."""
    ops = [np.eye(2)] * n
    ops[mode] = single
    return reduce(np.kron, ops)


def pol_state(amps: dict, normalized=True) -> PolState:
    n = len(next(iter(amps)))
    s = PolState(n, tuple(PolTerm(p, complex(a)) for p, a in amps.items())).with_terms(
        PolTerm(p, complex(a)) for p, a in amps.items()
    )
    return normalize(s) if normalized else s


def hybrid_state(terms, alpha=2.0, theta=0.5, normalized=True) -> HybridState:
    n = len(terms[0][0])
    s = HybridState(n, alpha, theta, tuple(BasisTerm(p, k, complex(a)) for p, k, a in terms))
    s = s.with_terms(s.terms)
    return normalize(s) if normalized else s


def random_pol_state(rng, n) -> PolState:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return pol_state(dict(zip(basis_strings(n), v)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
