import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm as normal, poisson

from kerr_cluster.fock import (
    FockVector,
    TruncationError,
    coherent_fock,
    fock_entangler_density,
    hermite_functions,
    kerr_apply,
    quadrature_wavefunction,
    recommended_cutoff,
    validate_phase_label_model,
)
from kerr_cluster.homodyne import quadrature_amplitude
from kerr_cluster.state import coherent_overlap

GRID_ALPHAS = (0.5, 1.0, 2.0, 4.0)
GRID_THETAS = (0.1, 0.3, 0.6)


class TestCoherentFock:
    def test_vacuum(self):
        v = coherent_fock(0, 10)
        assert v.dim == 11
        assert v.amps[0] == 1 and not np.any(v.amps[1:])

    @pytest.mark.parametrize("alpha", [0.5, 2.0, 4.0])
    def test_poisson_weights(self, alpha):
        v = coherent_fock(alpha, recommended_cutoff(alpha))
        n = np.arange(v.dim)
        assert np.abs(v.amps) ** 2 == pytest.approx(poisson.pmf(n, alpha**2), abs=1e-14)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 4.0])
    def test_truncation_mass(self, alpha):
        v = coherent_fock(alpha * np.exp(0.3j), recommended_cutoff(alpha))
        assert 1 - v.norm() ** 2 < 1e-10

    def test_large_alpha_no_overflow(self):
        v = coherent_fock(30.0, recommended_cutoff(30.0))
        assert np.all(np.isfinite(v.amps))
        assert v.norm() == pytest.approx(1, abs=1e-10)

    @pytest.mark.parametrize("alpha, theta", [(2.0, 0.5), (1.0, 0.3), (4.0, 0.1)])
    def test_overlap_matches_closed_form(self, alpha, theta):
        n = recommended_cutoff(alpha)
        beta = alpha * np.exp(1j * theta)
        brute = coherent_fock(alpha, n).overlap(coherent_fock(beta, n))
        assert abs(brute - coherent_overlap(alpha, beta)) < 1e-8

    def test_bad_cutoff(self):
        with pytest.raises(ValueError):
            coherent_fock(1.0, 0)


class TestKerrApply:
    def test_identity(self):
        v = coherent_fock(2.0, 60)
        assert np.array_equal(kerr_apply(v, 0, 0.7).amps, v.amps)

    @pytest.mark.parametrize("alpha", [0.5, 2.0, 4.0])
    def test_rotates_coherent_state(self, alpha):
        n = recommended_cutoff(alpha)
        kicked = kerr_apply(coherent_fock(alpha, n), 1, 0.4)
        assert abs(kicked.overlap(coherent_fock(alpha * np.exp(0.4j), n))) >= 1 - 1e-8

    def test_composition(self):
        v = coherent_fock(1.5 + 0.5j, 50)
        twice = kerr_apply(kerr_apply(v, 1, 0.3), 1, 0.3)
        assert twice.amps == pytest.approx(kerr_apply(v, 1, 0.6).amps, abs=1e-15)

    def test_unitary(self, rng):
        v = FockVector(rng.normal(size=30) + 1j * rng.normal(size=30))
        assert kerr_apply(v, 1, 1.234).norm() == pytest.approx(v.norm(), rel=1e-15)


class TestQuadrature:
    def test_hermite_orthonormal(self):
        x = np.linspace(-40, 40, 8001)
        h = hermite_functions(x, 30)
        gram = (h * (x[1] - x[0])) @ h.T
        assert gram == pytest.approx(np.eye(31), abs=1e-10)

    def test_vacuum_is_standard_normal(self):
        x = np.linspace(-6, 6, 49)
        psi = quadrature_wavefunction(coherent_fock(0, 5), x)
        assert np.abs(psi) ** 2 == pytest.approx(normal.pdf(x), abs=1e-14)

    def test_coherent_peak(self):
        x = np.linspace(0, 8, 801)
        dens = np.abs(quadrature_wavefunction(coherent_fock(2.0, 60), x)) ** 2
        assert x[np.argmax(dens)] == pytest.approx(4.0, abs=1e-9)

    def test_scalar_input(self):
        beta = 2 * np.exp(0.5j)
        x = 4 * math.cos(0.5)
        val = quadrature_wavefunction(coherent_fock(beta, recommended_cutoff(2)), x)
        assert isinstance(val, complex)
        assert abs(val - quadrature_amplitude(x, beta)) < 1e-7

    @pytest.mark.parametrize("alpha", GRID_ALPHAS)
    @pytest.mark.parametrize("theta", [0.0, 0.5, 1.3, -2.0])
    def test_matches_kernel(self, alpha, theta):
        beta = alpha * complex(math.cos(theta), math.sin(theta))
        x = np.linspace(2 * beta.real - 8, 2 * beta.real + 8, 321)
        brute = quadrature_wavefunction(coherent_fock(beta, recommended_cutoff(alpha)), x)
        assert np.max(np.abs(brute - quadrature_amplitude(x, beta))) < 1e-7

    def test_completeness(self):
        v = kerr_apply(coherent_fock(1.5, 40), 1, 0.7)
        total, _ = quad(lambda x: abs(quadrature_wavefunction(v, x)) ** 2, -20, 20, limit=200)
        assert total == pytest.approx(v.norm() ** 2, abs=1e-7)


class TestPhaseLabelModel:
    @pytest.mark.parametrize("alpha, theta, n", [(1.0, 0.5, 40), (4.0, 0.2, 80)])
    def test_examples(self, alpha, theta, n):
        assert validate_phase_label_model(alpha, theta, n) < 1e-6

    @pytest.mark.parametrize("alpha", GRID_ALPHAS)
    @pytest.mark.parametrize("theta", GRID_THETAS)
    def test_grid(self, alpha, theta):
        assert validate_phase_label_model(alpha, theta) < 1e-6

    def test_zero_kick(self):
        assert validate_phase_label_model(2.0, 0.0) < 1e-12

    def test_density_normalized(self):
        x = np.linspace(-10, 20, 3001)
        dens = fock_entangler_density(2.0, 0.5, 60, x)
        assert np.trapezoid(dens, x) == pytest.approx(1, abs=1e-8)

    def test_truncation_error(self):
        with pytest.raises(TruncationError):
            validate_phase_label_model(4.0, 0.2, 10)
