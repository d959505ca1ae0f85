import numpy as np
import pytest

from conftest import random_density
from sictomo.linalg import density_from_params
from sictomo.metrics import fidelity, pure_fidelity, purity
from sictomo.states import ghz, maximally_mixed, pure_density, w, werner


def test_self_fidelity(rng):
    for rank in (1, 3, 8):
        rho = random_density(rng, rank=rank)
        assert fidelity(rho, rho) == pytest.approx(1, abs=1e-9)


def test_ghz_vs_mixed():
    assert fidelity(pure_density(ghz()), maximally_mixed(8)) == pytest.approx(1 / 8, abs=1e-10)


@pytest.mark.parametrize("eta", [0, 0.4, 1])
def test_ghz_vs_werner(eta):
    assert fidelity(pure_density(ghz()), werner(eta)) == pytest.approx(eta + (1 - eta) / 8, abs=1e-10)


def test_orthogonal_pure_states():
    assert fidelity(pure_density(ghz()), pure_density(w())) == pytest.approx(0, abs=1e-10)


def test_symmetric_and_bounded(rng):
    for _ in range(10):
        a = density_from_params(rng.normal(size=64))
        b = density_from_params(rng.normal(size=64))
        f = fidelity(a, b)
        assert 0 <= f <= 1
        assert f == pytest.approx(fidelity(b, a), abs=1e-9)


def test_pure_state_reduction(rng):
    """Cross-oracle for the matrix square root path."""
    for _ in range(10):
        rho = random_density(rng, rank=int(rng.integers(1, 9)))
        for ket in (ghz(), w()):
            assert fidelity(pure_density(ket), rho) == pytest.approx(pure_fidelity(ket, rho), abs=1e-10)
            assert fidelity(rho, pure_density(ket)) == pytest.approx(pure_fidelity(ket, rho), abs=1e-10)


def test_commuting_states_classical_fidelity(rng):
    p = rng.dirichlet(np.ones(8))
    q = rng.dirichlet(np.ones(8))
    assert fidelity(np.diag(p), np.diag(q)) == pytest.approx(np.sum(np.sqrt(p * q)) ** 2, abs=1e-12)


def test_unit_fidelity_implies_equal(rng):
    for eta in np.linspace(0, 1, 6):
        a = werner(eta)
        if fidelity(a, werner(eta)) >= 1 - 1e-9:
            assert np.max(np.abs(a - werner(eta))) <= 1e-6
    b = werner(0.5)
    assert fidelity(b, werner(0.5001)) < 1 - 1e-9


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        fidelity(np.eye(2) / 2, np.eye(4) / 4)


def test_purity_values():
    assert purity(maximally_mixed(8)) == pytest.approx(0.125)
    assert purity(pure_density(w())) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("eta", [0.25, 0.5, 0.75])
def test_purity_werner(eta):
    assert purity(werner(eta)) == pytest.approx(eta**2 + eta * (1 - eta) / 4 + (1 - eta) ** 2 / 8, abs=1e-12)


def test_purity_bounds(rng):
    for _ in range(20):
        assert 1 / 8 <= purity(density_from_params(rng.normal(size=64))) <= 1
