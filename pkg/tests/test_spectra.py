import numpy as np
import pytest

from dicke_lab import (ModelParams, ParameterError, build_basis,
                       assemble_hamiltonian, ground_state,
                       ground_state_blockwise, low_spectrum,
                       converge_truncation)


def _params(g, g_prime=0.0, j=4.5):
    return ModelParams(omega=1.0, epsilon=1.0, g=g, g_prime=g_prime, j=j)


def test_uncoupled_ground_state():
    p = _params(0.0)
    h = assemble_hamiltonian(p, build_basis(p.j, 4))
    gs = ground_state(h)
    assert gs.energy == pytest.approx(-4.5, abs=1e-12)
    expected = np.zeros(h.dim)
    expected[h.basis.position(0, -4.5)] = 1.0
    assert np.allclose(gs.vector, expected, atol=1e-12)


def test_first_block_energy_against_2x2_oracle():
    # N_exc = 1 block at resonance: [[1-J, G], [G, 1-J]]
    p = _params(1.05)
    h = assemble_hamiltonian(p, build_basis(p.j, 30))
    gs = ground_state(h)
    oracle = np.linalg.eigvalsh(np.array([[1 - 4.5, 1.05], [1.05, 1 - 4.5]]))[0]
    assert oracle == pytest.approx(-4.55, abs=1e-12)
    assert gs.energy == pytest.approx(oracle, abs=1e-9)


def test_residual_and_norm_contract():
    p = _params(0.7, 0.4)
    h = assemble_hamiltonian(p, build_basis(p.j, 10))
    gs = ground_state(h)
    assert abs(np.linalg.norm(gs.vector) - 1) < 1e-12
    assert gs.residual <= 1e-9 * h.norm()


def test_sign_convention():
    p = _params(0.7, 0.4)
    h = assemble_hamiltonian(p, build_basis(p.j, 10))
    vec = ground_state(h).vector
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    assert vec[nz[0]] > 0


def test_blockwise_below_transition():
    gs = ground_state_blockwise(_params(0.9), 20)
    assert gs.block_label == "n_exc=0"
    assert not gs.degenerate_flag
    idx = gs.basis.position(0, -4.5)
    assert gs.vector[idx] == pytest.approx(1.0, abs=1e-12)


def test_blockwise_just_above_transition():
    gs = ground_state_blockwise(_params(1.05), 20)
    assert gs.block_label == "n_exc=1"
    b = gs.basis
    amps = {(1, -4.5): gs.vector[b.position(1, -4.5)],
            (0, -3.5): gs.vector[b.position(0, -3.5)]}
    assert abs(amps[(1, -4.5)]) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert abs(amps[(0, -3.5)]) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    # antisymmetric combination for the lower eigenvalue (positive coupling)
    assert amps[(1, -4.5)] * amps[(0, -3.5)] < 0


def test_blockwise_exact_tie_flagged():
    gs = ground_state_blockwise(_params(1.0), 20)
    assert gs.degenerate_flag
    assert gs.block_label == "n_exc=0"   # lower block wins the tie
    assert gs.energy == pytest.approx(-4.5, abs=1e-12)


def test_blockwise_rejects_nonintegrable():
    with pytest.raises(ParameterError):
        ground_state_blockwise(_params(0.5, g_prime=0.5), 10)


def test_full_vs_blockwise_agreement():
    p = _params(1.3, j=1.5)
    n_max = 40
    full = ground_state(assemble_hamiltonian(p, build_basis(p.j, n_max)))
    block = ground_state_blockwise(p, n_max)
    assert full.energy == pytest.approx(block.energy, abs=1e-10)
    assert np.max(np.abs(np.abs(full.vector) - np.abs(block.vector))) < 1e-8


def test_low_spectrum_uncoupled():
    p = _params(0.0)
    h = assemble_hamiltonian(p, build_basis(p.j, 4))
    w = low_spectrum(h, 3)
    assert w[0] == pytest.approx(-4.5, abs=1e-12)
    assert w[1] == pytest.approx(-3.5, abs=1e-12)
    assert w[2] == pytest.approx(-3.5, abs=1e-12)


def test_low_spectrum_trace_identity():
    p = _params(0.8, 0.3, j=1.5)
    h = assemble_hamiltonian(p, build_basis(p.j, 3))
    w = low_spectrum(h, h.dim)
    assert np.sum(w) == pytest.approx(h.matrix.diagonal().sum(), abs=1e-9)


def test_low_spectrum_matches_block_union():
    p = _params(1.2, j=1.5)
    n_max = 25
    h = assemble_hamiltonian(p, build_basis(p.j, n_max))
    w = low_spectrum(h, 5)
    # independent oracle: brute-force dense diagonalization
    dense = np.linalg.eigvalsh(h.dense())
    assert np.allclose(w, dense[:5], atol=1e-9)
    assert low_spectrum(h, 1)[0] == pytest.approx(
        ground_state_blockwise(p, n_max).energy, abs=1e-10)


def test_low_spectrum_bounds():
    p = _params(0.5)
    h = assemble_hamiltonian(p, build_basis(p.j, 2))
    with pytest.raises(ParameterError):
        low_spectrum(h, 0)
    with pytest.raises(ParameterError):
        low_spectrum(h, h.dim + 1)


def test_converge_truncation_uncoupled():
    assert converge_truncation(_params(0.0)) == 0


def test_converge_truncation_monotone_in_coupling():
    n_small = converge_truncation(_params(1.2), tol=1e-10)
    n_large = converge_truncation(_params(2.5), tol=1e-10)
    assert n_large >= n_small


def test_converge_truncation_rejects_bad_tol():
    with pytest.raises(ParameterError):
        converge_truncation(_params(1.0), tol=0.0)
