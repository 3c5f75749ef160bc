import numpy as np
import pytest

from dicke_lab import (ModelParams, ParameterError, build_basis,
                       assemble_hamiltonian, ground_state,
                       ground_state_blockwise, reduced_atomic_dm,
                       linear_entropy, clebsch_gordan, multipole_decompose,
                       evaluate_wigner_plane, evaluate_wigner_points,
                       sphere_integrals, half_height_area, negativity_volume,
                       ridge_radius, local_maxima)


def test_cg_scalar_coupling():
    for j, m in [(0.5, 0.5), (1.0, -1.0), (2.5, 1.5)]:
        assert clebsch_gordan(j, m, 0, 0, j, m) == pytest.approx(1.0)


def test_cg_known_values():
    assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == pytest.approx(1 / np.sqrt(2))
    assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 1, 0) == pytest.approx(1 / np.sqrt(2))
    assert clebsch_gordan(1, 1, 1, -1, 0, 0) == pytest.approx(1 / np.sqrt(3))
    assert clebsch_gordan(1, 0, 1, 0, 2, 0) == pytest.approx(np.sqrt(2 / 3))


def test_cg_selection_rules():
    assert clebsch_gordan(1, 1, 1, 1, 1, 1) == 0.0        # m != m1 + m2
    assert clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0        # triangle violated
    with pytest.raises(ParameterError):
        clebsch_gordan(0.3, 0.3, 0.5, -0.5, 0.5, -0.2)


def test_cg_orthogonality():
    j1 = j2 = 1
    ms = [-1, 0, 1]
    for J in (0, 1, 2):
        for Jp in (0, 1, 2):
            for M in range(-J, J + 1):
                for Mp in range(-Jp, Jp + 1):
                    total = sum(clebsch_gordan(j1, m1, j2, m2, J, M)
                                * clebsch_gordan(j1, m1, j2, m2, Jp, Mp)
                                for m1 in ms for m2 in ms)
                    expected = 1.0 if (J, M) == (Jp, Mp) else 0.0
                    assert total == pytest.approx(expected, abs=1e-12)


def test_multipole_maximally_mixed():
    j = 1.5
    decomp = multipole_decompose(np.eye(4) / 4, j)
    for (k, q), c in decomp.components.items():
        if (k, q) == (0, 0):
            assert abs(c) > 0
        else:
            assert abs(c) < 1e-14


def test_multipole_diagonal_rho_only_q0():
    rho = np.zeros((10, 10))
    rho[0, 0] = rho[1, 1] = 0.5
    decomp = multipole_decompose(rho, 4.5)
    for (k, q), c in decomp.components.items():
        if q != 0:
            assert abs(c) < 1e-14


def test_multipole_parseval_random():
    rng = np.random.default_rng(11)
    for j in (0.5, 1.0, 2.5, 4.5):
        dim = int(round(2 * j + 1))
        for _ in range(5):
            a = rng.normal(size=(dim, dim))
            rho = a @ a.T
            rho /= np.trace(rho)
            decomp = multipole_decompose(rho, j)
            assert decomp.purity() == pytest.approx(
                float(np.trace(rho @ rho)), abs=1e-10)


def _gs_rho(g, g_prime, j=4.5, n_max=40):
    p = ModelParams(omega=1.0, epsilon=1.0, g=g, g_prime=g_prime, j=j)
    if g_prime == 0:
        gs = ground_state_blockwise(p, n_max)
    else:
        gs = ground_state(assemble_hamiltonian(p, build_basis(j, n_max)),
                          use_parity=True)
    return reduced_atomic_dm(gs), p


def test_subcritical_gs_single_peak_at_origin():
    rho, p = _gs_rho(0.5, 0.0)
    grid = evaluate_wigner_plane(multipole_decompose(rho, p.j), n=128)
    i, jj = np.unravel_index(np.nanargmax(grid.values), grid.values.shape)
    assert abs(grid.x[jj]) < 2 * grid.cell
    assert abs(grid.y[i]) < 2 * grid.cell
    assert ridge_radius(grid) < 2 * grid.cell


def test_integrable_gs_annulus():
    rho, p = _gs_rho(1.5, 0.0)
    decomp = multipole_decompose(rho, p.j)
    r_star = ridge_radius(evaluate_wigner_plane(decomp, n=128))
    assert 0 < r_star < 1
    # azimuthal ridge variation below 1e-8
    angles = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    vals = evaluate_wigner_points(decomp, r_star * np.cos(angles),
                                  r_star * np.sin(angles))
    assert np.ptp(vals) < 1e-8


def test_symmetric_gs_two_mirror_peaks():
    rho, p = _gs_rho(0.75, 0.75)
    grid = evaluate_wigner_plane(multipole_decompose(rho, p.j), n=256)
    peaks = local_maxima(grid)
    assert len(peaks) == 2
    (x1, y1, w1), (x2, y2, w2) = peaks
    assert abs(x1 - x2) < 2 * grid.cell
    assert abs(y1 + y2) < 2 * grid.cell
    assert w1 == pytest.approx(w2, rel=1e-6)
    with pytest.raises(ParameterError):
        ridge_radius(grid)


def test_unit_integral_and_parseval():
    for g, gp in [(1.5, 0.0), (0.75, 0.75)]:
        rho, p = _gs_rho(g, gp)
        decomp = multipole_decompose(rho, p.j)
        ints = sphere_integrals(decomp)
        assert ints["total"] == pytest.approx(1.0, abs=1e-6)
        assert ints["square"] == pytest.approx(linear_entropy(rho)[0], abs=1e-6)


def test_negativity_nonnegative_state():
    # spin coherent state |J, -J>: nonnegative Wigner values are not
    # guaranteed in general, but the maximally mixed state is exactly flat
    j = 4.5
    decomp = multipole_decompose(np.eye(10) / 10, j)
    grid = evaluate_wigner_plane(decomp, n=64)
    neg, mn = negativity_volume(grid)
    assert neg == pytest.approx(0.0, abs=1e-12)
    assert mn >= 0


def test_half_height_area_self_convergence():
    rho, p = _gs_rho(1.5, 0.0)
    decomp = multipole_decompose(rho, p.j)
    coarse = evaluate_wigner_plane(decomp, n=256, params=p)
    fine = evaluate_wigner_plane(decomp, n=512, params=p)
    a1, _ = half_height_area(coarse, p.n_atoms)
    a2, _ = half_height_area(fine, p.n_atoms)
    assert abs(a1 - a2) / a2 < 0.01


def test_half_height_area_flat_grid_rejected():
    decomp = multipole_decompose(np.eye(4) / 4, 1.5)
    grid = evaluate_wigner_plane(decomp, n=32)
    area, a_n = half_height_area(grid, 3)
    assert area > 0   # flat positive grid: whole disk is above half height
    vals = np.where(np.isfinite(grid.values), -1.0, np.nan)
    bad = type(grid)(x=grid.x, y=grid.y, values=vals, j=grid.j,
                     radius=grid.radius)
    with pytest.raises(ParameterError):
        half_height_area(bad, 3)
