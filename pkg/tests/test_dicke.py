import math

import numpy as np
import pytest

from fpcavity import (DickeParams, DomainError, build_hamiltonian,
                      ground_state, mean_field, spectrum_scan)
from fpcavity.dicke import parity_diagonal


def loop_built_hamiltonian(p: DickeParams) -> np.ndarray:
    """Independent construction by explicit basis-state loops."""
    s = 0.5 * p.n_atoms
    dim_b = p.fock_cutoff + 1
    dim = (p.n_atoms + 1) * dim_b
    h = np.zeros((dim, dim))
    g = p.y / math.sqrt(p.n_atoms)
    for mi in range(p.n_atoms + 1):
        m = mi - s
        for n in range(dim_b):
            i = mi * dim_b + n
            h[i, i] = p.omega_a * m + p.omega_c * n
            # S_x (a + a') couples m +- 1 with n +- 1
            for dm, amp_s in ((1, 0.5 * math.sqrt(s * (s + 1) - m * (m + 1))),
                              (-1, 0.5 * math.sqrt(s * (s + 1) - m * (m - 1)))):
                mj = mi + dm
                if not 0 <= mj <= p.n_atoms:
                    continue
                if n + 1 < dim_b:
                    j = mj * dim_b + (n + 1)
                    h[j, i] += g * amp_s * math.sqrt(n + 1)
                if n - 1 >= 0:
                    j = mj * dim_b + (n - 1)
                    h[j, i] += g * amp_s * math.sqrt(n)
    return h


def test_decoupled_limit_is_diagonal():
    p = DickeParams(omega_a=1.3, omega_c=0.7, y=0.0, n_atoms=3, fock_cutoff=4)
    h = build_hamiltonian(p)
    assert np.array_equal(h, np.diag(np.diag(h)))
    s = 1.5
    expected00 = 1.3 * (-s) + 0.7 * 0
    assert h[0, 0] == pytest.approx(expected00)


def test_hamiltonian_exactly_symmetric():
    p = DickeParams(y=0.8, n_atoms=4, fock_cutoff=12)
    h = build_hamiltonian(p)
    assert np.abs(h - h.T).max() == 0.0


def test_ground_energy_against_loop_oracle():
    p = DickeParams(omega_a=1.0, omega_c=1.0, y=0.5, n_atoms=2,
                    fock_cutoff=20)
    h_oracle = loop_built_hamiltonian(p)
    e_oracle = np.linalg.eigvalsh(h_oracle)[0]
    assert ground_state(p).energy == pytest.approx(e_oracle, abs=1e-10)
    assert np.abs(build_hamiltonian(p) - h_oracle).max() < 1e-12


def test_decoupled_ground_state():
    p = DickeParams(omega_a=1.0, omega_c=1.0, y=0.0, n_atoms=6,
                    fock_cutoff=10)
    gs = ground_state(p)
    assert gs.energy == pytest.approx(-3.0)
    assert gs.photon_number == pytest.approx(0.0, abs=1e-14)
    assert gs.sz_expect == pytest.approx(-3.0)
    assert gs.parity == 1.0


def test_parity_commutator_exactly_zero():
    p = DickeParams(y=1.7, n_atoms=4, fock_cutoff=15)
    h = build_hamiltonian(p)
    pi_diag = parity_diagonal(p)
    comm = h * pi_diag[None, :] - pi_diag[:, None] * h
    assert np.abs(comm).max() == 0.0


def test_parity_is_exact_label():
    gs = ground_state(DickeParams(y=2.0, n_atoms=8, fock_cutoff=60))
    assert gs.parity in (1.0, -1.0)


def test_superradiant_photon_number():
    gs = ground_state(DickeParams(y=2.0, n_atoms=8, fock_cutoff=60))
    assert 0.70 <= gs.photon_number / 8 <= 1.00
    assert gs.cutoff_converged


def test_cutoff_convergence_flag_trips():
    gs = ground_state(DickeParams(y=2.0, n_atoms=8, fock_cutoff=3))
    assert not gs.cutoff_converged


def test_scaling_symmetry():
    lam = 2.7
    base = DickeParams(omega_a=1.0, omega_c=0.8, y=1.3, n_atoms=4,
                       fock_cutoff=30)
    scaled = DickeParams(omega_a=lam, omega_c=0.8 * lam, y=1.3 * lam,
                         n_atoms=4, fock_cutoff=30)
    g1, g2 = ground_state(base), ground_state(scaled)
    assert g2.energy == pytest.approx(lam * g1.energy, rel=1e-12)
    assert g2.photon_number == pytest.approx(g1.photon_number, rel=1e-9)
    assert g2.sz_expect == pytest.approx(g1.sz_expect, rel=1e-9)


def test_dimension_guard():
    with pytest.raises(DomainError):
        build_hamiltonian(DickeParams(n_atoms=200, fock_cutoff=200))


def test_params_validation():
    with pytest.raises(DomainError):
        DickeParams(omega_a=-1.0)
    with pytest.raises(DomainError):
        DickeParams(y=-0.1)
    with pytest.raises(DomainError):
        DickeParams(fock_cutoff=0)


# ---------------------------------------------------------------------------
# mean field
# ---------------------------------------------------------------------------

def test_mean_field_normal_branch():
    res = mean_field(DickeParams(y=1.0))
    assert res.y_c == 1.0
    assert res.order_parameter_sq_per_atom == 0.0
    assert res.energy_per_atom == -0.5


def test_mean_field_superradiant_branch_oracle():
    # independent oracle: dense grid scan of the classical energy surface
    p = DickeParams(y=2.0)
    amps = np.linspace(-2.0, 2.0, 1601)
    thetas = np.linspace(-math.pi, math.pi, 1601)
    grid_a, grid_t = np.meshgrid(amps, thetas, indexing="ij")
    energy = (grid_a ** 2 - 0.5 * np.cos(grid_t)
              + 2.0 * grid_a * np.sin(grid_t))
    i, j = np.unravel_index(np.argmin(energy), energy.shape)
    res = mean_field(p)
    assert res.order_parameter_sq_per_atom == pytest.approx(
        amps[i] ** 2, abs=5e-3)
    assert res.order_parameter_sq_per_atom == pytest.approx(15.0 / 16.0,
                                                            abs=1e-8)
    assert res.energy_per_atom == pytest.approx(-17.0 / 16.0, abs=1e-10)


def test_mean_field_parity_degenerate_minima():
    # the classical surface is invariant under flipping both the boson
    # amplitude and the spin azimuth
    from fpcavity.dicke import _classical_energy_per_atom
    p = DickeParams(y=1.8)
    a_star = math.sqrt(mean_field(p).order_parameter_sq_per_atom)
    theta_star = math.acos((1.0 / 1.8) ** 2)
    e1 = _classical_energy_per_atom(-a_star, theta_star, p)
    e2 = _classical_energy_per_atom(a_star, -theta_star, p)
    assert e1 == pytest.approx(e2, rel=1e-14)


def test_mean_field_asymmetric_frequencies():
    res = mean_field(DickeParams(omega_a=2.0, omega_c=0.5, y=0.9))
    assert res.y_c == pytest.approx(1.0)
    assert res.order_parameter_sq_per_atom == 0.0
    above = mean_field(DickeParams(omega_a=2.0, omega_c=0.5, y=1.2))
    assert above.order_parameter_sq_per_atom > 0.0
    assert above.energy_per_atom < -1.0  # below the normal branch


def test_variational_bound():
    for y in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
        p = DickeParams(y=y, n_atoms=8, fock_cutoff=60)
        assert ground_state(p).energy <= 8 * mean_field(p).energy_per_atom + 1e-12


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def test_scan_single_row():
    rows = spectrum_scan(DickeParams(n_atoms=4, fock_cutoff=20), [0.0])
    assert len(rows) == 1
    assert rows[0].photon_number == pytest.approx(0.0, abs=1e-14)


def test_scan_monotone_photon_number():
    p = DickeParams(n_atoms=8, fock_cutoff=60)
    rows = spectrum_scan(p, [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
    photons = [r.photon_number for r in rows]
    assert all(b >= a for a, b in zip(photons, photons[1:]))


def test_gap_softening():
    p = DickeParams(n_atoms=8, fock_cutoff=60)
    rows = spectrum_scan(p, [0.2, 2.0])
    assert rows[1].gap < rows[0].gap


def test_scan_validation():
    p = DickeParams(n_atoms=2, fock_cutoff=5)
    with pytest.raises(DomainError):
        spectrum_scan(p, [])
    with pytest.raises(DomainError):
        spectrum_scan(p, [-0.5])
