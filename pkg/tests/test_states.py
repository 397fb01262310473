import numpy as np
import pytest

from ffo.algebra import ladder_operators, max_abs
from ffo.errors import ContractError
from ffo.grassmann import GrassmannOperator
from ffo.grid import cumtrapz_grid
from ffo.invariants import build_B, build_B_array, build_B_dagger, integrate_nu
from ffo.propagator import PropagatorConfig, evolve_unitary
from ffo.signals import (ComplexSignal, Constant, HamiltonianSpec, Sinusoid,
                         constant_spec)
from ffo.states import (EvolvedVacuum, coherence_check, coherent_state,
                        cs_eigen_residual, geometric_phase, lr_frame,
                        lr_ladder_fit, lr_phases, schrodinger_residual_max,
                        vacuum_from_nu, vacuum_nullspace_fallback,
                        vacuum_trajectory)

CFG = PropagatorConfig(dt=1e-3)


# -- evolved vacuum ------------------------------------------------------------

def test_vacuum_double_contract(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    psi, mask = vacuum_trajectory(traj, forced_spec)
    bpsi = np.einsum("kij,kj->ki", build_B_array(traj.nu), psi)
    assert np.max(np.linalg.norm(bpsi, axis=1)) <= 1e-6
    assert schrodinger_residual_max(forced_spec, traj.times, psi) <= 1e-5
    norms = np.linalg.norm(psi, axis=1)
    assert np.max(np.abs(norms - 1.0)) <= 1e-10


def test_vacuum_from_nu_flags_and_values(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    vac = vacuum_from_nu(traj, forced_spec, 1234)
    psi, mask = vacuum_trajectory(traj, forced_spec)
    assert vac.alpha0 == psi[1234, 0] and vac.alpha1 == psi[1234, 1]
    assert vac.used_fallback == bool(mask[1234])
    assert abs(abs(vac.alpha0) ** 2 + abs(vac.alpha1) ** 2 - 1.0) < 1e-12


def test_vacuum_canonical_start_is_ground_state():
    spec = constant_spec(omega=1.0, f=0.4, g=0.2)
    traj = integrate_nu(spec, (1, 0, 0), 1.0, CFG)
    vac = vacuum_from_nu(traj, spec, 0)
    assert vac.alpha0 == pytest.approx(1.0)
    assert vac.alpha1 == pytest.approx(0.0)
    assert not vac.used_fallback


def test_vacuum_tracks_true_evolution_through_pinch():
    # constant real forcing flips the state completely: nu_minus = cos^2(f t)
    # touches zero, so the closed form hands over to the fallback and back
    f0 = 0.5
    spec = constant_spec(f=f0)
    t_final = 8.0
    traj = integrate_nu(spec, (1, 0, 0), t_final, CFG)
    psi, mask = vacuum_trajectory(traj, spec)
    assert mask.any()  # the pinch at t = pi/(2 f0) activates the fallback
    u = evolve_unitary(spec, t_final, CFG)
    true_vac = u.U[:, :, 0]  # U |0>
    overlap = np.abs(np.sum(np.conj(true_vac) * psi, axis=1))
    assert np.min(overlap) >= 1.0 - 1e-8
    assert schrodinger_residual_max(spec, traj.times, psi) <= 1e-5
    bpsi = np.einsum("kij,kj->ki", build_B_array(traj.nu), psi)
    assert np.max(np.linalg.norm(bpsi, axis=1)) <= 1e-6


def test_nullspace_fallback_examples():
    b, _, _ = ladder_operators()
    vac = vacuum_nullspace_fallback(b, None, constant_spec(omega=1.0), 0.0, 1e-3)
    assert vac.alpha0 == pytest.approx(1.0) and vac.alpha1 == pytest.approx(0.0)
    assert vac.used_fallback
    with pytest.raises(ContractError):
        vacuum_nullspace_fallback(np.eye(2), None, constant_spec(), 0.0, 1e-3)


def test_nullspace_fallback_cross_validates_with_formula(forced_spec,
                                                         calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    psi, mask = vacuum_trajectory(traj, forced_spec)
    for k in (800, 2400, 4000):
        if mask[k] or abs(traj.nu[k, 0]) < 1e-3:
            continue
        prev = EvolvedVacuum(psi[k - 1, 0], psi[k - 1, 1])
        fb = vacuum_nullspace_fallback(build_B(traj.nu_at(k)), prev, forced_spec,
                                       float(traj.times[k]), traj.dt)
        overlap = abs(np.conj(fb.vector()) @ psi[k])
        assert overlap >= 1.0 - 1e-8


# -- coherent states ---------------------------------------------------------------

def test_coherent_state_reduces_to_vacuum_at_zero():
    vac = EvolvedVacuum(0.6, 0.8j)
    ket = coherent_state(0.0, vac, (1, 0, 0))
    assert ket.a0.c[0] == 0.6 and ket.a1.c[0] == 0.8j
    assert np.max(np.abs(ket.coeff_array()[:, 1:])) == 0.0


def test_coherent_state_canonical_at_t0():
    from ffo.grassmann import coherent_ket
    vac = EvolvedVacuum(1.0, 0.0)
    ket = coherent_state(1.0, vac, (1, 0, 0))
    want = coherent_ket(1.0)
    assert np.allclose(ket.coeff_array(), want.coeff_array())


def test_cs_eigen_relation_is_exact(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    psi, mask = vacuum_trajectory(traj, forced_spec)
    for k in (0, 1111, 3210, 5000):
        vac = EvolvedVacuum(psi[k, 0], psi[k, 1], bool(mask[k]))
        for scale in (1.0, 0.4 - 0.6j):
            assert cs_eigen_residual(traj.nu_at(k), vac, scale) <= 1e-12


def test_overlap_matrix_is_identity(forced_spec, calibrated_trajectory):
    # {|0;t>, B'(t)|0;t>} is an orthonormal moving frame
    traj, _, _ = calibrated_trajectory
    psi, _ = vacuum_trajectory(traj, forced_spec)
    for k in (123, 2500, 4999):
        v = psi[k]
        w = build_B_dagger(traj.nu_at(k)) @ v
        gram = np.array([[np.vdot(v, v), np.vdot(v, w)],
                         [np.vdot(w, v), np.vdot(w, w)]])
        assert max_abs(gram - np.eye(2)) <= 1e-8


# -- coherence of the canonical CS ---------------------------------------------------

def test_coherence_stationary_family():
    w0, g0 = 1.2, 0.4
    rep = coherence_check(constant_spec(omega=w0, g=g0), 5.0, CFG)
    assert np.max(rep.eigen_residual) <= 1e-8
    want = np.exp(-1j * w0 * rep.times)
    assert np.max(np.abs(rep.zeta_ratio - want)) <= 1e-8
    assert np.max(np.abs(rep.beta - np.exp(1j * w0 * rep.times))) <= 1e-10


def test_coherence_sinusoidal_frequency():
    spec = HamiltonianSpec(omega=Sinusoid(0.7, 0.9, 0.2, offset=1.1),
                           f=ComplexSignal(Constant(0.0)),
                           g=Sinusoid(0.3, 0.4))
    rep = coherence_check(spec, 5.0, CFG)
    assert np.max(rep.eigen_residual) <= 1e-7
    # zeta(t)/zeta must match conj(beta) = exp(-i int omega)
    assert np.max(np.abs(rep.zeta_ratio - np.conj(rep.beta))) <= 1e-7


def test_coherence_broken_by_forcing():
    rep = coherence_check(constant_spec(f=1.0), 2.0, CFG)
    k = int(round(np.pi / 4 / 1e-3))
    assert rep.eigen_residual[k] >= 0.1
    assert np.max(rep.eigen_residual) >= 1e-3


# -- Lewis-Riesenfeld phases -----------------------------------------------------------

def test_lr_phases_stationary():
    w0, g0 = 1.3, 0.7
    spec = constant_spec(omega=w0, g=g0)
    traj = integrate_nu(spec, (1, 0, 0), 5.0, CFG)
    ph = lr_phases(traj, spec)
    t = traj.times
    assert np.max(np.abs(ph.phi0 + g0 * t)) <= 1e-6
    assert np.max(np.abs(ph.phi1 + (g0 + w0) * t)) <= 1e-6
    assert np.max(np.abs(ph.phi_geometric)) <= 1e-6
    assert ph.consistency_residual <= 1e-10
    g_, d_ = geometric_phase(traj, spec, 5.0)
    assert g_ == pytest.approx(0.0, abs=1e-6)
    assert d_ == pytest.approx(-w0 * 5.0, abs=1e-6)


def test_phased_states_solve_schrodinger(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    ph = lr_phases(traj, forced_spec)
    psi0 = np.exp(1j * ph.phi0)[:, None] * ph.frame.e0
    psi1 = np.exp(1j * ph.phi1)[:, None] * ph.frame.e1
    assert schrodinger_residual_max(forced_spec, traj.times, psi0) <= 1e-5
    assert schrodinger_residual_max(forced_spec, traj.times, psi1) <= 1e-5


def test_phase_split_is_additive(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    ph = lr_phases(traj, forced_spec)
    assert np.max(np.abs((ph.phi_geometric + ph.phi_dynamical)
                         - (ph.phi1 - ph.phi0))) <= 1e-12
    rec = ph.record_at(100)
    assert rec.phi == pytest.approx(ph.phi1[100] - ph.phi0[100])


def test_lr_frame_orthonormal(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    frame = lr_frame(traj)
    dots = np.sum(np.conj(frame.e0) * frame.e1, axis=1)
    assert np.max(np.abs(dots)) <= 1e-12
    assert np.max(np.abs(np.linalg.norm(frame.e0, axis=1) - 1.0)) <= 1e-12


def test_lr_frame_requires_calibration(forced_spec):
    traj = integrate_nu(forced_spec, (0.9, 0.7, 0.1), 1.0, CFG)  # lambda1 != 0
    with pytest.raises(ContractError):
        lr_frame(traj)


def test_phased_cs_is_eigenstate_of_lr_ladder(forced_spec, calibrated_trajectory):
    # the normalized-frame CS carries eigenvalue zeta * exp(i phi(t))
    traj, _, _ = calibrated_trajectory
    ph = lr_phases(traj, forced_spec)
    k = 2048
    x = np.exp(1j * ph.phi0[k]) * ph.frame.e0[k]
    y = np.exp(1j * ph.phi1[k]) * ph.frame.e1[k]
    from ffo.grassmann import GrassmannElement, GrassmannKet
    a0 = GrassmannElement([x[0], -y[0], 0.0, -0.5 * x[0]])
    a1 = GrassmannElement([x[1], -y[1], 0.0, -0.5 * x[1]])
    ket = GrassmannKet(a0, a1)
    b_tilde = np.outer(ph.frame.e0[k], np.conj(ph.frame.e1[k]))
    lhs = GrassmannOperator(b_tilde).apply(ket)
    phi = ph.phi1[k] - ph.phi0[k]
    rhs = ket.left_mul(GrassmannElement([0.0, np.exp(1j * phi), 0.0, 0.0]))
    assert (lhs - rhs).max_abs() <= 1e-7


def test_lr_ladder_phase_fit(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    ph = lr_phases(traj, forced_spec)
    theta, fit_residual = lr_ladder_fit(ph, traj)
    assert fit_residual <= 1e-7
    dphi = ph.phi1 - ph.phi0
    drift = np.max(np.abs((theta - theta[0]) - (dphi - dphi[0])))
    assert drift <= 5e-5


def test_geometric_phase_gauge_independence(forced_spec, calibrated_trajectory):
    # multiplying the frame by a smooth test phase with chi(0) = chi(T) = 0
    # must leave the endpoint geometric phase unchanged
    traj, _, _ = calibrated_trajectory
    ph = lr_phases(traj, forced_spec)
    t = traj.times
    chi = 0.1 * np.sin(np.pi * t / t[-1]) ** 2
    e1 = np.exp(1j * chi)[:, None] * ph.frame.e1
    dt = traj.dt

    def connection(e):
        d = np.empty_like(e)
        d[1:-1] = (e[2:] - e[:-2]) / (2 * dt)
        d[0] = (-3 * e[0] + 4 * e[1] - e[2]) / (2 * dt)
        d[-1] = (3 * e[-1] - 4 * e[-2] + e[-3]) / (2 * dt)
        return np.sum(np.conj(e) * d, axis=1)

    phi_g_mod = cumtrapz_grid(-np.imag(connection(e1) - connection(ph.frame.e0)), dt)
    assert abs(phi_g_mod[-1] - ph.phi_geometric[-1]) <= 1e-6


def test_geometric_phase_requires_grid_time(forced_spec, calibrated_trajectory):
    traj, _, _ = calibrated_trajectory
    with pytest.raises(ValueError):
        geometric_phase(traj, forced_spec, 2.00037)
