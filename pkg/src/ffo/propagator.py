"""Brute-force evolution-operator oracle.

Builds the time-ordered evolution operator stepwise on a fixed grid.  The
default stepper exponentiates the midpoint Hamiltonian, which is unitary by
construction per step (global accuracy O(dt^2)); an RK4 integration of
dU/dt = -i H U is available for cross-validation at tight tolerances.
Everything here is independent of the invariant machinery, which is exactly
what makes it a usable oracle for it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import I2, max_abs
from .errors import ContractError, IntegrationError
from .grid import time_grid
from .signals import HamiltonianSpec


@dataclass(frozen=True)
class PropagatorConfig:
    dt: float = 1e-3
    method: str = "midpoint"  # "midpoint" (exponential) or "rk4"
    unitarity_renorm_every: int = 100  # 0 = never

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.method not in ("midpoint", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class UnitaryTrajectory:
    times: np.ndarray
    U: np.ndarray  # shape (len(times), 2, 2)

    def at(self, k: int) -> np.ndarray:
        return self.U[k]


def exp2x2(a: np.ndarray) -> np.ndarray:
    """Closed-form exponential of a 2x2 complex matrix.

    Splits a = alpha*1 + m with tr m = 0; then exp(a) =
    e^alpha (cosh(mu) 1 + sinh(mu)/mu m) with mu^2 = -det m.  The
    sinh(mu)/mu factor switches to its series for |mu| < 1e-6.  Both cosh
    and sinh(mu)/mu are even, so the branch of mu is irrelevant.
    """
    a = np.asarray(a, dtype=complex)
    alpha = 0.5 * (a[0, 0] + a[1, 1])
    m = a - alpha * I2
    mu2 = m[0, 0] * m[0, 0] + m[0, 1] * m[1, 0]
    mu = cmath.sqrt(mu2)
    if abs(mu) < 1e-6:
        ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0
        sh_over = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0
    else:
        ch = cmath.cosh(mu)
        sh_over = cmath.sinh(mu) / mu
    return cmath.exp(alpha) * (ch * I2 + sh_over * m)


def _renorm(u00, u01, u10, u11):
    # one Newton-Schulz step toward the polar-unitary factor:
    # U <- U (3 - U'U) / 2, quadratically accurate for near-unitary U
    g00 = u00.conjugate() * u00 + u10.conjugate() * u10
    g01 = u00.conjugate() * u01 + u10.conjugate() * u11
    g10 = g01.conjugate()
    g11 = u01.conjugate() * u01 + u11.conjugate() * u11
    h00, h01, h10, h11 = 3.0 - g00, -g01, -g10, 3.0 - g11
    return (0.5 * (u00 * h00 + u01 * h10), 0.5 * (u00 * h01 + u01 * h11),
            0.5 * (u10 * h00 + u11 * h10), 0.5 * (u10 * h01 + u11 * h11))


def _check_finite(u00, u01, u10, u11, t):
    for z in (u00, u01, u10, u11):
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise IntegrationError(f"nonfinite propagator entry at t={t}", t=t)


def _midpoint_factors(spec: HamiltonianSpec, times: np.ndarray, dt: float):
    """Per-step exponentials exp(-i dt H(t_k + dt/2)), vectorized."""
    tm = times[:-1] + 0.5 * dt
    w = np.asarray(spec.omega.value(tm), dtype=float)
    g = np.asarray(spec.g.value(tm), dtype=float)
    f = np.asarray(spec.f.value(tm), dtype=complex)
    r = np.sqrt(0.25 * w * w + np.abs(f) ** 2)
    phase = np.exp(-1j * dt * (0.5 * w + g))
    c = np.cos(dt * r)
    s = np.sinc(dt * r / np.pi)  # sin(dt r)/(dt r), exact at r = 0
    e00 = phase * (c + 1j * (0.5 * dt * w) * s)
    e01 = phase * (-1j * dt * np.conj(f)) * s
    e10 = phase * (-1j * dt * f) * s
    e11 = phase * (c - 1j * (0.5 * dt * w) * s)
    return e00, e01, e10, e11


def evolve_unitary(spec: HamiltonianSpec, t_final: float,
                   cfg: PropagatorConfig = PropagatorConfig()) -> UnitaryTrajectory:
    """Integrate U(t) = T exp(-i int_0^t H) on the shared grid, U(0) = 1.

    Parameters
    ----------
    spec : HamiltonianSpec
        Oscillator coefficients; must be evaluable on [0, t_final].
    t_final : float
        End time, a positive integer multiple of cfg.dt.
    cfg : PropagatorConfig
        Step size, stepping method and renormalization cadence.

    Returns
    -------
    UnitaryTrajectory
        U at every grid time; unitary within integrator accuracy.
    """
    dt = cfg.dt
    times = time_grid(t_final, dt)
    nsteps = len(times) - 1
    renorm = cfg.unitarity_renorm_every

    l00 = [1 + 0j]
    l01 = [0j]
    l10 = [0j]
    l11 = [1 + 0j]
    u00, u01, u10, u11 = 1 + 0j, 0j, 0j, 1 + 0j

    if cfg.method == "midpoint":
        e00, e01, e10, e11 = (a.tolist() for a in _midpoint_factors(spec, times, dt))
        for k in range(nsteps):
            a00, a01, a10, a11 = e00[k], e01[k], e10[k], e11[k]
            u00, u01, u10, u11 = (a00 * u00 + a01 * u10, a00 * u01 + a01 * u11,
                                  a10 * u00 + a11 * u10, a10 * u01 + a11 * u11)
            if renorm and (k + 1) % renorm == 0:
                _check_finite(u00, u01, u10, u11, times[k + 1])
                u00, u01, u10, u11 = _renorm(u00, u01, u10, u11)
            l00.append(u00); l01.append(u01); l10.append(u10); l11.append(u11)
    else:  # rk4 on dU/dt = -i H(t) U
        w0, g0, f0 = (np.asarray(spec.omega.value(times), dtype=float),
                      np.asarray(spec.g.value(times), dtype=float),
                      np.asarray(spec.f.value(times), dtype=complex))
        tm = times[:-1] + 0.5 * dt
        wm, gm, fm = (np.asarray(spec.omega.value(tm), dtype=float),
                      np.asarray(spec.g.value(tm), dtype=float),
                      np.asarray(spec.f.value(tm), dtype=complex))
        w0, g0, f0 = w0.tolist(), g0.tolist(), f0.tolist()
        wm, gm, fm = wm.tolist(), gm.tolist(), fm.tolist()

        def rhs(w, g, f, v00, v01, v10, v11):
            # -i H V with H = [[g, conj(f)], [f, w+g]]
            fc = f.conjugate()
            d = w + g
            return (-1j * (g * v00 + fc * v10), -1j * (g * v01 + fc * v11),
                    -1j * (f * v00 + d * v10), -1j * (f * v01 + d * v11))

        for k in range(nsteps):
            wk, gk, fk = w0[k], g0[k], f0[k]
            wmid, gmid, fmid = wm[k], gm[k], fm[k]
            wn, gn, fn = w0[k + 1], g0[k + 1], f0[k + 1]
            k1 = rhs(wk, gk, fk, u00, u01, u10, u11)
            k2 = rhs(wmid, gmid, fmid,
                     u00 + 0.5 * dt * k1[0], u01 + 0.5 * dt * k1[1],
                     u10 + 0.5 * dt * k1[2], u11 + 0.5 * dt * k1[3])
            k3 = rhs(wmid, gmid, fmid,
                     u00 + 0.5 * dt * k2[0], u01 + 0.5 * dt * k2[1],
                     u10 + 0.5 * dt * k2[2], u11 + 0.5 * dt * k2[3])
            k4 = rhs(wn, gn, fn,
                     u00 + dt * k3[0], u01 + dt * k3[1],
                     u10 + dt * k3[2], u11 + dt * k3[3])
            h = dt / 6.0
            u00 += h * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            u01 += h * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            u10 += h * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
            u11 += h * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
            if renorm and (k + 1) % renorm == 0:
                _check_finite(u00, u01, u10, u11, times[k + 1])
                u00, u01, u10, u11 = _renorm(u00, u01, u10, u11)
            l00.append(u00); l01.append(u01); l10.append(u10); l11.append(u11)

    _check_finite(u00, u01, u10, u11, times[-1])
    U = np.empty((nsteps + 1, 2, 2), dtype=complex)
    U[:, 0, 0] = l00
    U[:, 0, 1] = l01
    U[:, 1, 0] = l10
    U[:, 1, 1] = l11
    return UnitaryTrajectory(times=times, U=U)


def heisenberg_oracle(u: np.ndarray, x0: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Heisenberg transport U X0 U'; refuses visibly non-unitary U."""
    u = np.asarray(u, dtype=complex)
    if max_abs(u.conj().T @ u - I2) > tol:
        raise ContractError("heisenberg_oracle requires a unitary matrix")
    return u @ np.asarray(x0, dtype=complex) @ u.conj().T


def evolve_state(spec: HamiltonianSpec, psi0: np.ndarray, t_final: float,
                 cfg: PropagatorConfig = PropagatorConfig()):
    """Evolve a state vector: psi(t_k) = U(t_k) psi0.

    Returns (times, psi) with psi of shape (len(times), 2); the norm is
    preserved within the propagator's unitarity tolerance.
    """
    traj = evolve_unitary(spec, t_final, cfg)
    psi0 = np.asarray(psi0, dtype=complex).reshape(2)
    psi = np.einsum("kij,j->ki", traj.U, psi0)
    return traj.times, psi
