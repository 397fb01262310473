"""Shared fixtures: reference specs and calibrated trajectory builders."""

import numpy as np
import pytest

from ffo.invariants import NuTrajectory
from ffo.propagator import PropagatorConfig
from ffo.reduction import integrate_epsilon, nu_from_epsilon_arrays
from ffo.signals import ComplexSignal, HamiltonianSpec, Sinusoid


@pytest.fixture(scope="session")
def forced_spec():
    """Smooth forced spec with |f| bounded well away from zero."""
    return HamiltonianSpec(
        omega=Sinusoid(0.8, 0.9, 0.3, offset=0.6),
        f=ComplexSignal(Sinusoid(0.15, 0.7, 1.1, offset=0.8),
                        Sinusoid(0.2, 1.1, 0.2, offset=-0.1)),
        g=Sinusoid(0.3, 0.5, 0.0, offset=0.4),
    )


def calibrated_epsilon_trajectory(spec, e0, t_final, dt=1e-3):
    """Integrate the eps equation and rescale to lambda2 = 1.

    nu scales as eps^2, so lambda2 scales as |scale|^4; the quarter-power
    rescale lands the trajectory exactly on the ladder shell.
    """
    et = integrate_epsilon(spec, e0, t_final, PropagatorConfig(dt=dt))
    nus = nu_from_epsilon_arrays(spec, et.times, et.eps, et.eps_dot)
    lam2_0 = float((np.abs(nus[0, 0]) ** 2 + np.abs(nus[0, 1]) ** 2
                    + 0.5 * np.abs(nus[0, 2]) ** 2).real)
    scale = lam2_0 ** (-0.25)
    eps, eps_dot = et.eps * scale, et.eps_dot * scale
    nus = nu_from_epsilon_arrays(spec, et.times, eps, eps_dot)
    lam1 = nus[:, 1] * nus[:, 0] + 0.25 * nus[:, 2] ** 2
    lam2 = (np.abs(nus[:, 0]) ** 2 + np.abs(nus[:, 1]) ** 2
            + 0.5 * np.abs(nus[:, 2]) ** 2).real
    traj = NuTrajectory(times=et.times, nu=nus, lambda1=lam1, lambda2=lam2)
    return traj, eps, eps_dot


@pytest.fixture(scope="session")
def calibrated_trajectory(forced_spec):
    """Ladder-calibrated trajectory (lambda1 = 0, lambda2 = 1) over t <= 5."""
    return calibrated_epsilon_trajectory(forced_spec, (1.0 + 0.2j, 0.1 - 0.3j), 5.0)
