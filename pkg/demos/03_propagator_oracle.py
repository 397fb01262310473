"""The brute-force propagator: closed-form checks and convergence order.

The midpoint-exponential stepper is unitary by construction per step; its
global error is second order.  An RK4 integration of dU/dt = -i H U is
kept alongside for cross-validation when a comparison needs more accuracy
than O(dt^2).
"""

import numpy as np

from ffo.algebra import I2, ladder_operators, max_abs
from ffo.propagator import PropagatorConfig, evolve_state, evolve_unitary
from ffo.signals import ComplexSignal, Constant, HamiltonianSpec, Sinusoid, constant_spec

b, b_dag, _ = ladder_operators()

# constant frequency: U(t) = diag(1, exp(-i w t))
w0, t_final = 1.3, 5.0
traj = evolve_unitary(constant_spec(omega=w0), t_final, PropagatorConfig(dt=1e-3))
want = np.diag([1.0, np.exp(-1j * w0 * t_final)])
print("constant omega, |U - closed form| :", max_abs(traj.U[-1] - want))

# constant real forcing: Rabi rotation between the two states
f0 = 0.8
times, psi = evolve_state(constant_spec(f=f0), [1, 0], t_final, PropagatorConfig(dt=1e-3))
print("forcing, max |amp0 - cos(f t)|    :", np.max(np.abs(psi[:, 0] - np.cos(f0 * times))))
print("forcing, max |amp1 + i sin(f t)|  :", np.max(np.abs(psi[:, 1] + 1j * np.sin(f0 * times))))

# unitarity over a long run with a fully time-dependent spec
spec = HamiltonianSpec(omega=Sinusoid(0.9, 1.1, 0.2, offset=0.7),
                       f=ComplexSignal(Sinusoid(0.5, 0.8, 0.5, offset=0.1), Constant(0.2)),
                       g=Constant(0.1))
traj = evolve_unitary(spec, 10.0, PropagatorConfig(dt=1e-3))
unit = np.max(np.abs(np.conj(np.transpose(traj.U, (0, 2, 1))) @ traj.U - I2))
print("\nunitarity drift over t <= 10      :", unit)

# Richardson check: halving dt should shrink the result change by ~4
us = [evolve_unitary(spec, 2.0, PropagatorConfig(dt=dt)).U[-1]
      for dt in (0.02, 0.01, 0.005)]
print("observed convergence ratio        :",
      max_abs(us[0] - us[1]) / max_abs(us[1] - us[2]), "(expect ~4)")

# rk4 cross-validation at the same step size
u_mid = evolve_unitary(spec, 2.0, PropagatorConfig(dt=1e-3)).U[-1]
u_rk4 = evolve_unitary(spec, 2.0, PropagatorConfig(dt=1e-3, method="rk4")).U[-1]
print("midpoint vs rk4 at dt=1e-3        :", max_abs(u_mid - u_rk4))
