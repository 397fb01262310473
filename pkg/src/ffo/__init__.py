"""Simulation and verification toolkit for the nonstationary fermionic
forced oscillator: dynamical invariant ladder operators, Grassmann coherent
states, and a brute-force propagator oracle on the exact two-dimensional
Hilbert space."""

from .algebra import (anticommutator, commutator, hamiltonian_matrix,
                      is_hermitian, is_unitary, ladder_operators, max_abs,
                      spin_operators)
from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (ConfigError, ContractError, FfoError, IntegrationError,
                     SignalRangeError, SingularReductionError)
from .grassmann import (GrassmannElement, GrassmannKet, GrassmannOperator,
                        apply_fermion_op, berezin_integrate, coherent_ket,
                        completeness_check, g_mul)
from .grid import time_grid
from .invariants import (MotionConstants, NuTrajectory, NuVector, build_B,
                         build_B_dagger, build_B_so, free_oscillator_nu,
                         hermitian_invariant, integrate_nu,
                         invariance_residual, ladder_conditions_check,
                         motion_constants, nu_rhs)
from .propagator import (PropagatorConfig, UnitaryTrajectory, evolve_state,
                         evolve_unitary, exp2x2, heisenberg_oracle)
from .reduction import (EpsilonState, EpsilonTrajectory, big_omega,
                        build_B_normalized, epsilon_prime_transform,
                        epsilon_rhs, first_integral_lambda, integrate_epsilon,
                        lambda2_from_epsilon, nu3_from_nu_plus,
                        nu_from_epsilon, nu_minus_compact,
                        nu_minus_from_nu_plus_2nd, third_order_residual)
from .signals import (ComplexSignal, Constant, HamiltonianSpec, Polynomial,
                      Signal, Sinusoid, Tabulated, constant_spec)
from .states import (CoherenceReport, EvolvedVacuum, PhaseRecord,
                     PhaseTrajectory, coherence_check, coherent_state,
                     cs_eigen_residual, geometric_phase, lr_frame, lr_phases,
                     schrodinger_residual_max, vacuum_from_nu,
                     vacuum_nullspace_fallback, vacuum_trajectory)

__version__ = "0.1.0"
