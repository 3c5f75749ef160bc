"""Numerical laboratory for the mono-mode Dicke model."""

from .params import ModelParams, ParameterError
from .hilbert import (BasisState, HilbertBasis, HamiltonianMatrix, build_basis,
                      assemble_hamiltonian, excitation_blocks, parity_blocks)
from .spectra import (EigenResult, ConvergenceError, ground_state,
                      ground_state_blockwise, low_spectrum, converge_truncation)
from .entanglement import (EntropyScanRow, reduced_atomic_dm, linear_entropy,
                           participation_count, entropy_scan)
from .classical import (PhasePoint, FixedPoint, Trajectory, DomainError,
                        IntegrationError, classical_energy, eom_rhs,
                        eom_jacobian, analytic_fixed_points, classify_stability,
                        integrate_trajectory, bifurcation_scan,
                        hopf_circle_point, point_at_energy)
from .wigner import (MultipoleDecomposition, WignerGrid, clebsch_gordan,
                     multipole_decompose, evaluate_wigner_plane,
                     evaluate_wigner_points, sphere_integrals,
                     half_height_area, negativity_volume, ridge_radius,
                     local_maxima)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
