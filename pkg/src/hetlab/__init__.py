"""hetlab: numerical operator algebra for two-mode heterodyne detection."""

__version__ = "0.1.0"

from .fock import (Mode, OperatorMatrix, SubspaceProjector, ToleranceConfig,
                   TwoModeBasis, annihilator, coherent_state, commutator,
                   embed, hermitian_power, photon_projector,
                   principal_matrix_function, projected_residual,
                   safe_projector)
from .heterodyne import (GeneratorSet, HeterodyneParams, build_psi, casimir,
                         caves_algebra, quadratures, rotated_modes,
                         su11_generators)
from .rns import (amplitude_operator, number_diff, r_operator,
                  rns_map, rns_phase_operator, sw_phase_operator,
                  theta_operator, trig_operators)
from .caves import (CavesOperators, build_tz, c0_s0, k_expansion, s_operator,
                    sn_commutator, unitarity_products)
from .classical import (ClassicalTrajectory, EmpConstants, OscillatorSpec,
                        classical_phase, coherent_expectations, emp_amplitude,
                        integrate_oscillator)
from .catalog import (IdentityCase, IdentityReport, builtin_catalog,
                      convergence_study, run_catalog)

__all__ = [name for name in dir() if not name.startswith("_")]
