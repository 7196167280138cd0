"""Perturbed semidefinite programs: limits of optimal values and the IPMs that find them."""

from .errors import (DimensionError, DomainError, GenerationError, InconsistencyError,
                     InfeasibleAffineError, IoError, NotPositiveDefiniteError, NumericalError,
                     NumericalFailure, ParseError, SdpLabError, SingularSystemError, StallError)
from .formats import format_sdpa, parse_sdpa, problem_from_json, problem_to_json, read_problem
from .gallery import (EXAMPLES, GalleryEntry, by_name, example1, example2, example3,
                      random_strongly_feasible, strongly_infeasible_instance)
from .ipm import (AngleStart, IdentityStart, IpmParams, IpmTrace, IteratePoint, Status,
                  central_point, centrality, default_identity_start, newton_direction,
                  newton_residual, run_potra_sheng, run_zhang, standard_start, step_length)
from .model import (ModifiedObjectives, PerturbationPair, SdpProblem, adjoint_map, apply_map,
                    modified_objectives, perturb, shifted_primal_value)
from .rays import (RayKind, RayLimitResult, RaySchedule, SweepResult, homogeneity_check,
                   ray_limit, solve_value, theta_sweep, value_at, vtilde)
from .status import (Classification, Flag, Side, SideStatus, Verdict, classify,
                     detect_strong_feasibility, detect_strong_infeasibility_dual,
                     detect_strong_infeasibility_primal, validate_certificate)
from .symmat import inner, inv_sqrt, is_pd, max_eig, min_eig, sqrtm_pd, sym

__version__ = "0.1.0"
