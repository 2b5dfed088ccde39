"""Beta-integrals over flag spaces: closed forms, exact samplers, verification."""

from .closedform import (CornerExponents, DivergenceError, EffectiveExponents,
                         GammaPoleError, effective_exponents,
                         in_convergence_domain, log_flag_integral,
                         log_gamma, log_hua_integral, log_projection_constant,
                         log_scalar_beta_integral, telescoped_log_constant)
from .fields import Field, FieldMismatchError, Scalar
from .matrices import (KMatrix, QuadCoeffs, SingularBlockError,
                       UnitriangularMatrix, corner, corner_gram_det,
                       desnanot_jacobi_check, det_commutative, dieudonne_det,
                       fit_quad_coeffs, gram, log_corner_gram_det,
                       quad_coeffs, schur_complement)
from .quadrature import (OracleFailure, integrate_halfline, integrate_lines,
                         integrate_radial)
from .sampling import (DegenerateProposalError, FlagBatch, FlagMeasure,
                       FlagSample, MCEstimate, conditional_entry_sample,
                       default_proposal, importance_estimate, project,
                       sample_flag, sample_flags, student_t_sample)

__version__ = "0.1.0"
