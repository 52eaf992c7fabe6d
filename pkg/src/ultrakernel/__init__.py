"""Bochner-normalised ultraspherical polynomials, the Askey-Fitch projection
kernel (by series and by double integral) and dimension walks for
positive-definite functions on spheres."""

from .dimwalk import SchoenbergSeq, SphereDim, dim_to_index, eval_mixture, index_to_dim, lift, verify_lift
from .errors import (
    AccuracyError,
    ConvergenceError,
    DiracCaseError,
    DomainError,
    RangeError,
    SingularConfigurationError,
    UltrakernelError,
)
from .gegenbauer import INDEX_INFINITY, eval_Lambda, eval_W, eval_W_all, eval_W_infinity, weight_omega, weights_omega
from .identities import ValidationReport, check_multiplication, feldheim_vilenkin, run_sweep, sonine
from .kernel import (
    KernelEvaluation,
    KernelParams,
    kernel_integral,
    kernel_mass,
    kernel_series,
    poisson_closed_form,
    project,
    project_function,
)
from .quadrature import QuadratureRule, density_G, density_H, g_rule, gauss_jacobi_rule, h_rule

__version__ = "0.1.0"
