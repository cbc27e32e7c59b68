"""Numerical testbench for logarithmic functional inequalities on stratified groups."""

from .groups import (
    GroupDescriptor,
    QuasiNorm,
    dilate,
    euclidean_lp_norm,
    first_stratum_max_ratio,
    get_group,
    group_inverse,
    group_product,
    koranyi_norm,
    make_euclidean,
    make_heisenberg,
    register_group,
)
from .fields import (
    GridSpec,
    LEBESGUE,
    MeasureSpec,
    ScalarField,
    WeightSpec,
    entropy,
    fractional_sobolev_norm,
    gradient_energy,
    grid_for,
    horizontal_gradient,
    lp_norm,
    sample,
    semi_gaussian,
)
from .constants import (
    ConstantEstimate,
    NehariProblem,
    euclidean_gaussian_normalization,
    euclidean_log_sobolev_constant,
    gaussian_normalization,
    minimize_nehari_energy,
    nehari_scale,
    per_function_constant,
    weighted_gaussian_normalization,
)
from .inequalities import (
    DiscreteSample,
    VerificationReport,
    check_gross,
    check_interp,
    check_jensen_step,
    check_log_ckn,
    check_log_gn,
    check_log_holder,
    check_log_sobolev,
    check_log_sobolev_weighted,
    check_nash,
)
from .transforms import dirichlet_identity, optimize_dilation, parts_identities, tilt, untilt
from .heat import HeatTrajectory, decay_bound, heat_evolve, sub_laplacian

__version__ = "0.1.0"
