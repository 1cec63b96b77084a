"""Correlation stress tests as geodesics of the Fisher-Rao metric.

A correlation stress moves a covariance along a geodesic of the
constant-determinant submanifold, ``S(t) = S^{1/2} exp(tX) S^{1/2}`` with
``X`` traceless symmetric. Its Rao length ``|t| sqrt(sum(x_i**2) / 2)``
depends only on ``X`` and ``t``, and ``exp(-length)`` is its plausibility.
"""
from . import kernels
from .completion import (
    CompletionOptions,
    CompletionResult,
    CompletionSpec,
    complete,
    objective,
)
from .errors import *  # noqa: F403
from .fisher_rao import (
    GeodesicCurve,
    PathSample,
    StressPath,
    entropy,
    exp_map,
    geodesic,
    log_map,
    mahalanobis,
    plausibility,
    plausibility_between,
    rao_distance,
    stress_distance,
    tangent_inner,
)
from .generators import (
    GeneratorKind,
    closed_form_exp,
    eig_derivatives,
    lawley_parameter,
    lawley_stress,
    make_generator,
    pair_stress_diagonal_base,
    parse_generator,
)
from .isospectral import (
    IsospectralPath,
    geodesic_isospectral_obstruction,
    isospectral_evaluate,
    path_length,
    plane_generator,
)
from .spdcore import (
    SpdMatrix,
    SymMatrix,
    TangentDirection,
    congruence,
    cov_to_corr,
    equalizing_basis,
    spd_inv_sqrt,
    spd_log,
    spd_sqrt,
    sym_exp,
    validate_spd,
)

__version__ = "0.1.0"
