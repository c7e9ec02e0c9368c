"""Antieigenvalues, Lp-dissipativity and Ornstein-Uhlenbeck heat kernels."""
from .antieigen import (
    AntieigenResult,
    NormalFormTrace,
    angle,
    mu1,
    mu1_brute,
    mu1_hermitian_pd,
    mu1_normal_accretive,
)
from .dissipativity import (
    DissipativityReport,
    LagrangeTrace,
    check_equivalence,
    check_two_vector,
    gamma_best,
    lagrange_stationary,
    p_range,
)
from .errors import InputError, NumericalFailure, PreconditionError
from .linalg import (
    expm_skew,
    hermitian_eigen,
    inner,
    real_embed_matrix,
    structural_predicates,
)
from .ou_kernel import (
    GridSpec,
    OUOperatorSpec,
    apply_semigroup,
    chapman_check,
    kernel_eval,
    mass_check,
    resolvent_probe,
)
from .regions import (
    KappaWindow,
    SectorSpec,
    cone_test_scalar,
    emit_region_table,
    kappa_window,
    sector_membership,
)

__version__ = "0.1.0"
