"""The unitary Redheffer matrix R*_n and its spectrum.

R*_n is the n x n 0/1 matrix with a 1 at (i, j) whenever i is a unitary
divisor of j or j = 1.
"""
from .arith import (
    OmegaHistogram,
    OmegaTable,
    StirlingTable,
    build_omega_table,
    is_unitary_divisor,
    k_sequence,
    mertens_star,
    mertens_star_coprime,
    mu_star,
    omega_histogram,
    primorial,
    stirling2_table,
    unitary_convolve,
    unitary_divisors,
)
from .charpoly import (
    MultiplicityRecord,
    ShiftedPoly,
    charpoly_shifted,
    dstar,
    expand_to_monomial,
    multiplicity,
    reduced_poly,
    sstar_all,
)
from .errors import ContractError, NumericFailure, ResourceGuardError
from .matrixlab import (
    DenseIntMatrix,
    SparseUnitaryMatrix,
    bareiss_det,
    build_rstar,
    build_s,
    build_t,
    charpoly_oracle,
    matvec,
    sparse_multiply,
)
from .spectral import (
    AsymptoticConstants,
    EigenReport,
    asymptotic_lambda,
    compute_constants,
    dominant_power_iteration,
    nontrivial_eigenvalues,
    s2star_asymptotic_check,
)

__version__ = "0.1.0"
