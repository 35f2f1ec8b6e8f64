"""Symmetric (forward plus backward) time evolution under two Hamiltonians.

Modules
-------
linops
    Validated matrix exponentials, commutators and Hermitian spectral projectors.
interference
    The interference function ``I_{m,n}(x)``, its oracle and approximations.
spectral
    Ensemble eigenvalue statistics and interference-regime classification.
pathsum
    Path-sum decomposition of ``[U_F + U_B]^N`` and related evolutions.
kaon
    Neutral-kaon estimate of the commutator eigenvalue.
cli
    Command-line frontend (``bievolve``).
"""

from .exceptions import (
    BievolveError,
    CapExceededError,
    DimensionMismatchError,
    InvalidInputError,
    UndefinedWidthError,
)
from .interference import (
    InterferenceProfile,
    eval_closed_form,
    eval_modulus_product,
    eval_nested_sum_oracle,
    interference_profile,
    peak_width,
    quadratic_approx,
)
from .kaon import KaonParams, commutator_2x2, eigenvalue_closed_form, kaon_report
from .linops import SpectralDecomposition, commutator, hermitian_eigendecomposition, mat_exp
from .pathsum import (
    BiHamiltonian,
    attractor_evolve,
    bievolution_derivative,
    bievolution_state,
    check_nonzero_condition,
    s_mn_exact,
    s_mn_spectral,
    symmetric_evolve,
)
from .spectral import EnsembleModel, Regime, RegimeReport, regime_classify, threshold_times

__version__ = "0.1.0"
