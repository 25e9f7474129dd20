"""Bath correlation functions for spectral densities with logarithmic
low-frequency behaviour: quadrature, asymptotic laws and Mellin diagnostics."""

from .asymptotics import AsymptoticBranch, bcf_asymptotic, branch_coefficient, branches, select_branch, short_time
from .errors import (
    DivergenceError,
    DomainError,
    ExpansionExhaustedError,
    LogBathError,
    OutOfStripError,
    PreconditionError,
    TauRangeError,
    ToleranceError,
    UnsupportedKindError,
)
from .mellin import decay_fit, mellin_closed_form, mellin_numeric, xi_hat
from .quad import BcfSample, QuadConfig, bcf_numeric, fourier_tail_oracle, moment
from .sd import (
    ConditionReport,
    LowFreqExpansion,
    SpectralDensity,
    check_conditions,
    evaluate,
    load_table,
    low_freq_expansion,
    make_log_ohmic,
    make_log_ohmic_real,
    make_tabulated,
)
from .specfun import SpecialValue, gamma_kernel

__version__ = "0.1.0"
