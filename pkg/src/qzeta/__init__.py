"""Numerical evaluation of the two-variable q-analogue of the Riemann zeta
function, its analytic continuation, and empirical growth checks on vertical
lines."""

from .complex_kernel import LogComplex, complex_pow, general_binomial, log_gamma
from .core import (
    EvalResult,
    LatticeKind,
    Method,
    PoleLattice,
    QParameter,
    Tolerance,
    choose_n,
    classical_zeta,
    epsilon_margin,
    pole_points,
    q_integer,
    zeta_q,
    zeta_q_continued,
    zeta_q_direct,
    zeta_q_single,
)
from .exceptions import (
    BudgetExceededError,
    GammaPoleError,
    InsufficientDataError,
    PoleProximityError,
    QZetaError,
)

from .growth import (
    BoundReport,
    MuEstimate,
    Regime,
    ScanRow,
    ScanSpec,
    check_bound,
    estimate_mu,
    fit_mu,
    scan_vertical,
)

__version__ = "0.1.0"
