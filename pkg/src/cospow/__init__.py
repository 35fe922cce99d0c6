"""High-precision numerics for the sequences |cos n|^(n^gamma)."""

from .approximants import RationalApprox, approximations, cf_expansion, mu_eff, progression_candidates
from .bounds import (
    central_moment_bruteforce,
    decay_profile,
    exp_pi_sq_over_2_bound,
    moment_closed_form,
    truncated_limsup_series,
)
from .curve import GaussianFit, Progression, eval_curve, fit_gaussian, make_progression, r_squared
from .errors import CospowError, DomainError, FitError, InsufficientDataError, ResourceLimitError
from .precision import (
    PrecisionBudget,
    Residual,
    SeqValue,
    nearest_multiple,
    pi_to_precision,
    required_precision,
    seq_value,
)
from .scanner import (
    PeakGroup,
    PersistenceReport,
    ScanConfig,
    classify_persistence,
    detect_peaks,
    infer_progression,
    scan_range,
)

__version__ = "0.1.0"
