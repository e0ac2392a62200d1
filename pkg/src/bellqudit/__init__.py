"""Two-way purification (B-steps) of Bell-diagonal qudit states.

Covers the evolution of coefficient matrices under B-steps and phase mixing,
the characteristic exponent deciding asymptotic correctability, closed forms
for generalised isotropic states, and lower bounds on tolerable error rates
for two-basis qudit key distribution.
"""
from .core import (
    BellDiagonalState,
    BellLabel,
    check_dimension,
    dft,
    dit_marginals,
    gbxor_labels,
    inverse_dft,
    p_norm,
    phase_marginals,
    pure_state,
    random_state,
    uniform_state,
    validate,
)
from .correctability import (
    ExponentReport,
    ScanRecord,
    Verdict,
    asym_css,
    asym_css_after,
    canonicalize,
    characteristic_exponent,
    sequence_scan,
    verdict_by_theorem3,
)
from .entropy import binary_h, entropy_bounds, shannon_d, taylor_check
from .errors import *  # noqa: F401,F403
from .isotropic import IsotropicParams, iso_b_step, iso_correctable, iso_exponent, iso_to_state
from .purification import BStepResult, b_step, b_step_homogeneous, diagnostics, dit_step, mix
from .bounds import (
    Observables,
    exponent_from_observables,
    m_bound_from_column,
    m_bound_from_x,
    sweep,
    threshold_x,
)

__version__ = "0.1.0"
