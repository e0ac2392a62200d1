"""Quantum Shannon bound, characteristic exponent and asymptotic correctability verdicts."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .core import BellDiagonalState, dft, dit_marginals, fourier_matrix, phase_marginals
from .entropy import shannon_d
from .errors import AmbiguousMaximum, DegenerateSurvival, InsufficientData
from .purification import b_step_homogeneous, mix
from .tolerances import TOL

# Fourier components below this multiple of eps times the column mass are roundoff
FOURIER_FLOOR = 32 * np.finfo(float).eps


class Verdict(str, enum.Enum):
    CORRECTABLE = "Correctable"
    NON_CORRECTABLE = "NonCorrectable"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


def asym_css(s: BellDiagonalState) -> float:
    """``1 - H_d(dit marginals) - H_d(phase marginals)``; positive means a CSS code corrects s."""
    return 1.0 - shannon_d(dit_marginals(s)) - shannon_d(phase_marginals(s))


def canonicalize(s: BellDiagonalState) -> tuple[BellDiagonalState, int]:
    """Cyclically relabel dit columns so the unique heaviest one becomes m = 0.

    Returns the relabelled state and the shift ``k`` with ``new[:, m] == old[:, m + k]``.
    This is a local unitary on one side only, so phase labels are unchanged.
    """
    cols = dit_marginals(s)
    k = int(np.argmax(cols))
    ties = np.flatnonzero(cols >= cols[k] - TOL.tie)
    if len(ties) > 1:
        raise AmbiguousMaximum(
            f"dit columns {ties.tolist()} share the largest weight {cols[k]:.12g}"
        )
    if k == 0:
        return s, 0
    return BellDiagonalState(np.roll(s.a, -k, axis=1)), k


def classify(r: float) -> Verdict:
    if r > 2 + TOL.r:
        return Verdict.CORRECTABLE
    if r < 2 - TOL.r:
        return Verdict.NON_CORRECTABLE
    return Verdict.INDETERMINATE


@dataclass(frozen=True)
class ExponentReport:
    r: float
    x_tilde: float
    y_tilde: float
    m_value: float
    verdict: Verdict
    warnings: tuple[str, ...] = ()
    shift: int = 0


def _columns_flat(a: np.ndarray) -> bool:
    rest = a[:, 1:]
    return bool(np.all(np.abs(rest - rest.mean(axis=0)) <= TOL.norm))


def characteristic_exponent(s: BellDiagonalState, apply_mix: bool = False) -> ExponentReport:
    """Characteristic exponent ``r = ln x~ / ln(1/y~)`` and the resulting verdict.

    ``x~`` is the ratio of the heaviest dit column to the next heaviest and
    ``y~ = M / A_{*0}`` with ``M`` the largest modulus among the non-zero
    Fourier components of column 0. The state is canonicalised first. The
    verdict describes B-steps preceded by mixing; ``r`` itself is unchanged
    by mixing, which only touches the columns m != 0.
    """
    canon, shift = canonicalize(s)
    if apply_mix:
        canon = mix(canon)
    d = canon.d
    notes = []
    cols = dit_marginals(canon)
    a0 = float(cols[0])
    runner_up = float(cols[1:].max())
    x_tilde = a0 / runner_up if runner_up > 0 else math.inf

    mags = np.abs(dft(canon.a[:, 0]))[1:]
    m_value = float(mags.max())
    y_tilde = m_value / a0
    top = {min(l, d - l) for l in np.flatnonzero(mags >= m_value - TOL.tie) + 1}
    if m_value > TOL.tie and len(top) > 1:
        notes.append(
            "largest non-zero Fourier component of column 0 is not unique "
            f"(l in {sorted(top)} up to conjugation); phase convergence is not covered"
        )
    if y_tilde >= 1 - TOL.tie:
        notes.append("column 0 has a Fourier component of full modulus; phase errors do not become uniform")
    if not apply_mix and d > 2 and not _columns_flat(canon.a):
        notes.append("columns m != 0 are not mixed; verdict refers to the protocol with mixing")

    if m_value <= TOL.tie * a0:
        m_value, y_tilde, r = 0.0, 0.0, 0.0
    elif y_tilde >= 1.0 or math.isinf(x_tilde):
        r = math.inf
    else:
        r = math.log(x_tilde) / -math.log(y_tilde)
    return ExponentReport(r, x_tilde, y_tilde, m_value, classify(r), tuple(notes), shift)


@dataclass(frozen=True)
class LogAsymCSS:
    """AsymCSS after a B-step as ``exp(log_gain) - exp(log_loss)``.

    ``log_gain`` is the log of ``1 - H_d(phase)`` and ``log_loss`` the log of
    ``H_d(dit)``; both stay finite long after the values underflow.
    """

    log_gain: float
    log_loss: float

    @property
    def value(self) -> float:
        return math.exp(self.log_gain) - math.exp(self.log_loss)

    @property
    def sign(self) -> int:
        if self.log_gain > self.log_loss:
            return 1
        if self.log_gain < self.log_loss:
            return -1
        return 0


def _phi(e: np.ndarray) -> np.ndarray:
    # (1 + e) log(1 + e) - e, with the limit 1 at e = -1 (an empty phase label)
    e = np.maximum(e, -1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1.0 + e) * np.log1p(e) - e
    return np.where(e == -1.0, 1.0, out)


def _log_dit_powers(s: BellDiagonalState, n: int) -> tuple[np.ndarray, float]:
    """``n log A_{*m}`` and its logsumexp (the log of the scaled survival)."""
    with np.errstate(divide="ignore"):
        powered = n * np.log(dit_marginals(s))
    return powered, float(logsumexp(powered))


def _phase_excess(s: BellDiagonalState, n: int, log_norm: float) -> tuple[float, np.ndarray]:
    """Output phase marginals after a size-n B-step as ``p'_l = (1 + exp(log_scale) eta_l) / d``.

    ``eps_l = sum_{i>0} z^{-il} G_i`` with ``G_i = sum_m F_im**n / N`` is kept as
    a log scale times an O(1) vector so it survives far below double precision.
    """
    d = s.d
    cols = dit_marginals(s)
    f = fourier_matrix(d) @ s.a
    f[np.abs(f) <= FOURIER_FLOOR * cols] = 0.0
    log_g = np.full(d - 1, -math.inf)
    phase = np.ones(d - 1, dtype=complex)
    for i in range(1, d):
        row = f[i][f[i] != 0]
        if row.size == 0:
            continue
        c = np.abs(row).max()
        w = np.sum(np.exp(n * np.log(row / c)))
        if w == 0:
            continue
        log_g[i - 1] = n * math.log(c) + math.log(abs(w)) - log_norm
        phase[i - 1] = w / abs(w)
    log_scale = float(log_g.max())
    if log_scale == -math.inf:
        return log_scale, np.zeros(d)
    eta_hat = np.exp(log_g - log_scale) * phase
    return log_scale, (fourier_matrix(d).conj()[:, 1:] @ eta_hat).real


def asym_css_after(s: BellDiagonalState, n: int) -> LogAsymCSS:
    """AsymCSS of the state after a homogeneous B-step of size n, in log domain.

    Works directly from the Fourier transforms of the input columns, so the
    result is meaningful even when the output state's deviations from a pure
    dit distribution and a uniform phase distribution are far below double
    precision.
    """
    d = s.d
    ln_d = math.log(d)
    cols = dit_marginals(s)
    powered, log_norm = _log_dit_powers(s, n)
    log_xi = powered - log_norm

    # dit side: H_d(xi') * ln d = -(1 - x) ln(1 - x) - sum_{m != k} xi'_m ln xi'_m
    k = int(np.argmax(cols))
    others = [m for m in range(d) if m != k and cols[m] > 0]
    if others:
        log_x = float(logsumexp(log_xi[others]))
        x = math.exp(log_x)
        if x > 1e-8:
            terms = [math.log(-(1.0 - x) * math.log1p(-x))]
        else:
            terms = [log_x + math.log1p(-x / 2)]
        terms += [float(log_xi[m] + math.log(-log_xi[m])) for m in others]
        log_loss = float(logsumexp(terms)) - math.log(ln_d)
    else:
        log_loss = -math.inf

    log_scale, eta = _phase_excess(s, n, log_norm)
    if log_scale == -math.inf:
        return LogAsymCSS(-math.inf, log_loss)
    if log_scale > math.log(1e-6):
        total = float(np.sum(_phi(math.exp(log_scale) * eta)))
        log_gain = math.log(total) if total > 0 else -math.inf
    else:
        se = math.exp(log_scale) * eta
        total = float(np.sum(eta**2 * (0.5 - se / 6 + se**2 / 12)))
        log_gain = 2 * log_scale + math.log(total) if total > 0 else -math.inf
    return LogAsymCSS(log_gain - math.log(d * ln_d), log_loss)


@dataclass(frozen=True)
class ScanRecord:
    n: int
    x_n: float
    y_n: float
    asym_css_after: float


@dataclass(frozen=True)
class Scan:
    records: list[ScanRecord]
    skipped: list[int] = field(default_factory=list)
    shift: int = 0

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def _scan_point(s: BellDiagonalState, n: int) -> tuple[float, float, float]:
    """x_n, y_n and AsymCSS of the output of a size-n B-step on ``s``, in log domain.

    The output matrix only resolves deviations down to ~1e-16 of its largest
    entry; the log-domain values agree with it above that and keep tracking
    the geometric decay below it.
    """
    d = s.d
    powered, log_norm = _log_dit_powers(s, n)
    if d > 1 and np.any(np.isfinite(powered[1:])):
        x_n = math.exp(float(logsumexp(powered[1:])) - log_norm)
    else:
        x_n = 0.0
    log_scale, eta = _phase_excess(s, n, log_norm)
    y_n = 0.0 if log_scale == -math.inf else math.exp(log_scale) * float(np.linalg.norm(eta)) / (d * math.sqrt(2.0))
    return x_n, y_n, asym_css_after(s, n).value


def sequence_scan(
    s: BellDiagonalState, n_max: int, apply_mix: bool = False, canonical: bool = True
) -> Scan:
    """Apply the fictive B-step of every size n = 1..n_max to ``s`` and record the outcome.

    With ``canonical`` the heaviest dit column is moved to m = 0 first, so
    that ``x_n`` measures the remaining dit errors. Sizes whose survival
    probability underflows are listed in ``skipped``.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    shift = 0
    if canonical:
        s, shift = canonicalize(s)
    if apply_mix:
        s = mix(s)
    records, skipped = [], []
    for n in range(1, n_max + 1):
        try:
            b_step_homogeneous(s, n)
        except DegenerateSurvival:
            skipped.append(n)
            continue
        records.append(ScanRecord(n, *_scan_point(s, n)))
    return Scan(records, skipped, shift)


def root_diagnostics(records) -> list[tuple[int, float, float]]:
    """Per record: ``(n, x_n**(1/n), (2 y_n**2)**(1/(2n)))``.

    For B-steps these tend to ``1/x~`` and ``y~`` respectively.
    """
    return [
        (r.n, r.x_n ** (1.0 / r.n), (2.0 * r.y_n**2) ** (1.0 / (2 * r.n)))
        for r in records
    ]


def verdict_by_theorem3(scan, r_probe: float, slope_tol: float = 1e-3) -> Verdict:
    """Empirical check of the two boundedness conditions over the scanned window.

    The log-ratios ``ln(x_n / y_n**r)`` are fitted linearly over the second
    half of the window. A non-positive slope for ``r = r_probe > 2`` means
    ``x_n / y_n**r`` stays bounded (correctable); a non-negative slope for
    ``r = 2`` means ``x_n / y_n**2`` stays away from zero (non-correctable).
    Only a finite window is seen, so this is a diagnostic, not a proof.
    """
    records = list(scan)
    if len(records) < 3:
        raise InsufficientData(f"need at least 3 scan records, got {len(records)}")
    tail = records[len(records) // 2 :]
    if len(tail) < 3:
        tail = records[-3:]
    n = np.array([r.n for r in tail], dtype=float)
    x = np.array([r.x_n for r in tail])
    y = np.array([r.y_n for r in tail])
    if np.all(x == 0):
        return Verdict.CORRECTABLE if r_probe > 2 else Verdict.INDETERMINATE
    if np.any(x == 0) or np.any(y == 0):
        if np.any((y == 0) & (x > 0)):
            return Verdict.NON_CORRECTABLE
        # dit errors died out while phases still deviate
        return Verdict.CORRECTABLE if r_probe > 2 else Verdict.INDETERMINATE

    def slope(r):
        return float(np.polyfit(n, np.log(x) - r * np.log(y), 1)[0])

    if r_probe > 2 and slope(r_probe) <= slope_tol:
        return Verdict.CORRECTABLE
    if slope(2.0) >= -slope_tol:
        return Verdict.NON_CORRECTABLE
    return Verdict.INDETERMINATE
