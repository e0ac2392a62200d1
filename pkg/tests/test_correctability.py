import math
import warnings

import numpy as np
import pytest

from bellqudit import (
    BellDiagonalState,
    Verdict,
    asym_css,
    asym_css_after,
    b_step_homogeneous,
    canonicalize,
    characteristic_exponent,
    dit_marginals,
    mix,
    pure_state,
    random_state,
    sequence_scan,
    uniform_state,
    verdict_by_theorem3,
)
from bellqudit.correctability import root_diagnostics
from bellqudit.errors import AmbiguousMaximum, InsufficientData

from conftest import biased_state

# r < 2: x~ = 0.55/0.45, M = 0.45, y~ = 0.45/0.55, so r = 1 exactly
NON_CORRECTABLE = [[0.5, 0.2], [0.05, 0.25]]


def test_asym_css_examples(qubit_example):
    assert asym_css(pure_state(3)) == 1
    assert asym_css(uniform_state(5)) == pytest.approx(-1)
    assert asym_css(qubit_example) == pytest.approx(1 - 2 * 0.7219280948873623, abs=1e-12)
    assert asym_css(qubit_example) == pytest.approx(-0.443856, abs=1e-6)


def test_canonicalize():
    s = pure_state(3)
    assert canonicalize(s) == (s, 0)
    a = np.array([[0.1, 0.5, 0.05], [0.05, 0.1, 0.05], [0.05, 0.1, 0.0]])
    canon, shift = canonicalize(BellDiagonalState(a))
    assert shift == 1
    np.testing.assert_allclose(dit_marginals(canon), [0.7, 0.1, 0.2])
    np.testing.assert_array_equal(canon.a[:, 0], a[:, 1])
    tie = BellDiagonalState(np.array([[0.25, 0.25, 0], [0.25, 0.25, 0], [0, 0, 0]]))
    with pytest.raises(AmbiguousMaximum):
        canonicalize(tie)


def test_asym_css_invariant_under_canonicalize(rng):
    for d in (3, 5, 7):
        for _ in range(20):
            s = random_state(d, rng)
            canon, _ = canonicalize(s)
            assert asym_css(canon) == pytest.approx(asym_css(s), abs=1e-14)


def test_exponent_qubit_example(qubit_example):
    rep = characteristic_exponent(qubit_example)
    assert rep.x_tilde == pytest.approx(4)
    assert rep.m_value == pytest.approx(0.6)
    assert rep.y_tilde == pytest.approx(0.75)
    assert rep.r == pytest.approx(math.log(4) / math.log(4 / 3), rel=1e-12)
    assert rep.r == pytest.approx(4.81884, abs=1e-5)
    assert rep.verdict is Verdict.CORRECTABLE
    assert rep.m_value == pytest.approx(rep.y_tilde * dit_marginals(qubit_example)[0])


def test_exponent_special_cases():
    # flat column 0: M = 0
    flat = BellDiagonalState(np.array([[0.2, 0.1, 0.0], [0.2, 0.1, 0.0], [0.2, 0.1, 0.1]]))
    rep = characteristic_exponent(flat)
    assert rep.r == 0 and rep.m_value == 0 and rep.verdict is Verdict.NON_CORRECTABLE
    # no dit errors
    a = np.zeros((3, 3))
    a[:, 0] = [0.8, 0.1, 0.1]
    rep = characteristic_exponent(BellDiagonalState(a))
    assert rep.r == math.inf and rep.verdict is Verdict.CORRECTABLE
    rep = characteristic_exponent(pure_state(5))
    assert rep.r == math.inf and rep.verdict is Verdict.CORRECTABLE


def test_exponent_boundary_is_indeterminate():
    # d = 2, column 0 = (a, b), column 1 weight c: r = 2 iff (a - b)^2 = (a + b) c
    a0, c = 0.64, 0.36
    # need (a - b)^2 = 0.64 * 0.36, a + b = 0.64
    diff = math.sqrt(a0 * c)
    a, b = (a0 + diff) / 2, (a0 - diff) / 2
    s = BellDiagonalState(np.array([[a, c / 2], [b, c / 2]]))
    rep = characteristic_exponent(s)
    assert rep.r == pytest.approx(2, abs=1e-12)
    assert rep.verdict is Verdict.INDETERMINATE


def test_exponent_canonicalizes_and_warns(rng):
    a = np.array([[0.05, 0.5, 0.1], [0.05, 0.1, 0.03], [0.05, 0.1, 0.02]])
    rep = characteristic_exponent(BellDiagonalState(a))
    assert rep.shift == 1
    assert any("not mixed" in w for w in rep.warnings)
    assert not any("not mixed" in w for w in characteristic_exponent(BellDiagonalState(a), apply_mix=True).warnings)
    with pytest.raises(AmbiguousMaximum):
        characteristic_exponent(uniform_state(3))


def test_full_modulus_component_warns():
    a = np.zeros((3, 3))
    a[1, 0] = 0.9
    a[:, 1] = 0.1 / 3
    rep = characteristic_exponent(BellDiagonalState(a))
    assert rep.r == math.inf
    assert any("full modulus" in w for w in rep.warnings)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_exponent_invariant_under_mix_and_relabel(d, rng):
    for _ in range(20):
        s = biased_state(d, rng)
        rep = characteristic_exponent(s)
        assert characteristic_exponent(s, apply_mix=True).r == pytest.approx(rep.r, rel=1e-12)
        k = rng.integers(1, d)
        shifted = BellDiagonalState(np.roll(s.a, k, axis=1))
        assert characteristic_exponent(shifted).r == pytest.approx(rep.r, rel=1e-12)


def test_asym_css_after_matches_direct(rng):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for d in (2, 3, 5):
            for _ in range(10):
                s = mix(canonicalize(biased_state(d, rng))[0])
                for n in (1, 2, 5, 12):
                    direct = asym_css(b_step_homogeneous(s, n).state)
                    assert asym_css_after(s, n).value == pytest.approx(direct, abs=1e-9)


def test_asym_css_after_deep_tail(qubit_example):
    # far beyond double precision the sign still follows the exponent (r = 4.8 > 2)
    res = asym_css_after(qubit_example, 2000)
    assert math.isfinite(res.log_gain) and math.isfinite(res.log_loss)
    assert res.sign == 1
    low = asym_css_after(BellDiagonalState(np.array(NON_CORRECTABLE)), 2000)
    assert low.sign == -1


def test_sequence_scan_pure():
    scan = sequence_scan(pure_state(3), 10)
    assert len(scan) == 10
    assert all(r.x_n == 0 and r.asym_css_after == pytest.approx(1) for r in scan)


def test_sequence_scan_becomes_correctable(qubit_example):
    scan = sequence_scan(qubit_example, 40)
    signs = [r.asym_css_after > 0 for r in scan]
    first = signs.index(True)
    assert all(signs[first:])
    assert first < 10


def test_sequence_scan_non_correctable():
    s = BellDiagonalState(np.array(NON_CORRECTABLE))
    assert characteristic_exponent(s).r == pytest.approx(1.0)
    scan = sequence_scan(s, 60)
    assert all(r.asym_css_after <= 0 for r in scan.records[5:])


def test_sequence_scan_skips_degenerate():
    from bellqudit.tolerances import override

    with override(survive=1e-20):
        scan = sequence_scan(BellDiagonalState(np.array(NON_CORRECTABLE)), 100)
    assert scan.skipped and scan.skipped[0] > 50
    assert len(scan) + len(scan.skipped) == 100


def test_root_diagnostics_converge(qubit_example):
    n, x_root, y_root = root_diagnostics(sequence_scan(qubit_example, 40).records)[-1]
    assert n == 40
    assert x_root == pytest.approx(0.25, rel=0.02)
    assert y_root == pytest.approx(0.75, rel=0.02)


def test_boundedness_verdicts(qubit_example):
    assert verdict_by_theorem3(sequence_scan(qubit_example, 40), 4.8) is Verdict.CORRECTABLE
    low = sequence_scan(BellDiagonalState(np.array(NON_CORRECTABLE)), 40)
    assert verdict_by_theorem3(low, 2.5) is Verdict.NON_CORRECTABLE
    with pytest.raises(InsufficientData):
        verdict_by_theorem3([], 3.0)


@pytest.mark.parametrize("d", [3, 5])
def test_boundedness_agrees_with_exponent(d, rng):
    checked = 0
    for _ in range(40):
        s = mix(canonicalize(biased_state(d, rng))[0])
        rep = characteristic_exponent(s)
        if abs(rep.r - 2) < 0.5 or not math.isfinite(rep.r):
            continue
        probe = 2 + (rep.r - 2) / 2 if rep.r > 2 else 3.0
        got = verdict_by_theorem3(sequence_scan(s, 40, canonical=False), probe)
        if got is not Verdict.INDETERMINATE:
            assert got is rep.verdict
            checked += 1
    assert checked > 10


def test_scan_matches_output_state(rng):
    for d in (2, 3, 5):
        s = mix(canonicalize(biased_state(d, rng))[0]) if d > 2 else canonicalize(biased_state(d, rng))[0]
        for rec in sequence_scan(s, 12, canonical=False):
            out = b_step_homogeneous(s, rec.n).state
            assert rec.x_n == pytest.approx(out.a[:, 1:].sum(), rel=1e-6, abs=1e-14)
            p = out.a.sum(axis=1)
            assert rec.y_n == pytest.approx(np.linalg.norm(p - 1 / d) / math.sqrt(2), rel=1e-6, abs=1e-14)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_n_th_root_of_dit_errors(d, rng):
    for _ in range(20):
        s = canonicalize(biased_state(d, rng))[0]
        if d > 2:
            s = mix(s)
        rep = characteristic_exponent(s)
        if rep.verdict is not Verdict.CORRECTABLE or not math.isfinite(rep.x_tilde):
            continue
        n, x_root, y_root = root_diagnostics(sequence_scan(s, 40, canonical=False).records)[-1]
        # x_n = sum_{m>0} (A_m / A_0)^n / N: the n-th root carries the column multiplicity
        second = np.sort(dit_marginals(s))[::-1][1]
        mult = np.sum(np.isclose(dit_marginals(s)[1:], second, rtol=1e-12))
        assert x_root == pytest.approx(mult ** (1 / 40) / rep.x_tilde, rel=0.02)


@pytest.mark.parametrize("d", [3, 5])
def test_phase_root_converges_for_mixed_states(d, rng):
    for _ in range(20):
        s = mix(canonicalize(biased_state(d, rng))[0])
        rep = characteristic_exponent(s)
        if rep.m_value == 0:
            continue
        _, _, y_root = root_diagnostics(sequence_scan(s, 40, canonical=False).records)[-1]
        assert y_root == pytest.approx(rep.y_tilde, rel=0.02)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_verdict_matches_deep_asym_css_both_sides(d):
    # alternate biased and uniform draws so both verdicts occur
    rng = np.random.default_rng(2024 + d)
    seen = {Verdict.CORRECTABLE: 0, Verdict.NON_CORRECTABLE: 0}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i in range(300):
            try:
                s = mix(canonicalize(biased_state(d, rng) if i % 2 else random_state(d, rng))[0])
            except AmbiguousMaximum:
                continue
            rep = characteristic_exponent(s)
            if abs(rep.r - 2) <= 0.05:
                continue
            sign = asym_css_after(s, 200).sign
            assert (sign > 0) == (rep.verdict is Verdict.CORRECTABLE), rep
            if rep.verdict in seen:
                seen[rep.verdict] += 1
    assert all(c > 20 for c in seen.values()), seen
