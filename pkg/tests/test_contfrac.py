import math
import threading
from fractions import Fraction

import numpy as np
import pytest

from harperlab.contfrac import (
    ConstantBeta,
    ContinuedFraction,
    ExplicitTail,
    SingleBurst,
    beta_exponent,
    circle_norm,
    dc_alpha_membership,
    dc_membership,
    expand,
    floor_exp,
    forge,
    from_digits,
    golden,
    silver,
)
from harperlab.errors import DepthInsufficient, PrecisionExhausted, RationalDetected

GOLDEN_VALUE = (math.sqrt(5.0) - 1.0) / 2.0


def norm_interval(cf, k, depth=None):
    """Exact interval for ||k alpha|| from the convergent enclosure."""
    lo_a, hi_a = cf.enclosure(depth)
    vals = sorted([k * lo_a, k * hi_a])
    w = vals[1] - vals[0]
    base = circle_norm(vals[0])
    return max(Fraction(0), base - w), base + w


def test_golden_digits_and_fibonacci_denominators():
    g = golden()
    assert g.digits(10) == [1] * 10
    assert [g.q(n) for n in range(1, 8)] == [1, 2, 3, 5, 8, 13, 21]


def test_expand_golden_from_float():
    cf = expand(GOLDEN_VALUE, max_depth=10)
    assert cf.digits(10) == [1] * 10


def test_expand_silver_convergents():
    cf = expand(math.sqrt(2.0) - 1.0, max_depth=8)
    assert [cf.convergent(n) for n in range(1, 5)] == [(1, 2), (2, 5), (5, 12), (12, 29)]


def test_expand_rational_detected_exact():
    with pytest.raises(RationalDetected) as exc:
        expand(Fraction(1, 3), max_depth=10)
    assert exc.value.digits == [3]


def test_expand_rational_detected_float():
    with pytest.raises(RationalDetected) as exc:
        expand(1.0 / 3.0, max_depth=10, precision=15)
    assert exc.value.digits == [3]


def test_expand_precision_exhausted_deep():
    with pytest.raises(PrecisionExhausted):
        expand(GOLDEN_VALUE, max_depth=200, precision=15)


def test_expand_partial_returns_certified_digits():
    # a float is eventually within 1e-15 of one of its own convergents, so
    # the deep expansion ends via the rational tie rule
    cf = expand(GOLDEN_VALUE, max_depth=200, precision=15, partial=True)
    assert cf.truncated and cf.stop_reason in ("precision", "rational")
    assert cf.digits(min(cf.depth, 30)) == [1] * min(cf.depth, 30)
    assert cf.depth >= 30


def test_expand_partial_wide_interval_is_precision_stop():
    # huge next digit: the 1/remainder interval spans many integers
    x = 1.0 / (1 + 1.0 / (1 + 1e-9))
    cf = expand(x, max_depth=10, precision=15, partial=True)
    assert cf.stop_reason == "precision"
    assert cf.digits(2) == [1, 1]


def test_expansion_reproduces_value():
    for x in [GOLDEN_VALUE, math.sqrt(2) - 1, math.pi - 3, 0.7548776662]:
        cf = expand(x, max_depth=12, partial=True)
        n = cf.depth
        assert n >= 6
        p, q = cf.convergent(n)
        assert abs(Fraction(x) - Fraction(p, q)) <= Fraction(1, q * q)


def test_recurrences_exact_random_digit_streams():
    rng = np.random.default_rng(0)
    for _ in range(20):
        digits = [int(a) for a in rng.integers(1, 50, size=30)]
        cf = from_digits(digits)
        p0, q0 = 0, 1
        p1, q1 = 1, digits[0]
        assert cf.convergent(1) == (p1, q1)
        for n in range(2, 31):
            p1, p0 = digits[n - 1] * p1 + p0, p1
            q1, q0 = digits[n - 1] * q1 + q0, q1
            assert cf.convergent(n) == (p1, q1)
            assert math.gcd(p1, q1) == 1
            assert cf.q(n) > cf.q(n - 1) or n <= 2


def test_qn_alpha_norm_bounds():
    # ||q_n alpha|| in [1/(2 q_{n+1}), 1/q_{n+1}] for n >= 1, exactly
    rng = np.random.default_rng(1)
    streams = [golden(), silver(), from_digits([int(a) for a in rng.integers(1, 9, 40)])]
    for cf in streams:
        cf.ensure(24)
        for n in range(1, 20):
            lo, hi = norm_interval(cf, cf.q(n), depth=24)
            qn1 = cf.q(n + 1)
            assert lo >= Fraction(1, 2 * qn1)
            assert hi <= Fraction(1, qn1)


def test_best_approximation_property():
    rng = np.random.default_rng(2)
    cf = golden()
    cf.ensure(26)
    for n in range(2, 24):
        if cf.q(n + 1) > 10**5:
            break
        qlo, qhi = cf.q(n), cf.q(n + 1)
        ks = rng.integers(qlo, qhi, size=min(8, qhi - qlo))
        _, best_hi = norm_interval(cf, cf.q(n), depth=26)
        for k in ks:
            lo_k, _ = norm_interval(cf, int(k), depth=26)
            assert best_hi <= lo_k or circle_norm(
                int(k) * cf.fraction(10**9)
            ) >= circle_norm(cf.q(n) * cf.fraction(10**9))


def test_beta_exponent_golden_reported_zero():
    fe = beta_exponent(golden(), depth=20, warmup=10)
    # digit-based estimator is exactly zero for bounded digits
    assert fe.alt_estimate == 0.0
    qw = golden().q(10)
    assert fe.beta_estimate <= math.log(2 * qw) / qw
    # the two estimators differ by at most ln(2 q_warmup)/q_warmup
    assert abs(fe.beta_estimate - fe.alt_estimate) <= math.log(2 * qw) / qw


def test_beta_exponent_single_huge_digit_spike():
    digits = [1, 1, 1, 1, 10**6] + [1] * 10
    cf = from_digits(digits)
    fe = beta_exponent(cf, depth=12, warmup=1)
    per = dict(fe.per_level)
    q4 = cf.q(4)
    assert per[4] == pytest.approx(math.log(cf.q(5)) / q4, rel=1e-12)
    assert per[4] > 10 * per[5] > 0  # spike at n=4, then decay
    assert max(per[n] for n in range(5, 12)) < per[4] / 10


def test_beta_exponent_forged_target():
    cf = forge(golden(), n0=4, schedule=ConstantBeta(0.5), levels=3)
    fe = beta_exponent(cf, depth=cf.depth, warmup=5)
    # digit estimator: |ln floor(e^{beta q})/q - beta| <= ln(1+e^{-beta q})/q
    for n, v in fe.per_level_alt:
        if n >= 5:
            qn = cf.q(n)
            assert abs(v - 0.5) <= math.log(1 + math.exp(-0.5 * qn)) / qn + 1e-12
    assert 0.45 <= fe.alt_estimate <= 0.55
    assert 0.45 <= fe.beta_estimate <= 0.62  # q-based runs ln q_n / q_n above


def test_dc_membership_golden_holds():
    verdict = dc_membership(golden(), tau=2.0, gamma=0.2, K=100)
    assert verdict.holds
    # brute-force float oracle
    a = float(golden())
    for k in range(1, 101):
        d = abs(k * a - round(k * a))
        assert d >= 0.2 / (k + 1) ** 2


def test_dc_membership_violated_at_resonance():
    cf = forge(golden(), n0=4, schedule=SingleBurst(1.5), levels=4)
    verdict = dc_membership(cf, tau=2.0, gamma=0.2, K=20)
    assert not verdict.holds
    assert verdict.k == cf.q(4)  # the pre-burst denominator
    assert verdict.value <= 1.0 / cf.q(5)


def test_dc_membership_empty_range():
    assert dc_membership(golden(), 2.0, 0.2, 0).holds


def test_dc_alpha_zero_theta_resonant():
    verdict = dc_alpha_membership(0.0, golden(), tau=2.0, gamma=0.1, K=10)
    assert not verdict.holds and verdict.k == 0 and verdict.value == 0.0


def test_dc_alpha_quarter_holds():
    verdict = dc_alpha_membership(0.25, golden(), tau=2.0, gamma=0.1, K=50)
    assert verdict.holds
    a = float(golden())
    for k in range(-50, 51):
        d = abs(0.5 - k * a - round(0.5 - k * a))
        assert d >= 0.1 / (abs(k) + 1) ** 2


def test_dc_alpha_half_alpha_resonant():
    g = golden()
    theta = g.fraction(min_q=10**12) / 2
    verdict = dc_alpha_membership(theta, g, tau=2.0, gamma=0.1, K=5)
    assert not verdict.holds
    assert verdict.k == 1
    assert verdict.value < 1e-9


def test_forge_first_scheduled_digit():
    base = from_digits([1, 1])
    cf = forge(base, n0=2, schedule=ConstantBeta(0.5), levels=1)
    assert cf.digit(3) == 2  # floor(e^{0.5 * q_2}) = floor(e) = 2


def test_forge_preserves_base_convergents():
    base = golden()
    cf = forge(base, n0=7, schedule=ConstantBeta(0.8), levels=2)
    for n in range(8):
        assert cf.convergent(n) == base.convergent(n)


def test_forge_single_burst_tail_is_diophantine():
    cf = forge(golden(), n0=3, schedule=SingleBurst(1.0), levels=12)
    assert cf.digits(cf.depth)[4:] == [1] * (cf.depth - 4)
    verdict = dc_membership(cf, tau=2.0, gamma=1e-3, K=50)
    assert verdict.holds


def test_forge_digit_cap_truncates():
    cf = forge(golden(), n0=4, schedule=ConstantBeta(2.0), levels=8, cap_decimal=50)
    assert cf.truncated
    assert cf.depth < 12


def test_forge_explicit_tail():
    cf = forge(golden(), n0=3, schedule=ExplicitTail([7, 8, 9]), levels=3)
    assert cf.digits(6) == [1, 1, 1, 7, 8, 9]
    with pytest.raises(DepthInsufficient):
        cf.ensure(7)


def test_floor_exp_certified():
    assert floor_exp(0.5, 2) == 2  # e ~ 2.718
    assert floor_exp(0.3, 91) == 718190003631
    assert floor_exp(1.0, 10**7, cap_decimal=10**6) is None


def test_digit_stream_json_round_trip():
    cf = forge(golden(), n0=5, schedule=ConstantBeta(0.4), levels=3)
    text = cf.to_json()
    back = ContinuedFraction.from_json(text)
    assert back.digits(back.depth) == cf.digits(cf.depth)
    assert back.convergent(back.depth) == cf.convergent(cf.depth)


def test_lazy_extension_thread_safe():
    cf = golden()
    errs = []

    def work():
        try:
            cf.ensure(4000)
        except Exception as e:  # pragma: no cover
            errs.append(e)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errs
    assert cf.digits(4000) == [1] * 4000


def test_beta_reported_maxima_decay_beyond_burst():
    # all-ones tail: estimates taken past ever-later warmups decrease to 0
    cf = forge(golden(), n0=3, schedule=SingleBurst(1.0), levels=14)
    ests = [
        beta_exponent(cf, depth=cf.depth, warmup=w).beta_estimate
        for w in range(4, 13)
    ]
    assert all(a >= b for a, b in zip(ests, ests[1:]))
    assert ests[-1] < 0.01


def test_fraction_resolution_margin():
    g = golden()
    fr = g.fraction(min_q=10**6)
    assert fr.denominator >= 10**6
    # enclosure certifies the proxy to better than 1/q^2
    lo, hi = g.enclosure()
    assert lo <= fr <= hi or abs(fr - lo) < Fraction(1, 10**10)
