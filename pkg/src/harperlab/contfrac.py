"""Exact continued-fraction arithmetic for quasiperiodic frequencies.

Frequencies are represented by their digit stream a_1, a_2, ... together with
the big-integer convergents p_n/q_n, so that all Diophantine questions
(growth exponents, ||k alpha|| lower bounds, best approximations) can be
answered in exact integer arithmetic.  Digit schedules let one forge
frequencies whose denominators grow at a prescribed exponential rate.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import DepthInsufficient, PrecisionExhausted, RationalDetected

__all__ = [
    "ContinuedFraction",
    "FrequencyExponent",
    "DCVerdict",
    "ConstantBeta",
    "SingleBurst",
    "ExplicitTail",
    "expand",
    "golden",
    "silver",
    "from_digits",
    "beta_exponent",
    "dc_membership",
    "dc_alpha_membership",
    "forge",
    "resolve_frequency",
    "circle_norm",
    "log_of_int",
]

RealLike = Union[float, Fraction, str, int]

# Refuse to materialize forged digits longer than this many decimal digits.
DIGIT_CAP_DECIMAL = 10**6


def log_of_int(q: int) -> float:
    """Natural log of a positive big integer, never via float(q)."""
    # math.log handles arbitrary-size ints through bit-length reduction,
    # accurate to double precision.
    return math.log(q)


def _div_by_big(numer: float, q: int) -> float:
    """numer / q for positive big-int q, underflowing gracefully to 0.0."""
    if q.bit_length() < 1000:
        return numer / q
    if numer <= 0.0:
        return 0.0
    return math.exp(math.log(numer) - log_of_int(q))


def circle_norm(x: Fraction) -> Fraction:
    """Distance from x to the nearest integer, exactly."""
    f = x - (x.numerator // x.denominator)  # frac part in [0, 1)
    return min(f, 1 - f)


class ContinuedFraction:
    """A frequency given by its continued-fraction digit stream.

    Digits may be finite (expanded from a real to limited precision) or
    lazily extendable (named constants, forged schedules).  Convergents are
    cached; extension is lock-protected so instances can be shared across
    threads after construction.
    """

    def __init__(
        self,
        digits: Sequence[int],
        provider: Optional[Callable[[int, list], Optional[int]]] = None,
        origin: str = "explicit",
        value_hint: Optional[Fraction] = None,
        value_radius: Optional[Fraction] = None,
    ):
        if any(a < 1 for a in digits):
            raise ValueError("continued-fraction digits must be positive integers")
        self._digits = [int(a) for a in digits]
        self._provider = provider
        self.origin = origin
        self.truncated = False
        self.stop_reason: Optional[str] = None  # "rational" | "precision"
        self.value_hint = value_hint
        self.value_radius = value_radius
        # convergents[n] = (p_n, q_n); index 0 is the empty convergent 0/1
        self._convergents = [(0, 1)]
        self._lock = threading.Lock()
        self._grow_convergents()

    # -- digit / convergent access ------------------------------------

    def _grow_convergents(self):
        while len(self._convergents) <= len(self._digits):
            n = len(self._convergents)
            a = self._digits[n - 1]
            p1, q1 = self._convergents[n - 1]
            p0, q0 = self._convergents[n - 2] if n >= 2 else (1, 0)
            self._convergents.append((a * p1 + p0, a * q1 + q0))

    def ensure(self, depth: int) -> None:
        """Make digits a_1..a_depth (and convergents up to q_depth) available."""
        if depth <= len(self._digits):
            return
        with self._lock:
            while len(self._digits) < depth:
                if self._provider is None:
                    raise DepthInsufficient(
                        f"digit stream has {len(self._digits)} digits, "
                        f"{depth} requested ({self.origin})"
                    )
                nxt = self._provider(len(self._digits) + 1, self._convergents)
                if nxt is None:
                    self.truncated = True
                    raise DepthInsufficient(
                        f"digit stream exhausted at depth {len(self._digits)} "
                        f"({self.origin})"
                    )
                self._digits.append(int(nxt))
                self._grow_convergents()

    @property
    def depth(self) -> int:
        """Number of digits currently materialized."""
        return len(self._digits)

    def digit(self, n: int) -> int:
        """a_n (1-based)."""
        self.ensure(n)
        return self._digits[n - 1]

    def digits(self, depth: int) -> list[int]:
        self.ensure(depth)
        return self._digits[:depth]

    def convergent(self, n: int) -> tuple[int, int]:
        """(p_n, q_n); n=0 gives (0, 1)."""
        if n > 0:
            self.ensure(n)
        return self._convergents[n]

    def q(self, n: int) -> int:
        return self.convergent(n)[1]

    # -- real-value proxies --------------------------------------------

    def enclosure(self, depth: Optional[int] = None) -> tuple[Fraction, Fraction]:
        """Interval (as Fractions) certainly containing the value.

        Uses the classical alternating enclosure between consecutive
        convergents at the deepest available level.
        """
        if depth is None:
            depth = len(self._digits)
        else:
            self.ensure(depth)
        if depth < 2:
            raise DepthInsufficient("need at least two digits for an enclosure")
        pa, qa = self._convergents[depth - 1]
        pb, qb = self._convergents[depth]
        a, b = Fraction(pa, qa), Fraction(pb, qb)
        return (a, b) if a <= b else (b, a)

    def fraction(self, min_q: int = 1) -> Fraction:
        """Deepest-side convergent p_N/q_N with q_N >= min_q.

        Per the substitution policy, callers should request min_q with a
        comfortable (>= 1e3) margin over the resolution they need.  When
        the digit stream ends below min_q the deepest convergent is
        returned anyway: a finite stream represents exactly that rational.
        """
        n = 1
        while True:
            try:
                p, q = self.convergent(n)
            except DepthInsufficient:
                p, q = self._convergents[-1]
                return Fraction(p, q)
            if q >= min_q:
                return Fraction(p, q)
            n += 1

    def __float__(self) -> float:
        return float(self.fraction(min_q=1 << 60))

    # -- serialization ---------------------------------------------------

    def to_json(self, depth: Optional[int] = None) -> str:
        """Digit stream as a JSON array of decimal strings."""
        d = self._digits if depth is None else self.digits(depth)
        return json.dumps([str(a) for a in d])

    @classmethod
    def from_json(cls, text: str, origin: str = "digit-file") -> "ContinuedFraction":
        data = json.loads(text)
        return cls([int(s) for s in data], origin=origin)

    def convergents_to_json(self, depth: int) -> str:
        """Convergents as JSON pairs of decimal strings [[p, q], ...]."""
        self.ensure(depth)
        return json.dumps(
            [[str(p), str(q)] for p, q in self._convergents[: depth + 1]]
        )

    def __repr__(self):
        head = ",".join(str(a) for a in self._digits[:6])
        more = ",..." if len(self._digits) > 6 else ""
        return f"ContinuedFraction([{head}{more}], depth={self.depth}, {self.origin})"


def golden() -> ContinuedFraction:
    """(sqrt(5)-1)/2 = [1, 1, 1, ...]."""
    return ContinuedFraction([1], provider=lambda n, conv: 1, origin="golden")


def silver() -> ContinuedFraction:
    """sqrt(2)-1 = [2, 2, 2, ...]."""
    return ContinuedFraction([2], provider=lambda n, conv: 2, origin="silver")


def from_digits(digits: Sequence[int], origin: str = "explicit") -> ContinuedFraction:
    return ContinuedFraction(digits, origin=origin)


def expand(
    x: RealLike,
    max_depth: int = 64,
    precision: int = 15,
    partial: bool = False,
) -> ContinuedFraction:
    """Certified continued-fraction expansion of x in (0, 1).

    The input is taken to be known to +-10^-precision (exactly, when given
    as a Fraction).  Every digit is certified by interval arithmetic; when
    the interval straddles a rational completion, RationalDetected is
    raised; when it is too wide to pin the next digit, PrecisionExhausted.
    With ``partial=True`` these conditions end the expansion instead,
    returning the digits certified so far.
    """
    exact = isinstance(x, (Fraction, int))
    x0 = Fraction(x)
    radius = Fraction(0) if exact else Fraction(1, 10**precision)
    lo, hi = x0 - radius, x0 + radius
    if not (0 < x0 < 1):
        raise ValueError(f"expand() wants x in (0,1), got {x0}")

    digits: list[int] = []

    def finish() -> ContinuedFraction:
        return ContinuedFraction(
            digits,
            origin=f"expanded-from-real(precision={precision})",
            value_hint=x0,
            value_radius=radius,
        )

    def stop(exc: PrecisionExhausted) -> ContinuedFraction:
        if partial and exc.digits:
            cf = ContinuedFraction(
                exc.digits,
                origin=f"expanded-from-real(precision={precision})",
                value_hint=x0,
                value_radius=radius,
            )
            cf.truncated = True
            cf.stop_reason = (
                "rational" if isinstance(exc, RationalDetected) else "precision"
            )
            return cf
        raise exc

    while len(digits) < max_depth:
        if lo <= 0:
            # remainder interval touches zero: rational to working precision
            return stop(
                RationalDetected(
                    f"rational remainder after digits {digits}", digits=digits
                )
            )
        ilo, ihi = 1 / hi, 1 / lo
        flo, fhi = ilo.__floor__(), ihi.__floor__()
        if flo == fhi:
            digits.append(flo)
            lo, hi = ilo - flo, ihi - flo
            if hi == 0:  # exact rational, expansion complete
                return stop(
                    RationalDetected(
                        f"exact rational with digits {digits}", digits=digits
                    )
                )
            continue
        # Interval of 1/remainder contains an integer boundary.  If the
        # rational completed by that boundary digit sits within the input
        # uncertainty, the tie rule declares the input rational.
        if fhi - flo == 1:
            cand = digits + [fhi]
            p, q = 0, 1
            pp, qq = 1, 0
            for a in cand:
                p, pp = a * p + pp, p
                q, qq = a * q + qq, q
            if abs(x0 - Fraction(p, q)) <= 2 * max(radius, Fraction(1, 10**precision)):
                return stop(
                    RationalDetected(
                        f"within 10^-{precision} of {p}/{q}", digits=cand
                    )
                )
        return stop(
            PrecisionExhausted(
                f"cannot certify digit {len(digits)+1} at precision {precision}",
                digits=digits,
            )
        )
    return finish()


# -- growth exponent ----------------------------------------------------


@dataclass(frozen=True)
class FrequencyExponent:
    """Finite-depth surrogate of the denominator growth exponent.

    per_level holds (n, ln q_{n+1}/q_n); beta_estimate is the maximum over
    levels n >= warmup, alt_estimate the same for the digit-based estimator
    ln a_{n+1}/q_n.
    """

    depth: int
    warmup: int
    beta_estimate: float
    alt_estimate: float
    per_level: list = field(default_factory=list)
    per_level_alt: list = field(default_factory=list)


def beta_exponent(
    cf: ContinuedFraction, depth: int, warmup: int = 1
) -> FrequencyExponent:
    """Denominator growth exponent surrogate max_{n>=warmup} ln q_{n+1}/q_n.

    The limsup of the defining sequence is replaced by a maximum past an
    explicit warmup index.  Both the denominator-based and the digit-based
    estimators are reported; they differ per level by ln(q_{n+1}/a_{n+1})/q_n
    which is at most ln(2 q_n)/q_n.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    warmup = max(1, warmup)
    cf.ensure(depth)
    per: list[tuple[int, float]] = []
    per_alt: list[tuple[int, float]] = []
    for n in range(1, depth):
        qn = cf.q(n)
        per.append((n, _div_by_big(log_of_int(cf.q(n + 1)), qn)))
        a = cf.digit(n + 1)
        per_alt.append((n, _div_by_big(log_of_int(a), qn) if a > 1 else 0.0))
    tail = [v for n, v in per if n >= warmup]
    tail_alt = [v for n, v in per_alt if n >= warmup]
    if not tail:
        raise ValueError("warmup leaves no levels")
    return FrequencyExponent(
        depth=depth,
        warmup=warmup,
        beta_estimate=max(tail),
        alt_estimate=max(tail_alt),
        per_level=per,
        per_level_alt=per_alt,
    )


# -- Diophantine membership ----------------------------------------------


@dataclass(frozen=True)
class DCVerdict:
    """Outcome of a finite Diophantine scan.

    holds is True when the inequality was certified for the whole range;
    otherwise k/value record the first violation.
    """

    holds: bool
    k: Optional[int] = None
    value: Optional[float] = None
    K: int = 0


def _norm_interval(
    cf: ContinuedFraction, k: int, shift: Fraction, depth: int
) -> tuple[Fraction, Fraction]:
    """Interval certainly containing ||shift - k*alpha||_T at a given depth."""
    lo_a, hi_a = cf.enclosure(depth)
    lo_v, hi_v = shift - k * hi_a, shift - k * lo_a
    if lo_v > hi_v:
        lo_v, hi_v = hi_v, lo_v
    width = hi_v - lo_v
    base = circle_norm(lo_v)
    lo_n = base - width
    return (lo_n if lo_n > 0 else Fraction(0)), base + width


def _dc_scan(cf, tau, gamma, ks, shift=Fraction(0)) -> DCVerdict:
    K = max((abs(k) for k in ks), default=0)
    for k in ks:
        thr = gamma / (abs(k) + 1) ** tau
        if k == 0:
            val = circle_norm(shift)
            if val < thr:
                return DCVerdict(False, 0, float(val), K)
            continue
        depth = max(2, cf.depth)
        while True:
            exhausted = False
            try:
                cf.ensure(depth)
            except DepthInsufficient:
                if cf.depth < 2:
                    raise
                depth = cf.depth
                exhausted = True
            lo_n, hi_n = _norm_interval(cf, k, shift, depth)
            if lo_n >= thr:
                break  # inequality certified at this k
            if hi_n < thr:
                return DCVerdict(False, k, float(hi_n), K)
            if exhausted:
                raise DepthInsufficient(
                    f"||k alpha|| in [{float(lo_n):.3e}, {float(hi_n):.3e}] "
                    f"straddles DC threshold {thr:.3e} at k={k}, digits exhausted"
                )
            depth += 2
    return DCVerdict(True, K=K)


def dc_membership(
    cf: ContinuedFraction, tau: float, gamma: float, K: int
) -> DCVerdict:
    """Check ||k alpha|| >= gamma/(|k|+1)^tau for 1 <= k <= K, exactly."""
    if K < 0:
        raise ValueError("K must be >= 0")
    return _dc_scan(cf, tau, gamma, range(1, K + 1))


def dc_alpha_membership(
    theta: RealLike, cf: ContinuedFraction, tau: float, gamma: float, K: int
) -> DCVerdict:
    """Check ||2 theta - k alpha|| >= gamma/(|k|+1)^tau for |k| <= K."""
    if K < 0:
        raise ValueError("K must be >= 0")
    shift = 2 * Fraction(theta)
    ks = sorted(range(-K, K + 1), key=abs)
    return _dc_scan(cf, tau, gamma, [k for k in ks], shift=shift)


# -- digit schedules and forging ------------------------------------------


@dataclass(frozen=True)
class ConstantBeta:
    """a_n = floor(e^(beta * q_{n-1})) at every forged level."""

    beta: float


@dataclass(frozen=True)
class SingleBurst:
    """One digit floor(e^(beta * q_{n-1})) followed by a constant tail.

    burst_level is the absolute digit index of the burst; None places it at
    the first forged level.
    """

    beta: float
    burst_level: Optional[int] = None
    tail: int = 1


@dataclass(frozen=True)
class ExplicitTail:
    """Forged digits given literally."""

    digits: tuple

    def __init__(self, digits):
        object.__setattr__(self, "digits", tuple(int(a) for a in digits))


DigitSchedule = Union[ConstantBeta, SingleBurst, ExplicitTail]


def floor_exp(beta: float, q: int, cap_decimal: int = DIGIT_CAP_DECIMAL) -> Optional[int]:
    """floor(e^(beta*q)) by interval arithmetic with certified rounding.

    Returns None when the result would exceed cap_decimal decimal digits.
    Precision doubles until the enclosing interval no longer straddles an
    integer (e^(beta*q) is transcendental for beta*q != 0, so this ends).
    """
    import mpmath
    from mpmath import iv
    from mpmath.libmp import mpf_floor, round_ceiling, round_floor, to_int

    t = Fraction(beta) * q
    if t <= 0:
        raise ValueError("schedule exponent beta*q must be positive")
    # decimal length of e^t is t/ln 10; compare without converting t to float
    if q > cap_decimal * math.log(10) / beta:
        return None
    prec = max(64, int(float(t) * 1.4427) + 64)  # bits of e^t plus guard
    old = iv.prec
    try:
        while True:
            iv.prec = prec
            v = iv.exp(iv.mpf(t.numerator) / t.denominator)
            lo, hi = v._mpi_
            flo = to_int(mpf_floor(lo, prec, round_floor))
            fhi = to_int(mpf_floor(hi, prec, round_ceiling))
            if flo == fhi:
                return flo
            prec *= 2
    finally:
        iv.prec = old


def forge(
    base: ContinuedFraction,
    n0: int,
    schedule: DigitSchedule,
    levels: int,
    cap_decimal: int = DIGIT_CAP_DECIMAL,
) -> ContinuedFraction:
    """Copy base digits through a_{n0}, then continue with scheduled digits.

    The forged stream shares p_n/q_n with the base exactly for n <= n0.
    ``levels`` digits are materialized eagerly; ConstantBeta and SingleBurst
    streams keep extending on demand (SingleBurst with its constant tail).
    A scheduled digit longer than cap_decimal decimal digits is refused:
    the stream stops there with .truncated set.
    """
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    if levels < 0:
        raise ValueError("levels must be >= 0")
    if isinstance(schedule, ExplicitTail):
        if levels > len(schedule.digits):
            raise ValueError("ExplicitTail shorter than requested levels")
        provider = None
    elif isinstance(schedule, ConstantBeta):

        def provider(n, conv, _s=schedule):
            return floor_exp(_s.beta, conv[n - 1][1], cap_decimal)

    else:
        burst = schedule.burst_level if schedule.burst_level is not None else n0 + 1

        def provider(n, conv, _s=schedule, _b=burst):
            if n == _b:
                return floor_exp(_s.beta, conv[n - 1][1], cap_decimal)
            return _s.tail

    cf = ContinuedFraction(
        base.digits(n0), provider=provider, origin=f"forged({schedule!r}, n0={n0})"
    )
    for i in range(levels):
        n = n0 + 1 + i  # absolute index of the digit being forged
        if isinstance(schedule, ExplicitTail):
            a = schedule.digits[i]
        else:
            a = provider(n, cf._convergents)
        if a is None:
            cf.truncated = True
            break
        cf._digits.append(max(int(a), 1))
        cf._grow_convergents()
    return cf


# -- frequency handles -----------------------------------------------------


def resolve_frequency(
    freq: Union[RealLike, ContinuedFraction], min_q: int = 10**6
) -> Fraction:
    """Rational proxy for a frequency handle.

    ContinuedFraction handles resolve through a convergent with denominator
    at least min_q (choose min_q with a >= 1e3 margin over the resolution
    the caller needs); plain reals pass through exactly.
    """
    if isinstance(freq, ContinuedFraction):
        return freq.fraction(min_q=min_q)
    return Fraction(freq)
