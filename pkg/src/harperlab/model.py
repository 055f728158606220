"""The extended Harper operator family.

Couplings and their region classification, the duality map, the off-diagonal
sampling functions c/c~ and their zeros, admissible-phase tests, finite
truncations with zero boundary conditions, and windowed Green's functions.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import contfrac
from ._tridiag import scaled_det_backward, scaled_det_forward, sturm_count
from .contfrac import ContinuedFraction
from .errors import (
    InvalidCoupling,
    Lambda2Zero,
    RationalDetected,
    ResolventSingular,
    WindowEmpty,
)

__all__ = [
    "CouplingTriple",
    "RegionTag",
    "Classification",
    "ZeroKind",
    "ZeroStructure",
    "OperatorSample",
    "Truncation",
    "Admissibility",
    "classify",
    "duality",
    "c_function",
    "c_tilde_function",
    "abs_c_function",
    "c_zeros",
    "zero_structure",
    "theta_admissible",
    "build_truncation",
    "green_function",
    "orbit_phases",
    "wrap01",
]

FrequencyLike = Union[float, Fraction, ContinuedFraction]

BOUNDARY_TOL = 1e-12


def wrap01(x: float) -> float:
    """Representative of x mod 1 in [0, 1)."""
    return x - math.floor(x)


@dataclass(frozen=True)
class CouplingTriple:
    """Hopping amplitudes (lambda1, lambda2, lambda3), all nonnegative."""

    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        ls = (self.lambda1, self.lambda2, self.lambda3)
        if any(not math.isfinite(v) for v in ls):
            raise InvalidCoupling(f"non-finite coupling {ls}")
        if any(v < 0 for v in ls):
            raise InvalidCoupling(f"negative coupling in {ls}")
        if all(v == 0 for v in ls):
            raise InvalidCoupling("all three couplings vanish")

    @property
    def sum13(self) -> float:
        return self.lambda1 + self.lambda3

    def astuple(self) -> tuple:
        return (self.lambda1, self.lambda2, self.lambda3)

    @classmethod
    def parse(cls, text: str) -> "CouplingTriple":
        """Parse the CLI form 'l1,l2,l3'."""
        parts = text.split(",")
        if len(parts) != 3:
            raise InvalidCoupling(f"expected 'l1,l2,l3', got {text!r}")
        return cls(*(float(p) for p in parts))


class RegionTag(enum.Enum):
    REGION_I = "I"
    REGION_II = "II"
    REGION_III_ISO = "III_iso"
    REGION_III_ANISO = "III_aniso"
    LINE_I = "L_I"
    LINE_II = "L_II"
    LINE_III = "L_III"


@dataclass(frozen=True)
class Classification:
    tag: RegionTag
    boundary: bool  # within tolerance of a region-defining equality


def classify(coupling: CouplingTriple, tol: float = BOUNDARY_TOL) -> Classification:
    """Locate the coupling in the region diagram.

    Interiors are assigned only when every defining inequality holds with
    margin > tol; equalities within tol land on the lines.  The corner
    lambda2 = sum = 1 goes to L_II (the line the duality map fixes).  The
    lambda2 = 0 edge, which the region display leaves unassigned, maps to
    the adjacent region with the boundary flag set.
    """
    l1, l2, l3 = coupling.astuple()
    s = coupling.sum13

    def near(a, b):
        return abs(a - b) <= tol

    edge = l2 <= tol  # the lambda2=0 edge sits outside every displayed region
    if near(l2, 1.0) and s <= 1.0 + tol:
        return Classification(RegionTag.LINE_II, True)
    if near(s, 1.0) and l2 < 1.0 - tol:
        return Classification(RegionTag.LINE_I, True)
    if near(s, l2) and l2 > 1.0 + tol:
        return Classification(RegionTag.LINE_III, True)
    if s < 1.0 - tol and l2 < 1.0 - tol:
        return Classification(RegionTag.REGION_I, edge)
    if l2 > 1.0 + tol and s < l2 - tol:
        return Classification(RegionTag.REGION_II, False)
    if s > 1.0 + tol and s > l2 + tol:
        tag = RegionTag.REGION_III_ISO if near(l1, l3) else RegionTag.REGION_III_ANISO
        return Classification(tag, edge)
    # leftover slivers within ~2 tol of a line junction: snap to nearest line
    dists = {
        RegionTag.LINE_II: abs(l2 - 1.0),
        RegionTag.LINE_I: abs(s - 1.0),
        RegionTag.LINE_III: abs(s - l2),
    }
    return Classification(min(dists, key=dists.get), True)


def duality(coupling: CouplingTriple) -> CouplingTriple:
    """The duality map (l1, l2, l3) -> (l3/l2, 1/l2, l1/l2); an involution."""
    l1, l2, l3 = coupling.astuple()
    if l2 == 0:
        raise Lambda2Zero("duality map undefined at lambda2 = 0")
    return CouplingTriple(l3 / l2, 1.0 / l2, l1 / l2)


# -- off-diagonal sampling functions ---------------------------------------


def c_function(coupling: CouplingTriple, alpha: float, theta):
    """c(theta) = l1 e^{-2 pi i (theta + alpha/2)} + l2 + l3 e^{+...}."""
    l1, l2, l3 = coupling.astuple()
    phi = 2.0 * np.pi * (np.asarray(theta, dtype=np.float64) + 0.5 * alpha)
    return (l1 + l3) * np.cos(phi) + l2 + 1j * (l3 - l1) * np.sin(phi)


def c_tilde_function(coupling: CouplingTriple, alpha: float, theta):
    """The conjugate sampling function; equals conj(c) for real theta."""
    l1, l2, l3 = coupling.astuple()
    phi = 2.0 * np.pi * (np.asarray(theta, dtype=np.float64) + 0.5 * alpha)
    return (l1 + l3) * np.cos(phi) + l2 + 1j * (l1 - l3) * np.sin(phi)


def abs_c_function(coupling: CouplingTriple, alpha: float, theta):
    """|c|(theta) = sqrt(c * c~) = |c(theta)|, real and nonnegative."""
    l1, l2, l3 = coupling.astuple()
    phi = 2.0 * np.pi * (np.asarray(theta, dtype=np.float64) + 0.5 * alpha)
    re = (l1 + l3) * np.cos(phi) + l2
    im = (l3 - l1) * np.sin(phi)
    return np.sqrt(re * re + im * im)


class ZeroKind(enum.Enum):
    NONE = "none"
    SINGLE = "single"
    PAIR = "pair"
    DOUBLE = "double"  # l1 = l3 = l2/2: the two zeros collide at 1/2


@dataclass(frozen=True)
class ZeroStructure:
    """Zeros of c as alpha-independent offsets: each zero is offset - alpha/2."""

    kind: ZeroKind
    offsets: tuple

    def positions(self, alpha: float) -> list:
        return [wrap01(o - 0.5 * alpha) for o in self.offsets]


def zero_structure(coupling: CouplingTriple, tol: float = BOUNDARY_TOL) -> ZeroStructure:
    """Classify the zero set of c on the circle.

    Writing z = e^{2 pi i (theta + alpha/2)}, zeros solve
    l3 z^2 + l2 z + l1 = 0 on |z| = 1: no roots there unless l1 + l3 = l2
    (z = -1) or l1 = l3 > l2/2 (a conjugate pair).
    """
    l1, l2, l3 = coupling.astuple()
    if abs(l1 + l3 - l2) <= tol:
        if abs(l1 - l3) <= tol:
            return ZeroStructure(ZeroKind.DOUBLE, (0.5,))
        return ZeroStructure(ZeroKind.SINGLE, (0.5,))
    if abs(l1 - l3) <= tol and l1 > 0.5 * l2 + tol:
        a = math.acos(max(-1.0, min(1.0, -l2 / (2.0 * l1)))) / (2.0 * math.pi)
        return ZeroStructure(ZeroKind.PAIR, (a, wrap01(-a)))
    return ZeroStructure(ZeroKind.NONE, ())


def c_zeros(coupling: CouplingTriple, tol: float = BOUNDARY_TOL) -> list:
    """Offsets o with c(o - alpha/2) = 0, for every alpha at once."""
    return list(zero_structure(coupling, tol).offsets)


# -- admissible phases ------------------------------------------------------


class Admissibility(enum.Enum):
    IN_THETA = "in_Theta"
    OUT = "out"
    UNDECIDED = "undecided"


def theta_admissible(
    coupling: CouplingTriple,
    theta: Union[float, Fraction],
    depth: int = 40,
    tol: float = 1e-2,
    precision: int = 30,
) -> Admissibility:
    """Finite-depth test of membership in the full-measure phase set.

    No zeros of c: every phase is admissible.  Single zero: requires the
    growth exponent of 2*theta to vanish; zero pair: the same for
    2*theta +- arccos(-l2/(2 l1))/pi.  "Vanish" means the finite-depth
    exponent past a warmup index stays below tol.  The colliding-zeros
    coupling (l1 = l3 = l2/2) is reported as undecided.
    """
    import mpmath

    zs = zero_structure(coupling)
    if zs.kind is ZeroKind.NONE:
        return Admissibility.IN_THETA
    if zs.kind is ZeroKind.DOUBLE:
        return Admissibility.UNDECIDED

    with mpmath.workdps(precision + 10):
        t2 = 2 * Fraction(theta)
        if zs.kind is ZeroKind.SINGLE:
            targets = [t2]
        else:
            shift = mpmath.acos(-coupling.lambda2 / (2 * coupling.lambda1)) / mpmath.pi
            shift_frac = Fraction(mpmath.nstr(shift, precision + 5, strip_zeros=False))
            targets = [t2 + shift_frac, t2 - shift_frac]

    verdicts = []
    for t in targets:
        t = t - (t.numerator // t.denominator)
        if t == 0 or min(t, 1 - t) < Fraction(1, 10**precision):
            verdicts.append(Admissibility.OUT)  # resonant (rational) target
            continue
        try:
            cf = contfrac.expand(t, max_depth=depth, precision=precision, partial=True)
        except RationalDetected:
            verdicts.append(Admissibility.OUT)
            continue
        if getattr(cf, "stop_reason", None) == "rational":
            verdicts.append(Admissibility.OUT)
            continue
        if cf.depth < 4:
            verdicts.append(Admissibility.UNDECIDED)
            continue
        fe = contfrac.beta_exponent(cf, depth=cf.depth, warmup=max(2, cf.depth // 2))
        if fe.beta_estimate > tol:
            verdicts.append(Admissibility.OUT)
        elif len([1 for n, _ in fe.per_level if n >= fe.warmup]) < 2:
            verdicts.append(Admissibility.UNDECIDED)
        else:
            verdicts.append(Admissibility.IN_THETA)
    if Admissibility.OUT in verdicts:
        return Admissibility.OUT
    if Admissibility.UNDECIDED in verdicts:
        return Admissibility.UNDECIDED
    return Admissibility.IN_THETA


# -- samples, orbits, truncations -------------------------------------------


def orbit_phases(
    theta: Union[float, Fraction],
    alpha: Fraction,
    start: int,
    count: int,
    anchor_every: int = 4096,
) -> np.ndarray:
    """Phases (theta + n*alpha) mod 1 for n = start..start+count-1.

    Exact rational anchoring every anchor_every sites bounds the float
    accumulation drift by anchor_every * eps, far below any zero guard.
    """
    t = Fraction(theta)
    a = Fraction(alpha)
    af = float(a)
    out = np.empty(count)
    pos = 0
    while pos < count:
        n = start + pos
        x0 = t + n * a
        x0 -= x0.numerator // x0.denominator
        m = min(anchor_every, count - pos)
        out[pos : pos + m] = (float(x0) + af * np.arange(m)) % 1.0
        pos += m
    return out


@dataclass(frozen=True)
class OperatorSample:
    """One operator of the family: coupling, frequency handle, phase."""

    coupling: CouplingTriple
    alpha: FrequencyLike
    theta: Union[float, Fraction] = 0.0

    def alpha_fraction(self, n_sites: int = 1, tol: float = 1e-12) -> Fraction:
        """Rational frequency proxy adequate for orbits of n_sites points.

        The denominator is chosen so the accumulated orbit error n/q^2 stays
        three orders of magnitude below tol.
        """
        if isinstance(self.alpha, ContinuedFraction):
            min_q = math.isqrt(int(1000 * max(1, n_sites) / tol)) + 1
            return self.alpha.fraction(min_q=min_q)
        return Fraction(self.alpha)

    @property
    def alpha_float(self) -> float:
        return float(self.alpha_fraction())

    def phases(self, start: int, count: int) -> np.ndarray:
        a = self.alpha_fraction(n_sites=abs(start) + count)
        return orbit_phases(self.theta, a, start, count)


@dataclass(frozen=True)
class Truncation:
    """Restriction to [x1, x2] with zero boundary conditions.

    diag[i] = 2 cos 2 pi (theta + (x1+i) alpha); offdiag[i] couples sites
    x1+i and x1+i+1 and equals c(theta + (x1+i) alpha); the sub-diagonal is
    its conjugate, so the matrix is Hermitian.
    """

    sample: OperatorSample
    x1: int
    x2: int
    diag: np.ndarray
    offdiag: np.ndarray

    @property
    def size(self) -> int:
        return self.x2 - self.x1 + 1

    def gauge_symmetric(self) -> tuple[np.ndarray, np.ndarray]:
        """(diag, |offdiag|): the unitarily equivalent real symmetric matrix."""
        return self.diag, np.abs(self.offdiag)

    def gauge_phases(self) -> np.ndarray:
        """Unit phases d with d[0]=1, d[i+1] = d[i] * c_i/|c_i| (1 where c_i=0)."""
        m = self.size
        d = np.ones(m, dtype=np.complex128)
        absc = np.abs(self.offdiag)
        for i in range(m - 1):
            d[i + 1] = d[i] * (self.offdiag[i] / absc[i]) if absc[i] > 0 else d[i]
        return d

    def dense(self) -> np.ndarray:
        """Dense Hermitian matrix (for oracles and small windows)."""
        m = self.size
        h = np.zeros((m, m), dtype=np.complex128)
        np.fill_diagonal(h, self.diag)
        for i in range(m - 1):
            h[i, i + 1] = self.offdiag[i]
            h[i + 1, i] = np.conj(self.offdiag[i])
        return h

    def to_json(self) -> str:
        return json.dumps(
            {
                "diag": list(map(float, self.diag)),
                "offdiag_re": list(map(float, self.offdiag.real)),
                "offdiag_im": list(map(float, self.offdiag.imag)),
            }
        )


def build_truncation(sample: OperatorSample, x1: int, x2: int) -> Truncation:
    if x1 > x2:
        raise WindowEmpty(f"window [{x1}, {x2}] is empty")
    m = x2 - x1 + 1
    phases = sample.phases(x1, m)
    alpha_f = sample.alpha_float
    diag = 2.0 * np.cos(2.0 * np.pi * phases)
    offdiag = np.asarray(
        c_function(sample.coupling, alpha_f, phases[:-1]), dtype=np.complex128
    ).reshape(-1)
    return Truncation(sample, x1, x2, diag, offdiag)


def green_function(
    trunc: Truncation,
    energy: float,
    x: int,
    y: int,
    guard: float = 1e-10,
) -> complex:
    """Resolvent entry (H[x1,x2] - E)^(-1)(x, y) by two-sided recursion.

    Computed on the gauge-equivalent real symmetric matrix through scaled
    leading/trailing minors, then re-phased; no dense inversion.  Raises
    ResolventSingular when E is within ``guard`` of an eigenvalue (Sturm
    count changes across [E-guard, E+guard]) or the determinant collapses.
    """
    if not (trunc.x1 <= x <= trunc.x2 and trunc.x1 <= y <= trunc.x2):
        raise IndexError("sites outside the truncation window")
    diag, absoff = trunc.gauge_symmetric()
    off2 = absoff * absoff
    counts = sturm_count(diag, off2, np.array([energy - guard, energy + guard]))
    if counts[1] != counts[0]:
        raise ResolventSingular(
            f"E={energy} within {guard} of an eigenvalue of the window"
        )
    i, j = x - trunc.x1, y - trunc.x1
    swapped = i > j
    if swapped:
        i, j = j, i
    dshift = diag - energy
    fm, fe = scaled_det_forward(dshift, off2)
    bm, be = scaled_det_backward(dshift, off2)
    n = trunc.size
    if fm[n] == 0.0:
        raise ResolventSingular("window determinant vanished")
    # log-magnitude assembly of (-1)^(i+j) b_i..b_{j-1} D_i E_{j+1} / D_n
    prod_off = absoff[i:j]
    sign = -1.0 if (i + j) % 2 else 1.0
    if fm[i] * bm[j + 1] == 0.0 or np.any(prod_off == 0.0):
        val = 0.0
    else:
        log2mag = (
            float(fe[i] + be[j + 1] - fe[n])
            + math.log2(abs(fm[i]) * abs(bm[j + 1]) / abs(fm[n]))
            + (float(np.sum(np.log2(prod_off))) if len(prod_off) else 0.0)
        )
        val = sign * math.copysign(1.0, fm[i] * bm[j + 1] * fm[n]) * 2.0**log2mag
    phases = trunc.gauge_phases()
    g = np.conj(phases[i]) * val * phases[j]
    if swapped:
        g = np.conj(g)
    return complex(g)
