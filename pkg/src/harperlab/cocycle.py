"""Transfer-matrix cocycles over the circle.

Raw and normalized transfer matrices, long matrix-product sweeps with
renormalization, the closed-form and Birkhoff Lyapunov exponents, fibered
rotation numbers, topological degree, conjugation residuals, the
small-divisor cohomological solver, and the commutant divisor scan.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .contfrac import ContinuedFraction, circle_norm
from .errors import (
    BranchAmbiguity,
    DivisorFloorViolated,
    GridTooCoarse,
    ResonantDivisor,
    SingularSamplingPoint,
    TooManyExclusions,
)
from .model import (
    CouplingTriple,
    OperatorSample,
    abs_c_function,
    c_function,
    c_tilde_function,
    orbit_phases,
    wrap01,
    zero_structure,
)

__all__ = [
    "Cocycle",
    "TransferCocycle",
    "LyapunovEstimate",
    "RotationEstimate",
    "NormReport",
    "CommutantReport",
    "two_norm",
    "constant_rotation",
    "rotation_matrix",
    "transfer",
    "n_step",
    "lyapunov_formula",
    "lyapunov_numeric",
    "rotation_number",
    "rotation_number_map",
    "degree",
    "conjugation_residual",
    "solve_cohomological",
    "commutant_rigidity_check",
    "fourier_to_json",
    "fourier_from_json",
]

RENORM_THRESHOLD = math.exp(30.0)
DEFAULT_ZERO_GUARD = 1e-7


def two_norm(m: np.ndarray) -> float:
    """Operator 2-norm of a 2x2 matrix via the explicit singular-value formula."""
    fro2 = float(np.sum(np.abs(m) ** 2))
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = max(fro2 * fro2 - 4.0 * abs(det) ** 2, 0.0)
    return math.sqrt(0.5 * (fro2 + math.sqrt(disc)))


def _two_norm_batch(m: np.ndarray) -> np.ndarray:
    fro2 = np.sum(np.abs(m) ** 2, axis=(1, 2))
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    disc = np.maximum(fro2 * fro2 - 4.0 * np.abs(det) ** 2, 0.0)
    return np.sqrt(0.5 * (fro2 + np.sqrt(disc)))


def rotation_matrix(x: float) -> np.ndarray:
    """R_x: rotation by angle 2 pi x."""
    c, s = math.cos(2 * math.pi * x), math.sin(2 * math.pi * x)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class Cocycle:
    """A circle cocycle: rotation by alpha paired with a matrix map."""

    alpha: float
    matrix: Callable[[float], np.ndarray]


def constant_rotation(alpha: float, rho: float) -> Cocycle:
    m = rotation_matrix(rho)
    return Cocycle(alpha, lambda theta, _m=m: _m)


def _dist_to_positions(positions, x: np.ndarray):
    """Circle distance from phases x to the nearest of the given points."""
    x = np.asarray(x, dtype=np.float64)
    dist = np.full(x.shape, np.inf)
    for z in positions:
        d = np.abs((x - z + 0.5) % 1.0 - 0.5)
        dist = np.minimum(dist, d)
    return dist


def _zero_distances(coupling: CouplingTriple, alpha_f: float, x: np.ndarray):
    """Circle distance from phases x to the nearest zero of c; None if no zeros."""
    zs = zero_structure(coupling)
    if not zs.offsets:
        return None
    return _dist_to_positions(zs.positions(alpha_f), x)


def _raw_batch(coupling, alpha_f, energy, x, c_prev):
    """Raw transfer matrices at phases x; c_prev = c at x - alpha."""
    cx = np.asarray(c_function(coupling, alpha_f, x), dtype=np.complex128).reshape(-1)
    g = x.shape[0]
    m = np.zeros((g, 2, 2), dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        m[:, 0, 0] = (energy - 2.0 * np.cos(2.0 * np.pi * x)) / cx
        m[:, 0, 1] = -np.conj(c_prev) / cx
    m[:, 1, 0] = 1.0
    return m, cx


def _normalized_batch(coupling, alpha_f, energy, x, absc_prev):
    """Normalized transfer matrices at phases x; absc_prev = |c| at x - alpha."""
    ax = np.asarray(abs_c_function(coupling, alpha_f, x), dtype=np.float64).reshape(-1)
    g = x.shape[0]
    s = np.sqrt(ax * absc_prev)
    m = np.zeros((g, 2, 2), dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        m[:, 0, 0] = (energy - 2.0 * np.cos(2.0 * np.pi * x)) / s
        m[:, 0, 1] = -absc_prev / s
        m[:, 1, 0] = ax / s
    return m, ax


def transfer(
    sample: OperatorSample,
    energy: float,
    theta: float,
    kind: str = "raw",
    zero_guard: float = DEFAULT_ZERO_GUARD,
) -> np.ndarray:
    """One transfer matrix at phase theta.

    kind="raw" gives the complex matrix (1/c) [[E-2cos, -c~(.-a)], [c, 0]];
    kind="normalized" its real unit-determinant cousin built from |c|.
    """
    alpha_f = sample.alpha_float
    x = np.array([wrap01(float(theta))])
    xm = np.array([wrap01(float(theta) - alpha_f)])
    dist = _zero_distances(sample.coupling, alpha_f, np.concatenate([x, xm]))
    if dist is not None:
        check = dist if kind == "normalized" else dist[:1]
        worst = int(np.argmin(check))
        if check[worst] < zero_guard:
            bad = (x[0], xm[0])[worst] if kind == "normalized" else x[0]
            raise SingularSamplingPoint(bad, float(check[worst]))
    if kind == "raw":
        cm1 = np.asarray(
            c_function(sample.coupling, alpha_f, xm), dtype=np.complex128
        ).reshape(-1)
        m, _ = _raw_batch(sample.coupling, alpha_f, energy, x, cm1)
    elif kind == "normalized":
        am1 = np.asarray(
            abs_c_function(sample.coupling, alpha_f, xm), dtype=np.float64
        ).reshape(-1)
        m, _ = _normalized_batch(sample.coupling, alpha_f, energy, x, am1)
    else:
        raise ValueError(f"unknown cocycle kind {kind!r}")
    return m[0]


@dataclass(frozen=True)
class TransferCocycle:
    """Energy-parametrized transfer cocycle of an operator sample."""

    sample: OperatorSample
    energy: float
    kind: str = "raw"

    @property
    def alpha(self) -> float:
        return self.sample.alpha_float

    def matrix(self, theta: float) -> np.ndarray:
        return transfer(self.sample, self.energy, theta, self.kind)

    def as_cocycle(self) -> Cocycle:
        return Cocycle(self.alpha, self.matrix)


def _product_sweep(
    sample: OperatorSample,
    energy: float,
    thetas: np.ndarray,
    n: int,
    kind: str,
    zero_guard: float,
    on_singular: str = "exclude",
):
    """Renormalized products A(th+(n-1)a)...A(th) over a batch of phases.

    Returns (matrices, lognorms, alive): exact product = matrix * e^lognorm
    per lane; lanes that hit the zero guard are flagged dead (or raise,
    with on_singular="raise").
    """
    coupling = sample.coupling
    g = len(thetas)
    alpha_frac = sample.alpha_fraction(n_sites=max(n, 1))
    alpha_f = float(alpha_frac)
    complex_kind = kind == "raw"
    eye = np.eye(2, dtype=np.complex128 if complex_kind else np.float64)
    mats = np.tile(eye, (g, 1, 1))
    lognorm = np.zeros(g)
    alive = np.ones(g, dtype=bool)
    if n == 0:
        return mats, lognorm, alive
    zero_pos = zero_structure(coupling).positions(alpha_f)
    ka = orbit_phases(0.0, alpha_frac, 0, n)
    xm = (thetas - alpha_f) % 1.0
    if complex_kind:
        prev = np.asarray(c_function(coupling, alpha_f, xm), dtype=np.complex128).reshape(-1)
    else:
        prev = np.asarray(abs_c_function(coupling, alpha_f, xm), dtype=np.float64).reshape(-1)
        if zero_pos:
            d0 = _dist_to_positions(zero_pos, xm)
            bad = d0 < zero_guard
            if bad.any():
                if on_singular == "raise":
                    i = int(np.argmax(bad))
                    raise SingularSamplingPoint(float(xm[i]), float(d0[i]))
                alive &= ~bad
    for k in range(n):
        x = (thetas + ka[k]) % 1.0
        if zero_pos:
            d = _dist_to_positions(zero_pos, x)
            bad = (d < zero_guard) & alive
            if bad.any():
                if on_singular == "raise":
                    i = int(np.argmax(bad))
                    raise SingularSamplingPoint(float(x[i]), float(d[i]))
                alive &= ~bad
        if complex_kind:
            a, cur = _raw_batch(coupling, alpha_f, energy, x, prev)
        else:
            a, cur = _normalized_batch(coupling, alpha_f, energy, x, prev)
        if not alive.all():
            a[~alive] = eye
        mats = a @ mats
        prev = cur
        norms = _two_norm_batch(mats)
        big = norms > RENORM_THRESHOLD
        if big.any():
            mats[big] /= norms[big, None, None]
            lognorm[big] += np.log(norms[big])
    return mats, lognorm, alive


def n_step(
    sample: OperatorSample,
    energy: float,
    theta: float,
    n: int,
    kind: str = "raw",
    zero_guard: float = DEFAULT_ZERO_GUARD,
) -> tuple[np.ndarray, float]:
    """n-step product and its absorbed log-scale: exact = matrix * e^lognorm."""
    if n < 0:
        raise ValueError("n must be >= 0")
    mats, lognorm, _ = _product_sweep(
        sample,
        energy,
        np.array([wrap01(float(theta))]),
        n,
        kind,
        zero_guard,
        on_singular="raise",
    )
    return mats[0], float(lognorm[0])


def lyapunov_formula(coupling: CouplingTriple) -> float:
    """Closed-form Lyapunov exponent on the spectrum.

    Positive only in the interior of region I; identically zero elsewhere
    (the formula itself vanishes on the boundary lines).
    """
    l1, l2, l3 = coupling.astuple()
    m = max(l1 + l3, l2)
    if m >= 1.0:
        return 0.0
    cross = 4.0 * l1 * l3
    num = 1.0 + math.sqrt(max(1.0 - cross, 0.0))
    den = m + math.sqrt(max(m * m - cross, 0.0))
    return math.log(num / den)


@dataclass(frozen=True)
class LyapunovEstimate:
    """Birkhoff estimate of the Lyapunov exponent (nats per site)."""

    value: float
    n_steps: int
    theta_grid: int
    stderr: float
    excluded_fraction: float
    kind: str = "raw"


def lyapunov_numeric(
    sample: OperatorSample,
    energy: float,
    n_steps: int = 100_000,
    theta_grid: int = 64,
    kind: str = "raw",
    zero_guard: float = DEFAULT_ZERO_GUARD,
    max_excluded: float = 0.1,
) -> LyapunovEstimate:
    """Phase-averaged (1/n) log ||A_n|| over an equispaced theta grid.

    Grid points whose orbit enters the zero guard are excluded and counted;
    more than max_excluded of them aborts with TooManyExclusions.
    """
    if n_steps < 1000:
        raise ValueError("n_steps must be >= 1000")
    if theta_grid < 1:
        raise ValueError("theta_grid must be >= 1")
    thetas = (np.arange(theta_grid) + 0.5) / theta_grid
    mats, lognorm, alive = _product_sweep(
        sample, energy, thetas, n_steps, kind, zero_guard, on_singular="exclude"
    )
    excluded = 1.0 - float(np.count_nonzero(alive)) / theta_grid
    if excluded > max_excluded:
        raise TooManyExclusions(
            f"{excluded:.1%} of grid orbits entered the zero guard"
        )
    total = lognorm + np.log(np.maximum(_two_norm_batch(mats), 1e-300))
    vals = total[alive] / n_steps
    value = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return LyapunovEstimate(
        value=value,
        n_steps=n_steps,
        theta_grid=theta_grid,
        stderr=stderr,
        excluded_fraction=excluded,
        kind=kind,
    )


# -- rotation number and degree ---------------------------------------------


@dataclass(frozen=True)
class RotationEstimate:
    """Birkhoff average of projective lift increments, reported mod 1."""

    value: float
    stderr: float
    n_steps: int
    y0: float
    nonergodic_flag: bool = False


def rotation_number_map(
    matrix_map: Callable[[float], np.ndarray],
    alpha: Union[float, Fraction, ContinuedFraction],
    n_steps: int = 100_000,
    theta0: float = 0.0,
    y0: float = 0.0,
    branch_tol: float = 1e-9,
) -> RotationEstimate:
    """Fibered rotation number of a cocycle given by an explicit matrix map.

    The lift increment at each step is the principal branch |phi| < 1/2;
    landing within branch_tol of the cut raises BranchAmbiguity.
    """
    if isinstance(alpha, ContinuedFraction):
        alpha_frac = alpha.fraction(min_q=math.isqrt(1000 * n_steps * 10**12) + 1)
    else:
        alpha_frac = Fraction(alpha)
    xs = orbit_phases(theta0, alpha_frac, 0, n_steps)
    y = float(y0)
    incs = np.empty(n_steps)
    twopi = 2.0 * math.pi
    for k in range(n_steps):
        m = matrix_map(xs[k])
        cy, sy = math.cos(twopi * y), math.sin(twopi * y)
        w1 = m[0, 0] * cy + m[0, 1] * sy
        w2 = m[1, 0] * cy + m[1, 1] * sy
        ynew = math.atan2(w2, w1) / twopi
        phi = ynew - y
        phi -= math.floor(phi + 0.5)  # principal branch in [-1/2, 1/2)
        if abs(abs(phi) - 0.5) < branch_tol:
            raise BranchAmbiguity(
                f"lift increment {phi:.12f} at step {k} sits on the branch cut"
            )
        incs[k] = phi
        y = wrap01(y + phi)
    value = wrap01(float(np.mean(incs)))
    stderr = float(np.std(incs, ddof=1) / math.sqrt(n_steps))
    half = float(np.mean(incs[: n_steps // 2]))
    flag = abs(half - float(np.mean(incs))) > 5.0 * max(stderr, 1e-15)
    return RotationEstimate(value, stderr, n_steps, float(y0), flag)


def rotation_number(
    sample: OperatorSample,
    energy: float,
    n_steps: int = 100_000,
    theta0: float = 0.0,
    y0: float = 0.0,
    zero_guard: float = DEFAULT_ZERO_GUARD,
    branch_tol: float = 1e-9,
) -> RotationEstimate:
    """Rotation number of the normalized transfer cocycle.

    The orbit's matrix entries are precomputed in one vectorized pass; only
    the angle recursion runs sitewise.
    """
    coupling = sample.coupling
    alpha_frac = sample.alpha_fraction(n_sites=n_steps)
    alpha_f = float(alpha_frac)
    xs = orbit_phases(theta0, alpha_frac, 0, n_steps)
    ax = np.asarray(abs_c_function(coupling, alpha_f, xs), dtype=np.float64).reshape(-1)
    a_first = float(abs_c_function(coupling, alpha_f, wrap01(float(theta0) - alpha_f)))
    axm = np.concatenate([[a_first], ax[:-1]])
    zero_pos = zero_structure(coupling).positions(alpha_f)
    if zero_pos:
        d = _dist_to_positions(zero_pos, xs)
        i = int(np.argmin(d))
        if d[i] < zero_guard or a_first == 0.0:
            raise SingularSamplingPoint(float(xs[i]), float(d[i]))
    s = np.sqrt(ax * axm)
    m00 = (energy - 2.0 * np.cos(2.0 * np.pi * xs)) / s
    m01 = -axm / s
    m10 = ax / s
    y = float(y0)
    incs = np.empty(n_steps)
    twopi = 2.0 * math.pi
    for k in range(n_steps):
        cy, sy = math.cos(twopi * y), math.sin(twopi * y)
        w1 = m00[k] * cy + m01[k] * sy
        w2 = m10[k] * cy
        ynew = math.atan2(w2, w1) / twopi
        phi = ynew - y
        phi -= math.floor(phi + 0.5)
        if abs(abs(phi) - 0.5) < branch_tol:
            raise BranchAmbiguity(
                f"lift increment {phi:.12f} at step {k} sits on the branch cut"
            )
        incs[k] = phi
        y = wrap01(y + phi)
    value = wrap01(float(np.mean(incs)))
    stderr = float(np.std(incs, ddof=1) / math.sqrt(n_steps))
    half = float(np.mean(incs[: n_steps // 2]))
    flag = abs(half - float(np.mean(incs))) > 5.0 * max(stderr, 1e-15)
    return RotationEstimate(value, stderr, n_steps, float(y0), flag)


def _polar_angles(matrix_map, thetas):
    out = np.empty(len(thetas))
    for i, th in enumerate(thetas):
        m = matrix_map(th)
        out[i] = math.atan2(m[1, 0] - m[0, 1], m[0, 0] + m[1, 1])
    return out


def degree(
    matrix_map: Callable[[float], np.ndarray],
    grid: int = 256,
    max_refinements: int = 12,
) -> int:
    """Topological degree: winding of the polar rotation angle, in half-turns.

    The convention matches the defining family theta -> R_{k theta / 2}
    having degree k.  The grid doubles until two successive refinements
    agree and every angular step stays below a quarter turn.
    """
    prev = None
    g = max(grid, 8)
    for _ in range(max_refinements):
        thetas = np.arange(g + 1) / g
        ang = _polar_angles(matrix_map, thetas)
        d = np.diff(ang)
        d = (d + math.pi / 2) % math.pi - math.pi / 2
        if np.max(np.abs(d)) < math.pi / 2 - 1e-6:
            k = round(float(np.sum(d)) / math.pi)
            if prev is not None and prev == k:
                return k
            prev = k
        else:
            prev = None
        g *= 2
    raise GridTooCoarse(
        f"degree did not stabilize after {max_refinements} refinements"
    )


def _inv2(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def conjugation_residual(
    b_map: Callable[[float], np.ndarray],
    cocycle_a: Cocycle,
    cocycle_b: Cocycle,
    grid: int = 512,
) -> float:
    """max over the grid of ||B(th+a) A1(th) B(th)^-1 - A2(th)||_2."""
    worst = 0.0
    for i in range(grid):
        th = i / grid
        lhs = b_map(wrap01(th + cocycle_a.alpha)) @ cocycle_a.matrix(th) @ _inv2(b_map(th))
        worst = max(worst, two_norm(lhs - cocycle_b.matrix(th)))
    return worst


# -- cohomological equation --------------------------------------------------


@dataclass(frozen=True)
class NormReport:
    """C^s-norm surrogates of the solved conjugation function.

    totals[j] = sum_k |k|^j |psi_hat(k)| for j = 0..s_max.  When block
    bounds (k1, k2) are known the same sums split into modes |k| < k1,
    k1 <= |k| < k2, and |k| >= k2, mirroring the three denominator regimes
    of the small-divisor estimate.  tau/gamma/h_minus_hprime are reporting
    slots for the Diophantine parameters in force; they are not used in the
    computation.
    """

    s_max: int
    totals: list
    block_bounds: Optional[tuple] = None
    block_sums: Optional[list] = None
    min_divisor: float = float("inf")
    tau: Optional[float] = None
    gamma: Optional[float] = None
    h_minus_hprime: Optional[float] = None


def _alpha_mod_one(alpha, bandwidth):
    """Exact-enough Fraction proxy for alpha, fit for |k| <= bandwidth modes."""
    if isinstance(alpha, ContinuedFraction):
        return alpha.fraction(min_q=max(10**9, 100 * bandwidth))
    return Fraction(alpha)


def solve_cohomological(
    phi_hat: Union[np.ndarray, Sequence[complex], dict],
    alpha: Union[float, Fraction, ContinuedFraction],
    s_max: int = 3,
    block_bounds: Optional[tuple] = None,
    resonance_tol: float = 1e-14,
) -> tuple[np.ndarray, NormReport]:
    """Solve psi(th + alpha) - psi(th) = phi(th) mode by mode.

    phi_hat holds Fourier coefficients indexed -K..K (array of length 2K+1,
    or {k: coeff} dict); the mean phi_hat(0) must vanish.  Returns psi_hat
    in the same layout, with psi_hat(k) = phi_hat(k)/(e^{2 pi i k alpha}-1)
    and a report of weighted coefficient sums.  A divisor with
    ||k alpha|| < resonance_tol under a nonzero phi_hat(k) raises
    ResonantDivisor.
    """
    if isinstance(phi_hat, dict):
        K = max(abs(k) for k in phi_hat) if phi_hat else 0
        arr = np.zeros(2 * K + 1, dtype=np.complex128)
        for k, v in phi_hat.items():
            arr[k + K] = v
        phi = arr
    else:
        phi = np.asarray(phi_hat, dtype=np.complex128)
        if phi.ndim != 1 or len(phi) % 2 == 0:
            raise ValueError("phi_hat must have odd length 2K+1, indexed -K..K")
        K = (len(phi) - 1) // 2
    scale = float(np.max(np.abs(phi))) if len(phi) else 0.0
    if abs(phi[K]) > 1e-13 * max(scale, 1.0):
        raise ValueError("phi_hat(0) must vanish (mean-zero right-hand side)")
    a = _alpha_mod_one(alpha, K)
    psi = np.zeros_like(phi)
    min_div = float("inf")
    for k in range(-K, K + 1):
        if k == 0:
            continue
        norm_ka = float(circle_norm(k * a))
        if norm_ka < resonance_tol:
            if abs(phi[k + K]) > 0:
                raise ResonantDivisor(k)
            continue
        t = float((k * a) - math.floor(k * a))
        div = complex(math.cos(2 * math.pi * t) - 1.0, math.sin(2 * math.pi * t))
        min_div = min(min_div, abs(div))
        psi[k + K] = phi[k + K] / div
    ks = np.abs(np.arange(-K, K + 1))
    mags = np.abs(psi)
    totals = [float(np.sum(ks**j * mags)) for j in range(s_max + 1)]
    block_sums = None
    if block_bounds is None and isinstance(alpha, ContinuedFraction):
        # burst level = largest digit within the materialized stream
        depth = alpha.depth
        if depth >= 2:
            n = max(range(1, depth + 1), key=lambda i: alpha.digit(i))
            if n >= 2:
                block_bounds = (alpha.q(n - 1), alpha.q(n))
    if block_bounds is not None:
        k1, k2 = block_bounds
        low, mid, high = ks < k1, (ks >= k1) & (ks < k2), ks >= k2
        block_sums = [
            (
                float(np.sum(ks[low] ** j * mags[low])),
                float(np.sum(ks[mid] ** j * mags[mid])),
                float(np.sum(ks[high] ** j * mags[high])),
            )
            for j in range(s_max + 1)
        ]
        block_bounds = (int(k1), int(k2))
    report = NormReport(
        s_max=s_max,
        totals=totals,
        block_bounds=block_bounds,
        block_sums=block_sums,
        min_divisor=min_div,
    )
    return psi, report


# -- commutant rigidity -------------------------------------------------------


@dataclass(frozen=True)
class CommutantReport:
    """Outcome of the commutant divisor scan.

    For every mode |k| <= bandwidth and both off-diagonal equations, the
    divisor |e^{2 pi i k alpha} - e^{+-4 pi i rho}| stayed above the
    Diophantine floor 2 sin(pi gamma / (|k|+1)^tau), so all off-diagonal
    Fourier modes are forced to vanish and the commutant is diagonal-
    constant.  unconstrained_modes lists the degenerate (k=0, 2 rho integer)
    cases where constants remain free.
    """

    bandwidth: int
    tau: float
    gamma: float
    min_divisor: float
    argmin_k: int
    argmin_sign: int
    modes_checked: int
    unconstrained_modes: list = field(default_factory=list)


def commutant_rigidity_check(
    rho: Union[float, Fraction],
    alpha: Union[float, Fraction, ContinuedFraction],
    bandwidth: int = 1000,
    tau: float = 2.0,
    gamma: float = 1e-3,
) -> CommutantReport:
    """Scan the divisors forcing a commuting conjugation to be constant.

    A matrix commuting with the rotation by rho has off-diagonal Fourier
    modes killed whenever ||k alpha -+ 2 rho|| > 0; this verifies the
    quantitative floor gamma/(|k|+1)^tau up to the bandwidth and raises
    DivisorFloorViolated at the first failing mode.  The diagonal (k=0,
    phase-free) modes always remain and are reported, not flagged.
    """
    a = _alpha_mod_one(alpha, bandwidth)
    two_rho = 2 * Fraction(rho)
    min_div, arg_k, arg_s = float("inf"), 0, +1
    unconstrained = [(0, "diagonal")]  # b(th+a)=b(th): constants always pass
    checked = 0
    for k in range(-bandwidth, bandwidth + 1):
        for sign in (+1, -1):
            t = circle_norm(k * a - sign * two_rho)
            div = 2.0 * math.sin(math.pi * float(t))
            if k == 0 and float(t) < 1e-14:
                # 2 rho integer: the k=0 off-diagonal equation degenerates
                # to b=b and constants survive (enlarged commutant).
                unconstrained.append((0, f"off-diagonal sign {sign:+d}"))
                continue
            floor = 2.0 * math.sin(math.pi * gamma / (abs(k) + 1) ** tau)
            checked += 1
            if div < floor * (1.0 - 1e-12):
                raise DivisorFloorViolated(k, div, floor)
            if div < min_div:
                min_div, arg_k, arg_s = div, k, sign
    return CommutantReport(
        bandwidth=bandwidth,
        tau=tau,
        gamma=gamma,
        min_divisor=min_div,
        argmin_k=arg_k,
        argmin_sign=arg_s,
        modes_checked=checked,
        unconstrained_modes=unconstrained,
    )


# -- Fourier coefficient serialization ---------------------------------------


def fourier_to_json(coeffs: np.ndarray) -> str:
    """JSON array of [re, im] pairs, indexed -K..K."""
    return json.dumps([[float(c.real), float(c.imag)] for c in np.asarray(coeffs)])


def fourier_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    return np.array([complex(re, im) for re, im in data], dtype=np.complex128)
