"""Finite-truncation spectral experiments.

Sturm-bisection spectra, the Aubry duality identity, the arithmetic exponent
delta(alpha, theta), window-mass (badness) scans, frequency-perturbation
stability, Green's-function regularity, and eigenfunction decay fits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from ._tridiag import bisect_eigenvalues, inverse_iteration, sturm_count
from .cocycle import lyapunov_formula, transfer, two_norm
from .contfrac import ContinuedFraction, beta_exponent, circle_norm, log_of_int
from .errors import PoorlyLocalized, ResolventSingular, SingularSamplingPoint
from .model import (
    CouplingTriple,
    OperatorSample,
    ZeroKind,
    build_truncation,
    c_function,
    duality,
    green_function,
    orbit_phases,
    zero_structure,
)

__all__ = [
    "SpectrumApproximation",
    "DualityReport",
    "BadnessReport",
    "PerturbationReport",
    "RegularityResult",
    "DecayFit",
    "truncated_spectrum",
    "hausdorff_sorted",
    "duality_check",
    "delta_exponent",
    "badness_scan",
    "perturbation_experiment",
    "regularity_test",
    "decay_fit",
]


@dataclass(frozen=True)
class SpectrumApproximation:
    """Sorted eigenvalues of finite truncations, possibly phase-aggregated."""

    eigenvalues: np.ndarray
    size: int
    phases: list
    method: str = "sturm-bisection"

    def to_csv(self) -> str:
        lines = ["index,eigenvalue"]
        lines += [f"{i},{v!r}" for i, v in enumerate(self.eigenvalues)]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "eigenvalues": [float(v) for v in self.eigenvalues],
                "size": self.size,
                "phases": self.phases,
                "method": self.method,
            }
        )


def truncated_spectrum(
    sample: OperatorSample,
    size: int,
    phases: Optional[Sequence[float]] = None,
    tol: float = 1e-10,
    threads: int = 1,
) -> SpectrumApproximation:
    """Eigenvalues of the window [0, size-1] via Sturm-sequence bisection.

    With ``phases`` given, the truncation is re-phased at each theta and the
    eigenvalue lists are merged (sorted); otherwise the sample's own phase
    is used.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    theta_list = [sample.theta] if phases is None else list(phases)

    def one(theta):
        s = OperatorSample(sample.coupling, sample.alpha, theta)
        trunc = build_truncation(s, 0, size - 1)
        diag, absoff = trunc.gauge_symmetric()
        return bisect_eigenvalues(diag, absoff, tol=tol)

    if threads > 1 and len(theta_list) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(one, theta_list))
    else:
        parts = [one(th) for th in theta_list]
    eigs = np.sort(np.concatenate(parts))
    return SpectrumApproximation(
        eigenvalues=eigs, size=size, phases=[float(t) for t in theta_list]
    )


def hausdorff_sorted(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two sorted point sets on the line."""

    def one_sided(u, v):
        idx = np.searchsorted(v, u)
        left = np.abs(u - v[np.clip(idx - 1, 0, len(v) - 1)])
        right = np.abs(u - v[np.clip(idx, 0, len(v) - 1)])
        return float(np.max(np.minimum(left, right)))

    return max(one_sided(a, b), one_sided(b, a))


@dataclass(frozen=True)
class DualityReport:
    distance: float
    size: int
    phases: list
    coupling: tuple
    dual_coupling: tuple
    scale: float  # lambda2, the factor relating the two spectra
    boundary_filtered: tuple = (0, 0)  # edge states dropped on each side


def _aggregate_bulk_spectrum(
    sample, size, theta_list, tol, threads, edge_frac, edge_mass_max
):
    """Phase-aggregated truncation eigenvalues, boundary modes removed.

    Zero-boundary windows bind states inside spectral gaps; an eigenvalue
    whose inverse-iteration vector carries more than edge_mass_max of its
    mass within the outer edge_frac zones is such a boundary mode and is
    dropped from the aggregate (counted in the second return value).
    """
    zone = max(10, int(size * edge_frac))
    rng = np.random.default_rng(11)

    def one(theta):
        s = OperatorSample(sample.coupling, sample.alpha, theta)
        trunc = build_truncation(s, 0, size - 1)
        diag, absoff = trunc.gauge_symmetric()
        eigs = bisect_eigenvalues(diag, absoff, tol=tol)
        if edge_mass_max >= 1.0:
            return list(eigs), 0
        keep, dropped = [], 0
        for e in eigs:
            v = inverse_iteration(diag, absoff, e, rng=rng)
            m = float(np.sum(v[:zone] ** 2) + np.sum(v[-zone:] ** 2))
            if m <= edge_mass_max:
                keep.append(e)
            else:
                dropped += 1
        return keep, dropped

    if threads > 1 and len(theta_list) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(one, theta_list))
    else:
        parts = [one(th) for th in theta_list]
    eigs = np.sort(np.concatenate([np.asarray(p[0]) for p in parts]))
    return eigs, sum(p[1] for p in parts)


def duality_check(
    coupling: CouplingTriple,
    alpha,
    size: int,
    phases: Union[int, Sequence[float]] = 16,
    theta0: float = 0.0,
    seed: Optional[int] = None,
    tol: float = 1e-10,
    threads: int = 1,
    edge_frac: float = 0.05,
    edge_mass_max: float = 0.25,
) -> tuple[float, DualityReport]:
    """Hausdorff distance between Spec(lambda) and lambda2 * Spec(dual).

    Both phase-aggregated truncation spectra use the same phase list; an
    integer ``phases`` means that many equispaced points (or seeded uniform
    draws when ``seed`` is given) shifted by theta0.  Boundary modes of the
    zero-boundary windows (in-gap pollution that no finite phase grid can
    match across the two sides) are filtered by edge-mass before the
    comparison; set edge_mass_max=1.0 to compare the raw aggregates.
    """
    dual = duality(coupling)  # raises Lambda2Zero when undefined
    l2 = coupling.lambda2
    if isinstance(phases, int):
        if seed is not None:
            rng = np.random.default_rng(seed)
            theta_list = list((theta0 + rng.random(phases)) % 1.0)
        else:
            theta_list = list((theta0 + (np.arange(phases) + 0.5) / phases) % 1.0)
    else:
        theta_list = list(phases)
    ea, da = _aggregate_bulk_spectrum(
        OperatorSample(coupling, alpha, theta0),
        size,
        theta_list,
        tol,
        threads,
        edge_frac,
        edge_mass_max,
    )
    eb, db = _aggregate_bulk_spectrum(
        OperatorSample(dual, alpha, theta0),
        size,
        theta_list,
        tol,
        threads,
        edge_frac,
        edge_mass_max,
    )
    dist = hausdorff_sorted(ea, l2 * eb)
    report = DualityReport(
        distance=dist,
        size=size,
        phases=[float(t) for t in theta_list],
        coupling=coupling.astuple(),
        dual_coupling=dual.astuple(),
        scale=l2,
        boundary_filtered=(da, db),
    )
    return dist, report


# -- the arithmetic exponent delta ------------------------------------------


def _log_fraction(fr: Fraction) -> float:
    if fr == 0:
        return float("-inf")
    return log_of_int(fr.numerator) - log_of_int(fr.denominator)


def _div_log_by_q(val: float, q: int) -> float:
    if q.bit_length() < 1000:
        return val / q
    if val == 0.0:
        return 0.0
    return math.copysign(math.exp(math.log(abs(val)) - log_of_int(q)), val)


def delta_exponent(
    coupling: CouplingTriple,
    cf: ContinuedFraction,
    theta: Union[float, Fraction],
    depth: int,
    warmup: int = 1,
    offset_precision: int = 60,
) -> tuple[float, list]:
    """Finite-depth surrogate of the zero-corrected growth exponent.

    Per level n the value is (sum_zeros ln||q_n (theta - theta_zero)|| +
    ln q_{n+1}) / q_n; with no zeros of c this reduces to the plain
    denominator exponent level by level.  The orbit distances are evaluated
    in exact rational arithmetic against the deepest convergent of alpha.
    """
    fe = beta_exponent(cf, depth, warmup)
    zs = zero_structure(coupling)
    if zs.kind is ZeroKind.NONE:
        return fe.beta_estimate, list(fe.per_level)

    if zs.kind in (ZeroKind.SINGLE, ZeroKind.DOUBLE):
        offsets = [Fraction(1, 2)]
    else:
        import mpmath

        with mpmath.workdps(offset_precision + 10):
            a = mpmath.acos(-coupling.lambda2 / (2 * coupling.lambda1)) / (
                2 * mpmath.pi
            )
            off = Fraction(mpmath.nstr(a, offset_precision, strip_zeros=False))
        offsets = [off, -off]

    cf.ensure(depth)
    pa, qa = cf.convergent(depth)
    alpha_proxy = Fraction(pa, qa)
    theta_frac = Fraction(theta)
    per_level = []
    for n in range(1, depth):
        qn = cf.q(n)
        total = log_of_int(cf.q(n + 1))
        for off in offsets:
            arg = qn * (theta_frac - off + alpha_proxy / 2)
            total += _log_fraction(circle_norm(arg))
        per_level.append((n, _div_log_by_q(total, qn)))
    tail = [v for n, v in per_level if n >= warmup]
    return max(tail), per_level


# -- (C, N)-badness -----------------------------------------------------------


@dataclass(frozen=True)
class BadnessReport:
    """Window-mass scan outcome.

    min_mass is the smallest of sum_{|k|<=N} |u(k)|^2 over the energy grid
    and the swept normalized initial data; verdict "bad" means no solution
    below C^2 was found at this resolution (the continuum quantifiers are
    discretized, so this is evidence, not proof).
    """

    C: float
    N: int
    E_grid: list
    min_mass: float
    verdict: str
    witness_E: Optional[float] = None
    witness_angle: Optional[float] = None
    angles: int = 64
    trunc_size: int = 0
    note: str = ""

    def to_json(self) -> str:
        import dataclasses
        import json

        return json.dumps(dataclasses.asdict(self))


def _solution_masses(sample, energy, N, phis, zero_guard=1e-9):
    """sum_{|k|<=N} |u(k)|^2 for normalized initial angles phis (in turns)."""
    coupling = sample.coupling
    alpha_frac = sample.alpha_fraction(n_sites=2 * N + 2)
    alpha_f = float(alpha_frac)
    phis = np.atleast_1d(np.asarray(phis, dtype=np.float64))
    u0 = np.cos(2 * np.pi * phis).astype(np.complex128)
    um1 = np.sin(2 * np.pi * phis).astype(np.complex128)
    mass = np.abs(u0) ** 2 + np.abs(um1) ** 2  # = 1 by construction

    xs = orbit_phases(sample.theta, alpha_frac, -N - 1, 2 * N + 3)

    def phase(n):
        return xs[n + N + 1]

    zero_pos = zero_structure(coupling).positions(alpha_f)
    if zero_pos:
        from .cocycle import _dist_to_positions

        d = _dist_to_positions(zero_pos, xs)
        i = int(np.argmin(d))
        if d[i] < zero_guard:
            raise SingularSamplingPoint(float(xs[i]), float(d[i]))

    cvals = np.asarray(
        c_function(coupling, alpha_f, xs), dtype=np.complex128
    ).reshape(-1)

    def c_at(n):
        return cvals[n + N + 1]

    # forward: u(k) for k = 1..N via the three-term recurrence
    ucur, uprev = u0.copy(), um1.copy()
    for n in range(0, N):
        d_n = energy - 2.0 * math.cos(2 * math.pi * phase(n))
        unew = (d_n * ucur - np.conj(c_at(n - 1)) * uprev) / c_at(n)
        uprev, ucur = ucur, unew
        mass += np.abs(ucur) ** 2
    # backward: u(k) for k = -2..-N
    ucur, unext = um1.copy(), u0.copy()
    for n in range(-1, -N, -1):
        d_n = energy - 2.0 * math.cos(2 * math.pi * phase(n))
        uprevv = (d_n * ucur - c_at(n) * unext) / np.conj(c_at(n - 1))
        unext, ucur = ucur, uprevv
        mass += np.abs(ucur) ** 2
    return mass, phis


def _refine_angle(sample, energy, N, phi0, step):
    """Golden-section descent of the window mass around a coarse minimizer."""
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = phi0 - step, phi0 + step

    def f(p):
        return float(_solution_masses(sample, energy, N, [p])[0][0])

    c1, c2 = b - gr * (b - a), a + gr * (b - a)
    f1, f2 = f(c1), f(c2)
    for _ in range(60):
        if f1 < f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - gr * (b - a)
            f1 = f(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + gr * (b - a)
            f2 = f(c2)
    p = 0.5 * (a + b)
    return f(p), p


def badness_scan(
    sample: OperatorSample,
    C: float,
    N: int,
    E_count: int = 8,
    angles: int = 64,
    trunc_size: Optional[int] = None,
    energies: Optional[Sequence[float]] = None,
    refine: bool = False,
    tol: float = 1e-10,
) -> BadnessReport:
    """Scan energies and normalized initial data for window mass below C^2.

    The energy grid is drawn from a truncation of size >= 4N (or supplied
    explicitly via ``energies``, e.g. eigenvalues whose eigenvectors sit
    near the origin); each energy sweeps ``angles`` normalized initial
    conditions through two-sided transfer iteration over |k| <= N.  With
    ``refine`` the coarse sweep minimizer is polished by golden-section
    descent: the dip around a decaying-solution direction narrows like
    e^(-2 L N), far below any fixed grid.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    size = trunc_size if trunc_size is not None else max(4 * N, 256)
    if size < 4 * N:
        raise ValueError("trunc_size must be at least 4N")
    if energies is None:
        spec = truncated_spectrum(sample, size, tol=tol)
        idx = np.unique(np.round(np.linspace(0, size - 1, E_count)).astype(int))
        e_grid = [float(spec.eigenvalues[i]) for i in idx]
    else:
        e_grid = [float(e) for e in energies]
    phis = np.arange(angles) / angles
    best = (math.inf, None, None)
    for energy in e_grid:
        masses, _ = _solution_masses(sample, energy, N, phis)
        j = int(np.argmin(masses))
        m, p = float(masses[j]), float(phis[j])
        if refine:
            m_r, p_r = _refine_angle(sample, energy, N, p, 1.0 / angles)
            if m_r < m:
                m, p = m_r, p_r
        if m < best[0]:
            best = (m, energy, p)
    min_mass, we, wa = best
    bad = min_mass >= C * C
    return BadnessReport(
        C=C,
        N=N,
        E_grid=e_grid,
        min_mass=min_mass,
        verdict="bad" if bad else "not_bad",
        witness_E=None if bad else we,
        witness_angle=None if bad else wa,
        angles=angles,
        trunc_size=size,
        note=(
            "no solution below C^2 found at this energy/angle resolution"
            if bad
            else "witness solution found"
        ),
    )


# -- frequency perturbation ----------------------------------------------------


@dataclass(frozen=True)
class PerturbationReport:
    epsilon: float
    energy: float
    energy_prime: float
    matrix_deviation: float
    solution_deviation: float
    N: int
    trunc_size: int


def _eig_by_index(sample, size, index, tol=1e-10):
    trunc = build_truncation(sample, 0, size - 1)
    diag, absoff = trunc.gauge_symmetric()
    return float(bisect_eigenvalues(diag, absoff, indices=[index], tol=tol)[0]), (
        diag,
        absoff,
    )


def _nearest_eig(diag, absoff, target, tol=1e-10):
    n = len(diag)
    j = int(sturm_count(diag, absoff * absoff, target))
    cands = [i for i in (j - 1, j) if 0 <= i < n]
    vals = bisect_eigenvalues(diag, absoff, indices=cands, tol=tol)
    return float(vals[int(np.argmin(np.abs(vals - target)))])


def _two_sided_vectors(coupling, alpha_frac, theta, energy, N, init):
    """(u(k), u(k-1)) pairs for |k| <= N from the given initial data."""
    alpha_f = float(alpha_frac)
    xs = orbit_phases(theta, alpha_frac, -N - 1, 2 * N + 3)
    cvals = np.asarray(c_function(coupling, alpha_f, xs), dtype=np.complex128).reshape(-1)

    def phase(n):
        return xs[n + N + 1]

    def c_at(n):
        return cvals[n + N + 1]

    out = {0: np.array([init[0], init[1]], dtype=np.complex128)}
    ucur, uprev = complex(init[0]), complex(init[1])
    for n in range(0, N):
        d_n = energy - 2.0 * math.cos(2 * math.pi * phase(n))
        unew = (d_n * ucur - np.conj(c_at(n - 1)) * uprev) / c_at(n)
        uprev, ucur = ucur, unew
        out[n + 1] = np.array([ucur, uprev], dtype=np.complex128)
    ucur, unext = complex(init[1]), complex(init[0])  # u(-1), u(0)
    for n in range(-1, -N - 1, -1):
        d_n = energy - 2.0 * math.cos(2 * math.pi * phase(n))
        uprevv = (d_n * ucur - c_at(n) * unext) / np.conj(c_at(n - 1))
        out[n] = np.array([ucur, uprevv], dtype=np.complex128)
        unext, ucur = ucur, uprevv
    return out


def perturbation_experiment(
    coupling: CouplingTriple,
    alpha,
    alpha_prime,
    theta: float,
    N: int,
    trunc_size: Optional[int] = None,
    eig_index: Union[int, str] = "median",
    init_angle: float = 0.0,
    tol: float = 1e-10,
) -> PerturbationReport:
    """Compare transfer matrices and solutions at two nearby frequencies.

    E' is an eigenvalue of the truncated operator at alpha' (by sorted
    index), E the nearest eigenvalue of the matched truncation at alpha;
    the deviations are the maxima over |m| <= N of the transfer-matrix
    difference and of the solution-vector difference grown from identical
    normalized initial data.
    """
    size = trunc_size if trunc_size is not None else max(256, 4 * N)
    sample = OperatorSample(coupling, alpha, theta)
    sample_p = OperatorSample(coupling, alpha_prime, theta)
    eps = abs(float(sample.alpha_fraction() - sample_p.alpha_fraction()))
    index = size // 2 if eig_index == "median" else int(eig_index)
    e_prime, _ = _eig_by_index(sample_p, size, index, tol)
    trunc = build_truncation(sample, 0, size - 1)
    diag, absoff = trunc.gauge_symmetric()
    energy = _nearest_eig(diag, absoff, e_prime, tol)

    dev_m = 0.0
    a_f = sample.alpha_fraction(n_sites=N + 1)
    ap_f = sample_p.alpha_fraction(n_sites=N + 1)
    xs = orbit_phases(theta, a_f, -N, 2 * N + 1)
    xps = orbit_phases(theta, ap_f, -N, 2 * N + 1)
    for i in range(2 * N + 1):
        m1 = transfer(sample, energy, xs[i], "raw")
        m2 = transfer(sample_p, e_prime, xps[i], "raw")
        dev_m = max(dev_m, two_norm(m1 - m2))

    init = (math.cos(2 * math.pi * init_angle), math.sin(2 * math.pi * init_angle))
    u = _two_sided_vectors(coupling, a_f, theta, energy, N, init)
    v = _two_sided_vectors(coupling, ap_f, theta, e_prime, N, init)
    dev_s = 0.0
    for k in range(-N, N + 1):
        dev_s = max(dev_s, float(np.linalg.norm(u[k] - v[k])))
    return PerturbationReport(
        epsilon=eps,
        energy=energy,
        energy_prime=e_prime,
        matrix_deviation=dev_m,
        solution_deviation=dev_s,
        N=N,
        trunc_size=size,
    )


# -- (m, k)-regularity ----------------------------------------------------------


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    window: Optional[tuple] = None
    skipped: list = field(default_factory=list)


def regularity_test(
    sample: OperatorSample,
    energy: float,
    y: int,
    m: float,
    k: int,
) -> RegularityResult:
    """Search windows of length k around y with decaying edge Green values.

    A window [x1, x1+k-1] qualifies when dist(y, x_i) >= ceil(k/9) for both
    edges and |G(y, x_i)| < e^{-m |y - x_i|} at both.  Windows whose
    resolvent is singular at this energy are skipped and recorded.
    """
    if k < 9:
        raise ValueError("k must be >= 9 so that dist >= k/9 is satisfiable")
    d = -(-k // 9)  # ceil
    skipped = []
    for x1 in range(y + d - k + 1, y - d + 1):
        x2 = x1 + k - 1
        trunc = build_truncation(sample, x1, x2)
        try:
            g1 = abs(green_function(trunc, energy, y, x1))
            g2 = abs(green_function(trunc, energy, y, x2))
        except ResolventSingular:
            skipped.append((x1, x2))
            continue
        if g1 < math.exp(-m * abs(y - x1)) and g2 < math.exp(-m * abs(y - x2)):
            return RegularityResult(True, (x1, x2), skipped)
    return RegularityResult(False, None, skipped)


# -- eigenfunction decay ---------------------------------------------------------


@dataclass(frozen=True)
class DecayFit:
    """Least-squares decay rate of a localized truncation eigenvector."""

    eigenvalue: float
    window: tuple
    slope: float
    r2: float
    target: float

    def __post_init__(self):
        if self.slope > 0:
            raise PoorlyLocalized(f"positive decay slope {self.slope:.4f}")

    def to_json(self) -> str:
        import dataclasses
        import json

        return json.dumps(dataclasses.asdict(self))


def decay_fit(
    sample: OperatorSample,
    size: int,
    which_eigenvector: Union[int, str] = "auto",
    floor_rel: float = 1e-12,
    r2_min: float = 0.9,
    tol: float = 1e-10,
) -> DecayFit:
    """Fit the exponential decay rate of a localized eigenvector.

    The truncation window is centered at the origin.  With "auto", the
    eigenvalue whose inverse-iteration vector carries maximal mass in the
    middle third is fitted.  The fit regresses
    (1/2) ln(phi(n)^2 + phi(n+1)^2) on -|n - peak|, excluding the outer 10%
    of the window and everything below the relative noise floor; r^2 below
    r2_min raises PoorlyLocalized.
    """
    if size < 400:
        raise ValueError("size must be >= 400 for a stable fit")
    x1 = -(size // 2)
    trunc = build_truncation(sample, x1, x1 + size - 1)
    diag, absoff = trunc.gauge_symmetric()
    eigs = bisect_eigenvalues(diag, absoff, tol=tol)
    rng = np.random.default_rng(7)
    third = size // 3
    if which_eigenvector == "auto":
        best_idx, best_mass, best_vec = -1, -1.0, None
        for i in range(size):
            v = inverse_iteration(diag, absoff, eigs[i], rng=rng)
            mass = float(np.sum(v[third : 2 * third] ** 2))
            if mass > best_mass:
                best_idx, best_mass, best_vec = i, mass, v
        index, vec = best_idx, best_vec
    else:
        index = int(which_eigenvector)
        vec = inverse_iteration(diag, absoff, eigs[index], rng=rng)
    energy = float(eigs[index])
    phi = np.abs(vec)
    peak = int(np.argmax(phi))
    pair = phi[:-1] ** 2 + phi[1:] ** 2
    ys = 0.5 * np.log(np.maximum(pair, 1e-320))
    ts = np.abs(np.arange(size - 1) - peak).astype(float)
    edge = max(1, size // 10)
    mask = np.zeros(size - 1, dtype=bool)
    mask[edge : size - 1 - edge] = True
    mask &= pair > (floor_rel * phi[peak]) ** 2
    if int(np.count_nonzero(mask)) < 10:
        raise PoorlyLocalized("fewer than 10 usable points in the fit window")
    t, yv = ts[mask], ys[mask]
    a = np.vstack([t, np.ones_like(t)]).T
    (slope, intercept), res, *_ = np.linalg.lstsq(a, yv, rcond=None)
    pred = a @ np.array([slope, intercept])
    ss_res = float(np.sum((yv - pred) ** 2))
    ss_tot = float(np.sum((yv - np.mean(yv)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    if r2 < r2_min:
        raise PoorlyLocalized(f"decay fit r^2 = {r2:.3f} < {r2_min}")
    window = (float(np.min(t)), float(np.max(t)))
    target = lyapunov_formula(sample.coupling)
    return DecayFit(
        eigenvalue=energy, window=window, slope=float(slope), r2=r2, target=target
    )
