"""Symmetric-tridiagonal kernels: Sturm counts, bisection, scaled determinants.

The Sturm/bisection pair is the workhorse behind truncation spectra; the
scaled determinant recursions feed the lattice Green's function without ever
forming a dense inverse.  A numba-compiled count kernel is used when numba
is importable; the numpy fallback is mathematically identical.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "gershgorin_bounds",
    "sturm_count",
    "bisect_eigenvalues",
    "scaled_det_forward",
    "scaled_det_backward",
    "inverse_iteration",
]


def _sturm_count_numpy(diag, off2, shifts, pivmin):
    cnt = np.zeros(shifts.shape, dtype=np.int64)
    d = diag[0] - shifts
    d = np.where(np.abs(d) < pivmin, -pivmin, d)
    cnt += d < 0
    for i in range(1, diag.shape[0]):
        d = (diag[i] - shifts) - off2[i - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        cnt += d < 0
    return cnt


try:  # pragma: no cover - exercised when numba is installed
    import numba

    @numba.njit(cache=True)
    def _sturm_count_numba(diag, off2, shifts, pivmin):  # pragma: no cover
        n = diag.shape[0]
        m = shifts.shape[0]
        cnt = np.zeros(m, dtype=np.int64)
        for j in range(m):
            x = shifts[j]
            c = 0
            d = diag[0] - x
            if abs(d) < pivmin:
                d = -pivmin
            if d < 0:
                c += 1
            for i in range(1, n):
                d = (diag[i] - x) - off2[i - 1] / d
                if abs(d) < pivmin:
                    d = -pivmin
                if d < 0:
                    c += 1
            cnt[j] = c
        return cnt

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover
    _HAVE_NUMBA = False


def sturm_count(diag, off2, shifts):
    """Number of eigenvalues of the symmetric tridiagonal below each shift.

    diag: length-n diagonal; off2: length-(n-1) squared off-diagonal;
    shifts: scalar or array of evaluation points.
    """
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off2 = np.ascontiguousarray(off2, dtype=np.float64)
    scalar = np.isscalar(shifts)
    shifts = np.atleast_1d(np.asarray(shifts, dtype=np.float64))
    pivmin = max(float(off2.max(initial=0.0)), 1.0) * 2.0e-300
    if _HAVE_NUMBA:
        cnt = _sturm_count_numba(diag, off2, shifts, pivmin)
    else:
        cnt = _sturm_count_numpy(diag, off2, shifts, pivmin)
    return int(cnt[0]) if scalar else cnt


def gershgorin_bounds(diag, off):
    """Closed interval containing every eigenvalue."""
    off = np.abs(np.asarray(off, dtype=np.float64))
    r = np.zeros(len(diag))
    if len(off):
        r[:-1] += off
        r[1:] += off
    return float(np.min(diag - r)), float(np.max(diag + r))


def bisect_eigenvalues(diag, off, indices=None, tol=1e-10):
    """Eigenvalues (by ascending index) via Sturm-sequence bisection.

    indices: iterable of 0-based eigenvalue indices; None means all n.
    Absolute tolerance tol on each eigenvalue.
    """
    diag = np.asarray(diag, dtype=np.float64)
    off = np.asarray(off, dtype=np.float64)
    n = len(diag)
    if indices is None:
        indices = np.arange(n)
    else:
        indices = np.asarray(sorted(indices), dtype=np.int64)
        if len(indices) and (indices[0] < 0 or indices[-1] >= n):
            raise IndexError("eigenvalue index out of range")
    if len(indices) == 0:
        return np.empty(0)
    off2 = off * off
    lo, hi = gershgorin_bounds(diag, off)
    span = max(hi - lo, 1.0)
    a = np.full(len(indices), lo - 1e-3 * span)
    b = np.full(len(indices), hi + 1e-3 * span)
    max_iter = int(math.ceil(math.log2((b[0] - a[0]) / tol))) + 2
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        cnt = sturm_count(diag, off2, mid)
        above = cnt > indices
        b = np.where(above, mid, b)
        a = np.where(above, a, mid)
        if np.max(b - a) <= tol:
            break
    return 0.5 * (a + b)


def _scaled_step(d, o2, m1, e1, m2, e2):
    """One step of D = d*D1 - o2*D2 on scaled pairs, rescaled by frexp."""
    emax = e1 if e1 >= e2 else e2
    t = d * m1 * 2.0 ** float(e1 - emax) - o2 * m2 * 2.0 ** float(e2 - emax)
    f, e = math.frexp(t)
    return f, emax + e


def scaled_det_forward(dshift, off2):
    """Leading principal minors of the shifted matrix, in scaled form.

    dshift: diagonal minus energy (length n); off2: squared off-diagonals.
    Returns (mant, expo) with det of the leading k-by-k block equal to
    mant[k] * 2**expo[k]; index 0 is the empty block (determinant 1).
    """
    n = len(dshift)
    mant = np.empty(n + 1)
    expo = np.empty(n + 1, dtype=np.int64)
    mant[0], expo[0] = 1.0, 0
    for k in range(1, n + 1):
        o2, m2, e2 = (off2[k - 2], mant[k - 2], expo[k - 2]) if k >= 2 else (0.0, 0.0, 0)
        mant[k], expo[k] = _scaled_step(
            dshift[k - 1], o2, mant[k - 1], expo[k - 1], m2, e2
        )
    return mant, expo


def scaled_det_backward(dshift, off2):
    """Trailing principal minors, scaled as in scaled_det_forward.

    Returns (mant, expo) with det of the block spanning rows k..n-1 equal to
    mant[k] * 2**expo[k]; index n is the empty block.
    """
    n = len(dshift)
    mant = np.empty(n + 1)
    expo = np.empty(n + 1, dtype=np.int64)
    mant[n], expo[n] = 1.0, 0
    for k in range(n - 1, -1, -1):
        o2, m2, e2 = (off2[k], mant[k + 2], expo[k + 2]) if k <= n - 2 else (0.0, 0.0, 0)
        mant[k], expo[k] = _scaled_step(
            dshift[k], o2, mant[k + 1], expo[k + 1], m2, e2
        )
    return mant, expo


def inverse_iteration(diag, off, energy, iters=3, rng=None):
    """Unit eigenvector estimate for the eigenvalue nearest ``energy``.

    Plain inverse iteration on the real symmetric tridiagonal via banded LU;
    deterministic when given a seeded rng.
    """
    from scipy.linalg import solve_banded

    n = len(diag)
    ab = np.zeros((3, n))
    shift = energy + 1e-11 * max(1.0, abs(energy))
    ab[0, 1:] = off
    ab[1, :] = np.asarray(diag) - shift
    ab[2, :-1] = off
    if rng is None:
        rng = np.random.default_rng(0)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(iters):
        v = solve_banded((1, 1), ab, v)
        v /= np.linalg.norm(v)
    return v
