"""Word-size kernels for arithmetic mod 2^64 (and mod 2^k, k <= 64).

uint64 wraparound is exactly reduction mod 2^64, so these kernels need no
explicit modulus. Each kernel has a numba version and a pure-numpy version;
set ``DYADIC_POSE_NO_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

_DISABLED = os.environ.get("DYADIC_POSE_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by DYADIC_POSE_NO_NUMBA")
    import numba as nb

    njit = nb.njit(cache=False, nogil=True)
    HAVE_NUMBA = True
except ImportError:
    nb = None
    HAVE_NUMBA = False


def mask_for(nbits: int) -> np.uint64:
    if not 1 <= nbits <= 64:
        raise ValueError(f"word kernels need 1 <= bits <= 64, got {nbits}")
    return np.uint64((1 << nbits) - 1)


def to_words(values, nbits: int = 64) -> np.ndarray:
    """Reduce Python ints mod 2^nbits into a uint64 array."""
    m = (1 << nbits) - 1
    arr = np.asarray(values, dtype=object)
    flat = [int(v) & m for v in arr.ravel()]
    return np.array(flat, dtype=np.uint64).reshape(arr.shape)


# ---------------------------------------------------------------- determinants


def _berkowitz_det_numpy(mats: np.ndarray) -> np.ndarray:
    """Division-free determinant of a batch (k, n, n), mod 2^64."""
    k, n, _ = mats.shape
    if n == 0:
        return np.ones(k, dtype=np.uint64)
    with np.errstate(over="ignore"):
        coeffs = np.zeros((k, n + 1), dtype=np.uint64)
        coeffs[:, 0] = 1
        coeffs[:, 1] = np.uint64(0) - mats[:, 0, 0]
        for r in range(1, n):
            a = mats[:, r, r]
            row = mats[:, r, :r]
            col = mats[:, :r, r]
            M = mats[:, :r, :r]
            # first column of the Toeplitz factor: 1, -a, -R S, -R M S, ...
            tcol = np.zeros((k, r + 2), dtype=np.uint64)
            tcol[:, 0] = 1
            tcol[:, 1] = np.uint64(0) - a
            v = col.copy()
            for j in range(r):
                tcol[:, j + 2] = np.uint64(0) - np.einsum("ki,ki->k", row, v)
                v = np.einsum("kij,kj->ki", M, v)
            new = np.zeros((k, n + 1), dtype=np.uint64)
            for i in range(r + 2):
                for j in range(min(i + 1, r + 1)):
                    new[:, i] += tcol[:, i - j] * coeffs[:, j]
            coeffs = new
        det = coeffs[:, n]
        if n % 2:
            det = np.uint64(0) - det
    return det


if HAVE_NUMBA:

    @njit
    def _berkowitz_det_numba(mats):
        k, n, _ = mats.shape
        out = np.empty(k, dtype=np.uint64)
        zero = np.uint64(0)
        for b in range(k):
            A = mats[b]
            if n == 0:
                out[b] = np.uint64(1)
                continue
            coeffs = np.zeros(n + 1, dtype=np.uint64)
            coeffs[0] = np.uint64(1)
            coeffs[1] = zero - A[0, 0]
            tcol = np.zeros(n + 1, dtype=np.uint64)
            v = np.zeros(n, dtype=np.uint64)
            w = np.zeros(n, dtype=np.uint64)
            new = np.zeros(n + 1, dtype=np.uint64)
            for r in range(1, n):
                tcol[0] = np.uint64(1)
                tcol[1] = zero - A[r, r]
                for i in range(r):
                    v[i] = A[i, r]
                for j in range(r):
                    acc = zero
                    for i in range(r):
                        acc += A[r, i] * v[i]
                    tcol[j + 2] = zero - acc
                    for i in range(r):
                        s = zero
                        for l in range(r):
                            s += A[i, l] * v[l]
                        w[i] = s
                    for i in range(r):
                        v[i] = w[i]
                for i in range(n + 1):
                    new[i] = zero
                for i in range(r + 2):
                    for j in range(min(i + 1, r + 1)):
                        new[i] += tcol[i - j] * coeffs[j]
                for i in range(n + 1):
                    coeffs[i] = new[i]
            d = coeffs[n]
            if n % 2 == 1:
                d = zero - d
            out[b] = d
        return out


def det_mod_2_64(mats: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.uint64)
    if mats.ndim == 2:
        mats = mats[None]
    if (HAVE_NUMBA if use_numba is None else use_numba) and HAVE_NUMBA:
        return _berkowitz_det_numba(mats)
    return _berkowitz_det_numpy(mats)


# ------------------------------------------------------- epipolar residuals


def _bilinear_numpy(U, V, E, mask):
    with np.errstate(over="ignore"):
        EV = np.einsum("ij,kj->ki", E, V)
        return np.einsum("ki,ki->k", U, EV) & mask


if HAVE_NUMBA:

    @njit
    def _bilinear_numba(U, V, E, mask):
        k = U.shape[0]
        out = np.empty(k, dtype=np.uint64)
        for p in range(k):
            acc = np.uint64(0)
            for i in range(3):
                row = np.uint64(0)
                for j in range(3):
                    row += E[i, j] * V[p, j]
                acc += U[p, i] * row
            out[p] = acc & mask
        return out


def bilinear_residuals(U, V, E, nbits: int, use_numba: bool | None = None) -> np.ndarray:
    """u_p^T E v_p mod 2^nbits for every row p."""
    U = np.ascontiguousarray(U, dtype=np.uint64)
    V = np.ascontiguousarray(V, dtype=np.uint64)
    E = np.ascontiguousarray(E, dtype=np.uint64)
    mask = mask_for(nbits)
    if (HAVE_NUMBA if use_numba is None else use_numba) and HAVE_NUMBA:
        return _bilinear_numba(U, V, E, mask)
    return _bilinear_numpy(U, V, E, mask)


# --------------------------------------------------------- brute-force roots


def _system_values_numpy(coeffs, exps, owner, m, points, mask):
    """Values of each equation at every point; points is (P, n) uint64."""
    P = points.shape[0]
    vals = np.zeros((m, P), dtype=np.uint64)
    with np.errstate(over="ignore"):
        for t in range(coeffs.shape[0]):
            term = np.full(P, coeffs[t], dtype=np.uint64)
            for j in range(exps.shape[1]):
                for _ in range(exps[t, j]):
                    term = term * points[:, j]
            vals[owner[t]] += term
    return vals & mask


def _root_scan_numpy(coeffs, exps, owner, m, n, nbits):
    size = 1 << nbits
    grids = np.meshgrid(*([np.arange(size, dtype=np.uint64)] * n), indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)
    vals = _system_values_numpy(coeffs, exps, owner, m, points, mask_for(nbits))
    return points[~vals.any(axis=0)]


if HAVE_NUMBA:

    @njit
    def _root_scan_numba(coeffs, exps, owner, m, n, nbits):
        size = np.int64(1) << nbits
        mask = (np.uint64(1) << np.uint64(nbits)) - np.uint64(1)
        total = size**n
        hits = np.empty((total, n), dtype=np.uint64)
        count = 0
        x = np.zeros(n, dtype=np.uint64)
        vals = np.zeros(m, dtype=np.uint64)
        for idx in range(total):
            rem = idx
            for j in range(n - 1, -1, -1):
                x[j] = np.uint64(rem % size)
                rem //= size
            for e in range(m):
                vals[e] = np.uint64(0)
            for t in range(coeffs.shape[0]):
                term = coeffs[t]
                for j in range(n):
                    for _ in range(exps[t, j]):
                        term = term * x[j]
                vals[owner[t]] += term
            ok = True
            for e in range(m):
                if vals[e] & mask != np.uint64(0):
                    ok = False
                    break
            if ok:
                for j in range(n):
                    hits[count, j] = x[j]
                count += 1
        return hits[:count]


def pack_system(polys, nbits: int = 64):
    """Flatten polynomials into (coeffs, exps, owner) arrays for the scan kernels."""
    coeffs, exps, owner = [], [], []
    for k, p in enumerate(polys):
        for e, c in p.terms.items():
            coeffs.append(int(c) & ((1 << nbits) - 1))
            exps.append(e)
            owner.append(k)
    n = polys[0].nvars
    return (
        np.array(coeffs, dtype=np.uint64),
        np.array(exps, dtype=np.int64).reshape(len(exps), n),
        np.array(owner, dtype=np.int64),
    )


def root_scan(polys, nbits: int, use_numba: bool | None = None) -> np.ndarray:
    """All x in (Z/2^nbits)^n with every polynomial vanishing mod 2^nbits.

    Exhaustive: 2^(n * nbits) points. Intended for small oracles.
    """
    n = polys[0].nvars
    if n * nbits > 26:
        warnings.warn(f"root scan over 2^{n * nbits} points", RuntimeWarning, stacklevel=2)
    coeffs, exps, owner = pack_system(polys, nbits)
    if (HAVE_NUMBA if use_numba is None else use_numba) and HAVE_NUMBA:
        return _root_scan_numba(coeffs, exps, owner, len(polys), n, nbits)
    return _root_scan_numpy(coeffs, exps, owner, len(polys), n, nbits)
