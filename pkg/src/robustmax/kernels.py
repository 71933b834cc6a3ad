"""Hot numeric kernels.

Every kernel has a pure-numpy implementation (``*_numpy``) and a numba one
(``*_numba``). The public names resolve to the numba versions unless numba is
missing or ``ROBUSTMAX_DISABLE_NUMBA`` is set. The two paths agree to
floating-point rounding (summation order differs), not bitwise.

Conventions shared by all kernels: data matrices are ``(n, p)`` float64 with
observations in rows; ``centers`` and ``trunc`` are length-``p`` vectors.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# truncated column sums:  sum_i clamp(X[i, j] - c[j], -t[j], t[j])
# ---------------------------------------------------------------------------


def truncated_column_sums_numpy(X, centers, trunc):
    return np.clip(X - centers, -trunc, trunc).sum(axis=0)


@njit(cache=True, nogil=True)
def truncated_column_sums_numba(X, centers, trunc):
    n, p = X.shape
    out = np.zeros(p)
    for i in range(n):
        for j in range(p):
            d = X[i, j] - centers[j]
            t = trunc[j]
            if d > t:
                d = t
            elif d < -t:
                d = -t
            out[j] += d
    return out


# ---------------------------------------------------------------------------
# centered truncated scores:  clamp(X - c) minus its column mean
# ---------------------------------------------------------------------------


def centered_scores_numpy(X, centers, trunc):
    Z = np.clip(X - centers, -trunc, trunc)
    return Z - Z.mean(axis=0)


@njit(cache=True, nogil=True)
def centered_scores_numba(X, centers, trunc):
    n, p = X.shape
    Z = np.empty((n, p))
    mean = np.zeros(p)
    for i in range(n):
        for j in range(p):
            d = X[i, j] - centers[j]
            t = trunc[j]
            if d > t:
                d = t
            elif d < -t:
                d = -t
            Z[i, j] = d
            mean[j] += d
    for j in range(p):
        mean[j] /= n
    for i in range(n):
        for j in range(p):
            Z[i, j] -= mean[j]
    return Z


# ---------------------------------------------------------------------------
# bootstrap extremes:  per multiplier row b, max_j / min_j of w_j * (xi_b @ Z)_j
# ---------------------------------------------------------------------------


def bootstrap_extremes_numpy(xi, Z, weights):
    M = (xi @ Z) * weights
    return M.max(axis=1), M.min(axis=1)


@njit(cache=True, nogil=True)
def bootstrap_extremes_numba(xi, Z, weights):
    # one gemm call, then a fused weighted max/min pass
    M = np.dot(xi, Z)
    B, p = M.shape
    hi = np.empty(B)
    lo = np.empty(B)
    for b in range(B):
        mx = -np.inf
        mn = np.inf
        for j in range(p):
            s = M[b, j] * weights[j]
            if s > mx:
                mx = s
            if s < mn:
                mn = s
        hi[b] = mx
        lo[b] = mn
    return hi, lo


# ---------------------------------------------------------------------------
# interval inversion of g(x) = scale * sum_i clamp(X_i - x, -t, t)
#
# g is continuous, non-increasing and linear between the sorted breakpoints
# X_i -/+ t, so g evaluated there pins down the whole function. The returned
# set {x : q_minus <= g(x) <= q_plus} is [lo, hi]; empty columns get
# lo = +inf, hi = -inf.
# ---------------------------------------------------------------------------


def _g_at_numpy(xs, prefix, t, scale, x):
    n = xs.shape[0]
    a = np.searchsorted(xs, x - t, side="right")
    b = np.searchsorted(xs, x + t, side="left")
    s = -t * a + (prefix[b] - prefix[a]) - (b - a) * x + t * (n - b)
    return scale * s


def invert_columns_numpy(X, trunc, scale, q_minus, q_plus):
    p = X.shape[1]
    lo = np.empty(p)
    hi = np.empty(p)
    for j in range(p):
        xs = np.sort(X[:, j])
        t = trunc[j]
        prefix = np.concatenate(([0.0], np.cumsum(xs)))
        bp = np.sort(np.concatenate((xs - t, xs + t)))
        g = _g_at_numpy(xs, prefix, t, scale[j], bp)
        if q_plus < g[-1] or q_minus > g[0]:
            lo[j], hi[j] = np.inf, -np.inf
            continue
        if g[0] <= q_plus:
            lo[j] = -np.inf
        else:
            k = int(np.argmax(g <= q_plus))
            frac = (g[k - 1] - q_plus) / (g[k - 1] - g[k])
            lo[j] = bp[k - 1] + frac * (bp[k] - bp[k - 1])
        if g[-1] >= q_minus:
            hi[j] = np.inf
        else:
            k = len(g) - 1 - int(np.argmax(g[::-1] >= q_minus))
            frac = (g[k] - q_minus) / (g[k] - g[k + 1])
            hi[j] = bp[k] + frac * (bp[k + 1] - bp[k])
    return lo, hi


@njit(cache=True, nogil=True)
def _invert_one_numba(xs, t, scale, q_minus, q_plus):
    n = xs.shape[0]
    prefix = np.zeros(n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] + xs[i]
    bp = np.empty(2 * n)
    for i in range(n):
        bp[i] = xs[i] - t
        bp[n + i] = xs[i] + t
    bp.sort()
    m = 2 * n
    g = np.empty(m)
    for k in range(m):
        x = bp[k]
        a = np.searchsorted(xs, x - t, side="right")
        b = np.searchsorted(xs, x + t, side="left")
        g[k] = scale * (-t * a + (prefix[b] - prefix[a]) - (b - a) * x + t * (n - b))
    if q_plus < g[m - 1] or q_minus > g[0]:
        return np.inf, -np.inf
    if g[0] <= q_plus:
        lo = -np.inf
    else:
        k = 1
        while g[k] > q_plus:
            k += 1
        lo = bp[k - 1] + (g[k - 1] - q_plus) / (g[k - 1] - g[k]) * (bp[k] - bp[k - 1])
    if g[m - 1] >= q_minus:
        hi = np.inf
    else:
        k = m - 2
        while g[k] < q_minus:
            k -= 1
        hi = bp[k] + (g[k] - q_minus) / (g[k] - g[k + 1]) * (bp[k + 1] - bp[k])
    return lo, hi


@njit(cache=True, nogil=True)
def invert_columns_numba(X, trunc, scale, q_minus, q_plus):
    p = X.shape[1]
    lo = np.empty(p)
    hi = np.empty(p)
    for j in range(p):
        xs = np.sort(X[:, j])
        lo[j], hi[j] = _invert_one_numba(xs, trunc[j], scale[j], q_minus, q_plus)
    return lo, hi


# ---------------------------------------------------------------------------
# cyclic Jacobi eigendecomposition of a symmetric matrix
# ---------------------------------------------------------------------------


def _rotation(app, aqq, apq):
    theta = (aqq - app) / (2.0 * apq)
    t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def jacobi_eigh_numpy(A, tol=1e-12, max_sweeps=100):
    A = np.array(A, dtype=np.float64, copy=True)
    p = A.shape[0]
    V = np.eye(p)
    scale = np.sqrt((A * A).sum())
    if scale == 0.0:
        return np.zeros(p), V, 0
    for sweep in range(max_sweeps):
        # summed directly; total minus diagonal cancels catastrophically
        off = np.sqrt(((A - np.diag(np.diag(A))) ** 2).sum())
        if off <= tol * scale:
            return np.diag(A).copy(), V, sweep
        for i in range(p - 1):
            for k in range(i + 1, p):
                apq = A[i, k]
                if apq == 0.0:
                    continue
                c, s = _rotation(A[i, i], A[k, k], apq)
                ci, ck = A[:, i].copy(), A[:, k].copy()
                A[:, i] = c * ci - s * ck
                A[:, k] = s * ci + c * ck
                ri, rk = A[i, :].copy(), A[k, :].copy()
                A[i, :] = c * ri - s * rk
                A[k, :] = s * ri + c * rk
                vi, vk = V[:, i].copy(), V[:, k].copy()
                V[:, i] = c * vi - s * vk
                V[:, k] = s * vi + c * vk
    raise RuntimeError("Jacobi iteration did not converge")


@njit(cache=True, nogil=True)
def _jacobi_numba(A, V, tol, max_sweeps):
    p = A.shape[0]
    scale = 0.0
    for i in range(p):
        for k in range(p):
            scale += A[i, k] * A[i, k]
    scale = np.sqrt(scale)
    if scale == 0.0:
        return 0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(p):
            for k in range(p):
                if i != k:
                    off += A[i, k] * A[i, k]
        if np.sqrt(off) <= tol * scale:
            return sweep
        for i in range(p - 1):
            for k in range(i + 1, p):
                apq = A[i, k]
                if apq == 0.0:
                    continue
                theta = (A[k, k] - A[i, i]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for r in range(p):
                    ari = A[r, i]
                    ark = A[r, k]
                    A[r, i] = c * ari - s * ark
                    A[r, k] = s * ari + c * ark
                for r in range(p):
                    air = A[i, r]
                    akr = A[k, r]
                    A[i, r] = c * air - s * akr
                    A[k, r] = s * air + c * akr
                for r in range(p):
                    vri = V[r, i]
                    vrk = V[r, k]
                    V[r, i] = c * vri - s * vrk
                    V[r, k] = s * vri + c * vrk
    return -1


def jacobi_eigh_numba(A, tol=1e-12, max_sweeps=100):
    A = np.array(A, dtype=np.float64, copy=True, order="C")
    V = np.eye(A.shape[0])
    sweeps = _jacobi_numba(A, V, tol, max_sweeps)
    if sweeps < 0:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.diag(A).copy(), V, sweeps


def _as_f64(*arrays):
    return tuple(np.ascontiguousarray(a, dtype=np.float64) for a in arrays)


if USE_NUMBA:
    _impl = {
        "truncated_column_sums": truncated_column_sums_numba,
        "centered_scores": centered_scores_numba,
        "bootstrap_extremes": bootstrap_extremes_numba,
        "invert_columns": invert_columns_numba,
        "jacobi_eigh": jacobi_eigh_numba,
    }
else:
    _impl = {
        "truncated_column_sums": truncated_column_sums_numpy,
        "centered_scores": centered_scores_numpy,
        "bootstrap_extremes": bootstrap_extremes_numpy,
        "invert_columns": invert_columns_numpy,
        "jacobi_eigh": jacobi_eigh_numpy,
    }


def truncated_column_sums(X, centers, trunc):
    return _impl["truncated_column_sums"](*_as_f64(X, centers, trunc))


def centered_scores(X, centers, trunc):
    return _impl["centered_scores"](*_as_f64(X, centers, trunc))


def bootstrap_extremes(xi, Z, weights):
    return _impl["bootstrap_extremes"](*_as_f64(xi, Z, weights))


def invert_columns(X, trunc, scale, q_minus, q_plus):
    X, trunc, scale = _as_f64(X, trunc, scale)
    return _impl["invert_columns"](X, trunc, scale, float(q_minus), float(q_plus))


def jacobi_eigh(A, tol=1e-12, max_sweeps=100):
    """Eigenvalues, eigenvectors (columns) and sweep count of symmetric ``A``."""
    return _impl["jacobi_eigh"](A, tol, max_sweeps)
