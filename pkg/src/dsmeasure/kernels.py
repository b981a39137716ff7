"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

Every kernel is written once; when numba is available the function is
compiled with ``@njit(cache=True)``, otherwise the same source runs as plain
numpy. Set ``DSMEASURE_NO_NUMBA=1`` to force the numpy path. The selected
backend is reported in ``BACKEND``; compiled kernels keep the interpreted
version reachable through ``.py_func`` (used by the benchmark and the
backend-parity tests).

The tree-split search is the one exception to the single-source rule: the
loop formulation that numba compiles well is too slow interpreted, so a
vectorised numpy twin is selected instead when numba is off.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_disabled() -> bool:
    flag = os.environ.get("DSMEASURE_NO_NUMBA", "").strip().lower()
    return flag not in ("", "0", "false", "no")


NUMBA_ENABLED = False
if not _numba_disabled():
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def _jit(fn):
    if NUMBA_ENABLED:
        return _njit(cache=True)(fn)
    return fn


def py_func(fn):
    """Return the interpreted version of a (possibly jitted) kernel."""
    return getattr(fn, "py_func", fn)


# ---------------------------------------------------------------------------
# discrete Fourier transforms
# ---------------------------------------------------------------------------

@_jit
def dft_direct(x):
    """O(n^2) DFT by definition: X[j] = sum_k x[k] exp(-2*pi*i*j*k/n)."""
    n = x.shape[0]
    out = np.empty(n, np.complex128)
    for j in range(n):
        re = 0.0
        im = 0.0
        for k in range(n):
            # reduce j*k mod n before forming the angle to limit rounding
            ang = -2.0 * np.pi * ((j * k) % n) / n
            c = np.cos(ang)
            s = np.sin(ang)
            re += x[k] * c
            im += x[k] * s
        out[j] = complex(re, im)
    return out


@_jit
def idft_direct(spec):
    """Inverse of dft_direct; returns a complex series."""
    n = spec.shape[0]
    out = np.empty(n, np.complex128)
    for j in range(n):
        re = 0.0
        im = 0.0
        for k in range(n):
            ang = 2.0 * np.pi * ((j * k) % n) / n
            c = np.cos(ang)
            s = np.sin(ang)
            sr = spec[k].real
            si = spec[k].imag
            re += sr * c - si * s
            im += sr * s + si * c
        out[j] = complex(re / n, im / n)
    return out


@_jit
def fft_radix2(x):
    """Iterative radix-2 Cooley-Tukey FFT; length must be a power of two."""
    n = x.shape[0]
    out = np.empty(n, np.complex128)
    # bit-reversal permutation
    bits = 0
    m = n
    while m > 1:
        bits += 1
        m >>= 1
    for i in range(n):
        rev = 0
        v = i
        for _ in range(bits):
            rev = (rev << 1) | (v & 1)
            v >>= 1
        out[rev] = complex(x[i], 0.0)
    # butterflies
    size = 2
    while size <= n:
        half = size // 2
        step = -2.0 * np.pi / size
        for start in range(0, n, size):
            for k in range(half):
                ang = step * k
                w = complex(np.cos(ang), np.sin(ang))
                a = out[start + k]
                b = out[start + k + half] * w
                out[start + k] = a + b
                out[start + k + half] = a - b
        size *= 2
    return out


@_jit
def window_spectral_features(x, window_len, stride, crop_len):
    """Cropped DFT moduli of sliding windows: one row per window offset.

    Row w holds |DFT(x[w*stride : w*stride+window_len])[:crop_len]|.
    """
    n_win = (x.shape[0] - window_len) // stride + 1
    basis = np.empty((window_len, crop_len), np.complex128)
    for k in range(window_len):
        for j in range(crop_len):
            ang = -2.0 * np.pi * ((j * k) % window_len) / window_len
            basis[k, j] = complex(np.cos(ang), np.sin(ang))
    windows = np.empty((n_win, window_len), np.complex128)
    for w in range(n_win):
        off = w * stride
        for k in range(window_len):
            windows[w, k] = complex(x[off + k], 0.0)
    return np.abs(np.dot(windows, basis))


# ---------------------------------------------------------------------------
# peaks and topographic prominence
# ---------------------------------------------------------------------------

@_jit
def find_peaks_strict(x):
    """Indices i with x[i-1] < x[i] > x[i+1]; plateaus are not peaks."""
    n = x.shape[0]
    buf = np.empty(n, np.int64)
    c = 0
    for i in range(1, n - 1):
        if x[i - 1] < x[i] and x[i] > x[i + 1]:
            buf[c] = i
            c += 1
    return buf[:c].copy()


@_jit
def peak_prominences_topographic(x, indices):
    """Prominence per peak: height above the higher of the two side bases.

    A side base is the minimum of x walking from the peak towards the nearest
    strictly higher sample on that side (or the series end).
    """
    n = x.shape[0]
    out = np.empty(indices.shape[0], np.float64)
    for pi in range(indices.shape[0]):
        p = indices[pi]
        h = x[p]
        lmin = h
        i = p - 1
        while i >= 0 and x[i] <= h:
            if x[i] < lmin:
                lmin = x[i]
            i -= 1
        rmin = h
        i = p + 1
        while i < n and x[i] <= h:
            if x[i] < rmin:
                rmin = x[i]
            i += 1
        base = lmin if lmin > rmin else rmin
        out[pi] = h - base
    return out


# ---------------------------------------------------------------------------
# autoencoder training (the dominant cost of a DS evaluation)
# ---------------------------------------------------------------------------

@_jit
def ae_train_loop(X, W1, b1, W2, b2, W3, b3, W4, b4, lr, epochs, lam):
    """Full-batch gradient descent on the reconstruction + invariance loss.

    loss = mean_t ||x_t - xhat_t||^2 + lam * mean_t ||z_t - z_{t-1}||^2
    with tanh hidden layers and linear latent/output layers. Weights are
    updated in place. Returns (loss_log[epochs, 3], diverged_epoch) where
    the log columns are (total, reconstruction, invariance) and
    diverged_epoch is -1 unless a non-finite loss was hit.
    """
    T = X.shape[0]
    log = np.zeros((epochs, 3), np.float64)
    inv_norm = 1.0 / (T - 1) if T > 1 else 1.0
    for ep in range(epochs):
        H1 = np.tanh(np.dot(X, W1) + b1)
        Z = np.dot(H1, W2) + b2
        H2 = np.tanh(np.dot(Z, W3) + b3)
        Y = np.dot(H2, W4) + b4
        R = Y - X
        Dz = Z[1:] - Z[:-1]
        rec = np.sum(R * R) / T
        inv = lam * np.sum(Dz * Dz) * inv_norm
        total = rec + inv
        log[ep, 0] = total
        log[ep, 1] = rec
        log[ep, 2] = inv
        if not np.isfinite(total):
            return log[: ep + 1], ep
        gY = (2.0 / T) * R
        gW4 = np.dot(np.ascontiguousarray(H2.T), gY)
        gb4 = np.sum(gY, axis=0)
        gH2 = np.dot(gY, np.ascontiguousarray(W4.T)) * (1.0 - H2 * H2)
        gW3 = np.dot(np.ascontiguousarray(Z.T), gH2)
        gb3 = np.sum(gH2, axis=0)
        gZ = np.dot(gH2, np.ascontiguousarray(W3.T))
        scale = 2.0 * lam * inv_norm
        gZ[1:] += scale * Dz
        gZ[:-1] -= scale * Dz
        gW2 = np.dot(np.ascontiguousarray(H1.T), gZ)
        gb2 = np.sum(gZ, axis=0)
        gH1 = np.dot(gZ, np.ascontiguousarray(W2.T)) * (1.0 - H1 * H1)
        gW1 = np.dot(np.ascontiguousarray(X.T), gH1)
        gb1 = np.sum(gH1, axis=0)
        W1 -= lr * gW1
        b1 -= lr * gb1
        W2 -= lr * gW2
        b2 -= lr * gb2
        W3 -= lr * gW3
        b3 -= lr * gb3
        W4 -= lr * gW4
        b4 -= lr * gb4
    return log, -1


@_jit
def ae_encode(X, W1, b1, W2, b2):
    """Latent codes: tanh hidden layer, linear latent layer."""
    return np.dot(np.tanh(np.dot(X, W1) + b1), W2) + b2


@_jit
def ae_decode(Z, W3, b3, W4, b4):
    """Reconstructions from latents: tanh hidden layer, linear output."""
    return np.dot(np.tanh(np.dot(Z, W3) + b3), W4) + b4


# ---------------------------------------------------------------------------
# multi-scale KL and prominence-dispersion profiles
# ---------------------------------------------------------------------------

@_jit
def kl_ratio_embedding(p_vals, q_vals, eps):
    """KL(p||q) after embedding both non-negative series as value/sum
    distributions with an eps floor."""
    n = p_vals.shape[0]
    sp = 0.0
    sq = 0.0
    for i in range(n):
        a = p_vals[i]
        b = q_vals[i]
        sp += a if a > eps else eps
        sq += b if b > eps else eps
    z = 0.0
    for i in range(n):
        a = p_vals[i]
        b = q_vals[i]
        pi = (a if a > eps else eps) / sp
        qi = (b if b > eps else eps) / sq
        z += pi * np.log(pi / qi)
    return z


@_jit
def kl_profile(x_al, d, scales, eps):
    """Per-scale KL between the aligned input and the bias-corrected curve.

    For each scale w the curve d is partitioned into blocks of w steps (the
    final block may be shorter) and each block is shifted by the mean of the
    aligned input over that block. status is 0 for computed scales and 1 for
    scales wider than the curve (skipped).
    """
    ns = scales.shape[0]
    nd = d.shape[0]
    z = np.full(ns, np.nan, np.float64)
    status = np.zeros(ns, np.int64)
    for si in range(ns):
        w = scales[si]
        if w > nd:
            status[si] = 1
            continue
        dt = d.copy()
        lo = 0
        while lo < nd:
            hi = lo + w
            if hi > nd:
                hi = nd
            s = 0.0
            for t in range(lo, hi):
                s += x_al[t]
            bias = s / (hi - lo)
            for t in range(lo, hi):
                dt[t] += bias
            lo = hi
        z[si] = kl_ratio_embedding(x_al, dt, eps)
    return z, status


@_jit
def prominence_cov_profile(prom_curve, scales):
    """Coefficient of variation of the sparse prominence curve per window.

    Non-overlapping windows of w time steps; windows without any peak (zero
    mean) are skipped. Returns the flat COV array plus, per scale, the start
    offset into it, the number of kept windows, and the number skipped.
    """
    ns = scales.shape[0]
    n = prom_curve.shape[0]
    cap = 0
    for si in range(ns):
        cap += n // scales[si]
    covs = np.empty(cap, np.float64)
    starts = np.zeros(ns, np.int64)
    counts = np.zeros(ns, np.int64)
    skipped = np.zeros(ns, np.int64)
    ptr = 0
    for si in range(ns):
        w = scales[si]
        starts[si] = ptr
        nwin = n // w
        for b in range(nwin):
            lo = b * w
            s = 0.0
            for t in range(lo, lo + w):
                s += prom_curve[t]
            mean = s / w
            if mean < 1e-12:
                skipped[si] += 1
                continue
            ss = 0.0
            for t in range(lo, lo + w):
                dv = prom_curve[t] - mean
                ss += dv * dv
            covs[ptr] = np.sqrt(ss / w) / mean * 100.0
            counts[si] += 1
            ptr += 1
    return covs[:ptr].copy(), starts, counts, skipped


# ---------------------------------------------------------------------------
# decision-tree split search (dual implementation, see module docstring)
# ---------------------------------------------------------------------------

def _best_split_loop(X, y, rows, feats, mode):
    """Best axis-aligned split of X[rows] by target y[rows].

    mode 0: Gini gain for 0/1 labels. mode 1: squared-error reduction for
    real-valued targets. Ties resolve to the lowest feature index, then the
    lowest threshold. Returns (feature, threshold, gain); feature is -1 when
    no valid split exists.
    """
    m = rows.shape[0]
    best_f = -1
    best_thr = 0.0
    best_gain = 0.0
    vals = np.empty(m, np.float64)
    ys = np.empty(m, np.float64)
    total = 0.0
    for i in range(m):
        total += y[rows[i]]
    if mode == 0:
        p = total / m
        parent = 1.0 - p * p - (1.0 - p) * (1.0 - p)
    else:
        parent = 0.0  # constant offset; SSE reduction used directly
    for fi in range(feats.shape[0]):
        f = feats[fi]
        for i in range(m):
            vals[i] = X[rows[i], f]
        order = np.argsort(vals)
        cum = 0.0
        for i in range(m - 1):
            idx = order[i]
            cum += y[rows[idx]]
            if vals[order[i]] == vals[order[i + 1]]:
                continue
            nl = i + 1.0
            nr = m - nl
            if mode == 0:
                pl = cum / nl
                pr = (total - cum) / nr
                gl = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
                gr = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
                gain = parent - (nl * gl + nr * gr) / m
            else:
                rest = total - cum
                gain = cum * cum / nl + rest * rest / nr - total * total / m
            if gain > best_gain + 1e-15:
                best_gain = gain
                best_f = f
                best_thr = 0.5 * (vals[order[i]] + vals[order[i + 1]])
        # restore y ordering cost: nothing to restore (reads only)
    return best_f, best_thr, best_gain


def _best_split_vec(X, y, rows, feats, mode):
    """Vectorised twin of _best_split_loop (numpy fallback path)."""
    m = rows.shape[0]
    sub = X[np.ix_(rows, feats)]
    ysub = y[rows]
    order = np.argsort(sub, axis=0)
    svals = np.take_along_axis(sub, order, axis=0)
    sy = ysub[order]
    cum = np.cumsum(sy, axis=0)[:-1]
    total = float(ysub.sum())
    nl = np.arange(1, m, dtype=np.float64)[:, None]
    nr = m - nl
    valid = svals[:-1] != svals[1:]
    if mode == 0:
        p = total / m
        parent = 1.0 - p * p - (1.0 - p) * (1.0 - p)
        pl = cum / nl
        pr = (total - cum) / nr
        gl = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
        gr = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
        gains = parent - (nl * gl + nr * gr) / m
    else:
        rest = total - cum
        gains = cum * cum / nl + rest * rest / nr - total * total / m
    gains = np.where(valid, gains, -np.inf)
    if gains.size == 0 or not np.isfinite(gains).any():
        return -1, 0.0, 0.0
    best_gain = float(gains.max())
    if best_gain <= 1e-15:
        return -1, 0.0, 0.0
    # lowest feature index, then lowest threshold position
    hits = np.argwhere((gains >= best_gain - 1e-15) & np.isfinite(gains))
    # hits rows are (threshold_pos, feat_pos); order by feat, then position
    sel = hits[np.lexsort((hits[:, 0], hits[:, 1]))][0]
    i, fpos = int(sel[0]), int(sel[1])
    thr = 0.5 * (svals[i, fpos] + svals[i + 1, fpos])
    return int(feats[fpos]), float(thr), float(gains[i, fpos])


if NUMBA_ENABLED:
    best_split = _njit(cache=True)(_best_split_loop)
else:
    best_split = _best_split_vec


# ---------------------------------------------------------------------------
# exact t-SNE
# ---------------------------------------------------------------------------

@_jit
def pairwise_sq_dists(X):
    n = X.shape[0]
    sq = np.sum(X * X, axis=1)
    G = np.dot(X, np.ascontiguousarray(X.T))
    D = sq.reshape(n, 1) + sq.reshape(1, n) - 2.0 * G
    for i in range(n):
        D[i, i] = 0.0
        for j in range(n):
            if D[i, j] < 0.0:
                D[i, j] = 0.0
    return D


@_jit
def perplexity_calibration(Dsq, log_perp, tol, max_iter):
    """Per-point Gaussian bandwidths by bisection on the conditional entropy.

    Returns the conditional probability matrix P[i, j] = p_{j|i} (zero
    diagonal, rows sum to 1) and the precision beta_i per point.
    """
    n = Dsq.shape[0]
    P = np.zeros((n, n), np.float64)
    betas = np.ones(n, np.float64)
    for i in range(n):
        beta = 1.0
        beta_lo = -np.inf
        beta_hi = np.inf
        row = np.empty(n, np.float64)
        for _ in range(max_iter):
            ssum = 0.0
            for j in range(n):
                if j == i:
                    row[j] = 0.0
                else:
                    row[j] = np.exp(-Dsq[i, j] * beta)
                    ssum += row[j]
            if ssum <= 0.0:
                ssum = 1e-300
            dsum = 0.0
            for j in range(n):
                row[j] /= ssum
                dsum += Dsq[i, j] * row[j]
            entropy = np.log(ssum) + beta * dsum
            diff = entropy - log_perp
            if diff < tol and diff > -tol:
                break
            if diff > 0.0:
                beta_lo = beta
                beta = beta * 2.0 if beta_hi == np.inf else 0.5 * (beta + beta_hi)
            else:
                beta_hi = beta
                beta = beta * 0.5 if beta_lo == -np.inf else 0.5 * (beta + beta_lo)
        for j in range(n):
            P[i, j] = row[j]
        betas[i] = beta
    return P, betas


@_jit
def tsne_optimize(P, Y, iters, lr, mom_early, mom_late, switch_iter,
                  exaggeration, exag_until):
    """Gradient descent with momentum on the t-SNE objective.

    P is the symmetric joint target distribution. The logged KL curve is
    always against the un-exaggerated P. Returns (Y, kl_per_iteration).
    """
    n = Y.shape[0]
    vel = np.zeros_like(Y)
    kl_curve = np.empty(iters, np.float64)
    for it in range(iters):
        Dsq = pairwise_sq_dists(Y)
        num = 1.0 / (1.0 + Dsq)
        for i in range(n):
            num[i, i] = 0.0
        qsum = np.sum(num)
        if qsum < 1e-300:
            qsum = 1e-300
        kl = 0.0
        for i in range(n):
            for j in range(n):
                pij = P[i, j]
                if pij > 1e-12:
                    qij = num[i, j] / qsum
                    if qij < 1e-12:
                        qij = 1e-12
                    kl += pij * np.log(pij / qij)
        kl_curve[it] = kl
        ex = exaggeration if it < exag_until else 1.0
        PQ = (ex * P - num / qsum) * num
        rowsum = np.sum(PQ, axis=1)
        grad = 4.0 * (rowsum.reshape(n, 1) * Y - np.dot(PQ, Y))
        mom = mom_early if it < switch_iter else mom_late
        vel = mom * vel - lr * grad
        Y = Y + vel
        # keep the embedding centred
        for c in range(Y.shape[1]):
            mean_c = 0.0
            for i in range(n):
                mean_c += Y[i, c]
            mean_c /= n
            for i in range(n):
                Y[i, c] -= mean_c
    return Y, kl_curve
