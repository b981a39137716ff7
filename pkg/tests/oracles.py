"""Independent reference implementations used as test oracles.

Everything here is deliberately written as plain loops over the definitions,
separate from the package's kernels, so that agreement is meaningful.
"""

import math
import struct

import numpy as np


def dft_bruteforce(x):
    """Naive DFT summation, no angle reduction."""
    n = len(x)
    out = np.empty(n, dtype=np.complex128)
    for j in range(n):
        acc = 0.0 + 0.0j
        for k in range(n):
            acc += x[k] * np.exp(-2j * np.pi * j * k / n)
        out[j] = acc
    return out


def peaks_bruteforce(x):
    """All strict local maxima by direct definition."""
    return [i for i in range(1, len(x) - 1) if x[i - 1] < x[i] > x[i + 1]]


def prominence_bruteforce(x, p):
    """Scan each side for the nearest strictly higher sample; the base is the
    minimum on the walked path (series end if no higher sample)."""
    n = len(x)
    left_base = x[p]
    i = p - 1
    while i >= 0 and x[i] <= x[p]:
        left_base = min(left_base, x[i])
        i -= 1
    right_base = x[p]
    i = p + 1
    while i < n and x[i] <= x[p]:
        right_base = min(right_base, x[i])
        i += 1
    return x[p] - max(left_base, right_base)


def pop_std(vals):
    m = sum(vals) / len(vals)
    return math.sqrt(sum((v - m) ** 2 for v in vals) / len(vals))


def cv_percent(vals):
    m = sum(vals) / len(vals)
    return pop_std(vals) / m * 100.0


def reference_ds_profile(x_norm, d, scales, eps=1e-8, window_len=20):
    """Single-function reference for the multi-scale stage.

    Mirrors the documented conventions (trailing partial bias block, value/sum
    embedding with eps floor, sparse time-indexed prominence curve, pooled
    prominence CVs) with independent loop code. Returns every intermediate.
    """
    n = len(x_norm)
    nd = len(d)
    x_al = [float(v) for v in x_norm[window_len - 1:window_len - 1 + nd]]

    z_by_scale = {}
    for w in scales:
        if w > nd:
            continue
        dt = [float(v) for v in d]
        lo = 0
        while lo < nd:
            hi = min(lo + w, nd)
            bias = sum(x_al[lo:hi]) / (hi - lo)
            for t in range(lo, hi):
                dt[t] += bias
            lo = hi
        sp = sum(max(v, eps) for v in x_al)
        sq = sum(max(v, eps) for v in dt)
        z = 0.0
        for a, b in zip(x_al, dt):
            pi = max(a, eps) / sp
            qi = max(b, eps) / sq
            z += pi * math.log(pi / qi)
        z_by_scale[w] = z
    cv1 = cv_percent([z_by_scale[w] for w in sorted(z_by_scale)])

    prom_curve = [0.0] * n
    for p in peaks_bruteforce(x_norm):
        prom_curve[p] = prominence_bruteforce(x_norm, p)
    covs = []
    for w in scales:
        for b in range(n // w):
            seg = prom_curve[b * w:(b + 1) * w]
            m = sum(seg) / w
            if m < 1e-12:
                continue
            covs.append(pop_std(seg) / m * 100.0)
    cv2 = cv_percent(covs)

    return {
        "z_by_scale": z_by_scale,
        "cov_array": covs,
        "cv1": cv1,
        "cv2": cv2,
        "ds": cv1 * cv2 / 100.0,
    }


def write_nifti(path, data, datatype, scl_slope=0.0, scl_inter=0.0):
    """Minimal single-file NIfTI-1 writer (test fixture).

    data is an integer/float array of shape (nx, ny, nz, nt) holding the RAW
    on-disk values (scaling fields are written to the header but not applied).
    """
    codes = {"int16": (4, np.dtype("<i2")), "float32": (16, np.dtype("<f4"))}
    code, dtype = codes[datatype]
    nx, ny, nz, nt = data.shape
    header = bytearray(348)
    struct.pack_into("<i", header, 0, 348)
    struct.pack_into("<8h", header, 40, 4, nx, ny, nz, nt, 1, 1, 1)
    struct.pack_into("<h", header, 70, code)
    struct.pack_into("<h", header, 72, dtype.itemsize * 8)
    struct.pack_into("<f", header, 108, 352.0)  # vox_offset
    struct.pack_into("<f", header, 112, scl_slope)
    struct.pack_into("<f", header, 116, scl_inter)
    header[344:348] = b"n+1\x00"
    payload = np.asarray(data, dtype=dtype).flatten(order="F").tobytes()
    with open(path, "wb") as fh:
        fh.write(bytes(header))
        fh.write(b"\x00" * 4)  # pad to vox_offset 352
        fh.write(payload)


def silhouette(points, labels):
    """Mean silhouette coefficient for a 2-class labelling."""
    pts = np.asarray(points, dtype=float)
    lab = np.asarray(labels)
    n = pts.shape[0]
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    scores = []
    for i in range(n):
        same = (lab == lab[i])
        same[i] = False
        a = dist[i][same].mean()
        b = dist[i][lab != lab[i]].mean()
        scores.append((b - a) / max(a, b))
    return float(np.mean(scores))
