"""Pure-numpy implementation of the hot numeric kernels.

This is the fallback backend, selected by ``MEANSWITCH_BACKEND=numpy`` or
when numba is not importable.  Function for function it mirrors
:mod:`meanswitch._kernels_numba`; both backends pin the same summation
order (left-to-right within blocks of 32, pairwise tree with odd carry
above) so their results agree to rounding.
"""

import numpy as np

from ._codes import (
    EXCEEDANCE_REL,
    KERNEL_BILINEAR,
    KIND_AFFINE,
    KIND_EXP,
    KIND_ID,
    KIND_LOG,
    PAIRWISE_BLOCK,
    STATUS_CLAMPED,
    STATUS_OK,
    STATUS_OUT_OF_IMAGE,
)


def pinned_sum(a):
    """Order-pinned sum of a 1-D array."""
    a = np.asarray(a, dtype=np.float64)
    n = a.size
    if n == 0:
        return 0.0
    if n <= PAIRWISE_BLOCK:
        s = 0.0
        for v in a.tolist():
            s += v
        return s
    nb = -(-n // PAIRWISE_BLOCK)
    pad = nb * PAIRWISE_BLOCK - n
    blocks = np.concatenate([a, np.zeros(pad)]).reshape(nb, PAIRWISE_BLOCK)
    p = np.zeros(nb)
    for i in range(PAIRWISE_BLOCK):
        p = p + blocks[:, i]
    m = p.size
    while m > 1:
        half = m // 2
        q = p[0 : 2 * half : 2] + p[1 : 2 * half : 2]
        if m % 2 == 1:
            q = np.concatenate([q, p[2 * half :]])
        p = q
        m = p.size
    return float(p[0])


def pinned_row_sum(c):
    """Order-pinned sums along axis 1 of a 2-D array."""
    c = np.asarray(c, dtype=np.float64)
    nrows, n = c.shape
    if n == 0:
        return np.zeros(nrows)
    if n <= PAIRWISE_BLOCK:
        s = np.zeros(nrows)
        for i in range(n):
            s = s + c[:, i]
        return s
    nb = -(-n // PAIRWISE_BLOCK)
    pad = nb * PAIRWISE_BLOCK - n
    blocks = np.concatenate([c, np.zeros((nrows, pad))], axis=1)
    blocks = blocks.reshape(nrows, nb, PAIRWISE_BLOCK)
    p = np.zeros((nrows, nb))
    for i in range(PAIRWISE_BLOCK):
        p = p + blocks[:, :, i]
    m = p.shape[1]
    while m > 1:
        half = m // 2
        q = p[:, 0 : 2 * half : 2] + p[:, 1 : 2 * half : 2]
        if m % 2 == 1:
            q = np.concatenate([q, p[:, 2 * half :]], axis=1)
        p = q
        m = p.shape[1]
    return p[:, 0]


def gen_eval(params, x):
    """Evaluate the encoded generator; `x` may be a scalar or an array."""
    kind = int(params[0])
    if kind == KIND_ID:
        base = np.asarray(x, dtype=np.float64)
    elif kind == KIND_AFFINE:
        base = params[1] * np.asarray(x, dtype=np.float64) + params[2]
    elif kind == KIND_EXP:
        base = np.exp(params[1] * np.asarray(x, dtype=np.float64))
    elif kind == KIND_LOG:
        base = np.log(np.asarray(x, dtype=np.float64))
    else:  # KIND_POW
        base = np.asarray(x, dtype=np.float64) ** params[1]
    out = params[3] * base + params[4]
    return float(out) if np.ndim(x) == 0 else out


def gen_invert(params, y):
    """Closed-form inverse of the encoded generator (no hull clamping)."""
    kind = int(params[0])
    z = (np.asarray(y, dtype=np.float64) - params[4]) / params[3]
    if kind == KIND_ID:
        out = z
    elif kind == KIND_AFFINE:
        out = (z - params[2]) / params[1]
    elif kind == KIND_EXP:
        out = np.log(z) / params[1]
    elif kind == KIND_LOG:
        out = np.exp(z)
    else:  # KIND_POW
        out = z ** (1.0 / params[1])
    return float(out) if np.ndim(y) == 0 else out


def _clamp(s, ylo, yhi):
    tol = EXCEEDANCE_REL * (yhi - ylo)
    if s < ylo:
        if ylo - s > tol:
            return np.nan, STATUS_OUT_OF_IMAGE
        return ylo, STATUS_CLAMPED
    if s > yhi:
        if s - yhi > tol:
            return np.nan, STATUS_OUT_OF_IMAGE
        return yhi, STATUS_CLAMPED
    return s, STATUS_OK


def quasi_mean(params, ylo, yhi, w, x):
    """Weighted quasi-arithmetic mean: inverse of the weighted generator sum.

    Returns ``(value, status)``; the sum is clamped onto the image hull
    ``[ylo, yhi]`` when it strays by rounding noise.
    """
    contrib = np.asarray(w, dtype=np.float64) * gen_eval(params, np.asarray(x, dtype=np.float64))
    s = pinned_sum(contrib)
    s, code = _clamp(s, ylo, yhi)
    if code == STATUS_OUT_OF_IMAGE:
        return np.nan, code
    return float(gen_invert(params, s)), code


def quasi_mean_batch(params, ylo, yhi, w, x):
    """Row-wise quasi-arithmetic means for ``(B, k)`` weights and values."""
    contrib = np.asarray(w, dtype=np.float64) * gen_eval(params, np.asarray(x, dtype=np.float64))
    s = pinned_row_sum(contrib)
    tol = EXCEEDANCE_REL * (yhi - ylo)
    out_of_image = (s < ylo - tol) | (s > yhi + tol)
    clamped = ((s < ylo) | (s > yhi)) & ~out_of_image
    s = np.clip(s, ylo, yhi)
    vals = gen_invert(params, s)
    vals = np.where(out_of_image, np.nan, vals)
    codes = np.zeros(s.size, dtype=np.int64)
    codes[clamped] = STATUS_CLAMPED
    codes[out_of_image] = STATUS_OUT_OF_IMAGE
    return vals, codes


def double_mean_core(pu, pv, ulo, uhi, vlo, vhi, lam, mu, xi):
    """Iterated mean: inner v-means of the rows of `xi`, outer u-mean across rows."""
    m, n = xi.shape
    inner, codes = quasi_mean_batch(pv, vlo, vhi, np.broadcast_to(mu, (m, n)), xi)
    code = int(codes.max()) if codes.size else STATUS_OK
    if code == STATUS_OUT_OF_IMAGE:
        return np.nan, code
    val, outer_code = quasi_mean(pu, ulo, uhi, lam, inner)
    return val, max(code, outer_code)


def switch_residual_core(pf, pg, flo, fhi, glo, ghi, lam, mu, xi):
    """Both sides of the switch equation for one discrete instance.

    Left side aggregates rows with g under mu then across rows with f
    under lam; the right side does the same on the materialized transpose
    with the roles exchanged.  Returns ``(lhs, rhs, code_lhs, code_rhs)``.
    """
    lhs, cl = double_mean_core(pf, pg, flo, fhi, glo, ghi, lam, mu, xi)
    xit = np.ascontiguousarray(xi.T)
    rhs, cr = double_mean_core(pg, pf, glo, ghi, flo, fhi, mu, lam, xit)
    return lhs, rhs, cl, cr


def kernel_eval(kp, x, y):
    """Evaluate the encoded product-space kernel; broadcasts over arrays."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if int(kp[0]) == KERNEL_BILINEAR:
        out = kp[1] + kp[2] * x + kp[3] * y + kp[4] * x * y
    else:
        out = np.where(
            x < kp[5],
            np.where(y < kp[6], kp[1], kp[3]),
            np.where(y < kp[6], kp[2], kp[4]),
        )
    return out


def continuous_side_core(
    pf,
    pg,
    flo,
    fhi,
    glo,
    ghi,
    kp,
    xa_loc,
    xa_mass,
    x_unif,
    x_nodes,
    x_wts,
    ya_loc,
    ya_mass,
    y_unif,
    y_nodes,
    y_wts,
):
    """One side of the continuous switch equation by quadrature.

    Outer integral over x (atoms first, then scaled quadrature nodes) of
    f applied to the inner g-mean of the kernel section at x; returns
    ``(value, status)``.
    """
    xs = np.concatenate([xa_loc, x_nodes])
    cx = np.concatenate([xa_mass, x_unif * x_wts])
    ys = np.concatenate([ya_loc, y_nodes])
    cy = np.concatenate([ya_mass, y_unif * y_wts])
    h = kernel_eval(kp, xs[:, None], ys[None, :])
    contrib = gen_eval(pg, h) * cy[None, :]
    s_in = pinned_row_sum(contrib)
    tol = EXCEEDANCE_REL * (ghi - glo)
    if np.any((s_in < glo - tol) | (s_in > ghi + tol)):
        return np.nan, STATUS_OUT_OF_IMAGE
    code = STATUS_CLAMPED if np.any((s_in < glo) | (s_in > ghi)) else STATUS_OK
    inner = gen_invert(pg, np.clip(s_in, glo, ghi))
    s_out = pinned_sum(cx * gen_eval(pf, inner))
    s_out, outer_code = _clamp(s_out, flo, fhi)
    if outer_code == STATUS_OUT_OF_IMAGE:
        return np.nan, outer_code
    return float(gen_invert(pf, s_out)), max(code, outer_code)
