"""Numba-accelerated implementation of the hot numeric kernels.

Default backend when numba is importable.  Mirrors
:mod:`meanswitch._kernels_numpy` function for function with the same
pinned summation order; the numpy module is the reference for the
intended semantics.
"""

import numpy as np
from numba import njit

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


@njit(cache=True)
def pinned_sum(a):
    n = a.shape[0]
    if n == 0:
        return 0.0
    if n <= PAIRWISE_BLOCK:
        s = 0.0
        for i in range(n):
            s += a[i]
        return s
    nb = (n + PAIRWISE_BLOCK - 1) // PAIRWISE_BLOCK
    p = np.empty(nb)
    for b in range(nb):
        s = 0.0
        hi = min(n, (b + 1) * PAIRWISE_BLOCK)
        for i in range(b * PAIRWISE_BLOCK, hi):
            s += a[i]
        p[b] = s
    m = nb
    while m > 1:
        half = m // 2
        for k in range(half):
            p[k] = p[2 * k] + p[2 * k + 1]
        if m % 2 == 1:
            p[half] = p[m - 1]
            m = half + 1
        else:
            m = half
    return p[0]


@njit(cache=True)
def gen_eval(params, x):
    kind = int(params[0])
    if kind == KIND_ID:
        base = x * 1.0
    elif kind == KIND_AFFINE:
        base = params[1] * x + params[2]
    elif kind == KIND_EXP:
        base = np.exp(params[1] * x)
    elif kind == KIND_LOG:
        base = np.log(x)
    else:  # KIND_POW
        base = x ** params[1]
    return params[3] * base + params[4]


@njit(cache=True)
def gen_invert(params, y):
    kind = int(params[0])
    z = (y - params[4]) / params[3]
    if kind == KIND_ID:
        return z * 1.0
    if kind == KIND_AFFINE:
        return (z - params[2]) / params[1]
    if kind == KIND_EXP:
        return np.log(z) / params[1]
    if kind == KIND_LOG:
        return np.exp(z)
    return z ** (1.0 / params[1])  # KIND_POW


@njit(cache=True)
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


@njit(cache=True)
def quasi_mean(params, ylo, yhi, w, x):
    n = x.shape[0]
    contrib = np.empty(n)
    for i in range(n):
        contrib[i] = w[i] * gen_eval(params, x[i])
    s = pinned_sum(contrib)
    s, code = _clamp(s, ylo, yhi)
    if code == STATUS_OUT_OF_IMAGE:
        return np.nan, code
    return gen_invert(params, s), code


@njit(cache=True)
def quasi_mean_batch(params, ylo, yhi, w, x):
    nrows = x.shape[0]
    vals = np.empty(nrows)
    codes = np.zeros(nrows, dtype=np.int64)
    for b in range(nrows):
        v, c = quasi_mean(params, ylo, yhi, w[b], x[b])
        vals[b] = v
        codes[b] = c
    return vals, codes


@njit(cache=True)
def double_mean_core(pu, pv, ulo, uhi, vlo, vhi, lam, mu, xi):
    m = xi.shape[0]
    inner = np.empty(m)
    code = 0
    for i in range(m):
        v, ci = quasi_mean(pv, vlo, vhi, mu, xi[i])
        if ci == STATUS_OUT_OF_IMAGE:
            return np.nan, STATUS_OUT_OF_IMAGE
        if ci > code:
            code = ci
        inner[i] = v
    val, co = quasi_mean(pu, ulo, uhi, lam, inner)
    if co == STATUS_OUT_OF_IMAGE:
        return np.nan, co
    if co > code:
        code = co
    return val, code


@njit(cache=True)
def switch_residual_core(pf, pg, flo, fhi, glo, ghi, lam, mu, xi):
    lhs, cl = double_mean_core(pf, pg, flo, fhi, glo, ghi, lam, mu, xi)
    xit = np.ascontiguousarray(xi.T)
    rhs, cr = double_mean_core(pg, pf, glo, ghi, flo, fhi, mu, lam, xit)
    return lhs, rhs, cl, cr


@njit(cache=True)
def kernel_eval(kp, x, y):
    if int(kp[0]) == KERNEL_BILINEAR:
        return kp[1] + kp[2] * x + kp[3] * y + kp[4] * x * y
    if x < kp[5]:
        if y < kp[6]:
            return kp[1]
        return kp[3]
    if y < kp[6]:
        return kp[2]
    return kp[4]


@njit(cache=True)
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
    nxa = xa_loc.shape[0]
    nx = nxa + x_nodes.shape[0]
    xs = np.empty(nx)
    cx = np.empty(nx)
    for i in range(nxa):
        xs[i] = xa_loc[i]
        cx[i] = xa_mass[i]
    for i in range(x_nodes.shape[0]):
        xs[nxa + i] = x_nodes[i]
        cx[nxa + i] = x_unif * x_wts[i]

    nya = ya_loc.shape[0]
    ny = nya + y_nodes.shape[0]
    ys = np.empty(ny)
    cy = np.empty(ny)
    for j in range(nya):
        ys[j] = ya_loc[j]
        cy[j] = ya_mass[j]
    for j in range(y_nodes.shape[0]):
        ys[nya + j] = y_nodes[j]
        cy[nya + j] = y_unif * y_wts[j]

    contrib = np.empty(ny)
    outer = np.empty(nx)
    code = 0
    for i in range(nx):
        for j in range(ny):
            contrib[j] = cy[j] * gen_eval(pg, kernel_eval(kp, xs[i], ys[j]))
        s, ci = _clamp(pinned_sum(contrib), glo, ghi)
        if ci == STATUS_OUT_OF_IMAGE:
            return np.nan, STATUS_OUT_OF_IMAGE
        if ci > code:
            code = ci
        outer[i] = cx[i] * gen_eval(pf, gen_invert(pg, s))
    s_out, co = _clamp(pinned_sum(outer), flo, fhi)
    if co == STATUS_OUT_OF_IMAGE:
        return np.nan, co
    if co > code:
        code = co
    return gen_invert(pf, s_out), code
