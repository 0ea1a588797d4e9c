"""Affinity detection and the normalized-composite diagnostics.

Whether two generators commute for all instances comes down to whether
one is an affine image of the other.  `detect_affine` fits f = a*g + b
from the interval endpoints and reports the sup deviation; the rest of
the module builds the normalized composite phi = g0 o f0^-1 on [0, 1]
and the two-variable surface Phi(p, q) = phi(alpha*phi^-1(p) +
(1-alpha)*phi^-1(q)), whose affine shape (A + B = 1, C = 0, 0 < A < 1)
characterizes commuting pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _backend, generators
from .errors import ValidationError
from .generators import GeneratorSpec, Interval

PHI_GRID_DEFAULT = 513
SURFACE_GRID_DEFAULT = 129
_INVERSE_TOL = 1e-13
_INVERSE_MAX_ITER = 200


@dataclass(frozen=True)
class AffineFit:
    """Endpoint-fitted coefficients of f ~ a*g + b and the sup deviation."""

    a: float
    b: float
    sup_error: float


def detect_affine(
    f: GeneratorSpec,
    g: GeneratorSpec,
    interval: Interval,
    grid_size: int = 101,
) -> AffineFit:
    """Fit (a, b) from the interval endpoints, report sup error on a grid."""
    if grid_size < 3:
        raise ValidationError("grid_size must be at least 3")
    grid = np.linspace(interval.lo, interval.hi, grid_size)
    fv = generators.evaluate_array(f, interval, grid)
    gv = generators.evaluate_array(g, interval, grid)
    denom = gv[-1] - gv[0]
    if denom == 0:
        raise ValidationError("g takes equal values at the interval endpoints")
    a = (fv[-1] - fv[0]) / denom
    b = fv[0] - a * gv[0]
    sup_error = float(np.max(np.abs(fv - (a * gv + b))))
    return AffineFit(float(a), float(b), sup_error)


class PhiFunction:
    """Normalized composite phi = g0 o f0^-1, a bijection of [0, 1].

    Represented by tabulation at grid points with monotone
    piecewise-cubic interpolation off-grid; the inverse runs bisection
    on the interpolant.  Only continuity and bijectivity are available
    in general, so no closed form is assumed.
    """

    def __init__(self, grid, values, f, g, interval, xi0, x0):
        grid = np.asarray(grid, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64).copy()
        if abs(values[0]) > 1e-10 or abs(values[-1] - 1.0) > 1e-10:
            raise ValidationError(
                f"normalized endpoints off: phi(0)={values[0]}, phi(1)={values[-1]}"
            )
        if np.any(np.diff(values) <= 0):
            raise ValidationError("non-monotone tabulation: phi is not a bijection")
        values[0] = 0.0
        values[-1] = 1.0
        self.grid = grid
        self.values = values
        self.f = f
        self.g = g
        self.interval = interval
        self.xi0 = float(xi0)
        self.x0 = float(x0)
        self._interp = PchipInterpolator(grid, values)
        fxi = generators.evaluate(f, interval, self.xi0)
        fx0 = generators.evaluate(f, interval, self.x0)
        gxi = generators.evaluate(g, interval, self.xi0)
        gx0 = generators.evaluate(g, interval, self.x0)
        self._f_anchor = (fxi, fx0 - fxi)
        self._g_anchor = (gxi, gx0 - gxi)

    def f0(self, x):
        """Normalized outer generator: 0 at xi0, 1 at x0."""
        lo, span = self._f_anchor
        return (generators.evaluate_array(self.f, self.interval, np.asarray(x, dtype=np.float64)) - lo) / span

    def g0(self, x):
        """Normalized inner generator: 0 at xi0, 1 at x0."""
        lo, span = self._g_anchor
        return (generators.evaluate_array(self.g, self.interval, np.asarray(x, dtype=np.float64)) - lo) / span

    def __call__(self, u):
        u = np.asarray(u, dtype=np.float64)
        if np.any(u < -1e-12) or np.any(u > 1.0 + 1e-12):
            raise ValidationError("phi is defined on [0, 1]")
        out = self._interp(np.clip(u, 0.0, 1.0))
        return float(out) if out.ndim == 0 else out

    def inverse(self, p):
        """phi^-1 by bisection on the monotone interpolant (vectorized)."""
        p = np.asarray(p, dtype=np.float64)
        scalar = p.ndim == 0
        p = np.atleast_1d(np.clip(p, 0.0, 1.0))
        lo = np.zeros_like(p)
        hi = np.ones_like(p)
        for _ in range(_INVERSE_MAX_ITER):
            mid = 0.5 * (lo + hi)
            below = self._interp(mid) < p
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if float(np.max(hi - lo)) <= _INVERSE_TOL:
                break
        out = 0.5 * (lo + hi)
        return float(out[0]) if scalar else out


def normalize_pair(
    f: GeneratorSpec,
    g: GeneratorSpec,
    interval: Interval,
    xi0: float | None = None,
    x0: float | None = None,
    grid: int = PHI_GRID_DEFAULT,
) -> PhiFunction:
    """Normalize f and g to vanish at xi0 and equal 1 at x0; return phi.

    Defaults anchor at the interval endpoints, which maximizes the
    separation and hence the conditioning of the normalization.  The
    tabulation inverts f through its closed form, so grid values are
    accurate to rounding.
    """
    xi0 = interval.lo if xi0 is None else float(xi0)
    x0 = interval.hi if x0 is None else float(x0)
    if xi0 == x0:
        raise ValidationError("normalization anchors must be distinct")
    if not (interval.contains(xi0) and interval.contains(x0)):
        raise ValidationError("normalization anchors must lie in the interval")
    sub = Interval(min(xi0, x0), max(xi0, x0))
    fxi = generators.evaluate(f, interval, xi0)
    fx0 = generators.evaluate(f, interval, x0)
    gxi = generators.evaluate(g, interval, xi0)
    gx0 = generators.evaluate(g, interval, x0)
    u = np.linspace(0.0, 1.0, grid)
    targets = fxi + u * (fx0 - fxi)
    params_f = generators.to_params(f)
    x_grid = np.clip(
        np.asarray(_backend.kernels.gen_invert(params_f, targets)), sub.lo, sub.hi
    )
    g_vals = generators.evaluate_array(g, interval, x_grid)
    phi_vals = (g_vals - gxi) / (gx0 - gxi)
    return PhiFunction(u, phi_vals, f, g, interval, xi0, x0)


@dataclass(frozen=True, eq=False)
class PhiSurface:
    """Tabulated Phi(p, q) with its least-squares affine fit."""

    phi: PhiFunction
    alpha: float
    A: float
    B: float
    C: float
    fit_residual: float
    diagonal_residual: float
    grid: int

    def __call__(self, p, q):
        ip = self.phi.inverse(p)
        iq = self.phi.inverse(q)
        return self.phi(self.alpha * ip + (1.0 - self.alpha) * iq)


def build_phi_surface(
    phi: PhiFunction,
    alpha: float,
    grid: int = SURFACE_GRID_DEFAULT,
) -> PhiSurface:
    """Tabulate Phi on a grid x grid lattice and fit A*p + B*q + C.

    For commuting pairs the fit is exact up to tabulation noise with
    B = 1 - A, C = 0 and 0 < A < 1; the residual is the sup deviation
    over the lattice.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie strictly in (0, 1)")
    if grid < 3:
        raise ValidationError("surface grid must be at least 3")
    p = np.linspace(0.0, 1.0, grid)
    ip = phi.inverse(p)
    surface = phi(alpha * ip[:, None] + (1.0 - alpha) * ip[None, :])
    pp, qq = np.meshgrid(p, p, indexing="ij")
    design = np.column_stack([pp.ravel(), qq.ravel(), np.ones(grid * grid)])
    coeffs, *_ = np.linalg.lstsq(design, surface.ravel(), rcond=None)
    a_fit, b_fit, c_fit = (float(v) for v in coeffs)
    fit_residual = float(np.max(np.abs(surface.ravel() - design @ coeffs)))
    diagonal_residual = float(np.max(np.abs(np.diag(surface) - p)))
    return PhiSurface(phi, float(alpha), a_fit, b_fit, c_fit, fit_residual, diagonal_residual, grid)


def check_kappa_affine(surface, kappa: float, samples: int = 2000, seed: int = 0) -> float:
    """Max violation of kappa-affinity over sampled pairs in [0, 1]^2.

    `surface` is any callable (p, q) -> value on [0, 1]^2.  The sample
    always includes every ordered pair from the 9-point corner/midpoint
    lattice, plus `samples` seeded random pairs.
    """
    if not 0.0 < kappa < 1.0:
        raise ValidationError("kappa must lie strictly in (0, 1)")
    lattice = np.array([(a, b) for a in (0.0, 0.5, 1.0) for b in (0.0, 0.5, 1.0)])
    v1 = np.repeat(lattice, len(lattice), axis=0)
    v2 = np.tile(lattice, (len(lattice), 1))
    if samples > 0:
        rng = np.random.default_rng([seed, samples])
        extra = rng.uniform(0.0, 1.0, size=(samples, 4))
        v1 = np.concatenate([v1, extra[:, :2]])
        v2 = np.concatenate([v2, extra[:, 2:]])
    mid = kappa * v1 + (1.0 - kappa) * v2
    lhs = np.asarray(surface(mid[:, 0], mid[:, 1]))
    rhs = kappa * np.asarray(surface(v1[:, 0], v1[:, 1])) + (1.0 - kappa) * np.asarray(
        surface(v2[:, 0], v2[:, 1])
    )
    return float(np.max(np.abs(lhs - rhs)))


def daroczy_pales_check(kappa: float, x: float, y: float) -> float:
    """Residual of the midpoint identity under nested kappa-combinations.

    Algebraically zero for every (kappa, x, y); any residual beyond
    rounding indicates a broken arithmetic path.
    """
    mid = (x + y) / 2.0
    nested = kappa * (kappa * mid + (1.0 - kappa) * x) + (1.0 - kappa) * (
        kappa * y + (1.0 - kappa) * mid
    )
    return abs(mid - nested)
