"""Derivative-free maximization of the switch residual.

Runs seeded Nelder-Mead restarts on -|residual| over value matrices (and
optionally the two weight vectors), projecting candidates onto the box
I^(m x n).  Non-affine generator pairs should surface a residual well
above numerical noise; affine pairs should not, no matter how hard the
search tries.  Constrained modes restrict the matrices to symmetric or
rank-one families.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend, generators, measures, switch
from .errors import ValidationError
from .generators import GeneratorSpec, Interval
from .means import ValueMatrix

CONSTRAINTS = ("none", "symmetric", "rank_one")

# standard simplex coefficients: reflection, expansion, contraction, shrink
_REFLECT = 1.0
_EXPAND = 2.0
_CONTRACT = 0.5
_SHRINK = 0.5
_DIAMETER_TOL = 1e-10
_INIT_STEP_FRAC = 0.05


@dataclass(frozen=True)
class SearchConfig:
    """Dimensions, budget and constraint mode for one search."""

    m: int = 2
    n: int = 2
    restarts: int = 32
    seed: int = 0
    max_evals: int = 400
    constraint: str = "none"
    optimize_weights: bool = False
    weight_floor: float = 0.05

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValidationError("matrix dimensions must be at least 1")
        if self.restarts < 1:
            raise ValidationError("restarts must be at least 1")
        if self.max_evals < 4:
            raise ValidationError("max_evals too small for a simplex step")
        if self.constraint not in CONSTRAINTS:
            raise ValidationError(f"constraint must be one of {CONSTRAINTS}")
        if self.constraint == "symmetric" and self.m != self.n:
            raise ValidationError("symmetric constraint requires a square matrix")
        if not 0.0 < self.weight_floor < 0.5:
            raise ValidationError("weight_floor must lie strictly in (0, 0.5)")

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "restarts": self.restarts,
            "seed": self.seed,
            "max_evals": self.max_evals,
            "constraint": self.constraint,
            "optimize_weights": self.optimize_weights,
            "weight_floor": self.weight_floor,
        }


@dataclass(frozen=True)
class RestartTrace:
    """Summary of one restart: budget spent and feasibility envelope."""

    index: int
    evals: int
    best_abs_residual: float
    entry_lo: float
    entry_hi: float
    min_weight: float

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "evals": self.evals,
            "best_abs_residual": self.best_abs_residual,
            "entry_lo": self.entry_lo,
            "entry_hi": self.entry_hi,
            "min_weight": self.min_weight,
        }


@dataclass(eq=False)
class SearchResult:
    best_instance: switch.SwitchInstance
    best_abs_residual: float
    evals_used: int
    trace: list = field(default_factory=list)
    config: SearchConfig = None

    def to_json(self) -> dict:
        return {
            "best_instance": self.best_instance.to_json(),
            "best_abs_residual": self.best_abs_residual,
            "evals_used": self.evals_used,
            "trace": [t.to_json() for t in self.trace],
            "config": self.config.to_json() if self.config is not None else None,
        }


def symmetrize(matrix: ValueMatrix, interval: Interval) -> ValueMatrix:
    """Project onto symmetric matrices, entrywise average then clamp."""
    if matrix.rows != matrix.cols:
        raise ValidationError("symmetric constraint requires a square matrix")
    sym = 0.5 * (matrix.entries + matrix.entries.T)
    return ValueMatrix.make(np.clip(sym, interval.lo, interval.hi))


def rank_one_matrix(u, v, interval: Interval) -> ValueMatrix:
    """Outer product of two vectors whose products stay in the interval."""
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    prod = np.outer(u, v)
    slack = 1e-12 * interval.width
    if np.any(prod < interval.lo - slack) or np.any(prod > interval.hi + slack):
        raise ValidationError("outer-product entries leave the working interval")
    return ValueMatrix.make(np.clip(prod, interval.lo, interval.hi))


def apply_constraint(matrix_or_vectors, constraint: str, interval: Interval) -> ValueMatrix:
    """Apply one of the constraint modes: none, symmetric, rank_one."""
    if constraint == "none":
        return matrix_or_vectors
    if constraint == "symmetric":
        return symmetrize(matrix_or_vectors, interval)
    if constraint == "rank_one":
        u, v = matrix_or_vectors
        return rank_one_matrix(u, v, interval)
    raise ValidationError(f"constraint must be one of {CONSTRAINTS}")


def _weights_from_coords(z: np.ndarray, floor: float) -> np.ndarray:
    """Map unconstrained coordinates into the floored simplex interior."""
    q = z * z
    total = q.sum()
    k = z.size
    if total == 0.0:
        q = np.full(k, 1.0 / k)
    else:
        q = q / total
    return floor + (1.0 - k * floor) * q


def _nelder_mead(fn, x0, steps, max_evals):
    """Minimize fn from x0 with the standard simplex moves.

    Stops when the simplex diameter (per-coordinate spread) drops below
    1e-10 or the evaluation budget is spent.  Returns (best_x, best_f,
    evals).
    """
    dim = x0.size
    verts = np.empty((dim + 1, dim))
    verts[0] = x0
    for i in range(dim):
        verts[i + 1] = x0
        verts[i + 1, i] += steps[i]
    fvals = np.array([fn(v) for v in verts])
    evals = dim + 1

    while evals < max_evals:
        order = np.argsort(fvals, kind="stable")
        verts = verts[order]
        fvals = fvals[order]
        if float(np.max(verts.max(axis=0) - verts.min(axis=0))) < _DIAMETER_TOL:
            break

        centroid = verts[:-1].mean(axis=0)
        worst = verts[-1]
        reflected = centroid + _REFLECT * (centroid - worst)
        f_r = fn(reflected)
        evals += 1

        if f_r < fvals[0]:
            expanded = centroid + _EXPAND * (centroid - worst)
            f_e = fn(expanded)
            evals += 1
            if f_e < f_r:
                verts[-1], fvals[-1] = expanded, f_e
            else:
                verts[-1], fvals[-1] = reflected, f_r
        elif f_r < fvals[-2]:
            verts[-1], fvals[-1] = reflected, f_r
        else:
            if f_r < fvals[-1]:
                contracted = centroid + _CONTRACT * (reflected - centroid)
                f_c = fn(contracted)
                evals += 1
                if f_c <= f_r:
                    verts[-1], fvals[-1] = contracted, f_c
                else:
                    verts, fvals, evals = _shrink(fn, verts, fvals, evals)
            else:
                contracted = centroid + _CONTRACT * (worst - centroid)
                f_c = fn(contracted)
                evals += 1
                if f_c < fvals[-1]:
                    verts[-1], fvals[-1] = contracted, f_c
                else:
                    verts, fvals, evals = _shrink(fn, verts, fvals, evals)

    best = int(np.argmin(fvals))
    return verts[best].copy(), float(fvals[best]), evals


def _shrink(fn, verts, fvals, evals):
    for i in range(1, verts.shape[0]):
        verts[i] = verts[0] + _SHRINK * (verts[i] - verts[0])
        fvals[i] = fn(verts[i])
        evals += 1
    return verts, fvals, evals


class _Objective:
    """Decode a coordinate vector into an instance and score -|residual|."""

    def __init__(self, f, g, interval, cfg):
        self.cfg = cfg
        self.interval = interval
        self.pf = generators.to_params(f)
        self.pg = generators.to_params(g)
        img_f = generators.image(f, interval)
        img_g = generators.image(g, interval)
        self.hull_f = (img_f.lo, img_f.hi)
        self.hull_g = (img_g.lo, img_g.hi)
        if cfg.constraint == "rank_one":
            if interval.lo < 0:
                raise ValidationError("rank_one constraint requires a non-negative interval")
            self.vec_box = (np.sqrt(interval.lo), np.sqrt(interval.hi))
            self.matrix_dim = cfg.m + cfg.n
        else:
            self.vec_box = None
            self.matrix_dim = cfg.m * cfg.n
        self.weight_dim = (cfg.m + cfg.n) if cfg.optimize_weights else 0
        self.dim = self.matrix_dim + self.weight_dim
        self.entry_lo = np.inf
        self.entry_hi = -np.inf
        self.min_weight = np.inf

    def decode(self, theta):
        cfg = self.cfg
        lo, hi = self.interval.lo, self.interval.hi
        if cfg.constraint == "rank_one":
            vecs = np.clip(theta[: self.matrix_dim], *self.vec_box)
            xi = np.clip(np.outer(vecs[: cfg.m], vecs[cfg.m :]), lo, hi)
        else:
            xi = np.clip(theta[: self.matrix_dim], lo, hi).reshape(cfg.m, cfg.n)
            if cfg.constraint == "symmetric":
                xi = np.clip(0.5 * (xi + xi.T), lo, hi)
        if cfg.optimize_weights:
            zl = theta[self.matrix_dim : self.matrix_dim + cfg.m]
            zm = theta[self.matrix_dim + cfg.m :]
            lam = _weights_from_coords(zl, cfg.weight_floor)
            mu = _weights_from_coords(zm, cfg.weight_floor)
        else:
            lam = np.full(cfg.m, 1.0 / cfg.m)
            mu = np.full(cfg.n, 1.0 / cfg.n)
        return lam, mu, np.ascontiguousarray(xi)

    def __call__(self, theta):
        lam, mu, xi = self.decode(theta)
        self.entry_lo = min(self.entry_lo, float(xi.min()))
        self.entry_hi = max(self.entry_hi, float(xi.max()))
        self.min_weight = min(self.min_weight, float(lam.min()), float(mu.min()))
        lhs, rhs, cl, cr = _backend.kernels.switch_residual_core(
            self.pf, self.pg, *self.hull_f, *self.hull_g, lam, mu, xi
        )
        if np.isnan(lhs) or np.isnan(rhs):
            return np.inf
        return -abs(lhs - rhs)

    def initial_point(self, rng):
        cfg = self.cfg
        if cfg.constraint == "rank_one":
            mat = rng.uniform(*self.vec_box, size=self.matrix_dim)
        else:
            mat = rng.uniform(self.interval.lo, self.interval.hi, size=self.matrix_dim)
        if not cfg.optimize_weights:
            return mat
        parts = [mat]
        for k in (cfg.m, cfg.n):
            simplex = rng.exponential(1.0, size=k)
            simplex /= simplex.sum()
            parts.append(np.sqrt(simplex))
        return np.concatenate(parts)

    def steps(self):
        cfg = self.cfg
        if cfg.constraint == "rank_one":
            width = self.vec_box[1] - self.vec_box[0]
        else:
            width = self.interval.width
        out = np.full(self.dim, _INIT_STEP_FRAC * width)
        if cfg.optimize_weights:
            out[self.matrix_dim :] = _INIT_STEP_FRAC
        return out


def maximize_residual(
    f: GeneratorSpec,
    g: GeneratorSpec,
    interval: Interval,
    cfg: SearchConfig,
) -> SearchResult:
    """Search for the largest |residual| the pair admits.

    Restarts are independent: restart r draws its start from a generator
    seeded with (seed, r), so results are reproducible and restarts can
    be distributed; the merge picks the largest residual, ties broken by
    the lowest restart index.  The returned residual is re-evaluated
    fresh on the best instance.
    """
    generators.validate_spec(f, interval)
    generators.validate_spec(g, interval)

    best_theta = None
    best_value = np.inf
    total_evals = 0
    trace = []
    for r in range(cfg.restarts):
        objective = _Objective(f, g, interval, cfg)
        rng = np.random.default_rng([cfg.seed, r])
        x0 = objective.initial_point(rng)
        steps = objective.steps()
        # flip a step that would start the vertex outside the box
        box_hi = objective.vec_box[1] if cfg.constraint == "rank_one" else interval.hi
        over = (x0[: objective.matrix_dim] + steps[: objective.matrix_dim]) > box_hi
        steps[: objective.matrix_dim][over] *= -1.0
        theta, value, evals = _nelder_mead(objective, x0, steps, cfg.max_evals)
        total_evals += evals
        trace.append(
            RestartTrace(
                index=r,
                evals=evals,
                best_abs_residual=-value if value < np.inf else 0.0,
                entry_lo=objective.entry_lo,
                entry_hi=objective.entry_hi,
                min_weight=objective.min_weight,
            )
        )
        if value < best_value:
            best_value = value
            best_theta = theta

    final = _Objective(f, g, interval, cfg)
    lam, mu, xi = final.decode(best_theta)
    instance = switch.SwitchInstance.make(
        f,
        g,
        interval,
        measures.validate(lam),
        measures.validate(mu),
        ValueMatrix.make(xi),
    )
    report = switch.discrete_residual(instance)
    return SearchResult(
        best_instance=instance,
        best_abs_residual=abs(report.residual),
        evals_used=total_evals,
        trace=trace,
        config=cfg,
    )
