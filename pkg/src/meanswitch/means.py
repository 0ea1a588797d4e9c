"""Quasi-arithmetic means: discrete, continuous, and iterated forms.

The discrete mean of values v under weights w with generator u is
``u^-1(sum_i w_i u(v_i))``; the iterated (double) mean applies an inner
generator across the columns of a value matrix row by row and an outer
generator across the resulting row means.  Results always land back in
the hull of the input values; sums that leave the generator image hull
by rounding noise are clamped and flagged.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import _backend, generators, measures
from ._codes import KERNEL_BILINEAR, KERNEL_STEP, STATUS_CLAMPED, STATUS_OUT_OF_IMAGE
from .errors import DomainError, OutOfImageError, ParseError, ValidationError
from .generators import GeneratorSpec, Interval


@dataclass(frozen=True, eq=False)
class ValueMatrix:
    """m-by-n matrix of values inside the working interval."""

    entries: np.ndarray

    @classmethod
    def make(cls, entries) -> ValueMatrix:
        arr = np.array(entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"value matrix must be 2-D and non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("value matrix entries must be finite")
        arr.setflags(write=False)
        return cls(arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def transpose(self) -> ValueMatrix:
        return ValueMatrix.make(self.entries.T)

    def check_in_interval(self, interval: Interval) -> None:
        slack = 1e-12 * interval.width
        if np.any(self.entries < interval.lo - slack) or np.any(self.entries > interval.hi + slack):
            raise DomainError("matrix entries must lie inside the working interval")

    @classmethod
    def from_csv(cls, text: str) -> ValueMatrix:
        rows = []
        for record in csv.reader(io.StringIO(text.strip())):
            if not record:
                continue
            try:
                rows.append([float(tok) for tok in record])
            except ValueError as exc:
                raise ParseError(f"bad CSV row {record!r}") from exc
        if not rows:
            raise ParseError("empty CSV matrix")
        if len({len(r) for r in rows}) != 1:
            raise ParseError("CSV rows have inconsistent lengths")
        return cls.make(rows)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        for row in self.entries:
            writer.writerow([format(v, ".17g") for v in row])
        return out.getvalue()

    @classmethod
    def from_json(cls, obj: dict) -> ValueMatrix:
        try:
            m, n = int(obj["rows"]), int(obj["cols"])
            data = [float(v) for v in obj["data"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad matrix JSON {obj!r}") from exc
        if m * n != len(data):
            raise ParseError(f"matrix JSON declares {m}x{n} but carries {len(data)} entries")
        return cls.make(np.asarray(data).reshape(m, n))

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "data": [float(v) for v in self.entries.ravel()],
        }


@dataclass(frozen=True)
class BilinearKernel:
    """h(x, y) = c00 + c10*x + c01*y + c11*x*y on [0, 1]^2."""

    c00: float
    c10: float
    c01: float
    c11: float

    def evaluate(self, x, y):
        return self.c00 + self.c10 * np.asarray(x) + self.c01 * np.asarray(y) + self.c11 * np.asarray(x) * np.asarray(y)

    def range(self) -> tuple[float, float]:
        # bilinear in each variable: extrema sit at the four corners
        corners = [self.evaluate(x, y) for x in (0.0, 1.0) for y in (0.0, 1.0)]
        return float(min(corners)), float(max(corners))

    def transpose(self) -> BilinearKernel:
        return BilinearKernel(self.c00, self.c01, self.c10, self.c11)

    def to_params(self) -> np.ndarray:
        return np.array([float(KERNEL_BILINEAR), self.c00, self.c10, self.c01, self.c11, 0.0, 0.0])

    @property
    def breakpoints_x(self) -> tuple:
        return ()

    @property
    def breakpoints_y(self) -> tuple:
        return ()


@dataclass(frozen=True)
class StepKernel:
    """Four-rectangle step kernel with cuts (s, t).

    Takes value a on [0,s) x [0,t), b on [s,1] x [0,t), c on [0,s) x [t,1]
    and d on [s,1] x [t,1].
    """

    values: tuple
    cuts: tuple

    def __post_init__(self):
        if len(self.values) != 4 or len(self.cuts) != 2:
            raise ValidationError("step kernel takes 4 values and 2 cuts")
        s, t = self.cuts
        if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
            raise ValidationError("step kernel cuts must lie in [0, 1]")
        if not all(np.isfinite(v) for v in self.values):
            raise ValidationError("step kernel values must be finite")

    def evaluate(self, x, y):
        a, b, c, d = self.values
        s, t = self.cuts
        x = np.asarray(x)
        y = np.asarray(y)
        return np.where(x < s, np.where(y < t, a, c), np.where(y < t, b, d))

    def range(self) -> tuple[float, float]:
        return float(min(self.values)), float(max(self.values))

    def transpose(self) -> StepKernel:
        a, b, c, d = self.values
        s, t = self.cuts
        return StepKernel((a, c, b, d), (t, s))

    def to_params(self) -> np.ndarray:
        a, b, c, d = self.values
        s, t = self.cuts
        return np.array([float(KERNEL_STEP), a, b, c, d, s, t])

    @property
    def breakpoints_x(self) -> tuple:
        s = self.cuts[0]
        return (s,) if 0.0 < s < 1.0 else ()

    @property
    def breakpoints_y(self) -> tuple:
        t = self.cuts[1]
        return (t,) if 0.0 < t < 1.0 else ()


def check_kernel_range(kernel, interval: Interval, margin: float = 0.0) -> None:
    """Require the kernel range to sit inside the interval with the margin.

    Exact for both kinds: bilinear extrema are attained at corners and
    step kernels are enumerated directly.
    """
    if margin < 0:
        raise ValidationError("margin must be non-negative")
    lo, hi = kernel.range()
    if lo < interval.lo + margin or hi > interval.hi - margin:
        raise ValidationError(
            f"kernel range [{lo}, {hi}] not contained in "
            f"[{interval.lo + margin}, {interval.hi - margin}]"
        )


def _prepare(w: GeneratorSpec, interval: Interval):
    generators.validate_spec(w, interval)
    img = generators.image(w, interval)
    return generators.to_params(w), img


def discrete_mean_flagged(
    w: GeneratorSpec,
    interval: Interval,
    pv: measures.ProbabilityVector,
    values,
) -> tuple[float, bool]:
    """Discrete quasi-arithmetic mean plus a flag for hull clamping."""
    vals = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if vals.size != len(pv):
        raise ValidationError(f"length mismatch: {len(pv)} weights, {vals.size} values")
    slack = 1e-12 * interval.width
    if np.any(vals < interval.lo - slack) or np.any(vals > interval.hi + slack):
        raise DomainError("values must lie inside the working interval")
    params, img = _prepare(w, interval)
    val, code = _backend.kernels.quasi_mean(params, img.lo, img.hi, pv.weights, vals)
    if code == STATUS_OUT_OF_IMAGE:
        raise OutOfImageError("generator sum left the image hull beyond tolerance")
    return float(val), code == STATUS_CLAMPED


def discrete_mean(w, interval, pv, values) -> float:
    return discrete_mean_flagged(w, interval, pv, values)[0]


def continuous_mean(
    w: GeneratorSpec,
    interval: Interval,
    sm: measures.SimpleMeasure,
    fn,
    breakpoints=(),
) -> float:
    """Continuous quasi-arithmetic mean of fn: [0,1] -> I under the measure."""
    generators.validate_spec(w, interval)
    params = generators.to_params(w)
    slack = 1e-12 * interval.width

    def integrand(t):
        v = np.asarray(fn(t), dtype=np.float64)
        if np.any(v < interval.lo - slack) or np.any(v > interval.hi + slack):
            raise DomainError("integrand must map into the working interval")
        return _backend.kernels.gen_eval(params, v)

    s = measures.integrate(sm, integrand, breakpoints)
    return generators.invert(w, interval, s)


def double_mean_flagged(
    u: GeneratorSpec,
    v: GeneratorSpec,
    interval: Interval,
    lam: measures.ProbabilityVector,
    mu: measures.ProbabilityVector,
    matrix: ValueMatrix,
) -> tuple[float, bool]:
    """Iterated (u, v)-mean of the matrix, fused kernel path."""
    if matrix.rows != len(lam) or matrix.cols != len(mu):
        raise ValidationError(
            f"dimension mismatch: matrix {matrix.rows}x{matrix.cols}, "
            f"{len(lam)} row weights, {len(mu)} column weights"
        )
    matrix.check_in_interval(interval)
    pu, img_u = _prepare(u, interval)
    pv, img_v = _prepare(v, interval)
    val, code = _backend.kernels.double_mean_core(
        pu, pv, img_u.lo, img_u.hi, img_v.lo, img_v.hi,
        lam.weights, mu.weights, matrix.entries,
    )
    if code == STATUS_OUT_OF_IMAGE:
        raise OutOfImageError("generator sum left the image hull beyond tolerance")
    return float(val), code == STATUS_CLAMPED


def double_mean(u, v, interval, lam, mu, matrix) -> float:
    return double_mean_flagged(u, v, interval, lam, mu, matrix)[0]


def double_mean_staged(u, v, interval, lam, mu, matrix) -> float:
    """Iterated mean as outer-mean-of-inner-means, staged row by row.

    Independent of the fused kernel path; used to cross-check the
    factorization of the double mean.
    """
    if matrix.rows != len(lam) or matrix.cols != len(mu):
        raise ValidationError("dimension mismatch in staged double mean")
    inner = [discrete_mean(v, interval, mu, row) for row in matrix.entries]
    return discrete_mean(u, interval, lam, np.asarray(inner))
