"""Catalog of continuous injective generator functions on a working interval.

A generator is one of ``id``, ``affine:A:B``, ``pow:P``, ``exp:T`` or
``log``, optionally post-composed with an affine map (``|affine:A:B`` in
the mini-language).  Every catalog entry is strictly monotone, hence
injective, on any interval it is valid for, and carries a closed-form
inverse; a bisection inverter is provided for cross-checks and as the
fallback for monotone functions without a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._codes import (
    EXCEEDANCE_REL,
    KIND_AFFINE,
    KIND_EXP,
    KIND_ID,
    KIND_LOG,
    KIND_POW,
)
from .errors import DomainError, InvalidSpecError, OutOfImageError, ParseError

_KIND_CODES = {"id": KIND_ID, "affine": KIND_AFFINE, "pow": KIND_POW, "exp": KIND_EXP, "log": KIND_LOG}
_PARAM_COUNT = {"id": 0, "affine": 2, "pow": 1, "exp": 1, "log": 0}

# bisection stops when the bracket is narrower than this fraction of the
# interval width, or after the iteration cap
BISECT_REL_TOL = 1e-13
BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class Interval:
    """Finite nondegenerate working interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidSpecError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise InvalidSpecError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack


@dataclass(frozen=True)
class GeneratorImage:
    """Closed hull of the generator image over the working interval."""

    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class GeneratorSpec:
    """A catalog generator, optionally wrapped in an outer affine map."""

    kind: str
    params: tuple = ()
    wrap: tuple | None = None

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise InvalidSpecError(f"unknown generator kind {self.kind!r}")
        if len(self.params) != _PARAM_COUNT[self.kind]:
            raise InvalidSpecError(
                f"generator {self.kind!r} takes {_PARAM_COUNT[self.kind]} parameter(s)"
            )
        if any(not math.isfinite(p) for p in self.params):
            raise InvalidSpecError("generator parameters must be finite")
        if self.kind == "affine" and self.params[0] == 0:
            raise InvalidSpecError("affine generator requires a != 0")
        if self.kind == "pow" and self.params[0] == 0:
            raise InvalidSpecError("power generator requires p != 0")
        if self.kind == "exp" and self.params[0] == 0:
            raise InvalidSpecError("exponential generator requires t != 0")
        if self.wrap is not None:
            a, b = self.wrap
            if not (math.isfinite(a) and math.isfinite(b)):
                raise InvalidSpecError("wrap coefficients must be finite")
            if a == 0:
                raise InvalidSpecError("affine wrap requires a != 0")

    def wrapped(self, a: float, b: float) -> GeneratorSpec:
        """Post-compose with x -> a*x + b, merging with any existing wrap."""
        if a == 0:
            raise InvalidSpecError("affine wrap requires a != 0")
        if self.wrap is None:
            return GeneratorSpec(self.kind, self.params, (float(a), float(b)))
        wa, wb = self.wrap
        return GeneratorSpec(self.kind, self.params, (float(a) * wa, float(a) * wb + float(b)))


def identity() -> GeneratorSpec:
    return GeneratorSpec("id")


def affine(a: float, b: float) -> GeneratorSpec:
    return GeneratorSpec("affine", (float(a), float(b)))


def power(p: float) -> GeneratorSpec:
    return GeneratorSpec("pow", (float(p),))


def exponential(t: float) -> GeneratorSpec:
    return GeneratorSpec("exp", (float(t),))


def logarithm() -> GeneratorSpec:
    return GeneratorSpec("log")


def validate_spec(spec: GeneratorSpec, interval: Interval) -> None:
    """Check the spec is a continuous injection on the given interval.

    Powers with positive exponent extend continuously to 0, so they only
    need a non-negative interval; negative exponents and the logarithm
    need a strictly positive one.
    """
    if spec.kind == "log" and interval.lo <= 0:
        raise InvalidSpecError(f"logarithm requires a positive interval, got lo={interval.lo}")
    if spec.kind == "pow":
        p = spec.params[0]
        if p < 0 and interval.lo <= 0:
            raise InvalidSpecError(
                f"power with negative exponent requires a positive interval, got lo={interval.lo}"
            )
        if p > 0 and interval.lo < 0:
            raise InvalidSpecError(
                f"power generator requires a non-negative interval, got lo={interval.lo}"
            )


def to_params(spec: GeneratorSpec) -> np.ndarray:
    """Encode the spec for the numeric kernels: [kind, p1, p2, wrap_a, wrap_b]."""
    p1 = spec.params[0] if len(spec.params) > 0 else 0.0
    p2 = spec.params[1] if len(spec.params) > 1 else 0.0
    wa, wb = spec.wrap if spec.wrap is not None else (1.0, 0.0)
    return np.array([float(_KIND_CODES[spec.kind]), p1, p2, wa, wb])


def evaluate(spec: GeneratorSpec, interval: Interval, x: float) -> float:
    """Evaluate w(x) with the outer affine wrap applied last."""
    validate_spec(spec, interval)
    if not interval.contains(x, slack=1e-12 * interval.width):
        raise DomainError(f"x={x} outside interval [{interval.lo}, {interval.hi}]")
    return float(_backend.kernels.gen_eval(to_params(spec), float(x)))


def evaluate_array(spec: GeneratorSpec, interval: Interval, x: np.ndarray) -> np.ndarray:
    """Vectorized `evaluate` over an array of points inside the interval."""
    validate_spec(spec, interval)
    x = np.asarray(x, dtype=np.float64)
    slack = 1e-12 * interval.width
    if np.any(x < interval.lo - slack) or np.any(x > interval.hi + slack):
        raise DomainError("some points lie outside the working interval")
    return np.asarray(_backend.kernels.gen_eval(to_params(spec), x))


def image(spec: GeneratorSpec, interval: Interval) -> GeneratorImage:
    """Closed hull of w over the interval, from the endpoint values."""
    validate_spec(spec, interval)
    params = to_params(spec)
    ylo = float(_backend.kernels.gen_eval(params, interval.lo))
    yhi = float(_backend.kernels.gen_eval(params, interval.hi))
    if ylo > yhi:
        ylo, yhi = yhi, ylo
    return GeneratorImage(ylo, yhi)


def _admit_into_image(img: GeneratorImage, y: float) -> float:
    """Clamp y onto the image hull, or fail if it exceeds the tolerance."""
    tol = EXCEEDANCE_REL * img.width
    if y < img.lo - tol or y > img.hi + tol:
        raise OutOfImageError(
            f"y={y} exceeds the image hull [{img.lo}, {img.hi}] beyond tolerance {tol}"
        )
    return min(max(y, img.lo), img.hi)


def invert(spec: GeneratorSpec, interval: Interval, y: float) -> float:
    """Inverse of the corestriction of w to its image, via the closed form."""
    validate_spec(spec, interval)
    y = _admit_into_image(image(spec, interval), float(y))
    x = float(_backend.kernels.gen_invert(to_params(spec), y))
    return min(max(x, interval.lo), interval.hi)


def bisect_invert(spec: GeneratorSpec, interval: Interval, y: float) -> float:
    """Inverse by bisection on the monotone generator.

    Fallback for generators without a closed-form inverse; also the
    independent cross-check of `invert`.  Handles both orientations.
    """
    validate_spec(spec, interval)
    y = _admit_into_image(image(spec, interval), float(y))
    params = to_params(spec)
    lo, hi = interval.lo, interval.hi
    increasing = _backend.kernels.gen_eval(params, lo) <= _backend.kernels.gen_eval(params, hi)
    tol = BISECT_REL_TOL * interval.width
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        val = float(_backend.kernels.gen_eval(params, mid))
        if (val < y) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def parse_generator(text: str) -> GeneratorSpec:
    """Parse the mini-language, e.g. ``pow:2`` or ``log|affine:2:3``."""
    head, sep, tail = text.strip().partition("|")
    spec = _parse_plain(head)
    if sep:
        wrap = _parse_plain(tail)
        if wrap.kind != "affine":
            raise ParseError(f"wrap suffix must be affine:A:B, got {tail!r}")
        spec = spec.wrapped(*wrap.params)
    return spec


def _parse_plain(token: str) -> GeneratorSpec:
    parts = token.strip().split(":")
    kind = parts[0]
    if kind not in _PARAM_COUNT:
        raise ParseError(f"unknown generator {token!r}")
    want = _PARAM_COUNT[kind]
    if len(parts) - 1 != want:
        raise ParseError(f"generator {kind!r} takes {want} parameter(s), got {token!r}")
    try:
        params = tuple(float(p) for p in parts[1:])
    except ValueError as exc:
        raise ParseError(f"bad numeric literal in {token!r}") from exc
    try:
        return GeneratorSpec(kind, params)
    except InvalidSpecError as exc:
        raise ParseError(str(exc)) from exc


def format_generator(spec: GeneratorSpec) -> str:
    """Inverse of `parse_generator` (canonical decimal literals)."""
    out = spec.kind
    if spec.params:
        out += ":" + ":".join(format(p, ".17g") for p in spec.params)
    if spec.wrap is not None:
        out += "|affine:" + ":".join(format(p, ".17g") for p in spec.wrap)
    return out
