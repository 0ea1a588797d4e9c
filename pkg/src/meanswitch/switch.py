"""Both sides of the switch equation and the residual between them.

A pair of generators (f, g) commutes on an instance when aggregating the
value matrix first by columns under g and then across rows under f gives
the same number as the opposite order on the transposed matrix.  The
residual (left minus right) is the quantity searched, bounded and tested
throughout the package; the continuous form is reduced to 2x2 discrete
instances through step kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend, generators, means, measures
from ._codes import STATUS_OUT_OF_IMAGE
from .errors import OutOfImageError, ValidationError
from .generators import GeneratorSpec, Interval
from .means import StepKernel, ValueMatrix


@dataclass(frozen=True, eq=False)
class SwitchInstance:
    """One discrete problem instance (f, g, I, lambda, mu, matrix)."""

    f: GeneratorSpec
    g: GeneratorSpec
    interval: Interval
    lam: measures.ProbabilityVector
    mu: measures.ProbabilityVector
    matrix: ValueMatrix

    @classmethod
    def make(cls, f, g, interval, lam, mu, matrix) -> SwitchInstance:
        generators.validate_spec(f, interval)
        generators.validate_spec(g, interval)
        if matrix.rows != len(lam) or matrix.cols != len(mu):
            raise ValidationError(
                f"dimension mismatch: matrix {matrix.rows}x{matrix.cols}, "
                f"{len(lam)} row weights, {len(mu)} column weights"
            )
        matrix.check_in_interval(interval)
        return cls(f, g, interval, lam, mu, matrix)

    def to_json(self) -> dict:
        return {
            "f": generators.format_generator(self.f),
            "g": generators.format_generator(self.g),
            "interval": [self.interval.lo, self.interval.hi],
            "lambda": [float(v) for v in self.lam.weights],
            "mu": [float(v) for v in self.mu.weights],
            "matrix": [[float(v) for v in row] for row in self.matrix.entries],
        }


@dataclass(frozen=True, eq=False)
class ContinuousSwitchInstance:
    """Continuous instance: simple measures on [0,1] and a product kernel."""

    f: GeneratorSpec
    g: GeneratorSpec
    interval: Interval
    lam: measures.SimpleMeasure
    mu: measures.SimpleMeasure
    kernel: object

    @classmethod
    def make(cls, f, g, interval, lam, mu, kernel) -> ContinuousSwitchInstance:
        generators.validate_spec(f, interval)
        generators.validate_spec(g, interval)
        means.check_kernel_range(kernel, interval)
        return cls(f, g, interval, lam, mu, kernel)


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """Both sides of the switch equation and their difference."""

    lhs: float
    rhs: float
    residual: float
    clamped_lhs: bool
    clamped_rhs: bool
    degenerate_lambda: bool
    degenerate_mu: bool
    instance: object

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "clamped_lhs": self.clamped_lhs,
            "clamped_rhs": self.clamped_rhs,
            "degenerate_lambda": self.degenerate_lambda,
            "degenerate_mu": self.degenerate_mu,
        }


def discrete_residual(inst: SwitchInstance) -> ResidualReport:
    """Residual of the discrete switch equation.

    The right side aggregates the materialized transpose with the roles
    of (f, lambda) and (g, mu) exchanged.  Degenerate weight vectors are
    legitimate inputs (the residual is provably zero) and only flagged.
    """
    lhs, cl = means.double_mean_flagged(
        inst.f, inst.g, inst.interval, inst.lam, inst.mu, inst.matrix
    )
    rhs, cr = means.double_mean_flagged(
        inst.g, inst.f, inst.interval, inst.mu, inst.lam, inst.matrix.transpose()
    )
    return ResidualReport(
        lhs=lhs,
        rhs=rhs,
        residual=lhs - rhs,
        clamped_lhs=cl,
        clamped_rhs=cr,
        degenerate_lambda=not inst.lam.nondegenerate,
        degenerate_mu=not inst.mu.nondegenerate,
        instance=inst,
    )


def _side(f, g, interval, lam, mu, kernel):
    """f-outer / g-inner continuous aggregation of the kernel."""
    pf, img_f = means._prepare(f, interval)
    pg, img_g = means._prepare(g, interval)
    x_nodes, x_wts = lam.quadrature(kernel.breakpoints_x)
    y_nodes, y_wts = mu.quadrature(kernel.breakpoints_y)
    val, code = _backend.kernels.continuous_side_core(
        pf, pg, img_f.lo, img_f.hi, img_g.lo, img_g.hi,
        kernel.to_params(),
        lam.atom_locations, lam.atom_masses, lam.uniform, x_nodes, x_wts,
        mu.atom_locations, mu.atom_masses, mu.uniform, y_nodes, y_wts,
    )
    if code == STATUS_OUT_OF_IMAGE:
        raise OutOfImageError("integral left the generator image hull beyond tolerance")
    return float(val), code != 0


def continuous_residual(inst: ContinuousSwitchInstance) -> ResidualReport:
    """Residual of the continuous switch equation by quadrature."""
    means.check_kernel_range(inst.kernel, inst.interval)
    lhs, cl = _side(inst.f, inst.g, inst.interval, inst.lam, inst.mu, inst.kernel)
    rhs, cr = _side(inst.g, inst.f, inst.interval, inst.mu, inst.lam, inst.kernel.transpose())
    return ResidualReport(
        lhs=lhs,
        rhs=rhs,
        residual=lhs - rhs,
        clamped_lhs=cl,
        clamped_rhs=cr,
        degenerate_lambda=not inst.lam.nondegenerate,
        degenerate_mu=not inst.mu.nondegenerate,
        instance=inst,
    )


def reduce_to_discrete(
    inst: ContinuousSwitchInstance,
    a_mass: float | None = None,
    b_mass: float | None = None,
) -> SwitchInstance:
    """Collapse a step-kernel instance to the equivalent 2x2 discrete one.

    Row weights are the lambda-masses of [0, s) and its complement,
    column weights the mu-masses of [0, t) and its complement, and the
    matrix is [[a, c], [b, d]]; the discrete residual of the result
    equals the continuous residual in exact arithmetic.  Explicit masses,
    when given, are checked against the measure.
    """
    if not isinstance(inst.kernel, StepKernel):
        raise ValidationError("reduction requires a step kernel")
    s, t = inst.kernel.cuts
    computed_a = inst.lam.mass_below(s)
    computed_b = inst.mu.mass_below(t)
    if a_mass is not None and abs(a_mass - computed_a) > 1e-12:
        raise ValidationError(f"a_mass={a_mass} does not match lambda([0,{s})) = {computed_a}")
    if b_mass is not None and abs(b_mass - computed_b) > 1e-12:
        raise ValidationError(f"b_mass={b_mass} does not match mu([0,{t})) = {computed_b}")
    if not 0.0 < computed_a < 1.0 or not 0.0 < computed_b < 1.0:
        raise ValidationError(
            f"degenerate cut: masses ({computed_a}, {computed_b}) must lie strictly in (0, 1)"
        )
    a, b, c, d = inst.kernel.values
    return SwitchInstance.make(
        inst.f,
        inst.g,
        inst.interval,
        measures.validate([computed_a, 1.0 - computed_a]),
        measures.validate([computed_b, 1.0 - computed_b]),
        ValueMatrix.make(np.array([[a, c], [b, d]])),
    )
