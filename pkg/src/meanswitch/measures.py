"""Discrete probability vectors and simple measures on [0, 1].

Discrete weights play the roles of the two marginal distributions in the
switch equation; the continuous side is covered by a computable subclass
of measures: finitely many atoms plus a uniform-density component on
[0, 1], integrated with composite Gauss-Legendre quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import NumericalError, ParseError, ValidationError

MASS_TOL = 1e-12

# 16-point Gauss-Legendre rule on 32 uniform panels; exact far below
# 1e-12 for the smooth integrands in scope
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_N_PANELS = 32


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Validated, normalized discrete probability weights."""

    weights: np.ndarray
    nondegenerate: bool = field(default=False)

    def __len__(self) -> int:
        return self.weights.size


def validate(weights) -> ProbabilityVector:
    """Check and normalize raw weights into a ProbabilityVector.

    The vector is degenerate when fewer than two weights are strictly
    positive, i.e. no event has probability strictly between 0 and 1.
    """
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.size < 1:
        raise ValidationError("weight vector must have at least one entry")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights must be finite")
    if np.any(w < 0):
        raise ValidationError(f"negative weight in {w.tolist()}")
    total = float(w.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise ValidationError(f"weights sum to {total}, expected 1 within {MASS_TOL}")
    w = w / total
    w.setflags(write=False)
    return ProbabilityVector(w, nondegenerate=int(np.count_nonzero(w > 0)) >= 2)


def parse_weights(text: str) -> ProbabilityVector:
    """Parse comma-separated decimal weights, e.g. ``0.5,0.5``."""
    try:
        raw = [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad weight list {text!r}") from exc
    try:
        return validate(raw)
    except ValidationError as exc:
        raise ValidationError(f"invalid weights {text!r}: {exc}") from exc


def expectation(pv: ProbabilityVector, values) -> float:
    """Weighted sum of values under the probability vector."""
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size != pv.weights.size:
        raise ValidationError(f"length mismatch: {pv.weights.size} weights, {v.size} values")
    return float(_backend.kernels.pinned_sum(pv.weights * v))


@dataclass(frozen=True, eq=False)
class SimpleMeasure:
    """Probability measure on [0, 1]: atoms plus a uniform component."""

    atom_locations: np.ndarray
    atom_masses: np.ndarray
    uniform: float

    @classmethod
    def make(cls, atoms=(), uniform: float = 0.0) -> SimpleMeasure:
        """Build and validate; duplicate atom locations are merged."""
        locs = np.asarray([a[0] for a in atoms], dtype=np.float64)
        masses = np.asarray([a[1] for a in atoms], dtype=np.float64)
        uniform = float(uniform)
        if locs.size and (np.any(locs < 0) or np.any(locs > 1)):
            raise ValidationError("atom locations must lie in [0, 1]")
        if np.any(masses < 0) or uniform < 0:
            raise ValidationError("masses must be non-negative")
        total = float(masses.sum()) + uniform
        if abs(total - 1.0) > MASS_TOL:
            raise ValidationError(f"total mass {total}, expected 1 within {MASS_TOL}")
        if locs.size:
            order = np.argsort(locs, kind="stable")
            locs, masses = locs[order], masses[order]
            keep_locs, keep_masses = [], []
            for loc, mass in zip(locs.tolist(), masses.tolist()):
                if keep_locs and loc == keep_locs[-1]:
                    keep_masses[-1] += mass
                else:
                    keep_locs.append(loc)
                    keep_masses.append(mass)
            locs = np.asarray(keep_locs)
            masses = np.asarray(keep_masses)
        masses = masses / total
        locs.setflags(write=False)
        masses.setflags(write=False)
        return cls(locs, masses, uniform / total)

    @classmethod
    def point_mass(cls, loc: float) -> SimpleMeasure:
        return cls.make(atoms=[(loc, 1.0)])

    @classmethod
    def uniform_measure(cls) -> SimpleMeasure:
        return cls.make(uniform=1.0)

    @property
    def nondegenerate(self) -> bool:
        """True iff some event has measure strictly between 0 and 1."""
        if self.uniform > 0:
            return True
        return int(np.count_nonzero(self.atom_masses > 0)) >= 2

    def mass_below(self, c: float) -> float:
        """Measure of the half-open interval [0, c)."""
        atom_part = float(self.atom_masses[self.atom_locations < c].sum())
        return atom_part + self.uniform * float(c)

    def quadrature(self, breakpoints=()) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights for the uniform component.

        Panels are the 32 uniform subdivisions of [0, 1], split further
        at the given breakpoints so piecewise-smooth integrands are
        integrated exactly panel by panel.  Weights integrate to 1 and
        exclude the `uniform` factor.
        """
        if self.uniform == 0:
            return np.empty(0), np.empty(0)
        edges = np.linspace(0.0, 1.0, _N_PANELS + 1)
        cuts = [b for b in breakpoints if 0.0 < b < 1.0]
        if cuts:
            edges = np.unique(np.concatenate([edges, np.asarray(cuts, dtype=np.float64)]))
        mids = 0.5 * (edges[1:] + edges[:-1])
        halves = 0.5 * (edges[1:] - edges[:-1])
        nodes = (mids[:, None] + halves[:, None] * _GL_NODES[None, :]).ravel()
        wts = (halves[:, None] * _GL_WEIGHTS[None, :]).ravel()
        return nodes, wts

    def to_json(self) -> dict:
        return {
            "atoms": [[float(l), float(m)] for l, m in zip(self.atom_locations, self.atom_masses)],
            "uniform": float(self.uniform),
        }

    @classmethod
    def from_json(cls, obj: dict) -> SimpleMeasure:
        if not isinstance(obj, dict):
            raise ParseError("measure JSON must be an object")
        atoms = obj.get("atoms", [])
        try:
            atoms = [(float(a[0]), float(a[1])) for a in atoms]
            uniform = float(obj.get("uniform", 0.0))
        except (TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"bad measure JSON {obj!r}") from exc
        return cls.make(atoms=atoms, uniform=uniform)


def _apply(fn, x: np.ndarray) -> np.ndarray:
    out = np.asarray(fn(x), dtype=np.float64)
    if out.shape != x.shape:
        out = np.asarray([fn(float(t)) for t in x], dtype=np.float64)
    return out


def integrate(sm: SimpleMeasure, fn, breakpoints=()) -> float:
    """Integral of `fn` against the measure.

    Atom contributions come first, then the quadrature of the uniform
    component; the combined contribution vector is summed in pinned
    order so results are reproducible across backends.
    """
    parts = []
    if sm.atom_locations.size:
        parts.append(sm.atom_masses * _apply(fn, sm.atom_locations))
    if sm.uniform > 0:
        nodes, wts = sm.quadrature(breakpoints)
        parts.append(sm.uniform * wts * _apply(fn, nodes))
    contrib = np.concatenate(parts) if parts else np.empty(0)
    if not np.all(np.isfinite(contrib)):
        raise NumericalError("integrand produced a non-finite value")
    return float(_backend.kernels.pinned_sum(contrib))
