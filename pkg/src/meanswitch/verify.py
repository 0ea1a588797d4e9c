"""Packaged verification suites, one per testable claim.

Every suite draws its cases from a fixed generator catalog on [1, 2],
runs deterministically under its seed, and reports the worst observed
violation of each invariant next to the threshold it must stay under.
Suites either bound a quantity from above (tolerances) or require a
floor to be exceeded (search shortfalls, reported as the amount missing
so that <= 0 passes).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend, affinity, generators, means, measures, search, switch
from .errors import ValidationError
from .generators import GeneratorSpec, Interval
from .means import StepKernel, BilinearKernel, ValueMatrix

CATALOG: list[tuple[str, GeneratorSpec]] = [
    ("id", generators.identity()),
    ("affine:2:-1", generators.affine(2.0, -1.0)),
    ("pow:2", generators.power(2.0)),
    ("pow:-1", generators.power(-1.0)),
    ("exp:1", generators.exponential(1.0)),
    ("log", generators.logarithm()),
]

CATALOG_INTERVAL = Interval(1.0, 2.0)

# detect_affine verdict threshold: far below the smallest non-affine
# sup error observed on the catalog (about 1e-2)
AFFINE_SUP_THRESHOLD = 1e-8

# floor a falsifying search must clear for a non-affine pair
FALSIFICATION_FLOOR = 1e-4

# the known 2x2 witness for (id, pow:2) on [1, 2] with equal weights
WITNESS_FLOOR = 0.0811

_SEARCH_SEED = 42

SUITE_NAMES = (
    "containment",
    "affine_invariance",
    "sufficiency",
    "reduction",
    "fubini",
    "daroczy_pales",
    "phi_affine",
    "falsify_nonaffine",
    "theorem_roundtrip",
)

_SUITE_IDS = {name: i + 1 for i, name in enumerate(SUITE_NAMES)}

_DEFAULT_SIZES = {
    "containment": 100_000,
    "affine_invariance": 10_000,
    "sufficiency": 100,       # instances per catalog generator and order
    "reduction": 1_000,
    "daroczy_pales": 10_000,
    "roundtrip_instances": 100,
    "kappa_samples": 2_000,
}


@dataclass(eq=False)
class SuiteReport:
    """Worst observed violation per invariant and the pass verdict."""

    suite: str
    seed: int
    cases: int
    violations: dict
    thresholds: dict
    passed: bool = field(init=False)
    details: list | None = None

    def __post_init__(self):
        self.passed = all(
            self.violations[k] <= self.thresholds[k] for k in self.thresholds
        )

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "violations": self.violations,
            "thresholds": self.thresholds,
            "passed": self.passed,
        }
        if self.details is not None:
            out["details"] = self.details
        return out


def _rng(seed: int, suite: str, *extra) -> np.random.Generator:
    return np.random.default_rng([seed, _SUITE_IDS[suite], *extra])


def _sizes(sizes: dict | None) -> dict:
    out = dict(_DEFAULT_SIZES)
    if sizes:
        out.update(sizes)
    return out


def _random_weights(rng, k: int) -> measures.ProbabilityVector:
    w = rng.exponential(1.0, size=k)
    return measures.validate(w / w.sum())


def _random_instance(rng, f, g, interval, m, n) -> switch.SwitchInstance:
    return switch.SwitchInstance.make(
        f,
        g,
        interval,
        _random_weights(rng, m),
        _random_weights(rng, n),
        ValueMatrix.make(rng.uniform(interval.lo, interval.hi, size=(m, n))),
    )


def _suite_containment(seed: int, sizes: dict) -> SuiteReport:
    """Means stay inside the hull of their inputs; clamping stays rare."""
    cases = sizes["containment"]
    rng = _rng(seed, "containment")
    interval = CATALOG_INTERVAL
    worst = 0.0
    clamped = 0
    done = 0
    block_idx = 0
    while done < cases:
        _, spec = CATALOG[block_idx % len(CATALOG)]
        k = 2 + (block_idx % 7)
        batch = min(2000, cases - done)
        w = rng.exponential(1.0, size=(batch, k))
        w = w / w.sum(axis=1, keepdims=True)
        x = rng.uniform(interval.lo, interval.hi, size=(batch, k))
        img = generators.image(spec, interval)
        vals, codes = _backend.kernels.quasi_mean_batch(
            generators.to_params(spec), img.lo, img.hi, w, x
        )
        over = np.max(vals - x.max(axis=1))
        under = np.max(x.min(axis=1) - vals)
        worst = max(worst, float(over), float(under))
        clamped += int(np.count_nonzero(codes == 1))
        done += batch
        block_idx += 1
    return SuiteReport(
        suite="containment",
        seed=seed,
        cases=cases,
        violations={"containment": worst, "clamp_fraction": clamped / cases},
        thresholds={"containment": 1e-12, "clamp_fraction": 1e-3},
    )


def _suite_affine_invariance(seed: int, sizes: dict) -> SuiteReport:
    """Wrapping the generator in any affine map leaves the mean unchanged."""
    cases = sizes["affine_invariance"]
    rng = _rng(seed, "affine_invariance")
    interval = CATALOG_INTERVAL
    worst = 0.0
    for i in range(cases):
        _, spec = CATALOG[i % len(CATALOG)]
        a = rng.uniform(0.1, 10.0) * (1.0 if rng.integers(0, 2) else -1.0)
        b = rng.uniform(-10.0, 10.0)
        k = int(rng.integers(2, 6))
        pv = _random_weights(rng, k)
        values = rng.uniform(interval.lo, interval.hi, size=k)
        base = means.discrete_mean(spec, interval, pv, values)
        wrapped = means.discrete_mean(spec.wrapped(a, b), interval, pv, values)
        worst = max(worst, abs(wrapped - base) / max(1.0, abs(base)))
    return SuiteReport(
        suite="affine_invariance",
        seed=seed,
        cases=cases,
        violations={"relative_difference": worst},
        thresholds={"relative_difference": 1e-10},
    )


def _suite_sufficiency(seed: int, sizes: dict) -> SuiteReport:
    """Affine pairs f = a*g + b have zero residual on random instances."""
    per = sizes["sufficiency"]
    rng = _rng(seed, "sufficiency")
    interval = CATALOG_INTERVAL
    worst = 0.0
    cases = 0
    for _, g in CATALOG:
        for order in (0, 1):
            for _ in range(per):
                a = rng.uniform(0.1, 10.0) * (1.0 if rng.integers(0, 2) else -1.0)
                b = rng.uniform(-10.0, 10.0)
                f = g.wrapped(a, b)
                pair = (f, g) if order == 0 else (g, f)
                m, n = int(rng.integers(2, 5)), int(rng.integers(2, 5))
                inst = _random_instance(rng, pair[0], pair[1], interval, m, n)
                worst = max(worst, abs(switch.discrete_residual(inst).residual))
                cases += 1
    return SuiteReport(
        suite="sufficiency",
        seed=seed,
        cases=cases,
        violations={"abs_residual": worst},
        thresholds={"abs_residual": 1e-9},
    )


def _random_simple_measure(rng) -> measures.SimpleMeasure:
    uniform = float(rng.uniform(0.2, 0.8))
    n_atoms = int(rng.integers(0, 3))
    if n_atoms == 0:
        return measures.SimpleMeasure.make(uniform=1.0)
    masses = rng.exponential(1.0, size=n_atoms)
    masses = (1.0 - uniform) * masses / masses.sum()
    locs = rng.uniform(0.0, 1.0, size=n_atoms)
    return measures.SimpleMeasure.make(
        atoms=list(zip(locs.tolist(), masses.tolist())), uniform=uniform
    )


def _suite_reduction(seed: int, sizes: dict) -> SuiteReport:
    """Step-kernel instances agree with their reduced 2x2 counterparts."""
    cases = sizes["reduction"]
    rng = _rng(seed, "reduction")
    interval = CATALOG_INTERVAL
    margin = 0.05 * interval.width
    worst = 0.0
    for _ in range(cases):
        f = CATALOG[int(rng.integers(0, len(CATALOG)))][1]
        g = CATALOG[int(rng.integers(0, len(CATALOG)))][1]
        values = tuple(rng.uniform(interval.lo + margin, interval.hi - margin, size=4).tolist())
        cuts = tuple(rng.uniform(0.1, 0.9, size=2).tolist())
        inst = switch.ContinuousSwitchInstance.make(
            f, g, interval, _random_simple_measure(rng), _random_simple_measure(rng),
            StepKernel(values, cuts),
        )
        r_cont = switch.continuous_residual(inst).residual
        r_disc = switch.discrete_residual(switch.reduce_to_discrete(inst)).residual
        worst = max(worst, abs(r_cont - r_disc))
    return SuiteReport(
        suite="reduction",
        seed=seed,
        cases=cases,
        violations={"pipeline_difference": worst},
        thresholds={"pipeline_difference": 1e-12},
    )


def _suite_fubini(seed: int, sizes: dict) -> SuiteReport:
    """Identity generators turn the switch equation into iterated integrals
    with analytically known values on both sides."""
    ident = generators.identity()
    uniform = measures.SimpleMeasure.uniform_measure()
    mixed = measures.SimpleMeasure.make(atoms=[(0.5, 0.3)], uniform=0.7)
    cases = [
        # (lam, mu, kernel, interval, expected lhs = rhs)
        (uniform, uniform, BilinearKernel(0.0, 0.0, 0.0, 1.0), Interval(-1.0, 2.0), 0.25),
        (uniform, uniform, BilinearKernel(0.0, 1.0, 1.0, 0.0), Interval(-1.0, 3.0), 1.0),
        (mixed, uniform, BilinearKernel(0.0, 0.0, 0.0, 1.0), Interval(-1.0, 2.0), 0.25),
    ]
    worst_lhs = worst_rhs = worst_res = 0.0
    for lam, mu, kern, interval, expected in cases:
        report = switch.continuous_residual(
            switch.ContinuousSwitchInstance.make(ident, ident, interval, lam, mu, kern)
        )
        worst_lhs = max(worst_lhs, abs(report.lhs - expected))
        worst_rhs = max(worst_rhs, abs(report.rhs - expected))
        worst_res = max(worst_res, abs(report.residual))
    return SuiteReport(
        suite="fubini",
        seed=seed,
        cases=len(cases),
        violations={"lhs_error": worst_lhs, "rhs_error": worst_rhs, "abs_residual": worst_res},
        thresholds={"lhs_error": 1e-12, "rhs_error": 1e-12, "abs_residual": 1e-12},
    )


def _suite_daroczy_pales(seed: int, sizes: dict) -> SuiteReport:
    """The midpoint identity holds for every (kappa, x, y)."""
    cases = sizes["daroczy_pales"]
    rng = _rng(seed, "daroczy_pales")
    kappa = rng.uniform(0.0, 1.0, size=cases)
    x = rng.uniform(-10.0, 10.0, size=cases)
    y = rng.uniform(-10.0, 10.0, size=cases)
    worst = float(np.max(affinity.daroczy_pales_check(kappa, x, y)))
    return SuiteReport(
        suite="daroczy_pales",
        seed=seed,
        cases=cases,
        violations={"identity_residual": worst},
        thresholds={"identity_residual": 1e-13},
    )


def _affine_catalog_pairs() -> list[tuple[str, GeneratorSpec, GeneratorSpec]]:
    """Affine pairs covering the whole catalog: internal ones plus wraps."""
    pairs = []
    for (name_f, f) in CATALOG:
        for (name_g, g) in CATALOG:
            if name_f == name_g:
                continue
            if detect_pair_affine(f, g):
                pairs.append((f"{name_f}|{name_g}", f, g))
    for name, g in CATALOG:
        wrapped = g.wrapped(1.7, -0.3)
        pairs.append((f"affine-wrap|{name}", wrapped, g))
    return pairs


def detect_pair_affine(f: GeneratorSpec, g: GeneratorSpec) -> bool:
    fit = affinity.detect_affine(f, g, CATALOG_INTERVAL)
    return fit.sup_error <= AFFINE_SUP_THRESHOLD


def _suite_phi_affine(seed: int, sizes: dict) -> SuiteReport:
    """Affine pairs produce affine Phi surfaces; non-affine pairs do not."""
    alpha = 0.35
    worst_fit = worst_sum = worst_c = worst_range = worst_diag = 0.0
    details = []
    pairs = _affine_catalog_pairs()
    for label, f, g in pairs:
        phi = affinity.normalize_pair(f, g, CATALOG_INTERVAL)
        surf = affinity.build_phi_surface(phi, alpha)
        worst_fit = max(worst_fit, surf.fit_residual)
        worst_sum = max(worst_sum, abs(surf.A + surf.B - 1.0))
        worst_c = max(worst_c, abs(surf.C))
        worst_range = max(worst_range, max(0.0, -surf.A, surf.A - 1.0))
        worst_diag = max(worst_diag, surf.diagonal_residual)
        details.append({"pair": label, "kind": "affine", "fit_residual": surf.fit_residual, "A": surf.A})
    nonaffine_phi = affinity.normalize_pair(
        generators.identity(), generators.power(2.0), CATALOG_INTERVAL
    )
    nonaffine_surf = affinity.build_phi_surface(nonaffine_phi, 0.5)
    details.append(
        {"pair": "id|pow:2", "kind": "non-affine", "fit_residual": nonaffine_surf.fit_residual,
         "A": nonaffine_surf.A}
    )
    return SuiteReport(
        suite="phi_affine",
        seed=seed,
        cases=len(pairs) + 1,
        violations={
            "affine_fit_residual": worst_fit,
            "affine_sum_deviation": worst_sum,
            "affine_c_magnitude": worst_c,
            "affine_a_out_of_range": worst_range,
            "diagonal_residual": worst_diag,
            "nonaffine_fit_shortfall": max(0.0, 1e-3 - nonaffine_surf.fit_residual),
        },
        thresholds={
            "affine_fit_residual": 1e-9,
            "affine_sum_deviation": 1e-9,
            "affine_c_magnitude": 1e-9,
            "affine_a_out_of_range": 0.0,
            "diagonal_residual": 1e-10,
            "nonaffine_fit_shortfall": 0.0,
        },
        details=details,
    )


def _falsify_config() -> search.SearchConfig:
    return search.SearchConfig(m=2, n=2, restarts=32, seed=_SEARCH_SEED)


def _suite_falsify_nonaffine(seed: int, sizes: dict) -> SuiteReport:
    """Every non-affine ordered pair admits a residual above the floor."""
    cfg = _falsify_config()
    interval = CATALOG_INTERVAL
    shortfall = 0.0
    witness_best = 0.0
    details = []
    cases = 0
    for name_f, f in CATALOG:
        for name_g, g in CATALOG:
            if name_f == name_g or detect_pair_affine(f, g):
                continue
            result = search.maximize_residual(f, g, interval, cfg)
            best = result.best_abs_residual
            shortfall = max(shortfall, FALSIFICATION_FLOOR - best)
            if (name_f, name_g) == ("id", "pow:2"):
                witness_best = best
            details.append({"pair": f"{name_f}|{name_g}", "best_abs_residual": best})
            cases += 1
    return SuiteReport(
        suite="falsify_nonaffine",
        seed=seed,
        cases=cases,
        violations={
            "residual_shortfall": max(0.0, shortfall),
            "witness_shortfall": max(0.0, WITNESS_FLOOR - witness_best),
        },
        thresholds={"residual_shortfall": 0.0, "witness_shortfall": 0.0},
        details=details,
    )


def _suite_theorem_roundtrip(seed: int, sizes: dict) -> SuiteReport:
    """Classify every ordered catalog pair, then verify the matching claim.

    Pairs judged affine must show zero residual across random instances;
    pairs judged non-affine must yield to the falsifying search.  Every
    pair appears in the details, none is skipped.
    """
    per = sizes["roundtrip_instances"]
    interval = CATALOG_INTERVAL
    cfg = _falsify_config()
    affine_worst = 0.0
    shortfall = 0.0
    details = []
    cases = 0
    for i, (name_f, f) in enumerate(CATALOG):
        for j, (name_g, g) in enumerate(CATALOG):
            if name_f == name_g:
                continue
            cases += 1
            if detect_pair_affine(f, g):
                rng = _rng(seed, "theorem_roundtrip", i, j)
                worst = 0.0
                for _ in range(per):
                    m, n = int(rng.integers(2, 5)), int(rng.integers(2, 5))
                    inst = _random_instance(rng, f, g, interval, m, n)
                    worst = max(worst, abs(switch.discrete_residual(inst).residual))
                affine_worst = max(affine_worst, worst)
                details.append(
                    {"pair": f"{name_f}|{name_g}", "verdict": "affine", "max_abs_residual": worst}
                )
            else:
                best = search.maximize_residual(f, g, interval, cfg).best_abs_residual
                shortfall = max(shortfall, FALSIFICATION_FLOOR - best)
                details.append(
                    {"pair": f"{name_f}|{name_g}", "verdict": "non-affine", "best_abs_residual": best}
                )
    return SuiteReport(
        suite="theorem_roundtrip",
        seed=seed,
        cases=cases,
        violations={
            "affine_max_residual": affine_worst,
            "nonaffine_shortfall": max(0.0, shortfall),
        },
        thresholds={"affine_max_residual": 1e-9, "nonaffine_shortfall": 0.0},
        details=details,
    )


_SUITES = {
    "containment": _suite_containment,
    "affine_invariance": _suite_affine_invariance,
    "sufficiency": _suite_sufficiency,
    "reduction": _suite_reduction,
    "fubini": _suite_fubini,
    "daroczy_pales": _suite_daroczy_pales,
    "phi_affine": _suite_phi_affine,
    "falsify_nonaffine": _suite_falsify_nonaffine,
    "theorem_roundtrip": _suite_theorem_roundtrip,
}


def run_suite(name: str, seed: int = 0, sizes: dict | None = None) -> SuiteReport:
    """Run one named suite deterministically under the seed."""
    if name not in _SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    return _SUITES[name](seed, _sizes(sizes))


def run_all(seed: int = 0, sizes: dict | None = None) -> list[SuiteReport]:
    """Run every suite in catalog order."""
    return [run_suite(name, seed, sizes) for name in SUITE_NAMES]
