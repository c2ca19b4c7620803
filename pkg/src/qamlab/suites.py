"""Seeded randomized commutation suites for the two admissibility settings.

Both suites draw random spaces and random simple functions, evaluate the
commutation residual for generator pairs that are known to commute, and
report the worst relative residual seen.  The proportional suite pairs
f = c*g over positive bijections on arbitrary finite masses; the affine
suite pairs f = a*g + b over real-valued injections on probability
spaces.  All randomness flows from one seed, so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .generators import (
    ExpGenerator,
    Generator,
    IdentityGenerator,
    Interval,
    LogGenerator,
    PowerGenerator,
    affine,
    scale,
)
from .means import SimpleFunctionMatrix, commutation_residual
from .measure_space import DiscreteMeasureSpace, ProductGrid

__all__ = ["SuiteResult", "run_finite_measure_suite", "run_probability_suite"]

DEFAULT_SEED = 42


@dataclass
class SuiteResult:
    """Outcome of one randomized suite run."""

    name: str
    tolerance: float
    rows: list[dict] = field(default_factory=list)
    max_rel_residual: float = 0.0

    @property
    def n_cases(self) -> int:
        return len(self.rows)

    @property
    def passed(self) -> bool:
        return self.max_rel_residual <= self.tolerance

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "cases": self.n_cases,
            "max_rel_residual": self.max_rel_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _random_space(rng: np.random.Generator, n_atoms: int, total_mass: float) -> DiscreteMeasureSpace:
    raw = rng.uniform(0.5, 1.5, n_atoms)
    return DiscreteMeasureSpace(raw * (total_mass / raw.sum()))


def _random_total_mass(rng: np.random.Generator) -> float:
    # finite masses in [0.2, 5], avoiding the probability-space point
    while True:
        mass = rng.uniform(0.2, 5.0)
        if abs(mass - 1.0) > 1e-3:
            return mass


def _random_values(rng: np.random.Generator, domain: Interval, shape) -> np.ndarray:
    if math.isinf(domain.lower) and math.isinf(domain.upper):
        return rng.uniform(-2.0, 2.0, shape)
    if domain.lower == 0.0 and math.isinf(domain.upper):
        return np.exp(rng.uniform(math.log(0.2), math.log(5.0), shape))
    lo, hi = domain.lower, domain.upper
    span = hi - lo
    return rng.uniform(lo + 0.1 * span, hi - 0.1 * span, shape)


def _run_cases(
    name: str,
    tol: float,
    cases,  # iterable of (case_id, f, g, grid, h)
) -> SuiteResult:
    result = SuiteResult(name=name, tolerance=tol)
    worst = 0.0
    for case_id, f, g, grid, h in cases:
        report = commutation_residual(f, g, grid, h)
        worst = max(worst, report.rel_residual)
        result.rows.append(
            {
                "suite": name,
                "case": case_id,
                "f": f.describe(),
                "g": g.describe(),
                "masses_x": ";".join(f"{w:.6g}" for w in grid.space_x.weights),
                "masses_y": ";".join(f"{w:.6g}" for w in grid.space_y.weights),
                "lhs": report.lhs,
                "rhs": report.rhs,
                "abs_residual": report.abs_residual,
                "rel_residual": report.rel_residual,
                "pass": report.rel_residual <= tol,
            }
        )
    result.max_rel_residual = worst
    return result


def run_finite_measure_suite(
    seed: int = DEFAULT_SEED,
    tol: float = 1e-8,
    pairs_per_combo: int = 200,
    h_per_pair: int = 5,
) -> SuiteResult:
    """Proportional pairs f = c*g commute on arbitrary finite measures.

    Catalog: exp rates {-1, 1, 2} and power exponents {-1, 0.5, 2}, scale
    factors c in {0.5, 2, 10}, random non-degenerate space pairs with
    total masses in [0.2, 5] away from 1, several random h per pair.
    """
    rng = np.random.default_rng(seed)
    catalog: list[Generator] = [
        ExpGenerator(-1.0), ExpGenerator(1.0), ExpGenerator(2.0),
        PowerGenerator(-1.0), PowerGenerator(0.5), PowerGenerator(2.0),
    ]

    def cases():
        case_id = 0
        for g in catalog:
            for c in (0.5, 2.0, 10.0):
                f = scale(g, c)
                for _ in range(pairs_per_combo):
                    mx = int(rng.integers(2, 4))
                    my = int(rng.integers(2, 4))
                    grid = ProductGrid(
                        _random_space(rng, mx, _random_total_mass(rng)),
                        _random_space(rng, my, _random_total_mass(rng)),
                    )
                    for _ in range(h_per_pair):
                        h = SimpleFunctionMatrix(_random_values(rng, g.domain, (mx, my)))
                        yield case_id, f, g, grid, h
                        case_id += 1

    return _run_cases("finite-measure-proportional", tol, cases())


def run_probability_suite(
    seed: int = DEFAULT_SEED,
    tol: float = 1e-8,
    trials: int = 1000,
) -> SuiteResult:
    """Affine pairs f = a*g + b commute on probability spaces.

    Slopes a in {-2, 0.5, 3}, intercepts b in {-1, 0, 4}, base generators
    identity, log, exp(1), power(2); at least ``trials`` random cases
    spread evenly over the combinations.
    """
    rng = np.random.default_rng(seed)
    bases: list[Generator] = [
        IdentityGenerator(), LogGenerator(), ExpGenerator(1.0), PowerGenerator(2.0),
    ]
    combos = [(a, b, g) for a in (-2.0, 0.5, 3.0) for b in (-1.0, 0.0, 4.0) for g in bases]
    per_combo = -(-trials // len(combos))  # ceil division

    def cases():
        case_id = 0
        for a, b, g in combos:
            f = affine(g, a, b)
            for _ in range(per_combo):
                mx = int(rng.integers(2, 4))
                my = int(rng.integers(2, 4))
                grid = ProductGrid(
                    _random_space(rng, mx, 1.0), _random_space(rng, my, 1.0)
                )
                h = SimpleFunctionMatrix(_random_values(rng, g.domain, (mx, my)))
                yield case_id, f, g, grid, h
                case_id += 1

    return _run_cases("probability-affine", tol, cases())
