"""Quasi-arithmetic integral means and the commutation residual.

The mean of a simple function h under generator w on a measure space is
``w^{-1}( integral of w(h) )``.  On a product of two spaces there are two
"partially mixed" operators: average over Y first with generator g, then
over X with generator f, or the other way round.  Whether the two agree
for every simple h is exactly the commutation question this package
studies; here both sides are evaluated and the disagreement reported.

Note that without unit total mass the mean is not internal: for weights
(1, 2) and exp, the constant function 0 has mean ln(3), not 0.  Outside
the settings where well-posedness is guaranteed (probability spaces for
real-valued generators; any finite measure for positive bijections) an
inner integral can leave the generator's range, which raises a
stage-tagged RangeError rather than silently producing garbage.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import DomainError, RangeError
from .generators import Generator
from .measure_space import DiscreteMeasureSpace, ProductGrid
from .residuals import ResidualReport

__all__ = [
    "SimpleFunctionMatrix",
    "qam",
    "lhs_mixed_mean",
    "rhs_mixed_mean",
    "commutation_residual",
    "scale_invariance_residual",
]


class SimpleFunctionMatrix:
    """Values of a simple function on the atom grid of a product space.

    Rows index the atoms of X, columns the atoms of Y.  Values must be
    finite; membership in a generator's domain is checked where the matrix
    is consumed, since the matrix itself is generator-agnostic.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("simple-function values must form a non-empty 2-D grid")
        if not np.all(np.isfinite(arr)):
            raise ValueError("simple-function values must be finite")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    def row(self, i: int) -> np.ndarray:
        return self._values[i, :]

    def column(self, j: int) -> np.ndarray:
        return self._values[:, j]

    def transposed(self) -> "SimpleFunctionMatrix":
        return SimpleFunctionMatrix(self._values.T)

    @classmethod
    def from_json(cls, doc: dict) -> "SimpleFunctionMatrix":
        """Build from ``{"values": [[...], ...]}`` (rows = X atoms)."""
        if not isinstance(doc, dict) or "values" not in doc:
            raise ValueError("h document must be an object with a 'values' key")
        return cls(doc["values"])

    def to_json(self) -> dict:
        return {"values": self._values.tolist()}

    def __repr__(self) -> str:
        return f"SimpleFunctionMatrix(shape={self.shape})"


# ---------------------------------------------------------------------------
# Means
# ---------------------------------------------------------------------------

def qam(gen: Generator, space: DiscreteMeasureSpace, values: Sequence[float]) -> float:
    """Quasi-arithmetic mean of per-atom values under the given generator.

    Raises DomainError if a value is outside the generator's domain and
    RangeError if the integral of the transformed values escapes the
    generator's range (possible for real-valued generators off unit mass).
    """
    vals = np.asarray(values, dtype=float)
    if vals.shape != (len(space),):
        raise ValueError(f"expected {len(space)} values, got shape {vals.shape}")
    transformed = gen.eval(vals)
    integral = space.integrate(transformed)
    return gen.inverse(integral)


def lhs_mixed_mean(
    f: Generator, g: Generator, grid: ProductGrid, h: SimpleFunctionMatrix
) -> float:
    """Inner g-mean over Y per X atom, then outer f-mean over X."""
    m, n = grid.shape
    if h.shape != (m, n):
        raise ValueError(f"h has shape {h.shape}, grid expects {(m, n)}")
    inner = np.empty(m)
    for i in range(m):
        try:
            inner[i] = qam(g, grid.space_y, h.row(i))
        except (RangeError, DomainError) as exc:
            raise RangeError(f"inner mean over Y failed at X atom {i}: {exc}",
                             stage="inner-Y") from exc
    try:
        return qam(f, grid.space_x, inner)
    except (RangeError, DomainError) as exc:
        raise RangeError(f"outer mean over X failed: {exc}", stage="outer-X") from exc


def rhs_mixed_mean(
    f: Generator, g: Generator, grid: ProductGrid, h: SimpleFunctionMatrix
) -> float:
    """Inner f-mean over X per Y atom, then outer g-mean over Y."""
    m, n = grid.shape
    if h.shape != (m, n):
        raise ValueError(f"h has shape {h.shape}, grid expects {(m, n)}")
    inner = np.empty(n)
    for j in range(n):
        try:
            inner[j] = qam(f, grid.space_x, h.column(j))
        except (RangeError, DomainError) as exc:
            raise RangeError(f"inner mean over X failed at Y atom {j}: {exc}",
                             stage="inner-X") from exc
    try:
        return qam(g, grid.space_y, inner)
    except (RangeError, DomainError) as exc:
        raise RangeError(f"outer mean over Y failed: {exc}", stage="outer-Y") from exc


def commutation_residual(
    f: Generator, g: Generator, grid: ProductGrid, h: SimpleFunctionMatrix
) -> ResidualReport:
    """Evaluate both partially mixed means and report their disagreement."""
    return ResidualReport.from_sides(
        lhs_mixed_mean(f, g, grid, h), rhs_mixed_mean(f, g, grid, h)
    )


def scale_invariance_residual(
    gen: Generator,
    alpha: float,
    space: DiscreteMeasureSpace,
    values: Sequence[float],
) -> ResidualReport:
    """Compare the mean under ``gen`` with the mean under ``alpha * gen``.

    These agree identically for every positive alpha, on any finite
    measure space; the residual measures only floating-point noise.
    """
    from .generators import scale

    lhs = qam(gen, space, values)
    rhs = qam(scale(gen, alpha), space, values)
    return ResidualReport.from_sides(lhs, rhs)
