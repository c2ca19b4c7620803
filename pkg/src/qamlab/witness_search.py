"""Exhaustive search for simple functions on which two means fail to commute.

For a non-proportional pair of positive bijections the mixed means must
disagree on some simple function; this module finds one constructively by
maximizing the commutation residual over a value grid.  The 2x2 block
family is searched first (it is the minimal sufficient test class), with
a full matrix search available for independent confirmation at small
shapes.

Both searches are deterministic: the grid may be partitioned across
workers, each partition reports its local maximum together with the
smallest flat index attaining it, and the merge takes the global maximum
with a lexicographic tie-break, so the result is independent of the
schedule and of the worker count.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, RangeError
from .generators import Generator, Interval
from .measure_space import DiscreteMeasureSpace, ProductGrid
from .means import SimpleFunctionMatrix, commutation_residual
from .phi_reduction import BlockScenario, block_scenario_residual
from .residuals import ResidualReport

__all__ = [
    "Spacing",
    "GridSpec",
    "Witness",
    "block_witness_search",
    "full_witness_search",
    "refine_witness",
    "MAX_FULL_SEARCH_EVALS",
]

MAX_FULL_SEARCH_EVALS = 10_000_000

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# accept a refinement step only if it beats the incumbent by more than noise
_IMPROVEMENT_MARGIN = 1e-15


class Spacing(Enum):
    LINEAR = "linear"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class GridSpec:
    """A one-dimensional value grid for search coordinates."""

    points_per_axis: int
    value_range: tuple[float, float]
    spacing: Spacing = Spacing.GEOMETRIC

    def __post_init__(self):
        lo, hi = self.value_range
        if self.points_per_axis < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError("grid range must be a finite interval with lo < hi")
        if self.spacing is Spacing.GEOMETRIC and not lo > 0.0:
            raise ValueError("geometric spacing needs a strictly positive range")

    def points(self) -> np.ndarray:
        lo, hi = self.value_range
        if self.spacing is Spacing.GEOMETRIC:
            return np.geomspace(lo, hi, self.points_per_axis)
        return np.linspace(lo, hi, self.points_per_axis)


@dataclass(frozen=True)
class Witness:
    """A simple function on which the two mixed means disagree.

    ``kind`` is "block" (masses = (a1, a2, b1, b2), values = (x, y, z, w))
    or "matrix" (masses = (x-weights, y-weights), values = row tuples).
    """

    kind: str
    masses: tuple
    values: tuple
    report: ResidualReport
    skipped_points: int = 0

    def to_json_dict(self) -> dict:
        if self.kind == "block":
            masses = list(self.masses)
            values = list(self.values)
        else:
            masses = [list(self.masses[0]), list(self.masses[1])]
            values = [list(row) for row in self.values]
        return {
            "kind": self.kind,
            "masses": masses,
            "values": values,
            "lhs": self.report.lhs,
            "rhs": self.report.rhs,
            "abs_residual": self.report.abs_residual,
            "rel_residual": self.report.rel_residual,
            "skipped_points": self.skipped_points,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# Masked raw evaluation: invalid points become NaN instead of raising
# ---------------------------------------------------------------------------

def _masked_eval(gen: Generator, arr: np.ndarray) -> np.ndarray:
    ok = gen.domain.contains(arr)
    safe = _safe_point(gen.domain)
    out = gen._eval_raw(np.where(ok, arr, safe))
    return np.where(ok, out, np.nan)


def _masked_inverse(gen: Generator, arr: np.ndarray) -> np.ndarray:
    ok = gen.codomain.contains(arr)
    safe = _safe_point(gen.codomain)
    out = gen._inverse_raw(np.where(ok, arr, safe))
    return np.where(ok, out, np.nan)


def _safe_point(iv: Interval) -> float:
    if math.isfinite(iv.lower) and math.isfinite(iv.upper):
        return 0.5 * (iv.lower + iv.upper)
    if math.isfinite(iv.lower):
        return iv.lower + 1.0
    if math.isfinite(iv.upper):
        return iv.upper - 1.0
    return 0.0


def _grid_points(grid, f: Generator, g: Generator) -> np.ndarray:
    pts = grid.points() if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    if pts.ndim != 1 or pts.size < 1:
        raise ValueError("search grid must be a one-dimensional set of points")
    if not (f.domain.contains_all(pts) and g.domain.contains_all(pts)):
        raise ValueError("grid points must lie strictly inside both generator domains")
    return pts


def _rel_residuals(lhs: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, int]:
    """Relative residuals with invalid entries set to -1; returns skip count."""
    valid = np.isfinite(lhs) & np.isfinite(rhs)
    skipped = int(lhs.size - np.count_nonzero(valid))
    denom = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    with np.errstate(invalid="ignore"):
        rel = np.abs(lhs - rhs) / denom
    return np.where(valid, rel, -1.0), skipped


def _chunk_ranges(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total))
    bounds = np.linspace(0, total, workers + 1, dtype=int)
    return [(int(bounds[i]), int(bounds[i + 1])) for i in range(workers)
            if bounds[i] < bounds[i + 1]]


def _merge_best(results):
    """Global (max value, smallest flat index) over per-chunk results."""
    best_val, best_idx, skipped = -math.inf, -1, 0
    for val, idx, skip in results:
        skipped += skip
        if val > best_val or (val == best_val and idx != -1 and (best_idx == -1 or idx < best_idx)):
            best_val, best_idx = val, idx
    return best_val, best_idx, skipped


def _run_chunks(chunk_fn, ranges, workers: int):
    if workers <= 1 or len(ranges) <= 1:
        return [chunk_fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: chunk_fn(*r), ranges))


# ---------------------------------------------------------------------------
# Block search
# ---------------------------------------------------------------------------

def block_witness_search(
    f: Generator,
    g: Generator,
    alpha1: float,
    alpha2: float,
    beta1: float,
    beta2: float,
    grid: GridSpec | Sequence[float],
    threshold: float = 1e-4,
    workers: int = 1,
) -> Witness | None:
    """Exhaustively search 2x2 block functions over grid^4 of (x, y, z, w).

    Returns the lexicographically first scenario attaining the maximal
    relative residual if that maximum exceeds ``threshold``, else None.
    Grid points whose evaluation leaves a generator's domain or range are
    skipped and counted, not fatal.
    """
    for name, m in (("alpha1", alpha1), ("alpha2", alpha2), ("beta1", beta1), ("beta2", beta2)):
        if not (m > 0.0 and math.isfinite(m)):
            raise ValueError(f"mass {name} must be a finite positive real")
    pts = _grid_points(grid, f, g)
    npts = pts.size

    with np.errstate(all="ignore"):
        gv = _masked_eval(g, pts)
        fv = _masked_eval(f, pts)
        # inner means for every value pair, computed once
        inner_y = _masked_inverse(g, beta1 * gv[:, None] + beta2 * gv[None, :])
        f_of_inner_y = _masked_eval(f, inner_y)                      # (i, j)
        inner_x = _masked_inverse(f, alpha1 * fv[:, None] + alpha2 * fv[None, :])
        g_of_inner_x = _masked_eval(g, inner_x)                      # (i, k)

    def chunk(lo: int, hi: int):
        with np.errstate(all="ignore"):
            lhs = _masked_inverse(
                f,
                alpha1 * f_of_inner_y[lo:hi, :, None, None]
                + alpha2 * f_of_inner_y[None, None, :, :],
            )
            rhs = _masked_inverse(
                g,
                beta1 * g_of_inner_x[lo:hi, None, :, None]
                + beta2 * g_of_inner_x[None, :, None, :],
            )
        rel, skipped = _rel_residuals(lhs, rhs)
        flat = rel.ravel()
        local = int(np.argmax(flat))
        return float(flat[local]), lo * npts**3 + local, skipped

    results = _run_chunks(chunk, _chunk_ranges(npts, workers), workers)
    best_val, best_idx, skipped = _merge_best(results)
    if not best_val > threshold:
        return None

    xi, rem = divmod(best_idx, npts**3)
    yi, rem = divmod(rem, npts**2)
    zi, wi = divmod(rem, npts)
    scenario = BlockScenario(
        alpha1, alpha2, beta1, beta2,
        float(pts[xi]), float(pts[yi]), float(pts[zi]), float(pts[wi]),
    )
    report = block_scenario_residual(f, g, scenario)
    return Witness(
        kind="block",
        masses=(alpha1, alpha2, beta1, beta2),
        values=scenario.block_values,
        report=report,
        skipped_points=skipped,
    )


# ---------------------------------------------------------------------------
# Full matrix search
# ---------------------------------------------------------------------------

def full_witness_search(
    f: Generator,
    g: Generator,
    grid_shape: tuple[int, int],
    spaces: tuple[DiscreteMeasureSpace, DiscreteMeasureSpace],
    value_grid: GridSpec | Sequence[float],
    threshold: float = 1e-4,
    workers: int = 1,
    batch_size: int = 65536,
) -> Witness | None:
    """Exhaustively search value matrices of the given shape.

    Every matrix entry ranges over the value grid, so the search costs
    ``points ** (m*n)`` evaluations; anything beyond 1e7 is refused up
    front.  Tie-breaking and determinism match the block search.
    """
    m, n = grid_shape
    space_x, space_y = spaces
    if len(space_x) != m or len(space_y) != n:
        raise ValueError(f"spaces of sizes {(len(space_x), len(space_y))} do not match shape {(m, n)}")
    pts = _grid_points(value_grid, f, g)
    npts = pts.size
    cells = m * n
    total = npts**cells
    if total > MAX_FULL_SEARCH_EVALS:
        raise ValueError(
            f"search budget exceeded: {npts}^{cells} = {total} > {MAX_FULL_SEARCH_EVALS}"
        )
    wx = space_x.weights
    wy = space_y.weights
    radix = npts ** np.arange(cells - 1, -1, -1, dtype=np.int64)

    def chunk(lo: int, hi: int):
        best_val, best_idx, skipped = -math.inf, -1, 0
        for start in range(lo, hi, batch_size):
            stop = min(start + batch_size, hi)
            idx = np.arange(start, stop, dtype=np.int64)
            digits = (idx[:, None] // radix[None, :]) % npts
            values = pts[digits].reshape(stop - start, m, n)
            with np.errstate(all="ignore"):
                gv = _masked_eval(g, values)
                inner_y = _masked_inverse(g, np.sum(gv * wy[None, None, :], axis=2))
                f_inner = _masked_eval(f, inner_y)
                lhs = _masked_inverse(f, np.sum(f_inner * wx[None, :], axis=1))
                fv = _masked_eval(f, values)
                inner_x = _masked_inverse(f, np.sum(fv * wx[None, :, None], axis=1))
                g_inner = _masked_eval(g, inner_x)
                rhs = _masked_inverse(g, np.sum(g_inner * wy[None, :], axis=1))
            rel, skip = _rel_residuals(lhs, rhs)
            skipped += skip
            local = int(np.argmax(rel))
            if rel[local] > best_val:
                best_val, best_idx = float(rel[local]), start + local
        return best_val, best_idx, skipped

    results = _run_chunks(chunk, _chunk_ranges(total, workers), workers)
    best_val, best_idx, skipped = _merge_best(results)
    if not best_val > threshold:
        return None

    digits = (best_idx // radix) % npts
    matrix = SimpleFunctionMatrix(pts[digits].reshape(m, n))
    report = commutation_residual(f, g, ProductGrid(space_x, space_y), matrix)
    return Witness(
        kind="matrix",
        masses=(tuple(float(w) for w in wx), tuple(float(w) for w in wy)),
        values=tuple(tuple(float(v) for v in row) for row in matrix.values),
        report=report,
        skipped_points=skipped,
    )


# ---------------------------------------------------------------------------
# Local refinement
# ---------------------------------------------------------------------------

def refine_witness(
    f: Generator,
    g: Generator,
    start: Witness,
    iterations: int,
    step_fraction: float = 0.25,
) -> Witness:
    """Coordinate-wise golden-section ascent of the residual from a witness.

    Each sweep maximizes the relative residual one coordinate at a time
    over a local bracket clipped to the common domain; a move is kept only
    when it strictly improves, so the result never falls below the start.
    Deterministic given its inputs.
    """
    if iterations <= 0:
        return start

    if start.kind == "block":
        coords = [float(v) for v in start.values]
        a1, a2, b1, b2 = start.masses

        def rel_at(vals: list[float]) -> float:
            try:
                sc = BlockScenario(a1, a2, b1, b2, *vals)
                return block_scenario_residual(f, g, sc).rel_residual
            except (RangeError, DomainError, ValueError):
                return -math.inf

        def rebuild(vals: list[float]) -> Witness:
            sc = BlockScenario(a1, a2, b1, b2, *vals)
            return Witness("block", start.masses, sc.block_values,
                           block_scenario_residual(f, g, sc), start.skipped_points)
    else:
        shape = (len(start.values), len(start.values[0]))
        coords = [float(v) for row in start.values for v in row]
        grid = ProductGrid(
            DiscreteMeasureSpace(start.masses[0]), DiscreteMeasureSpace(start.masses[1])
        )

        def rel_at(vals: list[float]) -> float:
            try:
                mat = SimpleFunctionMatrix(np.asarray(vals).reshape(shape))
                return commutation_residual(f, g, grid, mat).rel_residual
            except (RangeError, DomainError, ValueError):
                return -math.inf

        def rebuild(vals: list[float]) -> Witness:
            mat = SimpleFunctionMatrix(np.asarray(vals).reshape(shape))
            return Witness(
                "matrix", start.masses,
                tuple(tuple(float(v) for v in row) for row in mat.values),
                commutation_residual(f, g, grid, mat), start.skipped_points,
            )

    common = f.domain.intersection(g.domain)
    if common is None:
        raise ValueError("generators share no domain interval")
    best_rel = start.report.rel_residual
    improved = False

    for _ in range(iterations):
        for idx in range(len(coords)):
            v = coords[idx]
            delta = step_fraction * max(1.0, abs(v))
            lo, hi = v - delta, v + delta
            if math.isfinite(common.lower) and lo <= common.lower:
                lo = 0.5 * (v + common.lower)
            if math.isfinite(common.upper) and hi >= common.upper:
                hi = 0.5 * (v + common.upper)

            def at(t: float) -> float:
                coords[idx] = t
                val = rel_at(coords)
                coords[idx] = v
                return val

            # golden-section shrink, keeping the best point actually evaluated
            a, b = lo, hi
            c = b - _GOLDEN * (b - a)
            d = a + _GOLDEN * (b - a)
            fc, fd = at(c), at(d)
            cand_t, cand_val = (c, fc) if fc >= fd else (d, fd)
            for _ in range(32):
                if fc >= fd:
                    b, d, fd = d, c, fc
                    c = b - _GOLDEN * (b - a)
                    fc = at(c)
                else:
                    a, c, fc = c, d, fd
                    d = a + _GOLDEN * (b - a)
                    fd = at(d)
                t, val = (c, fc) if fc >= fd else (d, fd)
                if val > cand_val:
                    cand_t, cand_val = t, val
            if cand_val > best_rel + _IMPROVEMENT_MARGIN + 1e-12 * best_rel:
                coords[idx] = cand_t
                best_rel = cand_val
                improved = True

    return rebuild(coords) if improved else start
