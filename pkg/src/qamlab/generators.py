"""Strictly monotone generator functions and their equivalence relations.

A generator is a continuous, strictly monotone real function on an
interval, together with an inverse.  The catalog covers both settings in
which the partially mixed means commute:

* ``PROBABILITY``: any continuous injection into the reals is admissible
  (means are well posed on probability spaces); the commuting pairs are
  the affine-equivalent ones, f = a*g + b with a != 0.
* ``FINITE_MEASURE``: admissible generators are continuous bijections of
  an open interval onto (0, inf); the commuting pairs are the
  proportional ones, f = c*g with c > 0.

Families: ``ExpGenerator(k)`` (x -> exp(k x) on R), ``PowerGenerator(p)``
(x -> x**p on (0, inf)), ``IdentityGenerator`` and ``LogGenerator``
(real-valued, not onto (0, inf)), plus ``scale`` and ``affine`` wrappers.
Exponents/powers of either sign give both monotone directions.

Evaluation and inversion accept scalars or numpy arrays.  Families with a
closed-form inverse use it; anything else falls back to bracketed
bisection (geometric bracket expansion from an interior seed, 200
iteration cap, 1e-12 relative tolerance), which converges unconditionally
for strictly monotone functions.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, RangeError

__all__ = [
    "Interval",
    "CodomainKind",
    "MeanSetting",
    "Generator",
    "ExpGenerator",
    "PowerGenerator",
    "IdentityGenerator",
    "LogGenerator",
    "ScaledGenerator",
    "AffineGenerator",
    "scale",
    "affine",
    "validate_for_setting",
    "is_proportional",
    "is_affine_equivalent",
    "generator_from_json",
]

_BISECT_MAX_ITER = 200
_BISECT_REL_TOL = 1e-12


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """A real interval with endpoint openness flags.

    Infinite endpoints must be open.  ``contains`` works elementwise on
    arrays; ``sample_points`` returns a fixed deterministic grid spread
    across the interior, geometric toward infinite endpoints, used by the
    sampled equivalence checks.
    """

    lower: float
    upper: float
    lower_open: bool = True
    upper_open: bool = True

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"interval needs lower < upper, got [{self.lower}, {self.upper}]")
        if math.isinf(self.lower) and not self.lower_open:
            raise ValueError("an infinite lower endpoint must be open")
        if math.isinf(self.upper) and not self.upper_open:
            raise ValueError("an infinite upper endpoint must be open")

    @property
    def is_open(self) -> bool:
        return self.lower_open and self.upper_open

    def contains(self, x) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        lo_ok = (x > self.lower) if self.lower_open else (x >= self.lower)
        hi_ok = (x < self.upper) if self.upper_open else (x <= self.upper)
        ok = lo_ok & hi_ok & np.isfinite(x)
        return bool(ok) if ok.ndim == 0 else ok

    def contains_all(self, x) -> bool:
        return bool(np.all(self.contains(x)))

    def intersection(self, other: "Interval") -> "Interval | None":
        if self.lower > other.lower or (self.lower == other.lower and self.lower_open):
            lo, lo_open = self.lower, self.lower_open
        else:
            lo, lo_open = other.lower, other.lower_open
        if self.upper < other.upper or (self.upper == other.upper and self.upper_open):
            hi, hi_open = self.upper, self.upper_open
        else:
            hi, hi_open = other.upper, other.upper_open
        if not lo < hi:
            return None
        return Interval(lo, hi, lo_open, hi_open)

    def sample_points(self, n: int = 17) -> np.ndarray:
        """Deterministic interior sample grid with n points."""
        if n < 2:
            raise ValueError("need at least 2 sample points")
        lo_inf = math.isinf(self.lower)
        hi_inf = math.isinf(self.upper)
        if not lo_inf and not hi_inf:
            margin = 0.02 * (self.upper - self.lower)
            return np.linspace(self.lower + margin, self.upper - margin, n)
        if lo_inf and hi_inf:
            # symmetric spread over roughly [-5.8, 5.8], denser near 0
            return np.tan(np.linspace(-1.4, 1.4, n))
        if not lo_inf:
            scale_ = max(1.0, abs(self.lower))
            return self.lower + scale_ * np.geomspace(0.1, 10.0, n)
        scale_ = max(1.0, abs(self.upper))
        return self.upper - scale_ * np.geomspace(0.1, 10.0, n)[::-1]


REAL_LINE = Interval(-math.inf, math.inf)
POSITIVE_HALF_LINE = Interval(0.0, math.inf)


class CodomainKind(Enum):
    """Classification of a generator's range."""

    ALL_REALS = "all_reals"          # maps into R (not necessarily onto)
    POSITIVE_REALS = "positive_reals"  # bijection onto (0, inf)


class MeanSetting(Enum):
    """The two hypotheses under which mixed-mean commutation is studied."""

    PROBABILITY = "probability"
    FINITE_MEASURE = "finite_measure"


# ---------------------------------------------------------------------------
# Generator base class
# ---------------------------------------------------------------------------

class Generator(ABC):
    """A strictly monotone continuous function with a computable inverse.

    Subclasses set ``domain``, ``codomain`` (the exact range interval),
    and ``increasing``, and implement ``_eval_raw``.  ``_inverse_raw``
    defaults to bracketed bisection against ``_eval_raw``; subclasses
    override it when a closed form exists.
    """

    domain: Interval
    codomain: Interval
    increasing: bool

    # -- public, validating API -------------------------------------------
    def eval(self, x):
        """Evaluate at a scalar or array; every element must be in the domain."""
        arr = np.asarray(x, dtype=float)
        if not self.domain.contains_all(arr):
            raise DomainError(f"argument outside the domain of {self.describe()}")
        out = self._eval_raw(arr)
        return float(out) if arr.ndim == 0 else out

    __call__ = eval

    def inverse(self, y):
        """Unique x with eval(x) = y; raises RangeError when y is not attained."""
        arr = np.asarray(y, dtype=float)
        if not self.codomain.contains_all(arr):
            raise RangeError(f"value outside the range of {self.describe()}")
        out = self._inverse_raw(arr)
        return float(out) if arr.ndim == 0 else out

    @property
    def codomain_kind(self) -> CodomainKind:
        cod = self.codomain
        if cod.lower == 0.0 and cod.lower_open and math.isinf(cod.upper):
            return CodomainKind.POSITIVE_REALS
        return CodomainKind.ALL_REALS

    # -- raw kernels (no validation, array in / array out) ------------------
    @abstractmethod
    def _eval_raw(self, x: np.ndarray) -> np.ndarray:
        ...

    def _inverse_raw(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.ndim == 0:
            return np.float64(_bisect_inverse(self, float(y)))
        flat = np.array([_bisect_inverse(self, float(t)) for t in y.ravel()])
        return flat.reshape(y.shape)

    # -- description ---------------------------------------------------------
    @abstractmethod
    def describe(self) -> str:
        ...

    @abstractmethod
    def to_json(self) -> dict:
        ...

    def __repr__(self) -> str:
        return f"<Generator {self.describe()}>"


def _interior_seed(dom: Interval) -> float:
    if math.isfinite(dom.lower) and math.isfinite(dom.upper):
        return 0.5 * (dom.lower + dom.upper)
    if math.isfinite(dom.lower):
        return dom.lower + 1.0
    if math.isfinite(dom.upper):
        return dom.upper - 1.0
    return 0.0


def _bisect_inverse(gen: Generator, y: float) -> float:
    """Invert a strictly monotone generator by bracketing + bisection."""
    dom = gen.domain
    f = lambda x: float(gen._eval_raw(np.float64(x)))
    lo = hi = _interior_seed(dom)
    flo = fhi = f(lo)
    step = 1.0
    # expand geometrically until [f(lo), f(hi)] straddles y
    for _ in range(_BISECT_MAX_ITER):
        if min(flo, fhi) <= y <= max(flo, fhi):
            break
        if math.isfinite(dom.lower):
            lo = 0.5 * (lo + dom.lower)  # approach an open endpoint by halving
        else:
            lo -= step
        if math.isfinite(dom.upper):
            hi = 0.5 * (hi + dom.upper)
        else:
            hi += step
        flo, fhi = f(lo), f(hi)
        step *= 2.0
    else:
        raise RangeError(f"could not bracket {y} in the range of {gen.describe()}")

    increasing = fhi >= flo
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _BISECT_REL_TOL * max(1.0, abs(mid)):
            return mid
        fm = f(mid)
        if (fm < y) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Catalog families
# ---------------------------------------------------------------------------

class ExpGenerator(Generator):
    """x -> exp(k*x) on the real line, k != 0; bijection onto (0, inf)."""

    def __init__(self, k: float):
        k = float(k)
        if k == 0.0 or not math.isfinite(k):
            raise ValueError("exp generator requires a finite nonzero rate k")
        self.k = k
        self.domain = REAL_LINE
        self.codomain = POSITIVE_HALF_LINE
        self.increasing = k > 0

    def _eval_raw(self, x):
        return np.exp(self.k * x)

    def _inverse_raw(self, y):
        return np.log(y) / self.k

    def describe(self) -> str:
        return f"exp(k={self.k:g})"

    def to_json(self) -> dict:
        return {"family": "exp", "k": self.k}


class PowerGenerator(Generator):
    """x -> x**p on (0, inf), p != 0; bijection onto (0, inf)."""

    def __init__(self, p: float):
        p = float(p)
        if p == 0.0 or not math.isfinite(p):
            raise ValueError("power generator requires a finite nonzero exponent p")
        self.p = p
        self.domain = POSITIVE_HALF_LINE
        self.codomain = POSITIVE_HALF_LINE
        self.increasing = p > 0

    def _eval_raw(self, x):
        return np.power(x, self.p)

    def _inverse_raw(self, y):
        return np.power(y, 1.0 / self.p)

    def describe(self) -> str:
        return f"power(p={self.p:g})"

    def to_json(self) -> dict:
        return {"family": "power", "p": self.p}


class IdentityGenerator(Generator):
    """x -> x on the real line."""

    def __init__(self):
        self.domain = REAL_LINE
        self.codomain = REAL_LINE
        self.increasing = True

    def _eval_raw(self, x):
        return np.asarray(x, dtype=float) + 0.0

    def _inverse_raw(self, y):
        return np.asarray(y, dtype=float) + 0.0

    def describe(self) -> str:
        return "identity"

    def to_json(self) -> dict:
        return {"family": "identity"}


class LogGenerator(Generator):
    """x -> ln(x) on (0, inf); bijection onto the real line."""

    def __init__(self):
        self.domain = POSITIVE_HALF_LINE
        self.codomain = REAL_LINE
        self.increasing = True

    def _eval_raw(self, x):
        return np.log(x)

    def _inverse_raw(self, y):
        return np.exp(y)

    def describe(self) -> str:
        return "log"

    def to_json(self) -> dict:
        return {"family": "log"}


# ---------------------------------------------------------------------------
# Wrappers
# ---------------------------------------------------------------------------

def _scaled_interval(iv: Interval, a: float, b: float) -> Interval:
    """Image of an interval under x -> a*x + b, a != 0."""
    lo, hi = a * iv.lower + b, a * iv.upper + b
    lo_open, hi_open = iv.lower_open, iv.upper_open
    if a < 0:
        lo, hi = hi, lo
        lo_open, hi_open = hi_open, lo_open
    return Interval(lo, hi, lo_open, hi_open)


class ScaledGenerator(Generator):
    """c * inner(x) with c > 0; preserves a positive-bijection range."""

    def __init__(self, c: float, inner: Generator):
        c = float(c)
        if not (c > 0.0) or not math.isfinite(c):
            raise ValueError("scale factor must be a finite positive real")
        self.c = c
        self.inner = inner
        self.domain = inner.domain
        self.codomain = _scaled_interval(inner.codomain, c, 0.0)
        self.increasing = inner.increasing

    def _eval_raw(self, x):
        return self.c * self.inner._eval_raw(x)

    def _inverse_raw(self, y):
        return self.inner._inverse_raw(np.asarray(y, dtype=float) / self.c)

    def describe(self) -> str:
        return f"{self.c:g}*{self.inner.describe()}"

    def to_json(self) -> dict:
        doc = self.inner.to_json()
        doc["scale"] = self.c
        return doc


class AffineGenerator(Generator):
    """a * inner(x) + b with a != 0.

    The range follows the affine image of the inner range; the result is a
    positive bijection only when that image is exactly (0, inf), i.e. for
    b = 0, a > 0 over a positive-bijection inner generator.
    """

    def __init__(self, a: float, b: float, inner: Generator):
        a, b = float(a), float(b)
        if a == 0.0 or not math.isfinite(a) or not math.isfinite(b):
            raise ValueError("affine wrapper requires finite a != 0 and finite b")
        self.a = a
        self.b = b
        self.inner = inner
        self.domain = inner.domain
        self.codomain = _scaled_interval(inner.codomain, a, b)
        self.increasing = inner.increasing == (a > 0)

    def _eval_raw(self, x):
        return self.a * self.inner._eval_raw(x) + self.b

    def _inverse_raw(self, y):
        return self.inner._inverse_raw((np.asarray(y, dtype=float) - self.b) / self.a)

    def describe(self) -> str:
        return f"{self.a:g}*{self.inner.describe()}{self.b:+g}"

    def to_json(self) -> dict:
        doc = self.inner.to_json()
        doc["affine"] = {"a": self.a, "b": self.b}
        return doc


def scale(gen: Generator, c: float) -> Generator:
    """Generator x -> c * gen(x); requires c > 0."""
    return ScaledGenerator(c, gen)


def affine(gen: Generator, a: float, b: float) -> Generator:
    """Generator x -> a * gen(x) + b; requires a != 0."""
    return AffineGenerator(a, b, gen)


# ---------------------------------------------------------------------------
# Validation and equivalence relations
# ---------------------------------------------------------------------------

def validate_for_setting(gen: Generator, setting: MeanSetting) -> bool:
    """Whether a generator is admissible under the given setting.

    PROBABILITY accepts any strictly monotone continuous injection into
    the reals (checked on a sample grid).  FINITE_MEASURE additionally
    requires an open domain and a range of exactly (0, inf).
    """
    xs = gen.domain.sample_points(17)
    vals = gen._eval_raw(xs)
    diffs = np.diff(vals)
    monotone = bool(np.all(diffs > 0)) or bool(np.all(diffs < 0))
    if not monotone or not np.all(np.isfinite(vals)):
        return False
    if setting is MeanSetting.PROBABILITY:
        return True
    if setting is MeanSetting.FINITE_MEASURE:
        return gen.codomain_kind is CodomainKind.POSITIVE_REALS and gen.domain.is_open
    raise ValueError(f"unknown setting: {setting!r}")


def _common_sample_grid(f: Generator, g: Generator, sample_count: int) -> np.ndarray:
    common = f.domain.intersection(g.domain)
    if common is None:
        raise ValueError(
            f"domain mismatch: {f.describe()} and {g.describe()} share no interval"
        )
    return common.sample_points(sample_count)


def is_proportional(
    f: Generator, g: Generator, sample_count: int = 17, tol: float = 1e-8
) -> float | None:
    """Return c > 0 with f = c * g on a shared sample grid, or None.

    The candidate ratio is anchored at the sample where |g| is largest and
    then verified pointwise on the whole grid.
    """
    xs = _common_sample_grid(f, g, sample_count)
    fv = f.eval(xs)
    gv = g.eval(xs)
    anchor = int(np.argmax(np.abs(gv)))
    if gv[anchor] == 0.0:
        return None
    c = fv[anchor] / gv[anchor]
    if not math.isfinite(c) or c <= 0.0:
        return None
    scale_ = np.maximum(1.0, np.maximum(np.abs(fv), np.abs(gv)))
    if np.all(np.abs(fv - c * gv) <= tol * scale_):
        return float(c)
    return None


def is_affine_equivalent(
    f: Generator, g: Generator, sample_count: int = 17, tol: float = 1e-8
) -> tuple[float, float] | None:
    """Return (a, b) with f = a * g + b on a shared sample grid, or None.

    (a, b) is fitted from the two extreme samples and verified on all of
    them; g is injective, so the fit denominator cannot vanish.
    """
    xs = _common_sample_grid(f, g, sample_count)
    fv = f.eval(xs)
    gv = g.eval(xs)
    denom = gv[-1] - gv[0]
    if denom == 0.0:
        return None
    a = (fv[-1] - fv[0]) / denom
    if not math.isfinite(a) or a == 0.0:
        return None
    b = fv[0] - a * gv[0]
    scale_ = np.maximum(1.0, np.maximum(np.abs(fv), np.abs(gv)))
    if np.all(np.abs(fv - (a * gv + b)) <= tol * scale_):
        return float(a), float(b)
    return None


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def generator_from_json(doc: dict) -> Generator:
    """Build a generator from its JSON document.

    Families: ``{"family": "exp", "k": 2.0}``, ``{"family": "power",
    "p": -1.0}``, ``{"family": "identity"}``, ``{"family": "log"}``.
    Optional wrappers ``"scale"`` and ``"affine": {"a": ..., "b": ...}``
    are applied outermost-last, i.e. affine(scale(base)).
    """
    if not isinstance(doc, dict) or "family" not in doc:
        raise ValueError("generator document must be an object with a 'family' key")
    family = doc["family"]
    if family == "exp":
        gen: Generator = ExpGenerator(doc.get("k", 1.0))
    elif family == "power":
        if "p" not in doc:
            raise ValueError("power generator document requires an exponent 'p'")
        gen = PowerGenerator(doc["p"])
    elif family == "identity":
        gen = IdentityGenerator()
    elif family == "log":
        gen = LogGenerator()
    else:
        raise ValueError(f"unknown generator family: {family!r}")
    if "scale" in doc:
        gen = ScaledGenerator(doc["scale"], gen)
    if "affine" in doc:
        aff = doc["affine"]
        if not isinstance(aff, dict) or "a" not in aff or "b" not in aff:
            raise ValueError("affine wrapper must be an object with 'a' and 'b'")
        gen = AffineGenerator(aff["a"], aff["b"], gen)
    return gen
