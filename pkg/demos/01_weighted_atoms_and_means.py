"""Weighted atoms, integration, and quasi-arithmetic means.

A discrete measure space is just a list of positively weighted atoms; the
integral of a simple function is its weighted sum.  A generator w turns
integration into a mean: w^{-1}(integral of w(h)).  This script walks
through the basic behaviour, including the ways a non-unit total mass
changes the picture.
"""

import math

import numpy as np

from qamlab import (
    DiscreteMeasureSpace,
    ExpGenerator,
    IdentityGenerator,
    PowerGenerator,
    qam,
    scale,
    scale_invariance_residual,
)

print("=== spaces and integration ===")
space = DiscreteMeasureSpace([1.0, 2.0], labels=["a", "b"])
print(f"space {space}, total mass {space.total_mass}, non-degenerate: {space.is_non_degenerate}")
print(f"integral of (5, -1): {space.integrate([5.0, -1.0])}   (1*5 + 2*(-1))")

single = DiscreteMeasureSpace([5.0])
print(f"single atom space is degenerate: non-degenerate = {single.is_non_degenerate}")

print()
print("=== quasi-arithmetic means ===")
prob = DiscreteMeasureSpace([0.5, 0.5])
print(f"identity mean of (2, 4) on a probability space: {qam(IdentityGenerator(), prob, [2.0, 4.0])}")
print(f"power-2 mean of (2, 4):                         {qam(PowerGenerator(2.0), prob, [2.0, 4.0]):.6f}")
print(f"exp mean of (2, 4):                             {qam(ExpGenerator(1.0), prob, [2.0, 4.0]):.6f}")

# On probability spaces the mean is internal: it lies between min and max.
rng = np.random.default_rng(0)
vals = rng.uniform(0.5, 3.0, 4)
w = rng.uniform(0.2, 1.0, 4)
prob4 = DiscreteMeasureSpace(w / w.sum())
m = qam(PowerGenerator(-1.0), prob4, vals)
print(f"harmonic-type mean {m:.6f} lies in [{vals.min():.6f}, {vals.max():.6f}]")

print()
print("=== total mass matters ===")
# Off unit mass the mean is NOT internal and constants are not fixed points:
space12 = DiscreteMeasureSpace([1.0, 2.0])
m0 = qam(ExpGenerator(1.0), space12, [0.0, 0.0])
print(f"exp mean of the constant 0 on weights (1, 2): {m0:.6f} = ln(3), not 0")

print()
print("=== rescaling the generator never matters ===")
# c*w defines the same mean as w, on any finite measure space.
for alpha in (0.5, 2.0, 10.0):
    report = scale_invariance_residual(ExpGenerator(1.0), alpha, space12, [0.0, math.log(2.0)])
    print(f"alpha = {alpha:>4}: lhs {report.lhs:.12f} rhs {report.rhs:.12f} "
          f"rel residual {report.rel_residual:.2e}")
print("scaled generator at work: 2*exp evaluates to", scale(ExpGenerator(1.0), 2.0).eval(0.0))
