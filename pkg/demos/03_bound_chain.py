"""
How tight is the comparison bound?
==================================

For random admissible slabs we compare the numerical blow-up point with the
quadrature bound, the exact closed form for ``a = 0`` and the rounded
constant ``2.023``.
"""

import cmath
import math

import numpy as np

from kerrblowup import InitialConditions, ProfileSpec, SlabProfile, glassey_data, gamma_quadrature, integrate

rng = np.random.default_rng(0)
ratios = []
for _ in range(40):
    r = ProfileSpec.constant(complex(rng.uniform(-1, 2), rng.uniform(-0.3, 0.3)))
    s = ProfileSpec.constant(complex(rng.uniform(-2, -0.2), rng.uniform(-1, 1)))
    probe = SlabProfile(r, s, 1.0)
    floor = math.sqrt(2 * probe.a / -probe.b) if probe.a > 0 else 0.5
    arg = rng.uniform(-math.pi, math.pi)
    ic = InitialConditions(cmath.rect(1.5 * floor, arg), cmath.rect(1.0, arg + rng.uniform(-1, 1)))
    bound = gamma_quadrature(glassey_data(probe, ic))
    rep = integrate(SlabProfile(r, s, 1.5 * bound.gamma_quadrature + 1), ic)
    ratios.append(rep.z_star_estimate / bound.gamma_quadrature)
    assert bound.gamma_quadrature <= bound.gamma_closed_q <= bound.l_star_nondim

ratios = np.array(ratios)
print(f"x_star / gamma over {len(ratios)} slabs: min {ratios.min():.3f}, median {np.median(ratios):.3f}, max {ratios.max():.3f}")

# %%
# With no linear term (a = 0) and tiny alpha the quadrature reproduces the closed form
deg = gamma_quadrature(glassey_data(SlabProfile.constant(0.0, -1.0, 1.0), InitialConditions(1e-4, 1e4)))
print(f"a = 0: quadrature {deg.gamma_quadrature:.9f} vs closed form {deg.gamma_closed_q:.9f}")
