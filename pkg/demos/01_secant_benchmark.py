"""
Secant benchmark: a pole the solver has to find
================================================

With constant ``r = 1`` and ``s = -1`` the reduced equation has the explicit
solution ``phi = sqrt(2) sec(pi/4 (x/x_star + 1))`` with ``x_star = pi/4``.
We integrate from the matching initial data and compare.
"""

import math

import numpy as np

from kerrblowup import analytic as an
from kerrblowup import InitialConditions, SlabProfile, integrate

params = an.SecSolutionParams(eps_l=1.0, theta=0.0, sigma=-1.0)
c0, c1 = an.initial_conditions(params)
print(f"initial data  phi(0) = {c0.real:.6f}, phi'(0) = {c1.real:.6f}")

# The slab is deliberately thicker than the pole position.
profile = SlabProfile.constant(1.0, -1.0, 2.0)
report = integrate(profile, InitialConditions(c0, c1))
tr = report.trajectory

# %%
# Agreement with the closed form, away from the pole
keep = np.abs(tr.phi) <= 1e3
exact = np.array([an.sec_solution(params, z) for z in tr.z[keep]])
rel = np.abs(tr.phi[keep] - exact) / np.abs(exact)
print(f"accepted steps {report.accepted_steps}, rejected {report.rejected_steps}")
print(f"max relative error while |phi| <= 1e3: {rel.max():.2e}")

# %%
# The blow-up point comes from a straight-line fit of 1/|phi| near the end
print(f"stopped at x = {report.z_reached:.10f} ({report.reason})")
print(f"estimated x_star = {report.z_star_estimate:.10f}, exact pi/4 = {math.pi / 4:.10f}")

# %%
# The comparison bounds bracket it from above
b = report.bounds
print(f"gamma (quadrature)  = {b.gamma_quadrature:.6f}")
print(f"gamma (closed form) = {b.gamma_closed_q:.6f}")
print(f"2.023/(beta|b|)^1/3 = {b.l_star_nondim:.6f}")
