"""Closed-form secant blow-up solution of the lossless homogeneous slab.

For real constants ``eps_l`` and ``sigma < 0`` with ``r = eps_l - sin(theta)**2 > 0``
the Helmholtz equation

    E'' + k^2 [r + sigma |E|^2] E = 0

is solved by ``E(z) = A exp(i phase) sec[(pi/4)(z/z_star + 1)]`` with
``A = sqrt(2 r / -sigma)`` and ``z_star = pi / (4 k sqrt(r))``.  The solution
diverges as ``z -> z_star``.  Everything here is in physical units; with
``k = 1`` physical and nondimensional coordinates coincide.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, PoleDomainError


@dataclass(frozen=True)
class SecSolutionParams:
    eps_l: float
    theta: float
    sigma: float
    k: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if not self.sigma < 0:
            raise InvalidInputError(f"Kerr coefficient must be negative, got {self.sigma}")
        if not self.k > 0:
            raise InvalidInputError(f"wavenumber must be positive, got {self.k}")
        if not self.r > 0:
            raise InvalidInputError(
                f"need eps_l > sin^2(theta); got r = eps_l - sin^2(theta) = {self.r}"
            )

    @classmethod
    def from_r(cls, r: float, sigma: float, k: float = 1.0, phase: float = 0.0):
        """Parameters at normal incidence with ``eps_l = r``."""
        return cls(eps_l=r, theta=0.0, sigma=sigma, k=k, phase=phase)

    @property
    def r(self) -> float:
        return self.eps_l - math.sin(self.theta) ** 2


def z_star(params: SecSolutionParams) -> float:
    """Location of the pole, ``pi / (4 k sqrt(r))``."""
    return math.pi / (4.0 * params.k * math.sqrt(params.r))


def amplitude_A(params: SecSolutionParams) -> float:
    return math.sqrt(2.0 * params.r / -params.sigma)


def _angle(params: SecSolutionParams, z: float) -> float:
    zs = z_star(params)
    if z < 0:
        raise PoleDomainError(f"z = {z} < 0")
    if z >= zs:
        raise PoleDomainError(f"z = {z} is at or past the pole z_star = {zs}")
    return 0.25 * math.pi * (z / zs + 1.0)


def _prefactor(params: SecSolutionParams) -> complex:
    return amplitude_A(params) * cmath.exp(1j * params.phase)


def sec_solution(params: SecSolutionParams, z: float) -> complex:
    """Field value ``E(z)`` for ``0 <= z < z_star``."""
    x = _angle(params, z)
    return _prefactor(params) / math.cos(x)


def sec_solution_derivative(params: SecSolutionParams, z: float) -> complex:
    """Exact ``E'(z) = A e^{i phase} w sec(x) tan(x)`` with ``w = k sqrt(r)``."""
    x = _angle(params, z)
    w = params.k * math.sqrt(params.r)
    c = math.cos(x)
    return _prefactor(params) * w * math.sin(x) / (c * c)


def sec_solution_second_derivative(params: SecSolutionParams, z: float) -> complex:
    """Exact ``E''(z) = A e^{i phase} w^2 sec(x) (2 sec^2(x) - 1)``."""
    x = _angle(params, z)
    w2 = params.k**2 * params.r
    sec = 1.0 / math.cos(x)
    return _prefactor(params) * w2 * sec * (2.0 * sec * sec - 1.0)


def initial_conditions(params: SecSolutionParams, z: float = 0.0) -> tuple[complex, complex]:
    """``(E(z), E'(z))``, handy as initial data for the integrator."""
    return sec_solution(params, z), sec_solution_derivative(params, z)


def residual(params: SecSolutionParams, z: float) -> complex:
    """``E'' + k^2 [r + sigma |E|^2] E`` evaluated in closed form."""
    e = sec_solution(params, z)
    e2 = sec_solution_second_derivative(params, z)
    return e2 + params.k**2 * (params.r + params.sigma * abs(e) ** 2) * e


def relative_residual(params: SecSolutionParams, z: float) -> float:
    """Residual divided by the size of the terms that cancel in it."""
    e = sec_solution(params, z)
    scale = params.k**2 * (params.r + abs(params.sigma) * abs(e) ** 2) * abs(e)
    return abs(residual(params, z)) / scale


def sample(params: SecSolutionParams, fraction: float = 0.99, n: int = 101) -> dict[str, np.ndarray]:
    """Field, derivative and relative residual on ``[0, fraction * z_star]``."""
    if not 0 < fraction < 1:
        raise InvalidInputError("fraction must lie in (0, 1)")
    z = np.linspace(0.0, fraction * z_star(params), n)
    e = np.array([sec_solution(params, zi) for zi in z])
    de = np.array([sec_solution_derivative(params, zi) for zi in z])
    res = np.array([relative_residual(params, zi) for zi in z])
    return {"z": z, "E": e, "dE": de, "relative_residual": res}
