"""Slab coefficient profiles and the map from physical to nondimensional form.

A Kerr slab is described physically by a wavenumber ``k``, an incidence angle
``theta``, a thickness ``L`` and two complex profiles over ``z in [0, L]``: the
relative linear permittivity ``eps_l(z)`` and the Kerr coefficient
``sigma(z)``.  Rescaling lengths by ``1/k`` gives the reduced equation

    phi'' + [r(x) + s(x) |phi|^2] phi = 0,   x = k z,

with ``r(x) = eps_l(x/k) - sin(theta)**2`` and ``s(x) = sigma(x/k)``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, InvalidInputError

KINDS = ("constant", "polynomial", "piecewise-linear", "sampled-grid")

#: grid density used for polynomial suprema
SUP_GRID_POINTS = 10_000
#: relative safety margin added to sampled polynomial suprema
SUP_MARGIN = 1e-9


def as_complex(value) -> complex:
    """Coerce a number or a ``(re, im)`` pair to ``complex``."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidInputError(f"complex pair must have 2 entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class ProfileSpec:
    """A continuous complex-valued function of one real coordinate.

    Use the constructors :meth:`constant`, :meth:`polynomial`,
    :meth:`piecewise_linear` and :meth:`sampled_grid` rather than building
    the payload by hand.  Piecewise-linear and sampled-grid kinds continue
    their endpoint values outside the abscissa range.
    """

    kind: str
    values: tuple[complex, ...]
    nodes: tuple[float, ...] = ()
    _re: tuple[float, ...] = field(default=(), repr=False, compare=False)
    _im: tuple[float, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown profile kind {self.kind!r}")
        vals = tuple(as_complex(v) for v in self.values)
        nodes = tuple(float(z) for z in self.nodes)
        if not vals or not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
            raise InvalidInputError("profile values must be finite and non-empty")
        if self.kind == "constant" and len(vals) != 1:
            raise InvalidInputError("constant profile takes exactly one value")
        if self.kind in ("piecewise-linear", "sampled-grid"):
            minimum = 2 if self.kind == "sampled-grid" else 1
            if len(nodes) != len(vals) or len(nodes) < minimum:
                raise InvalidInputError(
                    f"{self.kind} profile needs >= {minimum} matching abscissae and values"
                )
            if any(not math.isfinite(z) for z in nodes) or any(
                z1 <= z0 for z0, z1 in zip(nodes, nodes[1:])
            ):
                raise InvalidInputError("abscissae must be finite and strictly increasing")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "_re", tuple(v.real for v in vals))
        object.__setattr__(self, "_im", tuple(v.imag for v in vals))

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, value) -> ProfileSpec:
        return cls("constant", (as_complex(value),))

    @classmethod
    def polynomial(cls, coefficients: Sequence) -> ProfileSpec:
        """Polynomial with complex coefficients in ascending powers."""
        return cls("polynomial", tuple(as_complex(c) for c in coefficients))

    @classmethod
    def piecewise_linear(cls, points: Sequence) -> ProfileSpec:
        """Linear interpolation through ``[(z0, v0), (z1, v1), ...]``."""
        nodes = [float(p[0]) for p in points]
        vals = [as_complex(p[1]) for p in points]
        return cls("piecewise-linear", tuple(vals), tuple(nodes))

    @classmethod
    def sampled_grid(cls, z: Sequence[float], values: Sequence) -> ProfileSpec:
        return cls("sampled-grid", tuple(as_complex(v) for v in values), tuple(z))

    # evaluation -------------------------------------------------------------

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant" or (self.kind == "polynomial" and len(self.values) == 1)

    def __call__(self, z: float) -> complex:
        kind = self.kind
        if kind == "constant":
            return self.values[0]
        if kind == "polynomial":
            acc = 0j
            for c in reversed(self.values):
                acc = acc * z + c
            return acc
        nodes = self.nodes
        if z <= nodes[0]:
            return self.values[0]
        if z >= nodes[-1]:
            return self.values[-1]
        i = bisect.bisect_right(nodes, z) - 1
        z0, z1 = nodes[i], nodes[i + 1]
        w = (z - z0) / (z1 - z0)
        return self.values[i] + w * (self.values[i + 1] - self.values[i])

    def evaluate(self, z) -> np.ndarray:
        """Vectorised evaluation on an array of coordinates."""
        z = np.asarray(z, dtype=float)
        if self.kind == "constant":
            return np.full(z.shape, self.values[0], dtype=complex)
        if self.kind == "polynomial":
            return npoly.polyval(z, np.array(self.values, dtype=complex))
        return np.interp(z, self.nodes, self._re) + 1j * np.interp(z, self.nodes, self._im)

    def real_sup(self, z_lo: float, z_hi: float) -> float:
        """Upper bound of the real part on ``[z_lo, z_hi]``.

        Exact for the constant and piecewise-linear kinds.  For polynomials
        the maximum over a uniform grid, the endpoints and the real critical
        points is taken and a small relative margin is added.
        """
        if self.kind == "constant":
            return self.values[0].real
        if self.kind == "polynomial":
            grid = np.linspace(z_lo, z_hi, SUP_GRID_POINTS)
            re_coef = np.array(self._re)
            crit = []
            if len(re_coef) > 2:
                for root in npoly.polyroots(npoly.polyder(re_coef)):
                    if abs(root.imag) < 1e-6 and z_lo <= root.real <= z_hi:
                        crit.append(root.real)
            pts = np.concatenate([grid, crit])
            top = float(np.max(npoly.polyval(pts, re_coef)))
            return top + SUP_MARGIN * (1.0 + abs(top))
        # piecewise linear: maximum sits on a node or an interval end
        inside = [re for z, re in zip(self.nodes, self._re) if z_lo < z < z_hi]
        ends = [self(z_lo).real, self(z_hi).real]
        return max(inside + ends)

    # transforms used by nondimensionalisation --------------------------------

    def rescaled(self, k: float, shift: complex = 0j) -> ProfileSpec:
        """Profile ``x -> self(x / k) + shift``."""
        if self.kind == "constant":
            return ProfileSpec.constant(self.values[0] + shift)
        if self.kind == "polynomial":
            coef = [c / k**n for n, c in enumerate(self.values)]
            coef[0] += shift
            return ProfileSpec.polynomial(coef)
        return ProfileSpec(
            self.kind,
            tuple(v + shift for v in self.values),
            tuple(k * z for z in self.nodes),
        )

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        pairs = [[v.real, v.imag] for v in self.values]
        if self.kind == "constant":
            out["value"] = pairs[0]
        elif self.kind == "polynomial":
            out["coefficients"] = pairs
        elif self.kind == "piecewise-linear":
            out["points"] = [[z, p] for z, p in zip(self.nodes, pairs)]
        else:
            out["z"] = list(self.nodes)
            out["values"] = pairs
        return out

    @classmethod
    def from_dict(cls, data) -> ProfileSpec:
        """Inverse of :meth:`to_dict`; a bare number or pair means a constant."""
        if not isinstance(data, dict):
            return cls.constant(data)
        kind = data.get("kind", "constant")
        try:
            if kind == "constant":
                return cls.constant(data["value"])
            if kind == "polynomial":
                return cls.polynomial(data["coefficients"])
            if kind == "piecewise-linear":
                return cls.piecewise_linear(data["points"])
            if kind == "sampled-grid":
                return cls.sampled_grid(data["z"], data["values"])
        except KeyError as exc:
            raise InvalidInputError(f"profile of kind {kind!r} is missing field {exc}") from None
        raise InvalidInputError(f"unknown profile kind {kind!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Physical description of the slab (lengths in arbitrary consistent units)."""

    k: float
    theta: float
    L: float
    eps_l: ProfileSpec
    sigma: ProfileSpec

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise InvalidInputError(f"wavenumber must be positive, got {self.k}")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise InvalidInputError(f"slab thickness must be positive, got {self.L}")
        if not 0.0 <= self.theta < math.pi / 2:
            raise InvalidInputError(f"incidence angle must lie in [0, pi/2), got {self.theta}")

    def eval_eps_l(self, z: float) -> complex:
        if z < 0:
            raise DomainError(f"z = {z} < 0")
        return self.eps_l(min(z, self.L))

    def eval_sigma(self, z: float) -> complex:
        if z < 0:
            raise DomainError(f"z = {z} < 0")
        return self.sigma(min(z, self.L))


def sup_bounds(r: ProfileSpec, s: ProfileSpec, z_max: float) -> tuple[float, float]:
    """Upper bounds ``(a, b)`` of ``Re r`` and ``Re s`` on ``[0, z_max]``."""
    return r.real_sup(0.0, z_max), s.real_sup(0.0, z_max)


@dataclass(frozen=True)
class SlabProfile:
    """Nondimensional coefficients ``r``, ``s`` on ``[0, z_max]``.

    ``a`` and ``b`` bound the real parts from above; when omitted they are
    computed by :func:`sup_bounds`.  Queries past ``z_max`` return the value
    at ``z_max``.
    """

    r: ProfileSpec
    s: ProfileSpec
    z_max: float
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if not (self.z_max > 0 and math.isfinite(self.z_max)):
            raise InvalidInputError(f"z_max must be positive, got {self.z_max}")
        if self.a is None or self.b is None:
            a, b = sup_bounds(self.r, self.s, self.z_max)
            object.__setattr__(self, "a", a if self.a is None else float(self.a))
            object.__setattr__(self, "b", b if self.b is None else float(self.b))

    @classmethod
    def constant(cls, r, s, z_max: float) -> SlabProfile:
        return cls(ProfileSpec.constant(r), ProfileSpec.constant(s), z_max)

    def eval_r(self, z: float) -> complex:
        if z < 0:
            raise DomainError(f"coordinate {z} < 0")
        return self.r(min(z, self.z_max))

    def eval_s(self, z: float) -> complex:
        if z < 0:
            raise DomainError(f"coordinate {z} < 0")
        return self.s(min(z, self.z_max))


def eval_r(profile: SlabProfile, z: float) -> complex:
    return profile.eval_r(z)


def eval_s(profile: SlabProfile, z: float) -> complex:
    return profile.eval_s(z)


def nondimensionalize(params: PhysicalParams) -> SlabProfile:
    """Map physical slab parameters to the reduced coefficient profiles."""
    k = params.k
    r = params.eps_l.rescaled(k, shift=-math.sin(params.theta) ** 2)
    s = params.sigma.rescaled(k)
    return SlabProfile(r, s, k * params.L)
