"""Adaptive integration of the reduced Helmholtz equation with blow-up detection.

The second-order equation ``phi'' = -[r(x) + s(x)|phi|^2] phi`` is advanced as
the first-order system ``(phi, phi')`` with the Dormand-Prince 5(4) pair and a
proportional-integral step-size controller.  Integration stops when

* ``|phi|`` has crossed ``blowup_threshold`` *and* the step size has collapsed
  below ``min_step`` (blow-up; the pole is extrapolated from ``1/|phi|``),
* the end of the slab ``z_max`` is reached, or
* the step budget is exhausted (inconclusive).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import glassey
from .errors import InvalidInputError
from .slab import SlabProfile, as_complex

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# fifth-order minus embedded fourth-order weights
_E1 = 71 / 57600
_E3 = -71 / 16695
_E4 = 71 / 1920
_E5 = -17253 / 339200
_E6 = 22 / 525
_E7 = -1 / 40

# PI controller constants (Hairer-Wanner DOPRI5 defaults)
_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 10.0

REASONS = ("threshold-and-step-collapse", "domain-end", "step-budget")


@dataclass(frozen=True)
class InitialConditions:
    c0: complex
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c0", as_complex(self.c0))
        object.__setattr__(self, "c1", as_complex(self.c1))


@dataclass(frozen=True)
class IntegratorConfig:
    """Solver settings.  ``None`` entries take defaults that depend on the run."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float | None = None
    blowup_threshold: float | None = None
    min_step: float | None = None
    max_steps: int = 1_000_000

    def resolve(self, profile: SlabProfile, ic: InitialConditions) -> IntegratorConfig:
        """Return a copy with every default filled in, validated."""
        cfg = IntegratorConfig(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_step=profile.z_max / 50 if self.max_step is None else self.max_step,
            blowup_threshold=(
                1e8 * max(1.0, abs(ic.c0)) if self.blowup_threshold is None else self.blowup_threshold
            ),
            min_step=1e-13 * profile.z_max if self.min_step is None else self.min_step,
            max_steps=int(self.max_steps),
        )
        if not (cfg.rel_tol > 0 and cfg.abs_tol > 0 and cfg.blowup_threshold > 0):
            raise InvalidInputError("tolerances and blow-up threshold must be positive")
        if not 0 < cfg.min_step < cfg.max_step:
            raise InvalidInputError(f"need 0 < min_step < max_step, got {cfg.min_step}, {cfg.max_step}")
        if cfg.max_steps < 1:
            raise InvalidInputError("max_steps must be >= 1")
        return cfg


@dataclass(frozen=True)
class Trajectory:
    """Accepted steps of a run.

    ``re_r`` and ``re_s`` hold the real parts of the coefficients at each step
    so that the monitor quantities can be recomputed without the profile.
    """

    z: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    re_r: np.ndarray
    re_s: np.ndarray

    def __len__(self) -> int:
        return len(self.z)

    @property
    def u(self) -> np.ndarray:
        return 0.5 * np.abs(self.phi) ** 2

    @property
    def du(self) -> np.ndarray:
        return np.real(np.conj(self.phi) * self.dphi)

    @property
    def ddu(self) -> np.ndarray:
        u = self.u
        return np.abs(self.dphi) ** 2 - 2.0 * (self.re_r + 2.0 * self.re_s * u) * u

    def __getitem__(self, idx) -> Trajectory:
        if isinstance(idx, int):
            idx = slice(idx, idx + 1 if idx != -1 else None)
        return Trajectory(self.z[idx], self.phi[idx], self.dphi[idx], self.re_r[idx], self.re_s[idx])

    def thinned(self, max_points: int) -> Trajectory:
        """Evenly subsampled copy that always keeps the first and last step."""
        n = len(self)
        if n <= max_points:
            return self
        idx = np.unique(np.linspace(0, n - 1, max_points).round().astype(int))
        return self[idx]

    def write_csv(self, path) -> None:
        rows = zip(
            self.z, self.phi.real, self.phi.imag, self.dphi.real, self.dphi.imag,
            self.u, self.du, self.ddu,
        )
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["z", "Re_phi", "Im_phi", "Re_dphi", "Im_dphi", "u", "du", "ddu"])
            for row in rows:
                writer.writerow([f"{v:.17g}" for v in row])


@dataclass
class BlowupReport:
    blew_up: bool
    z_reached: float
    reason: str
    trajectory: Trajectory
    z_star_estimate: float | None = None
    low_confidence: bool = False
    hypotheses: glassey.HypothesisReport | None = None
    bounds: glassey.BoundResult | None = None
    accepted_steps: int = 0
    rejected_steps: int = 0
    config: IntegratorConfig | None = field(default=None, repr=False)

    @property
    def bound_gamma(self) -> float | None:
        return None if self.bounds is None else self.bounds.gamma_quadrature

    @property
    def bound_closed_form(self) -> float | None:
        return None if self.bounds is None else self.bounds.l_star_nondim


def helmholtz_rhs(z: float, phi: complex, dphi: complex, profile: SlabProfile) -> tuple[complex, complex]:
    """Right-hand side ``(phi', -[r + s|phi|^2] phi)`` of the first-order system."""
    if not (math.isfinite(abs(phi)) and math.isfinite(abs(dphi))):
        raise OverflowError("non-finite field state")
    coef = profile.eval_r(z) + profile.eval_s(z) * (phi.real * phi.real + phi.imag * phi.imag)
    return dphi, -coef * phi


def _coefficient_functions(profile: SlabProfile):
    if profile.r.is_constant and profile.s.is_constant:
        r0, s0 = profile.eval_r(0.0), profile.eval_s(0.0)
        return (lambda z: r0), (lambda z: s0)
    return profile.eval_r, profile.eval_s


def _norm(e0: complex, e1: complex, y0: complex, y1: complex, n0: complex, n1: complex,
          atol: float, rtol: float) -> float:
    sc0 = atol + rtol * max(abs(y0), abs(n0))
    sc1 = atol + rtol * max(abs(y1), abs(n1))
    return math.sqrt(0.5 * ((abs(e0) / sc0) ** 2 + (abs(e1) / sc1) ** 2))


def integrate(profile: SlabProfile, ic: InitialConditions,
              config: IntegratorConfig | None = None, *, attach_bounds: bool = True) -> BlowupReport:
    """Integrate from ``z = 0`` until blow-up, the slab end or the step budget."""
    cfg = (config or IntegratorConfig()).resolve(profile, ic)
    rtol, atol = cfg.rel_tol, cfg.abs_tol
    z_end = profile.z_max
    r_of, s_of = _coefficient_functions(profile)

    def f(z, p, dp):
        c = r_of(z) + s_of(z) * (p.real * p.real + p.imag * p.imag)
        return -c * p

    zs, ps, dps = [0.0], [ic.c0], [ic.c1]
    z, p, dp = 0.0, ic.c0, ic.c1
    k1p, k1d = dp, f(z, p, dp)

    # initial step guess, Hairer-Norsett-Wanner II.4
    sc0, sc1 = atol + rtol * abs(p), atol + rtol * abs(dp)
    d0 = math.hypot(abs(p) / sc0, abs(dp) / sc1)
    d1 = math.hypot(abs(k1p) / sc0, abs(k1d) / sc1)
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h = min(h, cfg.max_step)
    ep, ed = p + h * k1p, dp + h * k1d
    e2p, e2d = ed - k1p, f(h, ep, ed) - k1d
    d2 = math.hypot(abs(e2p) / sc0, abs(e2d) / sc1) / h
    h1 = max(1e-6, h * 1e-3) if max(d1, d2) <= 1e-15 else (0.01 / max(d1, d2)) ** 0.2
    h = min(100 * h, h1, cfg.max_step)

    err_old = 1e-4
    accepted = rejected = 0
    threshold = cfg.blowup_threshold
    reason = "step-budget"
    blew_up = False

    while accepted + rejected < cfg.max_steps:
        last = False
        # absorb a sliver remainder into the final step
        if z + h * (1.0 + 1e-8) >= z_end:
            h = z_end - z
            last = True
        # stages
        y2p = p + h * _A21 * k1p
        y2d = dp + h * _A21 * k1d
        k2p, k2d = y2d, f(z + _C2 * h, y2p, y2d)
        y3p = p + h * (_A31 * k1p + _A32 * k2p)
        y3d = dp + h * (_A31 * k1d + _A32 * k2d)
        k3p, k3d = y3d, f(z + _C3 * h, y3p, y3d)
        y4p = p + h * (_A41 * k1p + _A42 * k2p + _A43 * k3p)
        y4d = dp + h * (_A41 * k1d + _A42 * k2d + _A43 * k3d)
        k4p, k4d = y4d, f(z + _C4 * h, y4p, y4d)
        y5p = p + h * (_A51 * k1p + _A52 * k2p + _A53 * k3p + _A54 * k4p)
        y5d = dp + h * (_A51 * k1d + _A52 * k2d + _A53 * k3d + _A54 * k4d)
        k5p, k5d = y5d, f(z + _C5 * h, y5p, y5d)
        y6p = p + h * (_A61 * k1p + _A62 * k2p + _A63 * k3p + _A64 * k4p + _A65 * k5p)
        y6d = dp + h * (_A61 * k1d + _A62 * k2d + _A63 * k3d + _A64 * k4d + _A65 * k5d)
        k6p, k6d = y6d, f(z + h, y6p, y6d)
        np_ = p + h * (_B1 * k1p + _B3 * k3p + _B4 * k4p + _B5 * k5p + _B6 * k6p)
        nd = dp + h * (_B1 * k1d + _B3 * k3d + _B4 * k4d + _B5 * k5d + _B6 * k6d)
        k7p, k7d = nd, f(z + h, np_, nd)
        errp = h * (_E1 * k1p + _E3 * k3p + _E4 * k4p + _E5 * k5p + _E6 * k6p + _E7 * k7p)
        errd = h * (_E1 * k1d + _E3 * k3d + _E4 * k4d + _E5 * k5d + _E6 * k6d + _E7 * k7d)
        err = _norm(errp, errd, p, dp, np_, nd, atol, rtol)

        if not math.isfinite(err):
            # overflow inside a trial step: shrink hard and retry
            rejected += 1
            h *= _FAC_MIN
        elif err <= 1.0:
            accepted += 1
            z = z_end if last else z + h
            p, dp = np_, nd
            k1p, k1d = k7p, k7d
            zs.append(z)
            ps.append(p)
            dps.append(dp)
            fac = err ** _EXPO / err_old**_BETA / _SAFETY if err > 0 else 1.0 / _FAC_MAX
            h = h / min(1.0 / _FAC_MIN, max(1.0 / _FAC_MAX, fac))
            err_old = max(err, 1e-4)
            if last:
                reason = "domain-end"
                break
        else:
            rejected += 1
            fac = err**_EXPO / _SAFETY
            h = h / min(1.0 / _FAC_MIN, fac)
        h = min(h, cfg.max_step)

        if abs(p) >= threshold and h < cfg.min_step:
            blew_up = True
            reason = "threshold-and-step-collapse"
            break
        if h <= 4 * math.ulp(max(z, 1.0)):
            # no further progress is representable; inconclusive
            break

    traj = _make_trajectory(profile, zs, ps, dps)
    report = BlowupReport(
        blew_up=blew_up,
        z_reached=z,
        reason=reason,
        trajectory=traj,
        accepted_steps=accepted,
        rejected_steps=rejected,
        config=cfg,
    )
    if blew_up:
        report.z_star_estimate, report.low_confidence = estimate_blowup_point(traj, threshold)
    if attach_bounds:
        report.hypotheses = glassey.check_hypotheses(profile, ic)
        if report.hypotheses.passed:
            report.bounds = glassey.gamma_quadrature(glassey.glassey_data(profile, ic))
    return report


def _make_trajectory(profile: SlabProfile, zs, ps, dps) -> Trajectory:
    z = np.array(zs)
    clamped = np.minimum(z, profile.z_max)
    return Trajectory(
        z=z,
        phi=np.array(ps, dtype=complex),
        dphi=np.array(dps, dtype=complex),
        re_r=profile.r.evaluate(clamped).real,
        re_s=profile.s.evaluate(clamped).real,
    )


def estimate_blowup_point(tail: Trajectory, threshold: float | None = None) -> tuple[float, bool]:
    """Extrapolate the pole location from the trailing steps.

    Fits ``1/|phi|`` linearly in ``z`` over the trailing steps with
    ``|phi| >= 0.01 * threshold`` (or the last 8 steps if fewer than 4
    qualify, or if no threshold is given) and returns ``(root, low_confidence)``.
    """
    z = np.asarray(tail.z, dtype=float)
    mag = np.abs(tail.phi)
    if len(z) < 2:
        return float(z[-1]), True
    n = 0
    if threshold is not None:
        big = mag >= 0.01 * threshold
        # length of the trailing run of qualifying steps
        while n < len(z) and big[len(z) - 1 - n]:
            n += 1
    if n < 4:
        n = min(8, len(z))
    zt, wt = z[-n:], 1.0 / mag[-n:]
    z_last = zt[-1]
    x = zt - z_last
    slope, intercept = np.polyfit(x, wt, 1)
    # a fitted change across the window below rounding level counts as flat
    if not (math.isfinite(slope) and -slope * (zt[-1] - zt[0]) > 1e-12 * np.max(np.abs(wt))):
        return float(z_last), True
    root = z_last - intercept / slope
    if root <= z_last:
        return float(z_last + (zt[-1] - zt[-2])), True
    return float(root), False


def monitor_identities(traj: Trajectory, profile: SlabProfile | None = None) -> tuple[float, float]:
    """Worst finite-difference mismatch of the monitors ``u' `` and ``u''``.

    Second-order central differences on the (possibly non-uniform) step grid
    are compared with the closed-form ``du`` and ``ddu`` at interior points;
    each residual is divided by ``1 + |exact|``.  If ``profile`` is given, the
    coefficient real parts are re-evaluated from it.
    """
    if len(traj) < 3:
        raise InvalidInputError("need at least three points")
    if profile is not None:
        clamped = np.minimum(traj.z, profile.z_max)
        traj = Trajectory(traj.z, traj.phi, traj.dphi,
                          profile.r.evaluate(clamped).real, profile.s.evaluate(clamped).real)
    z, u, du, ddu = traj.z, traj.u, traj.du, traj.ddu
    h0 = z[1:-1] - z[:-2]
    h1 = z[2:] - z[1:-1]

    def central(y):
        return (
            -h1 / (h0 * (h0 + h1)) * y[:-2]
            + (h1 - h0) / (h0 * h1) * y[1:-1]
            + h0 / (h1 * (h0 + h1)) * y[2:]
        )

    res_du = np.abs(central(u) - du[1:-1]) / (1.0 + np.abs(du[1:-1]))
    res_ddu = np.abs(central(du) - ddu[1:-1]) / (1.0 + np.abs(ddu[1:-1]))
    return float(res_du.max()), float(res_ddu.max())
