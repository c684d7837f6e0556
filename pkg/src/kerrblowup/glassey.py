"""Quantitative blow-up bounds from the comparison (Glassey-type) argument.

With ``u = |phi|^2 / 2`` the reduced Helmholtz equation gives

    u'  = Re(conj(phi) phi'),
    u'' = |phi'|^2 - 2 [Re r + 2 Re s u] u  >=  h(u),   h(s) = -2 (a + 2 b s) s,

whenever ``Re r <= a`` and ``Re s <= b``.  For initial data with
``alpha = u(0) > 0``, ``beta = u'(0) > 0`` and ``alpha |b| > a`` the solution
satisfies ``x <= T(u(x))`` where

    T(u) = int_alpha^u ds / sqrt(beta^2 + 2 H(s)),   H(s) = int_alpha^s h,

and ``T(u) < gamma = T(inf) < inf``, so ``phi`` cannot be continued past
``gamma``.  Substituting ``s = alpha + t`` the radicand is the cubic

    P(t) = (8/3)|b| t^3 + (8 alpha |b| - 2a) t^2 + (8 alpha^2 |b| - 4 a alpha) t + beta^2,

which dominates ``Q(t) = (8/3)|b| t^3 + beta^2`` and therefore

    gamma <= int_0^inf dt / sqrt(Q) = Gamma(1/3) Gamma(7/6) / sqrt(pi) * (3 / (beta |b|))^(1/3).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy import integrate

from .errors import DegenerateInitialDataError, DomainError, InapplicableBoundError
from .special import gamma as gamma_fn

#: rounded constant used by the physical slab-length bound
L_STAR_CONSTANT = 2.023

#: ratio radicand / beta^2 beyond which the cubic term is treated as dominant
TAIL_DOMINANCE = 100.0

DEFAULT_QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class GlasseyData:
    alpha: float
    beta: float
    a: float
    b: float

    @property
    def admissible(self) -> bool:
        return self.alpha > 0 and self.beta > 0 and self.b < 0 and self.alpha * -self.b > self.a

    def require_admissible(self) -> None:
        if not self.admissible:
            raise InapplicableBoundError(
                "bound needs alpha > 0, beta > 0, b < 0 and alpha*|b| > a; got "
                f"alpha={self.alpha}, beta={self.beta}, a={self.a}, b={self.b}"
            )


@dataclass(frozen=True)
class HypothesisReport:
    b_negative: bool
    nonzero_data: bool
    phase_condition: bool
    amplitude_condition: bool
    cos_phase: float
    amplitude_threshold: float

    @property
    def passed(self) -> bool:
        return self.b_negative and self.nonzero_data and self.phase_condition and self.amplitude_condition

    def failures(self) -> list[str]:
        names = {
            "b_negative": "Re s is not bounded by a negative b",
            "nonzero_data": "c0 or c1 vanishes",
            "phase_condition": "cos(arg c1 - arg c0) <= 0",
            "amplitude_condition": "|c0| <= sqrt(2a/|b|)",
        }
        return [msg for key, msg in names.items() if not getattr(self, key)]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


@dataclass(frozen=True)
class BoundResult:
    gamma_quadrature: float
    gamma_closed_q: float
    l_star_nondim: float
    quadrature_error_estimate: float

    def to_dict(self) -> dict:
        return asdict(self)


def _cos_phase(c0: complex, c1: complex) -> float:
    # cos(arg c1 - arg c0) without forming the angles, exact for orthogonal data
    return (c0.conjugate() * c1).real / (abs(c0) * abs(c1))


def check_hypotheses(profile, ic) -> HypothesisReport:
    """Check the sufficient conditions for guaranteed blow-up.

    ``profile`` needs the bounds ``a`` and ``b``; ``ic`` the complex initial
    values ``c0`` and ``c1``.  Never raises.
    """
    a, b = profile.a, profile.b
    c0, c1 = complex(ic.c0), complex(ic.c1)
    nonzero = c0 != 0 and c1 != 0
    cos_phase = _cos_phase(c0, c1) if nonzero else 0.0
    if a <= 0:
        threshold, amp_ok = 0.0, True
    elif b < 0:
        threshold = math.sqrt(2.0 * a / -b)
        amp_ok = abs(c0) > threshold
    else:
        threshold, amp_ok = math.inf, False
    return HypothesisReport(
        b_negative=b < 0,
        nonzero_data=nonzero,
        phase_condition=cos_phase > 0,
        amplitude_condition=amp_ok,
        cos_phase=cos_phase,
        amplitude_threshold=threshold,
    )


def alpha_beta(ic) -> tuple[float, float]:
    """``alpha = |c0|^2/2`` and ``beta = |c0 c1| cos(arg c1 - arg c0)``."""
    c0, c1 = complex(ic.c0), complex(ic.c1)
    if c0 == 0 or c1 == 0:
        raise DegenerateInitialDataError("c0 and c1 must both be nonzero")
    alpha = abs(c0) ** 2 / 2.0
    beta = (c0.conjugate() * c1).real
    return alpha, beta


def glassey_data(profile, ic) -> GlasseyData:
    alpha, beta = alpha_beta(ic)
    return GlasseyData(alpha, beta, profile.a, profile.b)


def h_eval(s_val: float, a: float, b: float) -> float:
    if s_val < 0:
        raise DomainError(f"h is defined for s >= 0, got {s_val}")
    return -2.0 * (a + 2.0 * b * s_val) * s_val


def h_antiderivative(s_val: float, alpha: float, a: float, b: float) -> float:
    """``int_alpha^s h = -a (s^2 - alpha^2) + (4|b|/3)(s^3 - alpha^3)``."""
    if s_val < alpha:
        raise DomainError(f"need s >= alpha, got s={s_val} < alpha={alpha}")
    return -a * (s_val**2 - alpha**2) - (4.0 * b / 3.0) * (s_val**3 - alpha**3)


def radicand_coefficients(data: GlasseyData) -> tuple[float, float, float, float]:
    """Coefficients of ``beta^2 + 2 H(alpha + t)`` in descending powers of t."""
    al, a, nb = data.alpha, data.a, -data.b
    return (
        8.0 * nb / 3.0,
        8.0 * al * nb - 2.0 * a,
        8.0 * al * al * nb - 4.0 * a * al,
        data.beta**2,
    )


def conservative_radicand_coefficients(data: GlasseyData) -> tuple[float, float, float, float]:
    """A coarser cubic, ``(8/3)|b| t^3 + 4(2 alpha|b| - a) t^2 + 8 alpha(alpha|b| - a) t + beta^2``.

    Its lower-order coefficients are smaller than those of
    :func:`radicand_coefficients` by ``2a`` and ``4 a alpha``, so for ``a >= 0``
    it under-estimates the radicand.  Kept for cross-checks only.
    """
    al, a, nb = data.alpha, data.a, -data.b
    return (8.0 * nb / 3.0, 4.0 * (2.0 * al * nb - a), 8.0 * al * (al * nb - a), data.beta**2)


def radicand(t: float, data: GlasseyData) -> float:
    c3, c2, c1, c0 = radicand_coefficients(data)
    return ((c3 * t + c2) * t + c1) * t + c0


def _split_point(data: GlasseyData) -> float:
    # cubic term alone reaches (TAIL_DOMINANCE - 1) beta^2 here, so P(T) >= TAIL_DOMINANCE beta^2
    c3 = radicand_coefficients(data)[0]
    return ((TAIL_DOMINANCE - 1.0) * data.beta**2 / c3) ** (1.0 / 3.0)


def _head(t_hi: float, data: GlasseyData, rel_tol: float) -> tuple[float, float]:
    c3, c2, c1, c0 = radicand_coefficients(data)

    def f(t):
        return 1.0 / math.sqrt(((c3 * t + c2) * t + c1) * t + c0)

    # geometric panels from the scale on which the radicand doubles; small beta
    # otherwise leaves a near-singular spike at t = 0
    scales = [(c0 / c) ** (1.0 / n) for c, n in ((c1, 1), (c2, 2), (c3, 3)) if c > 0]
    edge = min(scales)
    edges = [0.0]
    while edge < t_hi:
        edges.append(edge)
        edge *= 10.0
    edges.append(t_hi)
    val = err = 0.0
    for lo, hi in zip(edges, edges[1:]):
        v, e = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200)
        val += v
        err += e
    return val, err


def _tail(x_lo: float, split: float, data: GlasseyData, rel_tol: float) -> tuple[float, float]:
    # t = T / x^2 maps [T, t_hi] onto [x_lo, 1]; x^6 P(T/x^2) is a polynomial in x,
    # and the integrand at x = 0 is the leading-order tail 2 / sqrt(c3 T).
    c3, c2, c1, c0 = radicand_coefficients(data)
    T = split
    k3, k2, k1 = c3 * T**3, c2 * T**2, c1 * T

    def g(x):
        x2 = x * x
        return 2.0 * T / math.sqrt(k3 + x2 * (k2 + x2 * (k1 + x2 * c0)))

    val, err = integrate.quad(g, x_lo, 1.0, epsabs=0.0, epsrel=rel_tol, limit=200)
    return val, err


def _comparison_integral(t_val: float, data: GlasseyData, rel_tol: float) -> tuple[float, float]:
    split = _split_point(data)
    if t_val <= split:
        return _head(t_val, data, rel_tol)
    head, e1 = _head(split, data, rel_tol)
    x_lo = 0.0 if math.isinf(t_val) else math.sqrt(split / t_val)
    tail, e2 = _tail(x_lo, split, data, rel_tol)
    return head + tail, e1 + e2


def comparison_time(u_val: float, data: GlasseyData, rel_tol: float = DEFAULT_QUAD_RTOL) -> float:
    """Latest coordinate at which ``u`` can first reach ``u_val``.

    Values a few ulps below ``alpha`` (``u`` recomputed from the field) are
    treated as ``alpha``.
    """
    data.require_admissible()
    if u_val < data.alpha:
        if u_val < data.alpha * (1 - 1e-12):
            raise DomainError(f"u = {u_val} is below alpha = {data.alpha}")
        return 0.0
    return _comparison_integral(u_val - data.alpha, data, rel_tol)[0]


def gamma_closed_q(beta: float, b: float) -> float:
    """``Gamma(1/3) Gamma(7/6) / sqrt(pi) * (3 / (beta |b|))^(1/3)``."""
    if not (beta > 0 and b < 0):
        raise InapplicableBoundError(f"need beta > 0 and b < 0, got beta={beta}, b={b}")
    prefactor = gamma_fn(1.0 / 3.0) * gamma_fn(7.0 / 6.0) / math.sqrt(math.pi)
    return prefactor * (3.0 / (beta * -b)) ** (1.0 / 3.0)


def closed_form_bound(beta: float, b: float) -> float:
    """Rounded bound ``2.023 / (beta |b|)^(1/3)``."""
    if not (beta > 0 and b < 0):
        raise InapplicableBoundError(f"need beta > 0 and b < 0, got beta={beta}, b={b}")
    return L_STAR_CONSTANT / (beta * -b) ** (1.0 / 3.0)


def gamma_quadrature(data: GlasseyData, rel_tol: float = DEFAULT_QUAD_RTOL) -> BoundResult:
    """Evaluate the blow-up bound ``gamma`` and its closed-form majorants."""
    data.require_admissible()
    value, err = _comparison_integral(math.inf, data, rel_tol)
    return BoundResult(
        gamma_quadrature=value,
        gamma_closed_q=gamma_closed_q(data.beta, data.b),
        l_star_nondim=closed_form_bound(data.beta, data.b),
        quadrature_error_estimate=err,
    )


def l_star_physical(k: float, b: float, E0: complex, dE0: complex) -> float:
    """Slab thickness beyond which the field with data ``(E0, dE0)`` blows up inside."""
    E0, dE0 = complex(E0), complex(dE0)
    if not (k > 0 and b < 0):
        raise InapplicableBoundError(f"need k > 0 and b < 0, got k={k}, b={b}")
    if E0 == 0 or dE0 == 0:
        raise InapplicableBoundError("E(0) and E'(0) must be nonzero")
    cos_phase = _cos_phase(E0, dE0)
    if cos_phase <= 0:
        raise InapplicableBoundError(f"phase condition fails: cos = {cos_phase}")
    return L_STAR_CONSTANT / (k * k * -b * abs(E0) * abs(dE0) * cos_phase) ** (1.0 / 3.0)
