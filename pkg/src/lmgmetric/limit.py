"""Thermodynamic limit of the isotropic LMG model.

Free energy per spin

    f = mu^2/2 - ln(2 cosh(beta r)) / beta,   r = sqrt(mu^2 + h^2),

with the order parameter fixed by ``r = tanh(beta r)``. In the ordered
phase ``r`` depends on ``beta`` only; in the paramagnetic phase ``mu = 0``
and ``r = |h|``.

Two quantities come in a "corrected" and an "as printed" form. The printed
ordered-phase ``g_bb`` carries ``(1 + r^2)`` where differentiating ``f``
gives ``(1 - r^2)``, and the printed reduced 1D coefficient is
``1/(4 cosh)`` where the pullback gives ``1/(4 cosh^2)``. Both forms are
kept so that :mod:`lmgmetric.scans` can adjudicate them numerically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .curvature import ricci_scalar_2d
from .errors import DomainError, SingularPointError
from .metric_finite import MetricTensor2
from .numerics import DiffSpec, central_diff, find_root

BOUNDARY_TOL = 1e-12
ROOT_TOL = 1e-14


class Phase(str, enum.Enum):
    ORDERED = "ordered"
    PARAMAGNETIC = "paramagnetic"
    BOUNDARY = "boundary"


class Variant(str, enum.Enum):
    CORRECTED = "corrected"
    AS_PRINTED = "printed"


class RicciMethod(str, enum.Enum):
    CHRISTOFFEL_FD = "christoffel"
    ORTHOGONAL_CLOSED_FORM = "orthogonal"
    AS_PRINTED = "printed"


@dataclass(frozen=True)
class PhasePoint:
    beta: float
    h: float
    phase: Phase
    mu_xy: float
    r: float


@dataclass(frozen=True)
class LimitMetric:
    tensor: MetricTensor2
    branch: Phase
    degenerate: bool

    @property
    def det(self) -> float:
        # the paramagnetic tensor is rank one by construction
        return 0.0 if self.degenerate else self.tensor.det


@dataclass(frozen=True)
class ReducedMetric1D:
    hbar: float
    coefficient: float


def _check_beta(beta: float) -> None:
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be positive and finite, got {beta}")


def _sech2(x: float) -> float:
    x = abs(x)
    if x > 350:
        return 4.0 * math.exp(-2.0 * x)
    return 1.0 / math.cosh(x) ** 2


@lru_cache(maxsize=4096)
def solve_r(beta: float) -> Optional[float]:
    """Positive root of ``r = tanh(beta r)``, or ``None`` when ``beta <= 1``."""
    _check_beta(beta)
    if beta <= 1.0:
        return None
    # tanh(x) >= x - x^3/3 keeps f(lo) > 0 for lo^2 < 3 (beta-1)/beta^3
    lo = 0.5 * math.sqrt(3.0 * (beta - 1.0) / beta**3)
    hi = 1.0

    def f(r):
        return math.tanh(beta * r) - r

    def fp(r):
        return beta * _sech2(beta * r) - 1.0

    if f(hi) >= 0.0:
        return 1.0
    return find_root(f, lo, hi, tol=ROOT_TOL, fprime=fp)


def critical_beta(h: float) -> float:
    """Inverse critical temperature ``arctanh(|h|)/|h|`` of the boundary.

    ``h = 0`` returns the limiting value 1; ``|h| = 1`` returns ``inf``
    (the transition is pushed to zero temperature); ``|h| > 1`` has no
    transition and raises :class:`DomainError`.
    """
    a = abs(h)
    if a > 1.0:
        raise DomainError(f"no phase transition for |h| > 1 (h = {h})")
    if a == 1.0:
        return math.inf
    if a == 0.0:
        return 1.0
    return math.atanh(a) / a


def critical_temperature(h: float) -> float:
    b = critical_beta(h)
    return 0.0 if math.isinf(b) else 1.0 / b


def classify(beta: float, h: float) -> PhasePoint:
    _check_beta(beta)
    a = abs(h)
    if a == 0.0:
        on_boundary = abs(beta - 1.0) <= BOUNDARY_TOL
    else:
        on_boundary = abs(a - math.tanh(beta * a)) <= BOUNDARY_TOL
    if on_boundary:
        return PhasePoint(beta, h, Phase.BOUNDARY, 0.0, a)
    r = solve_r(beta)
    if r is not None and r > a:
        return PhasePoint(beta, h, Phase.ORDERED, math.sqrt(r * r - a * a), r)
    return PhasePoint(beta, h, Phase.PARAMAGNETIC, 0.0, a)


def _beta_f(beta: float, mu2: float, r: float) -> float:
    # beta * f, with ln(2 cosh x) written to avoid overflow
    x = beta * r
    return 0.5 * beta * mu2 - (x + math.log1p(math.exp(-2.0 * x)))


def free_energy_limit(beta: float, h: float) -> float:
    pt = classify(beta, h)
    return _beta_f(beta, pt.mu_xy**2, pt.r) / beta


def magnetization_z(beta: float, h: float) -> float:
    """``mu_z = -df/dh``: ``h`` in the ordered phase, ``tanh(beta h)`` otherwise."""
    pt = classify(beta, h)
    if pt.phase is Phase.ORDERED:
        return h
    return math.tanh(beta * h)


def dr_dbeta(beta: float) -> float:
    """``dr/dbeta`` along the ordered-phase root, ``r (1-r^2) / (1 - beta (1-r^2))``."""
    r = solve_r(beta)
    if r is None:
        raise DomainError(f"no ordered solution at beta = {beta}")
    s = _sech2(beta * r)  # equals 1 - r^2 without cancellation
    return r * s / (1.0 - beta * s)


def _ordered_g_bb(beta: float, variant: Variant) -> float:
    r = solve_r(beta)
    s = _sech2(beta * r)
    denom = 4.0 * (1.0 - beta * s)
    if variant is Variant.CORRECTED:
        return r * r * s / denom
    return r * r * (1.0 + r * r) / denom


def metric_limit(beta: float, h: float, variant: Variant | str = Variant.CORRECTED) -> LimitMetric:
    """Per-spin metric ``lim g/N`` on either side of the phase boundary."""
    variant = Variant(variant)
    pt = classify(beta, h)
    if pt.phase is Phase.BOUNDARY:
        raise SingularPointError(f"(beta={beta}, h={h}) lies on the phase boundary")
    if pt.phase is Phase.ORDERED:
        t = MetricTensor2(_ordered_g_bb(beta, variant), 0.0, beta / 4.0)
        return LimitMetric(t, Phase.ORDERED, degenerate=False)
    c = 0.25 * _sech2(beta * h)
    t = MetricTensor2(c * h * h, c * h * beta, c * beta * beta)
    return LimitMetric(t, Phase.PARAMAGNETIC, degenerate=True)


def metric_limit_numeric(beta: float, h: float, step: float = 1e-2, levels: int = 2) -> float:
    """Ordered-phase ``g_bb = -(1/4) d2(beta f)/dbeta2`` from the free energy alone.

    ``beta f`` is evaluated at each stencil point from a fresh root solve,
    and the second derivative is Richardson-extrapolated. Independent of
    either closed-form variant. The whole stencil must stay ordered.
    """
    h = abs(h)

    def bf(b):
        r = solve_r(b)
        if r is None or r <= h:
            raise DomainError(f"stencil point beta={b} left the ordered phase at h={h}")
        return _beta_f(b, r * r - h * h, r)

    return -0.25 * central_diff(bf, beta, DiffSpec(step, levels, "second"))


def reduced_metric(hbar: float, variant: Variant | str = Variant.CORRECTED) -> ReducedMetric1D:
    variant = Variant(variant)
    if variant is Variant.CORRECTED:
        return ReducedMetric1D(hbar, 0.25 * _sech2(hbar))
    return ReducedMetric1D(hbar, 0.25 / math.cosh(hbar))


def _ordered_metric_field():
    def g(beta, h):
        lm = metric_limit(beta, h, Variant.CORRECTED)
        if lm.branch is not Phase.ORDERED:
            raise DomainError(
                f"curvature stencil at (beta={beta}, h={h}) left the ordered phase"
            )
        return lm.tensor.as_array()

    return g


def _ricci_orthogonal(beta: float) -> float:
    """``R = 2K`` for ``diag(Q^2, P^2)`` with ``Q^2 = r r'/4`` and ``P^2 = beta/4``.

    ``K = -(1/(P Q)) d/dbeta(P'/Q)``; the ``h`` terms vanish because neither
    component depends on ``h``. All derivatives are analytic.
    """
    r = solve_r(beta)
    s = _sech2(beta * r)
    D = 1.0 - beta * s
    r1 = r * s / D
    s1 = -2.0 * r * r1
    D1 = -s - beta * s1
    r2 = ((r1 * s + r * s1) * D - r * s * D1) / (D * D)
    Q = 0.5 * math.sqrt(r * r1)
    Q1 = (r1 * r1 + r * r2) / (8.0 * Q)
    P = 0.5 * math.sqrt(beta)
    P1 = 0.25 / math.sqrt(beta)
    P2 = -0.125 * beta**-1.5
    K = -(P2 / Q - P1 * Q1 / (Q * Q)) / (P * Q)
    return 2.0 * K


def _ricci_printed(beta: float, h: float, step: float = 1e-4) -> float:
    """The closed form with ``P = sqrt(beta)/2`` and ``Q = sqrt(mu dmu/dbeta)/2`` as written."""

    def mu(b, hh):
        r = solve_r(b)
        return math.sqrt(max(r * r - hh * hh, 0.0))

    def Q(b, hh):
        m = mu(b, hh)
        dm = r_r1(b) / m  # mu dmu/dbeta = r dr/dbeta
        return 0.5 * math.sqrt(m * dm)

    def r_r1(b):
        return solve_r(b) * dr_dbeta(b)

    def P(b):
        return 0.5 * math.sqrt(b)

    first = DiffSpec(step, 1, "first")
    second = DiffSpec(step, 1, "second")
    P1 = central_diff(P, beta, first)
    P2 = central_diff(P, beta, second)
    Qh = central_diff(lambda x: Q(beta, x), h, first)
    Qhh = central_diff(lambda x: Q(beta, x), h, second)
    p, q = P(beta), Q(beta, h)
    return 2.0 / (p * q) * (P1 * Qh / q**2 - P2 / q - Qhh / p)


def ricci_limit(
    beta: float,
    h: float,
    method: RicciMethod | str = RicciMethod.CHRISTOFFEL_FD,
    step: float = 1e-4,
) -> float:
    """Ricci scalar of the ordered-phase limit metric."""
    method = RicciMethod(method)
    pt = classify(beta, h)
    if pt.phase is not Phase.ORDERED:
        raise DomainError(f"curvature is only defined in the ordered phase; got {pt.phase.value}")
    if method is RicciMethod.CHRISTOFFEL_FD:
        return ricci_scalar_2d(_ordered_metric_field(), beta, h, step=step, levels=1)
    if method is RicciMethod.ORTHOGONAL_CLOSED_FORM:
        return _ricci_orthogonal(beta)
    return _ricci_printed(beta, h, step=step)


def pullback_reduced_coefficient(beta: float, h: float) -> float:
    """Coefficient ``c`` with ``g_para = c (h dbeta + beta dh)^2``, read off the 2D tensor."""
    t = metric_limit(beta, h, Variant.CORRECTED).tensor
    # g_hh = c beta^2 and g_bb = c h^2; use the better conditioned one
    if abs(beta) >= abs(h):
        return t.g_hh / beta**2
    return t.g_bb / h**2


def single_spin_fisher_rao(hbar: float) -> float:
    """Fisher-Rao metric ``(1/4) sum (dp)^2/p`` of ``p+- = (1 +- tanh hbar)/2``."""
    t = math.tanh(hbar)
    dp = 0.5 * _sech2(hbar)
    # p+ p- = sech^2/4, so evaluate 1/p+ + 1/p- = 1/(p+ p-) in a stable way
    p_plus, p_minus = 0.5 * (1.0 + t), 0.5 * (1.0 - t)
    if p_minus < 1e-3:
        p_minus = 0.5 * _sech2(hbar) / (1.0 + t)
    return 0.25 * (dp * dp / p_plus + dp * dp / p_minus)


__all__ = [
    "Phase",
    "Variant",
    "RicciMethod",
    "PhasePoint",
    "LimitMetric",
    "ReducedMetric1D",
    "solve_r",
    "critical_beta",
    "critical_temperature",
    "classify",
    "free_energy_limit",
    "magnetization_z",
    "dr_dbeta",
    "metric_limit",
    "metric_limit_numeric",
    "reduced_metric",
    "ricci_limit",
    "pullback_reduced_coefficient",
    "single_spin_fisher_rao",
]
