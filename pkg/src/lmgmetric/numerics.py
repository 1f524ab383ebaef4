"""Numerical kernels: log-sum-exp, bracketed root finding and
Richardson-extrapolated central differences.

All routines are deterministic and stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BracketError, DomainError

__all__ = [
    "DiffSpec",
    "logsumexp",
    "find_root",
    "central_diff",
    "richardson_diff",
]

_EPS = float(np.finfo(float).eps)


def logsumexp(log_terms) -> float:
    """Return ``log(sum(exp(log_terms)))`` using a single max shift.

    Entries may be ``-inf``. An empty input raises :class:`DomainError`.
    """
    a = np.asarray(log_terms, dtype=float).ravel()
    if a.size == 0:
        raise DomainError("logsumexp of an empty sequence")
    if a.size == 1:
        return float(a[0])
    amax = float(np.max(a))
    if not math.isfinite(amax):
        # all -inf, or some +inf / nan
        return amax
    return amax + math.log(float(np.sum(np.exp(a - amax))))


def find_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    fprime: Optional[Callable[[float], float]] = None,
    max_iter: int = 400,
) -> float:
    """Find a root of ``f`` in the bracket ``[a, b]``.

    Bisection shrinks the bracket to width 1e-10, then at most five
    Newton steps (or secant steps when ``fprime`` is not given) polish the
    root until the step reaches machine resolution. A step that leaves the
    current bracket is replaced by a bisection step, and bisection resumes
    if the polish has not reached ``tol``.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if not (fa * fb < 0.0):
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    if a > b:
        a, b, fa, fb = b, a, fb, fa

    it = 0
    while b - a > 1e-10 and it < max_iter:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
        it += 1

    x = a if abs(fa) < abs(fb) else b
    fx = fa if x == a else fb
    for _ in range(5):
        if fx == 0.0:
            return x
        if fprime is not None:
            d = fprime(x)
        else:
            d = (fb - fa) / (b - a)
        x_new = x - fx / d if d != 0.0 else 0.5 * (a + b)
        if not (a < x_new < b):
            x_new = 0.5 * (a + b)
        fx_new = f(x_new)
        if fx_new == 0.0:
            return x_new
        if fa * fx_new < 0.0:
            b, fb = x_new, fx_new
        else:
            a, fa = x_new, fx_new
        converged = abs(x_new - x) <= 4.0 * _EPS * max(abs(x), abs(x_new))
        x, fx = x_new, fx_new
        # a small residual alone is not enough where f is shallow
        if converged and abs(fx) < tol:
            return x

    # fall back to bisection down to machine resolution
    while abs(fx) >= tol and it < max_iter:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
        x, fx = (a, fa) if abs(fa) < abs(fb) else (b, fb)
        it += 1
    return x


@dataclass(frozen=True)
class DiffSpec:
    """Finite-difference request: step, Richardson depth and derivative kind."""

    step: float = 1e-3
    richardson_levels: int = 1
    mode: str = "first"

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError(f"step must be positive, got {self.step}")
        if not 0 <= self.richardson_levels <= 3:
            raise DomainError("richardson_levels must be in 0..3")
        if self.mode not in ("first", "second", "mixed"):
            raise DomainError(f"unknown mode {self.mode!r}")


def _stencil(f, x, h: float, mode: str):
    if mode == "first":
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if mode == "second":
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    x0, x1 = x
    return (
        f(x0 + h, x1 + h) - f(x0 + h, x1 - h) - f(x0 - h, x1 + h) + f(x0 - h, x1 - h)
    ) / (4.0 * h * h)


def richardson_diff(f, x, spec: DiffSpec):
    """Central difference with Richardson extrapolation.

    Returns ``(value, error_estimate)``. The estimate is the change produced
    by the last extrapolation level (or by halving the step when
    ``richardson_levels == 0``). ``f`` may return scalars or numpy arrays.
    """
    h = spec.step
    n = spec.richardson_levels
    # table[k] holds estimates at step h / 2**k
    table = [_stencil(f, x, h / 2**k, spec.mode) for k in range(n + 1)]
    if n == 0:
        coarse = _stencil(f, x, 2 * h, spec.mode)
        return table[0], np.abs(table[0] - coarse)
    prev = table
    for level in range(1, n + 1):
        factor = 4.0**level
        cur = [(factor * prev[k + 1] - prev[k]) / (factor - 1.0) for k in range(len(prev) - 1)]
        last_diff = np.abs(cur[-1] - prev[-1])
        prev = cur
    return prev[0], last_diff


def central_diff(f, x, spec: DiffSpec):
    """Derivative of ``f`` at ``x`` according to ``spec``.

    ``first`` and ``second`` act on scalar functions; ``mixed`` expects a
    two-argument function and ``x = (x0, x1)`` and returns the cross
    partial d^2 f / dx0 dx1 from the four-point cross stencil.
    """
    return richardson_diff(f, x, spec)[0]


def gradient_2d(f, x: Sequence[float], step: float, levels: int = 1):
    """Both first partials of a two-argument (possibly array-valued) ``f``."""
    x0, x1 = x
    spec = DiffSpec(step, levels, "first")
    d0 = central_diff(lambda t: f(t, x1), x0, spec)
    d1 = central_diff(lambda t: f(x0, t), x1, spec)
    return d0, d1
