"""Fidelity (Bures) metric of finite-N thermal states in the (beta, h) chart.

Three independent routes are provided:

* ``metric_fluctuations`` -- connected second moments of H and S_z;
* ``metric_fd_free_energy`` -- Richardson-extrapolated finite differences
  of the exact finite-N free energy;
* ``bures_dense`` -- the full Huebner formula on dense density matrices,
  split into its classical (Fisher-Rao) and non-classical parts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError
from .numerics import DiffSpec, richardson_diff
from .spectrum import ModelParams, check_size, dense_hamiltonian
from .thermal import free_energy_per_spin_finite, moments

DENSE_METRIC_MAX_N = 8
RICHARDSON_FLAG_TOL = 1e-4


@dataclass(frozen=True)
class MetricTensor2:
    """Symmetric 2x2 tensor ``g_bb dB dB + 2 g_bh dB dh + g_hh dh dh``."""

    g_bb: float
    g_bh: float
    g_hh: float

    @property
    def det(self) -> float:
        return self.g_bb * self.g_hh - self.g_bh**2

    def as_array(self) -> np.ndarray:
        return np.array([[self.g_bb, self.g_bh], [self.g_bh, self.g_hh]])

    def scaled(self, c: float) -> "MetricTensor2":
        return MetricTensor2(c * self.g_bb, c * self.g_bh, c * self.g_hh)

    def __add__(self, other: "MetricTensor2") -> "MetricTensor2":
        return MetricTensor2(
            self.g_bb + other.g_bb, self.g_bh + other.g_bh, self.g_hh + other.g_hh
        )

    def max_abs(self) -> float:
        return max(abs(self.g_bb), abs(self.g_bh), abs(self.g_hh))

    def is_psd(self, rtol: float = 1e-10) -> bool:
        return (
            self.g_bb >= 0
            and self.g_hh >= 0
            and self.det >= -rtol * max(self.g_bb * self.g_hh, 1.0)
        )


@dataclass(frozen=True)
class MetricSplit:
    classical: MetricTensor2
    nonclassical: MetricTensor2

    @property
    def total(self) -> MetricTensor2:
        return self.classical + self.nonclassical


def metric_fluctuations(params: ModelParams) -> MetricTensor2:
    m = moments(params)
    beta = params.beta
    return MetricTensor2(
        g_bb=m.var_H / 4.0,
        g_bh=-0.5 * beta * m.cov_H_Sz + 0.0,  # no signed zero
        g_hh=beta * beta * m.var_Sz,
    )


def default_step(beta: float) -> float:
    return 1e-3 * max(1.0, beta)


def metric_fd_free_energy(params: ModelParams, step: float | None = None) -> MetricTensor2:
    """Metric from second derivatives of ``f_N``.

    ``g_bb = -(N/4) d2(beta f)/dbeta2``, ``g_hh = -(N beta/4) d2f/dh2``,
    ``g_bh = -(N beta/4) d2f/dh dbeta``, all on exact evaluations of
    ``f_N``. A ``RuntimeWarning`` is emitted when
    the last Richardson level moves a component by more than 1e-4 relative.
    """
    N, beta, h = params.N, params.beta, params.h
    if step is None:
        step = default_step(beta)
    if not step > 0:
        raise DomainError("step must be positive")
    if beta - 2 * step <= 0:
        raise DomainError(f"step {step} too large for beta = {beta}")

    def f(b, hh):
        return free_energy_per_spin_finite(ModelParams(N, b, hh))

    def beta_f(b):
        return b * f(b, h)

    d_bb, e_bb = richardson_diff(beta_f, beta, DiffSpec(step, 1, "second"))
    d_hh, e_hh = richardson_diff(lambda x: f(beta, x), h, DiffSpec(step, 1, "second"))
    # d/dh of f at fixed beta, then d/dbeta of that; the cross stencil is symmetric
    d_bh, e_bh = richardson_diff(f, (beta, h), DiffSpec(step, 1, "mixed"))

    g = MetricTensor2(
        g_bb=-0.25 * N * d_bb,
        g_bh=-0.25 * N * beta * d_bh,
        g_hh=-0.25 * N * beta * d_hh,
    )
    errs = (0.25 * N * e_bb, 0.25 * N * beta * e_bh, 0.25 * N * beta * e_hh)
    scale = g.max_abs()
    if scale > 0 and max(errs) > RICHARDSON_FLAG_TOL * scale:
        warnings.warn(
            f"Richardson disagreement {max(errs) / scale:.2e} exceeds "
            f"{RICHARDSON_FLAG_TOL:g}; step {step} may be too large",
            RuntimeWarning,
            stacklevel=2,
        )
    return g


def _dense_rho(H: np.ndarray, beta: float) -> np.ndarray:
    w, V = np.linalg.eigh(H)
    p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    return (V * p) @ V.T


def hubner_split(
    p: np.ndarray,
    V: np.ndarray,
    drho: tuple[np.ndarray, np.ndarray],
    degeneracy_tol: float = 1e-9,
    weight_floor: float = 1e-15,
) -> MetricSplit:
    """Huebner metric of a state with eigenvalues ``p`` and eigenvectors ``V``.

    Pairs with equal eigenvalue (relative ``degeneracy_tol``) make up the
    classical part: within a degenerate block the sum is basis independent
    and equals ``(1/4) sum dp^2 / p`` over the eigenvalue branches. Pairs
    with distinct eigenvalues make up the non-classical part.

    Pairs with ``p_n + p_m < weight_floor * max(p)`` are skipped. Their true
    contribution is bounded by ``p_n + p_m`` times an O(1) factor, whereas
    finite-difference noise in ``drho`` would be amplified by ``1/(p_n + p_m)``.
    """
    p = np.asarray(p, dtype=float)
    A = [V.T @ d @ V for d in drho]
    denom = p[:, None] + p[None, :]
    live = denom > weight_floor * float(p.max())
    same = np.abs(p[:, None] - p[None, :]) <= degeneracy_tol * np.maximum(
        p[:, None], p[None, :]
    )
    inv = np.zeros_like(denom)
    inv[live] = 1.0 / denom[live]

    def part(mask):
        def c(i, j):
            return 0.5 * float(np.sum((A[i] * A[j] * inv)[mask]))

        return MetricTensor2(c(0, 0), c(0, 1), c(1, 1))

    return MetricSplit(classical=part(same & live), nonclassical=part(~same & live))


def bures_dense(N: int, beta: float, h: float, step: float = 1e-3) -> MetricSplit:
    """Dense Huebner metric of the Gibbs state, split into cl / nc parts.

    ``d rho`` comes from Richardson-extrapolated central differences of the
    dense density matrix in each coordinate. The eigenbasis of ``rho`` is
    taken from the Hamiltonian, whose Boltzmann factors give the eigenvalues
    of ``rho`` to full relative precision.
    """
    N = check_size(N)
    if N > DENSE_METRIC_MAX_N:
        raise ResourceError(f"dense metric limited to N <= {DENSE_METRIC_MAX_N}")
    ModelParams(N, beta, h)
    if not step > 0 or beta - 2 * step <= 0:
        raise DomainError(f"invalid step {step} for beta = {beta}")

    H = dense_hamiltonian(N, h)
    w, V = np.linalg.eigh(H)
    p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    spec = DiffSpec(step, 2, "first")
    d_beta = richardson_diff(lambda b: _dense_rho(H, b), beta, spec)[0]
    d_h = richardson_diff(lambda x: _dense_rho(dense_hamiltonian(N, x), beta), h, spec)[0]
    return hubner_split(p, V, (d_beta, d_h))


def relative_difference(a: MetricTensor2, b: MetricTensor2) -> float:
    """Largest componentwise difference relative to the tensor's largest entry."""
    scale = max(a.max_abs(), b.max_abs())
    if scale == 0:
        return 0.0
    diff = max(abs(a.g_bb - b.g_bb), abs(a.g_bh - b.g_bh), abs(a.g_hh - b.g_hh))
    return diff / scale


def metric_dense_trace(N: int, beta: float, h: float) -> MetricTensor2:
    """Fluctuation formulas evaluated with dense traces (oracle for the moments)."""
    from .spectrum import dense_sz

    H = dense_hamiltonian(N, h)
    Sz = dense_sz(N)
    rho = _dense_rho(H, beta)
    eH = float(np.trace(rho @ H))
    eS = float(np.trace(rho @ Sz))
    var_H = float(np.trace(rho @ H @ H)) - eH**2
    var_S = float(np.trace(rho @ Sz @ Sz)) - eS**2
    cov = float(np.trace(rho @ H @ Sz)) - eH * eS
    return MetricTensor2(var_H / 4.0, -0.5 * beta * cov, beta * beta * var_S)


__all__ = [
    "MetricTensor2",
    "MetricSplit",
    "metric_fluctuations",
    "metric_fd_free_energy",
    "bures_dense",
    "hubner_split",
    "metric_dense_trace",
    "relative_difference",
]
