"""Scalar curvature of a two-dimensional metric tensor field.

``ricci_scalar_2d`` works for any chart: it builds Christoffel symbols
from central differences of the metric and differentiates them once more,
so the only input is a callable returning the 2x2 component matrix.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .numerics import DiffSpec, central_diff

MetricField = Callable[[float, float], np.ndarray]


def _metric_derivatives(g: MetricField, x0: float, x1: float, step: float, levels: int):
    spec = DiffSpec(step, levels, "first")
    d0 = central_diff(lambda t: np.asarray(g(t, x1), dtype=float), x0, spec)
    d1 = central_diff(lambda t: np.asarray(g(x0, t), dtype=float), x1, spec)
    return np.stack([d0, d1])  # dg[k, i, j] = d_k g_ij


def christoffel(g: MetricField, x0: float, x1: float, step: float = 1e-4, levels: int = 1):
    """``Gamma[k, i, j]`` (upper index first) at ``(x0, x1)``."""
    G = np.asarray(g(x0, x1), dtype=float)
    ginv = np.linalg.inv(G)
    dg = _metric_derivatives(g, x0, x1, step, levels)
    # lowered: Gamma_{l i j} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    low = 0.5 * (
        np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
    )
    return np.einsum("kl,lij->kij", ginv, low)


def ricci_scalar_2d(
    g: MetricField, x0: float, x1: float, step: float = 1e-4, levels: int = 1
) -> float:
    """Ricci scalar ``R = g^{ij} R_ij`` by nested central differences.

    ``R_ij = d_k Gamma^k_ij - d_j Gamma^k_ik + Gamma^k_kl Gamma^l_ij
    - Gamma^k_jl Gamma^l_ik``.
    """
    spec = DiffSpec(step, levels, "first")
    Gam = christoffel(g, x0, x1, step, levels)
    dGam = np.stack(
        [
            central_diff(lambda t: christoffel(g, t, x1, step, levels), x0, spec),
            central_diff(lambda t: christoffel(g, x0, t, step, levels), x1, spec),
        ]
    )  # dGam[m, k, i, j] = d_m Gamma^k_ij
    ric = (
        np.einsum("kkij->ij", dGam)
        - np.einsum("jkik->ij", dGam)
        + np.einsum("kkl,lij->ij", Gam, Gam)
        - np.einsum("kjl,lik->ij", Gam, Gam)
    )
    ginv = np.linalg.inv(np.asarray(g(x0, x1), dtype=float))
    return float(np.einsum("ij,ij->", ginv, ric))
