"""Exact spectrum of the isotropic LMG Hamiltonian.

The Hamiltonian conserves both the total spin ``S`` and ``S_z``, so the
``2**N`` dimensional product space splits into spin sectors ``S = 0..N/2``,
each appearing ``d_S`` times, with levels

    E_SM = -(2/N) (S(S+1) - M^2 - N/2) - 2 h M,   M = -S..S.

Only the anisotropy value 1 is supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, ResourceError

EXACT_MULTIPLICITY_MAX_N = 64
DENSE_MAX_N = 12


@dataclass(frozen=True)
class ModelParams:
    """One thermal state: system size ``N``, inverse temperature ``beta``, field ``h``."""

    N: int
    beta: float
    h: float

    def __post_init__(self):
        check_size(self.N)
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        if not math.isfinite(self.h):
            raise DomainError(f"h must be finite, got {self.h}")


def check_size(N) -> int:
    if isinstance(N, bool) or int(N) != N:
        raise DomainError(f"N must be an integer, got {N!r}")
    N = int(N)
    if N <= 0 or N % 2:
        raise DomainError(f"N must be a positive even integer, got {N}")
    return N


@dataclass(frozen=True)
class SectorSpectrum:
    S: int
    log_multiplicity: float
    multiplicity_exact: Optional[int]
    levels: List[Tuple[int, float]]


@dataclass(frozen=True)
class GroundState:
    S0: int
    M0: int
    energy: float
    degenerate: bool


def multiplicity(N: int, S: int) -> Tuple[float, Optional[int]]:
    """Number of spin-``S`` multiplets among ``N`` spins-1/2.

    ``d_S = C(N, N/2 - S) - C(N, N/2 - S - 1)``. Returns ``(ln d_S, d_S)``;
    the exact integer is only produced for ``N <= 64``.
    """
    N = check_size(N)
    if int(S) != S or not 0 <= S <= N // 2:
        raise DomainError(f"S must be an integer in [0, {N // 2}], got {S}")
    S = int(S)
    exact = None
    if N <= EXACT_MULTIPLICITY_MAX_N:
        k = N // 2 - S
        exact = math.comb(N, k) - (math.comb(N, k - 1) if k >= 1 else 0)
    return float(_log_multiplicities(N)[S]), exact


@lru_cache(maxsize=64)
def _log_multiplicities(N: int) -> np.ndarray:
    # d_S = (2S+1) N! / ((N/2+S+1)! (N/2-S)!)
    S = np.arange(N // 2 + 1, dtype=float)
    out = (
        np.log(2 * S + 1)
        + gammaln(N + 1.0)
        - gammaln(N / 2 + S + 2.0)
        - gammaln(N / 2 - S + 1.0)
    )
    out.setflags(write=False)
    return out


def log_multiplicities(N: int) -> np.ndarray:
    """``ln d_S`` for ``S = 0..N/2`` as a read-only array."""
    return _log_multiplicities(check_size(N))


def energy_level(N: int, S, M, h: float):
    """Energy of ``|S M>``; works elementwise on arrays."""
    return -(2.0 / N) * (S * (S + 1) - M * M - N / 2) - 2.0 * h * M


def sector_spectrum(N: int, S: int, h: float) -> SectorSpectrum:
    log_d, exact = multiplicity(N, S)
    levels = [(M, float(energy_level(N, S, M, h))) for M in range(-S, S + 1)]
    return SectorSpectrum(S, log_d, exact, levels)


def spectrum(N: int, h: float) -> List[SectorSpectrum]:
    N = check_size(N)
    return [sector_spectrum(N, S, h) for S in range(N // 2 + 1)]


@lru_cache(maxsize=16)
def _level_table(N: int):
    S_list, M_list = [], []
    for S in range(N // 2 + 1):
        M = np.arange(-S, S + 1)
        S_list.append(np.full(M.size, S))
        M_list.append(M)
    S = np.concatenate(S_list).astype(float)
    M = np.concatenate(M_list).astype(float)
    logd = np.asarray(_log_multiplicities(N))[S.astype(int)]
    for a in (S, M, logd):
        a.setflags(write=False)
    return S, M, logd


def level_arrays(N: int, h: float):
    """Flattened ``(S, M, ln d_S, E)`` arrays over every ``(S, M)`` pair.

    The interaction part ``E(h=0)`` is returned separately as the fifth
    element so callers can shift energies without re-evaluating it.
    """
    N = check_size(N)
    S, M, logd = _level_table(N)
    E0 = -(2.0 / N) * (S * (S + 1) - M * M - N / 2)
    return S, M, logd, E0 - 2.0 * h * M, E0


def _round_half_up(x: float, tol: float = 1e-12) -> Tuple[int, bool]:
    fl = math.floor(x)
    delta = x - fl
    if abs(delta - 0.5) <= tol:
        return fl + 1, True
    return (fl + 1 if delta > 0.5 else fl), False


def ground_state(N: int, h: float) -> GroundState:
    """Ground state in the maximal-spin sector.

    For ``0 <= h < 1`` the selected ``M0`` is ``hN/2`` rounded, with ties
    going up; ties are exactly the level crossings and set ``degenerate``.
    Negative fields are mapped by ``(h, M) -> (-h, -M)``.
    """
    N = check_size(N)
    sign = -1 if h < 0 else 1
    ha = abs(h)
    S0 = N // 2
    if ha >= 1:
        M0, degenerate = S0, False
    else:
        M0, degenerate = _round_half_up(ha * N / 2)
        M0 = min(M0, S0)
    M0 *= sign
    return GroundState(S0, M0, float(energy_level(N, S0, M0, h)), degenerate)


def level_crossing_fields(N: int) -> List[float]:
    """Fields ``h >= 0`` at which the ground state switches ``M -> M + 1``."""
    N = check_size(N)
    return [(2 * M + 1) / N for M in range(N // 2)]


_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1j], [1j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


def _site_operator(op, i: int, N: int):
    from scipy import sparse

    left = sparse.identity(2**i, format="csr")
    right = sparse.identity(2 ** (N - i - 1), format="csr")
    return sparse.kron(sparse.kron(left, sparse.csr_matrix(op)), right, format="csr")


def dense_hamiltonian(N: int, h: float) -> np.ndarray:
    """Full ``2**N x 2**N`` Hamiltonian assembled from Pauli operators.

    ``H = -(1/N) sum_{i<j} (sx_i sx_j + sy_i sy_j) - h sum_i sz_i``.
    Intended as an independent oracle; ``N`` is capped at 12.
    """
    N = check_size(N)
    if N > DENSE_MAX_N:
        raise ResourceError(f"dense Hamiltonian limited to N <= {DENSE_MAX_N}, got {N}")
    sx = [_site_operator(_SX, i, N) for i in range(N)]
    sy = [_site_operator(_SY, i, N) for i in range(N)]
    sz = [_site_operator(_SZ, i, N) for i in range(N)]
    H = None
    for i in range(N):
        for j in range(i + 1, N):
            term = sx[i] @ sx[j] + sy[i] @ sy[j]
            H = term if H is None else H + term
    H = -H / N
    for i in range(N):
        H = H - h * sz[i]
    H = H.toarray()
    # sy_i sy_j is real, so the imaginary part is identically zero
    return np.ascontiguousarray(H.real)


def dense_sz(N: int) -> np.ndarray:
    """Total ``S_z = (1/2) sum_i sz_i`` as a dense diagonal matrix."""
    N = check_size(N)
    if N > DENSE_MAX_N:
        raise ResourceError(f"dense operators limited to N <= {DENSE_MAX_N}, got {N}")
    # a zero bit in the basis index is a spin up (sz = +1)
    down = np.array([bin(k).count("1") for k in range(2**N)])
    ups = N - down
    return np.diag(0.5 * (ups - down).astype(float))


def enumerated_spectrum(N: int, h: float) -> np.ndarray:
    """All ``2**N`` eigenvalues with multiplicity, sorted, from the sector formula."""
    N = check_size(N)
    if N > EXACT_MULTIPLICITY_MAX_N:
        raise ResourceError("full enumeration needs exact multiplicities (N <= 64)")
    S, M, logd, E, _ = level_arrays(N, h)
    counts = np.array([multiplicity(N, int(s))[1] for s in S])
    return np.sort(np.repeat(E, counts))
