import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lmgmetric.errors import DomainError, ResourceError
from lmgmetric.numerics import logsumexp
from lmgmetric.spectrum import (
    ModelParams,
    dense_hamiltonian,
    energy_level,
    enumerated_spectrum,
    ground_state,
    level_arrays,
    level_crossing_fields,
    log_multiplicities,
    multiplicity,
    spectrum,
)

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _total_spin_squared(N):
    """S^2 on the product basis, built with dense kron products."""
    eye = np.eye(2)
    S2 = np.zeros((2**N, 2**N), dtype=complex)
    for p in PAULI.values():
        tot = sum(
            reduce(np.kron, [0.5 * p if k == i else eye for k in range(N)]) for i in range(N)
        )
        S2 += tot @ tot
    return S2


@pytest.mark.parametrize("N", [2, 4, 6])
def test_multiplicity_brute_force(N):
    ev = np.linalg.eigvalsh(_total_spin_squared(N))
    for S in range(N // 2 + 1):
        states = int(np.sum(np.abs(ev - S * (S + 1)) < 1e-8))
        assert states % (2 * S + 1) == 0
        assert multiplicity(N, S)[1] == states // (2 * S + 1)


def test_multiplicity_examples():
    assert multiplicity(4, 1)[1] == 3
    assert multiplicity(4, 2)[1] == 1
    assert multiplicity(2, 0)[1] == 1
    assert multiplicity(4, 1)[0] == pytest.approx(math.log(3), abs=1e-13)


def test_multiplicity_exact_only_up_to_64():
    assert multiplicity(64, 10)[1] is not None
    assert multiplicity(66, 10)[1] is None


@pytest.mark.parametrize("N", [10, 40, 64])
def test_log_multiplicity_matches_exact(N):
    for S in range(N // 2 + 1):
        log_d, d = multiplicity(N, S)
        assert log_d == pytest.approx(math.log(d), rel=1e-12, abs=1e-12)


def test_multiplicity_domain():
    with pytest.raises(DomainError):
        multiplicity(4, 3)
    with pytest.raises(DomainError):
        multiplicity(4, -1)
    with pytest.raises(DomainError):
        multiplicity(5, 1)


@pytest.mark.parametrize("N", [2, 10, 100, 2000, 10000])
def test_dimension_identity(N):
    S = np.arange(N // 2 + 1)
    total = logsumexp(log_multiplicities(N) + np.log(2 * S + 1))
    assert total == pytest.approx(N * math.log(2), rel=1e-10)


def test_energy_level_examples():
    assert energy_level(2, 1, 0, 0.0) == pytest.approx(-1.0)
    assert energy_level(10, 5, 3, 0.6) == pytest.approx(-6.8, abs=1e-12)


@given(
    st.integers(1, 50).map(lambda k: 2 * k),
    st.floats(-3, 3),
    st.data(),
)
def test_energy_kramers(N, h, data):
    S = data.draw(st.integers(0, N // 2))
    M = data.draw(st.integers(-S, S))
    assert energy_level(N, S, M, h) == energy_level(N, S, -M, -h)


@pytest.mark.parametrize("N", [4, 10, 16])
@pytest.mark.parametrize("h", [0.0, 0.37, 1.2])
def test_spectrum_multiset_kramers(N, h):
    np.testing.assert_array_equal(enumerated_spectrum(N, h), enumerated_spectrum(N, -h))


@pytest.mark.parametrize("N", [200, 1000])
def test_spectrum_multiset_kramers_large(N):
    S, _, logd, E, _ = level_arrays(N, 0.37)
    S2, _, logd2, E2, _ = level_arrays(N, -0.37)
    a = sorted(zip(E, logd))
    b = sorted(zip(E2, logd2))
    assert a == b


def test_sector_structure():
    secs = spectrum(6, 0.4)
    assert [s.S for s in secs] == [0, 1, 2, 3]
    for s in secs:
        assert len(s.levels) == 2 * s.S + 1
        for M, E in s.levels:
            assert E == energy_level(6, s.S, M, 0.4)
    assert sum(s.multiplicity_exact * (2 * s.S + 1) for s in secs) == 2**6


def test_ground_state_examples():
    gs = ground_state(10, 0.6)
    assert (gs.S0, gs.M0, gs.degenerate) == (5, 3, False)
    assert gs.energy == pytest.approx(-6.8)
    gs = ground_state(10, 0.5)
    assert (gs.M0, gs.degenerate) == (3, True)
    assert gs.energy == pytest.approx(-6.2)
    assert energy_level(10, 5, 2, 0.5) == pytest.approx(-6.2)
    for N in (2, 8, 40):
        assert ground_state(N, 1.5).M0 == N // 2
    assert ground_state(10, -0.6).M0 == -3


@pytest.mark.parametrize("N", [2, 4, 6, 8, 10, 12])
def test_ground_state_is_argmin(N):
    for h in np.linspace(0, 2, 41):
        S, M, _, E, _ = level_arrays(N, h)
        gs = ground_state(N, h)
        assert gs.energy <= E.min() + 1e-12
        assert gs.energy == pytest.approx(E.min(), abs=1e-12)
        # every minimizer lives in the top sector
        assert np.all(S[np.abs(E - E.min()) < 1e-12] == N // 2)


def test_level_crossings():
    assert level_crossing_fields(10) == pytest.approx([0.1, 0.3, 0.5, 0.7, 0.9])
    assert level_crossing_fields(2) == [0.5]
    for N in (2, 6, 20):
        hs = level_crossing_fields(N)
        assert len(hs) == N // 2 and all(h < 1 for h in hs)
        for M, h in enumerate(hs):
            assert energy_level(N, N // 2, M, h) == pytest.approx(
                energy_level(N, N // 2, M + 1, h), abs=1e-12
            )
            assert ground_state(N, h).degenerate


def test_dense_hamiltonian_n2():
    H = dense_hamiltonian(2, 0.7)
    np.testing.assert_allclose(H, H.T)
    np.testing.assert_allclose(np.linalg.eigvalsh(H), sorted([-1.4, 1.4, -1.0, 1.0]), atol=1e-14)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
@pytest.mark.parametrize("h", [0.0, 0.3, -0.8, 1.7])
def test_dense_oracle_equivalence(N, h):
    ev = np.linalg.eigvalsh(dense_hamiltonian(N, h))
    np.testing.assert_allclose(ev, enumerated_spectrum(N, h), atol=1e-10)


def test_dense_n4_multiplicities():
    ev = np.linalg.eigvalsh(dense_hamiltonian(4, 0.3))
    assert [multiplicity(4, S)[1] for S in range(3)] == [2, 3, 1]
    np.testing.assert_allclose(ev, enumerated_spectrum(4, 0.3), atol=1e-10)


def test_dense_size_limit():
    with pytest.raises(ResourceError):
        dense_hamiltonian(14, 0.1)


def test_model_params_validation():
    with pytest.raises(DomainError):
        ModelParams(3, 1.0, 0.0)
    with pytest.raises(DomainError):
        ModelParams(4, 0.0, 0.0)
    with pytest.raises(DomainError):
        ModelParams(4, -1.0, 0.0)
    with pytest.raises(DomainError):
        ModelParams(0, 1.0, 0.0)
