import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeno_discord.errors import DomainError, IndeterminateEntropy, NonHermitianInput
from zeno_discord.qstate import (
    ValidationMode,
    XState,
    binary_entropy,
    eigenvalues_hermitian,
    entropy_from_eigenvalues,
    is_hermitian,
    partial_trace,
    validate_state,
    von_neumann_entropy,
)


def random_density(rng, dim=4, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@st.composite
def x_states(draw):
    d = np.array([draw(st.floats(0.0, 1.0)) for _ in range(4)])
    if d.sum() == 0:
        d[0] = 1.0
    d = d / d.sum()
    outer = draw(st.floats(-1, 1)) * math.sqrt(d[0] * d[3])
    inner = draw(st.floats(-1, 1)) * math.sqrt(d[1] * d[2])
    return XState(*d, outer=outer, inner=inner)


def test_bell_state_entropies():
    bell = XState(0.5, 0.0, 0.0, 0.5, outer=0.5)
    assert von_neumann_entropy(bell) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(partial_trace(bell, 1)) == pytest.approx(1.0, abs=1e-12)


def test_maximally_mixed_entropy_is_two_bits():
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-12)


def test_binary_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.2) == pytest.approx(0.7219280948873623, abs=1e-15)
    assert binary_entropy(-1e-13) == 0.0
    with pytest.raises(DomainError):
        binary_entropy(1.1)
    with pytest.raises(DomainError):
        binary_entropy(-0.01)


def test_entropy_clamps_roundoff_but_escalates_real_negatives():
    assert entropy_from_eigenvalues([1.0, -5e-10, 0.0, 0.0]) == 0.0
    with pytest.raises(IndeterminateEntropy):
        entropy_from_eigenvalues([1.0, -1e-6])


def test_non_hermitian_rejected():
    m = np.eye(2, dtype=complex) / 2
    m[0, 1] = 0.1
    assert not is_hermitian(m)
    with pytest.raises(NonHermitianInput):
        eigenvalues_hermitian(m)


def test_partial_trace_of_product_state():
    rng = np.random.default_rng(1)
    a, b = random_density(rng, 2), random_density(rng, 2)
    rho = np.kron(a, b)
    np.testing.assert_allclose(partial_trace(rho, 1), a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, 2), b, atol=1e-14)
    with pytest.raises(ValueError):
        partial_trace(rho, 3)


def test_two_by_two_analytic_matches_numpy():
    rng = np.random.default_rng(2)
    for _ in range(50):
        m = random_density(rng, 2)
        np.testing.assert_allclose(eigenvalues_hermitian(m), np.linalg.eigvalsh(m)[::-1], atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(x_states())
def test_xstate_spectrum_matches_dense(x):
    dense = np.linalg.eigvalsh(x.to_matrix())[::-1]
    np.testing.assert_allclose(x.eigenvalues(), dense, atol=1e-13)
    np.testing.assert_allclose(eigenvalues_hermitian(x.to_matrix()), dense, atol=1e-13)


@settings(max_examples=200, deadline=None)
@given(x_states())
def test_entropy_bounds_and_subsystem_traces(x):
    s = von_neumann_entropy(x)
    assert -1e-12 <= s <= 2.0 + 1e-12
    for keep in (1, 2):
        red = partial_trace(x, keep)
        assert np.trace(red).real == pytest.approx(1.0, abs=1e-12)
        assert -1e-12 <= von_neumann_entropy(red) <= 1.0 + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_araki_lieb_and_subadditivity(seed):
    rho = random_density(np.random.default_rng(seed))
    s_ab = von_neumann_entropy(rho)
    s_a, s_b = von_neumann_entropy(partial_trace(rho, 1)), von_neumann_entropy(partial_trace(rho, 2))
    assert s_ab <= s_a + s_b + 1e-10
    assert abs(s_a - s_b) <= s_ab + 1e-10


def test_validate_ideal_and_lossy():
    good = XState(0.25, 0.25, 0.25, 0.25)
    assert validate_state(good).ok
    lossy = XState(0.2, 0.2, 0.2, 0.2, lossy=True)
    assert not validate_state(lossy, ValidationMode.IDEAL).ok
    report = validate_state(lossy, ValidationMode.LOSSY)
    assert report.ok
    assert report.trace_deficit == pytest.approx(0.2)
    over = XState(0.5, 0.5, 0.5, 0.0)
    assert not validate_state(over, "lossy").ok


def test_validate_flags_negativity_and_garbage_without_raising():
    bad = XState(0.5, 0.0, 0.0, 0.5, outer=0.9)
    report = validate_state(bad)
    assert not report.ok and report.min_eigenvalue < 0
    nan = np.full((4, 4), np.nan)
    assert not validate_state(nan).ok
    skew = np.eye(4, dtype=complex) / 4
    skew[0, 1] = 0.1
    assert "non-hermitian" in validate_state(skew).violations
