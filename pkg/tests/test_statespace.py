import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import partial_trace_loop
from qturing import machine
from qturing.errors import DimensionError, InvalidBitError, SubsystemError
from qturing.statespace import (
    LAMBDA,
    bloch_vector,
    decode_basis,
    density_from_bloch,
    encode_basis,
    equal_up_to_global_phase,
    ground_state,
    inner_product,
    random_product_state,
    random_state,
    reduced_density,
)


def test_ground_state_m4():
    psi = ground_state(4)
    assert psi.shape == (32,)
    assert psi[0] == 1 and np.count_nonzero(psi) == 1
    for mu in range(5):
        assert bloch_vector(psi, mu).k3 == -1


def test_ground_state_smallest_ring():
    psi = ground_state(1)
    assert psi.shape == (4,) and psi[0] == 1


def test_ground_state_rejects_empty_tape():
    with pytest.raises(DimensionError):
        ground_state(0)


@pytest.mark.parametrize(
    "bits, index",
    [((1, 0, 0, 0, 0), 1), ((0, 1, 0, 0, 0), 2), ((0, 0, 0, 0, 0), 0), ((0, 1, 1, 1, 1), 30)],
)
def test_encode_basis(bits, index):
    assert encode_basis(bits) == index


def test_encode_rejects_non_binary():
    with pytest.raises(InvalidBitError):
        encode_basis((0, 2, 0))


@pytest.mark.parametrize("n", range(2, 12))
def test_encode_decode_exhaustive(n):
    for s in range(2**n):
        assert encode_basis(decode_basis(s, n)) == s
    for b in itertools.islice(itertools.product((0, 1), repeat=n), 64):
        assert decode_basis(encode_basis(b), n) == b


def test_inner_product(rng):
    zero, one = ground_state(2), np.roll(ground_state(2), 1)
    assert inner_product(zero, zero) == 1
    assert inner_product(zero, one) == 0
    psi = random_state(3, rng)
    assert inner_product(psi, 1j * psi) == pytest.approx(1j)
    with pytest.raises(DimensionError):
        inner_product(zero, ground_state(3))


def test_equal_up_to_global_phase(rng):
    psi = random_state(4, rng)
    assert equal_up_to_global_phase(psi, np.exp(0.7j) * psi, 1e-12)
    assert not equal_up_to_global_phase(ground_state(2), np.roll(ground_state(2), 1), 1e-12)
    cat = machine.cat()
    assert equal_up_to_global_phase(machine.run(cat, 1), machine.run(cat, 9), 1e-12)


def test_bloch_vector_examples():
    assert tuple(bloch_vector(ground_state(4), 0)) == (0.0, 0.0, -1.0)
    zeno = machine.run(machine.zeno(4), 1)
    assert bloch_vector(zeno, 0).k3 == pytest.approx(-np.cos(np.pi / 4) ** 4, abs=1e-12)
    coin = machine.run(machine.coin(4), 1)
    for mu in range(5):
        assert np.allclose(tuple(bloch_vector(coin, mu)), 0.0, atol=1e-12)


def test_bloch_vector_bad_subsystem():
    with pytest.raises(SubsystemError):
        bloch_vector(ground_state(2), 3)


def test_reduced_density_examples():
    rho = reduced_density(ground_state(4), 0)
    assert np.allclose(rho, np.diag([1, 0]))
    cat = machine.run(machine.cat(), 1)
    assert np.allclose(reduced_density(cat, 0), np.diag([0.5, 0.5]), atol=1e-12)
    spec = machine.MachineSpec((0.9, 0.2))
    one_step = machine.step(ground_state(2), spec, 1)
    assert bloch_vector(one_step, 0).length == pytest.approx(1.0, abs=1e-12)


def test_reduced_density_matches_loop_oracle(rng):
    psi = random_state(4, rng)
    for mu in range(4):
        assert np.allclose(reduced_density(psi, mu), partial_trace_loop(psi, mu), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 7))
def test_bloch_and_density_agree(seed, n):
    r = np.random.default_rng(seed)
    psi = random_state(n, r)
    for mu in range(n):
        rho = reduced_density(psi, mu)
        assert np.allclose(rho, density_from_bloch(bloch_vector(psi, mu)), atol=1e-12)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(rho, rho.conj().T)
        assert np.linalg.eigvalsh(rho).min() >= -1e-12
        assert bloch_vector(psi, mu).length <= 1 + 1e-12


def test_bloch_matches_generator_traces(rng):
    psi = random_state(3, rng)
    rho = reduced_density(psi, 1)
    k = bloch_vector(psi, 1)
    for j in (1, 2, 3):
        assert k[j - 1] == pytest.approx(np.trace(rho @ LAMBDA[j]).real, abs=1e-12)


def test_product_states_have_unit_bloch_length(rng):
    psi, _ = random_product_state(5, rng)
    for mu in range(5):
        assert bloch_vector(psi, mu).length == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha1", [0.3, 1.2, np.pi / 2, 2.9])
def test_head_becomes_fuzzy_after_first_pair_gate(alpha1):
    spec = machine.MachineSpec((alpha1, 0.5, 0.5))
    psi = machine.state_at(spec, 1, 2)
    assert bloch_vector(psi, 0).length < 1 - 1e-6
