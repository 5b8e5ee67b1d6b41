import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from qturing import histories, machine
from qturing.errors import ImpossibleOutcomeError, UnsupportedError
from qturing.machine import MachineSpec
from qturing.verify import random_rational_machine

ZERO4 = MachineSpec((Fraction(0),) * 4)


def test_no_rotation_single_history():
    branches = histories.enumerate_histories(ZERO4)
    assert len(branches) == 1
    assert branches[0].outcomes == (-1, -1, -1, -1)
    assert branches[0].probability == 1.0


def test_cat_has_two_histories():
    branches = histories.enumerate_histories(machine.cat())
    assert sorted(b.signs for b in branches) == ["++++", "----"]
    assert all(b.probability == pytest.approx(0.5, abs=1e-12) for b in branches)


def test_coin_histories_are_fair():
    branches = histories.enumerate_histories(machine.coin())
    assert len(branches) == 16
    assert all(b.probability == pytest.approx(1 / 16, abs=1e-12) for b in branches)


def test_generic_tree_is_complete(rng):
    spec = MachineSpec(tuple(rng.uniform(0.1, 3.0, 6)))
    branches = histories.enumerate_histories(spec)
    assert len(branches) == 2**6
    assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=1e-12)


def test_branch_probability_by_hand():
    a = (0.4, 1.1)
    spec = MachineSpec(a)
    probs = {b.signs: b.probability for b in histories.enumerate_histories(spec)}
    s1, c1 = math.sin(a[0] / 2) ** 2, math.cos(a[0] / 2) ** 2
    s2, c2 = math.sin(a[1] / 2) ** 2, math.cos(a[1] / 2) ** 2
    assert probs["--"] == pytest.approx(c1 * c2)
    assert probs["-+"] == pytest.approx(c1 * s2)
    assert probs["+-"] == pytest.approx(s1 * s2)
    assert probs["++"] == pytest.approx(s1 * c2)


def test_ensemble_density_examples():
    single = histories.enumerate_histories(ZERO4)
    assert np.allclose(histories.ensemble_density(single), np.diag([1, 0]))
    coin = histories.ensemble_density(histories.enumerate_histories(machine.coin()))
    assert np.allclose(coin, np.diag([0.5, 0.5]), atol=1e-12)
    zeno = histories.ensemble_density(histories.enumerate_histories(machine.zeno(4)))
    k3 = (zeno[1, 1] - zeno[0, 0]).real
    assert k3 == pytest.approx(-0.25, abs=1e-12)


def test_ensemble_density_rejects_unnormalized():
    branches = histories.enumerate_histories(machine.coin())[:3]
    with pytest.raises(ValueError):
        histories.ensemble_density(branches)


def test_parallelism_examples(rng):
    assert histories.parallelism_residual(ZERO4) == 0.0
    assert histories.parallelism_residual(machine.zeno(4)) <= 1e-12
    assert histories.parallelism_residual(random_rational_machine(6, rng)) <= 1e-12


def test_parallelism_diagnostic_runs_beyond_first_cycle():
    rows = histories.parallelism_diagnostic(machine.zeno(3), 3)
    assert len(rows) == 9
    assert max(d for m, j, d in rows if m == 1) <= 1e-12


def test_tape_readout_cat():
    readout = histories.tape_readout(machine.cat())
    assert set(readout) == {"1111", "0000"}
    assert readout["1111"].outcomes == (-1, -1, -1, -1)
    assert readout["0000"].outcomes == (1, 1, 1, 1)
    assert readout["1111"].tape == "1111"
    for branch in readout.values():
        assert branch.probability == pytest.approx(0.5, abs=1e-12)


def test_tape_readout_without_rotation():
    readout = histories.tape_readout(ZERO4)
    # the head stays in |0>, so every pair gate writes a 1
    assert list(readout) == ["1111"]
    assert readout["1111"].outcomes == (-1, -1, -1, -1)


def test_tape_readout_matches_decision_tree():
    spec = machine.zeno(4)
    readout = histories.tape_readout(spec)
    tree = {b.tape: b for b in histories.enumerate_histories(spec)}
    assert len(readout) == len(tree) == 16
    for bits, branch in readout.items():
        assert branch.outcomes == tree[bits].outcomes
        assert branch.probability == pytest.approx(tree[bits].probability, abs=1e-12)
        # head state left behind matches the last recorded outcome
        assert np.allclose(np.abs(branch.final_head), np.abs(tree[bits].final_head))


def test_tape_readout_only_first_cycle():
    with pytest.raises(UnsupportedError):
        histories.tape_readout(machine.cat(), cycle=2)


def test_measurement_order_is_irrelevant(rng):
    spec = MachineSpec(tuple(rng.uniform(0, 6, 4)))
    psi = machine.run(spec, 1)
    reference = histories.tape_distribution(psi, [1, 2, 3, 4])
    for order in itertools.permutations([1, 2, 3, 4]):
        dist = histories.tape_distribution(psi, list(order))
        assert set(dist) == set(reference)
        for key, p in dist.items():
            assert p == pytest.approx(reference[key], abs=1e-12)


def test_postponement_examples(rng):
    assert histories.postponement_residual(machine.cat(), 1, 1) <= 1e-12
    assert histories.postponement_residual(ZERO4, 1, 1) == 0.0
    spec = MachineSpec(tuple(rng.uniform(0, 6, 4)))
    for mu in range(1, 5):
        for outcome in (0, 1):
            assert histories.postponement_residual(spec, mu, outcome) <= 1e-12
            assert histories.postponement_residual(spec, mu, outcome, cycle=3) <= 1e-12


def test_postponement_impossible_outcome():
    with pytest.raises(ImpossibleOutcomeError):
        histories.postponement_residual(ZERO4, 1, 0)
