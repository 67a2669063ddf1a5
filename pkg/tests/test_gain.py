import itertools

import numpy as np
import pytest

from qbattery import matops
from qbattery.distribution import equality_ordering_check, marginal_capacities
from qbattery.errors import BadArity, BadPermutation, TooLarge
from qbattery.gain import (
    STRATEGIES,
    apply_gain_permutation,
    bloch_lengths,
    marginal_sums,
    optimize_gain,
    sort_diagonal_permutation,
    two_qubit_permutation,
    corner_swap_permutation,
    transfer_ratio_curve,
)
from qbattery.hamiltonians import BatteryHamiltonian, default_eps
from qbattery.sampling import random_hamiltonian, random_x_state
from qbattery.states import bell_diagonal, ghz_white_noise


def test_swap_rows_two_and_four_on_bell_diagonal():
    ea, eb = 0.7, 0.2
    res = apply_gain_permutation(bell_diagonal(0.5, 0.3, 0.1), BatteryHamiltonian((ea, eb)),
                                 matops.transposition(4, 2, 4))
    assert res.marginals_before == pytest.approx((0.0, 0.0), abs=1e-15)
    assert res.marginals_after == pytest.approx((0.2 * ea, eb), abs=1e-12)
    assert res.total_after == pytest.approx(res.total_before, abs=1e-12)


def test_dense_and_batched_marginals_agree(rng):
    for n in (2, 3):
        for _ in range(20):
            rho, h = random_x_state(n, rng), random_hamiltonian(n, rng)
            perms = np.array([rng.permutation(2**n) for _ in range(10)])
            fast = marginal_sums(rho, h, perms)
            for pi, value in zip(perms, fast):
                dense = matops.conjugate_by_permutation(rho.matrix(), pi)
                assert value == pytest.approx(sum(marginal_capacities(dense, n, h)), abs=1e-12)


def test_bloch_lengths_identity():
    rho = ghz_white_noise(3, 0.7)
    np.testing.assert_allclose(bloch_lengths(rho, np.arange(8)), [[0, 0, 0]], atol=1e-15)


def test_exhaustive_dominates_every_two_qubit_permutation(rng):
    for _ in range(20):
        rho, h = random_x_state(2, rng), random_hamiltonian(2, rng)
        best = optimize_gain(rho, h, "exhaustive")
        for pi in itertools.permutations(range(4)):
            assert apply_gain_permutation(rho, h, pi).gain <= best.gain + 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_exhaustive_beats_heuristics(n, rng):
    for _ in range(10):
        rho, h = random_x_state(n, rng), random_hamiltonian(n, rng)
        best = optimize_gain(rho, h, "exhaustive")
        assert best.gain >= -1e-12
        for strategy in STRATEGIES[1:]:
            assert best.gain >= optimize_gain(rho, h, strategy).gain - 1e-10


def test_exhaustive_too_large(rng):
    with pytest.raises(TooLarge):
        optimize_gain(random_x_state(4, rng), random_hamiltonian(4, rng))


def test_unknown_strategy():
    with pytest.raises(ValueError):
        optimize_gain(ghz_white_noise(2, 0.5), BatteryHamiltonian((0.5, 0.3)), "greedy")


def test_bad_permutation():
    with pytest.raises(BadPermutation):
        apply_gain_permutation(ghz_white_noise(2, 0.5), BatteryHamiltonian((0.5, 0.3)), [0, 1, 2])


def test_ghz_full_transfer_at_zero_interaction():
    res = optimize_gain(ghz_white_noise(3, 0.6), BatteryHamiltonian(default_eps(3)))
    assert res.ratio == pytest.approx(1.0, abs=1e-10)
    assert res.rbc_after == pytest.approx(0.0, abs=1e-10)


def test_ratio_undefined_without_residual():
    res = optimize_gain(ghz_white_noise(2, 0.0), BatteryHamiltonian((0.5, 0.3)))
    assert res.ratio is None
    assert res.rbc_fraction_after == 0.0


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0])
def test_transfer_ratio_closed_form(n, gamma):
    [(g, ratio)] = transfer_ratio_curve(n, 0.5, [gamma])
    assert g == gamma
    assert ratio == pytest.approx((1.2 + 0.2 * n) / (2 * np.hypot(0.6 + 0.1 * n, gamma)), abs=1e-10)


def test_transfer_ratio_value():
    [(_, ratio)] = transfer_ratio_curve(3, 0.5, [0.5])
    assert ratio == pytest.approx(0.8741572761215377, abs=1e-12)


def test_pattern_permutation():
    np.testing.assert_array_equal(corner_swap_permutation(8), [0, 7, 2, 3, 4, 5, 6, 1])


def test_sort_diagonal():
    rho = random_x_state(3, np.random.default_rng(3), incoherent=True)
    pi = sort_diagonal_permutation(rho)
    moved = np.empty(8)
    moved[pi] = rho.diag
    assert np.all(np.diff(moved) <= 0)


def test_two_qubit_construction(rng):
    for _ in range(200):
        rho, h = random_x_state(2, rng), random_hamiltonian(2, rng)
        pi = two_qubit_permutation(rho)
        moved = np.empty(4)
        moved[pi] = rho.diag
        res = apply_gain_permutation(rho, h, pi)
        assert res.gain >= -1e-12
        if not np.array_equal(pi, np.arange(4)):
            assert equality_ordering_check(moved).matches


def test_two_qubit_construction_identity_when_ordered():
    from qbattery.states import XState

    rho = XState(2, [0.4, 0.3, 0.2, 0.1], [0.05, 0])
    np.testing.assert_array_equal(two_qubit_permutation(rho), np.arange(4))
    with pytest.raises(BadArity):
        two_qubit_permutation(ghz_white_noise(3, 0.5))
