import math
from itertools import product

import pytest
from pydantic import ValidationError

from conftest import cyclic_table
from models.bounds import LocalizedOracle, MultiplicityOracle
from services.bounds_calculator import BoundsCalculator
from services.exceptions import OracleError


def _aperiodic_necklaces(a: int, b: int) -> int:
    """Count primitive words of length a over b letters, up to rotation."""
    classes = set()
    for word in product(range(b), repeat=a):
        rotations = [word[i:] + word[:i] for i in range(a)]
        if len(set(rotations)) == a:
            classes.add(min(rotations))
    return len(classes)


def test_partition_numbers():
    assert [BoundsCalculator.partitions(n) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert BoundsCalculator.partitions(100) == 190569292
    with pytest.raises(ValueError):
        BoundsCalculator.partitions(-1)


def test_moebius():
    assert [BoundsCalculator.moebius(d) for d in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


@pytest.mark.parametrize('a', range(1, 9))
def test_necklace_count_matches_brute_force(a):
    for b in range(0, 6):
        assert BoundsCalculator.necklace_Q(a, b) == _aperiodic_necklaces(a, b)


@pytest.mark.parametrize('a, b', [(a, b) for a in range(1, 13) for b in (1, 2, 3, 5, 7, 41)])
def test_necklace_counts_tile_all_words(a, b):
    assert sum(d * BoundsCalculator.necklace_Q(d, b) for d in range(1, a + 1) if a % d == 0) == b ** a


def test_degree_four_homotopy_dimension():
    assert BoundsCalculator.rational_homotopy_dim(4, 4) == 5
    for n in range(1, 11):
        assert BoundsCalculator.rational_homotopy_dim(4, n) == BoundsCalculator.partitions(n)


def test_homotopy_dimension_vanishes_off_the_residues():
    for n in range(1, 11):
        for k in range(1, 61):
            if k % 12 not in (1, 4, 7, 10) or k == 1:
                assert BoundsCalculator.rational_homotopy_dim(k, n) == 0, (k, n)


def test_homotopy_dimension_formulas():
    b = BoundsCalculator.partitions(5) - 1
    assert BoundsCalculator.rational_homotopy_dim(10, 5) == BoundsCalculator.necklace_Q(3, b)
    assert BoundsCalculator.rational_homotopy_dim(13, 5) == BoundsCalculator.necklace_Q(4, b)
    assert BoundsCalculator.rational_homotopy_dim(7, 5) == BoundsCalculator.necklace_Q(2, b) + BoundsCalculator.necklace_Q(1, b)
    # only the trivial class exists in degree one
    assert BoundsCalculator.rational_homotopy_dim(7, 1) == 0


def test_homotopy_dimension_formulas_over_the_range():
    for n in range(1, 11):
        b = BoundsCalculator.partitions(n) - 1
        for k in range(7, 61, 3):
            j = (k - 1) // 3
            expected = BoundsCalculator.necklace_Q(j, b)
            if k % 12 == 7:
                expected += BoundsCalculator.necklace_Q(j // 2, b)
            assert BoundsCalculator.rational_homotopy_dim(k, n) == expected, (k, n)


def test_partition_function_of_a_constant_oracle():
    result = BoundsCalculator.partition_function(2, MultiplicityOracle.constant(1, 3), 3)
    assert result.value == pytest.approx(49 / 36)
    assert result.zeta_lower == pytest.approx(49 / 36)
    assert result.upper is None


def test_partition_function_with_upper_bounds():
    oracle = MultiplicityOracle(N={1: 1, 2: 2, 3: 1}, upper={1: 1, 2: 3, 3: 2})
    result = BoundsCalculator.partition_function(1.5, oracle, 3)
    assert result.zeta_lower <= result.value <= result.upper
    assert result.value == pytest.approx(1 + 2 * 2 ** -1.5 + 3 ** -1.5)


def test_partition_function_is_monotone(rng):
    oracle = MultiplicityOracle(N={n: int(rng.integers(1, 6)) for n in range(1, 21)})
    betas = [0.5, 1.0, 1.5, 2.0, 3.0, 8.0]
    for n_max in (5, 20):
        values = [BoundsCalculator.partition_function(beta, oracle, n_max).value for beta in betas]
        assert all(a > b for a, b in zip(values, values[1:]))
    for beta in betas:
        values = [BoundsCalculator.partition_function(beta, oracle, n_max).value for n_max in range(1, 21)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert BoundsCalculator.partition_function(beta, oracle, 20).zeta_lower <= values[-1]


def test_oracles_validate_their_values():
    with pytest.raises(ValidationError):
        MultiplicityOracle(N={2: 0})
    with pytest.raises(ValidationError):
        MultiplicityOracle(N={2: 3}, upper={2: 1})
    with pytest.raises(ValidationError):
        LocalizedOracle(period=[1, -1])
    with pytest.raises(OracleError):
        BoundsCalculator.partition_function(2, MultiplicityOracle.constant(1, 3), 5)
    with pytest.raises(OracleError):
        LocalizedOracle(N={1: 1}).value(2)


def test_localized_closed_form_matches_partial_sums():
    oracle = LocalizedOracle.periodic([1, 0, 2], prime=3)
    closed = BoundsCalculator.localized_zeta_closed_form(2.5, 3, oracle)
    partial = BoundsCalculator.localized_zeta(2.5, 3, oracle, 20000)
    assert closed == pytest.approx(partial, rel=1e-6)
    constant = LocalizedOracle.periodic([1])
    assert BoundsCalculator.localized_zeta_closed_form(2, 5, constant) == pytest.approx(math.pi ** 2 / 6)


def test_localized_zeta_rejects_bad_input():
    oracle = LocalizedOracle.periodic([1, 1], prime=2)
    with pytest.raises(OracleError):
        BoundsCalculator.localized_zeta(2, 4, oracle, 10)
    with pytest.raises(OracleError):
        BoundsCalculator.localized_zeta(2, 3, oracle, 10)
    with pytest.raises(OracleError):
        BoundsCalculator.localized_zeta_closed_form(1.0, 2, oracle)
    with pytest.raises(OracleError):
        BoundsCalculator.localized_zeta_closed_form(2.0, 2, LocalizedOracle(p=2, N={1: 1}))


def test_gibbs_functional_concentrates_on_the_unit():
    basis = {'U(O)': 1, 'M(2)': 2, 'M(3)': 3}
    f = {'U(O)': 0.25, 'M(2)': 10.0, 'M(3)': -4.0}
    assert BoundsCalculator.gibbs_functional(f, 50.0, basis) == pytest.approx(0.25, abs=1e-10)
    even = BoundsCalculator.gibbs_functional(f, 0.0, basis)
    assert even == pytest.approx(sum(f.values()) / 3)
    with pytest.raises(OracleError):
        BoundsCalculator.gibbs_functional({'U(O)': 1.0}, 1.0, basis)
    with pytest.raises(OracleError):
        BoundsCalculator.gibbs_functional({}, 1.0, {})


def test_gibbs_functional_weights_by_multiplicity():
    basis = {'M(1)': 1, 'M(2)': 2}
    oracle = MultiplicityOracle(N={1: 1, 2: 4})
    value = BoundsCalculator.gibbs_functional({'M(1)': 0.0, 'M(2)': 1.0}, 2.0, basis, oracle)
    assert value == pytest.approx(1 / 2)


def test_gibbs_functional_stays_within_the_tail_weight(rng):
    basis = {'U(O)': 1, **{f"M({n})": n for n in range(2, 9)}}
    oracle = MultiplicityOracle(N={1: 1, **{n: int(rng.integers(1, 4)) for n in range(2, 9)}})
    for beta in (0.5, 1.0, 2.0, 4.0, 10.0):
        f = {label: float(rng.normal()) for label in basis}
        tail = sum(oracle.value(n) * n ** -beta for n in range(2, 9))
        spread = max(abs(f[label] - f['U(O)']) for label in basis)
        value = BoundsCalculator.gibbs_functional(f, beta, basis, oracle)
        assert abs(value - f['U(O)']) <= spread * tail / (1 + tail) + 1e-12
        assert abs(value - f['U(O)']) <= 2 * max(abs(v) for v in f.values()) * tail + 1e-12


def test_oracle_from_a_table():
    oracle = BoundsCalculator.oracle_from_table(cyclic_table(8), 'O')
    assert oracle.counts == {n: 1 for n in range(1, 9)}
    result = BoundsCalculator.partition_function(3, oracle, 8)
    assert result.value == pytest.approx(BoundsCalculator.zeta_partial(3, 8))
