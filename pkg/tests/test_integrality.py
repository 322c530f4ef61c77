import random

import pytest
from gmpy2 import mpq

from diagtrace.integrality import ObstructionWitness, demonstrate_obstruction, find_zero_subset, leading_coefficient_factors_check
from diagtrace.symfun import WeightVector
from oracles import brute_zero_subsets


def random_weights(rng, planted):
    k = rng.randint(1, 6)
    vals = [mpq(rng.randint(1, 30), rng.randint(1, 6)) * rng.choice([1, -1]) for _ in range(k)]
    if planted and k >= 2:
        size = rng.randint(2, k)
        idx = rng.sample(range(k), size)
        vals[idx[-1]] = -sum(vals[i] for i in idx[:-1]) or vals[idx[-1]]
    return vals


def test_zero_subset_agrees_with_brute_force():
    rng = random.Random(2024)
    planted_hits = 0
    for case in range(100):
        vals = random_weights(rng, planted=case % 2 == 0)
        expected = brute_zero_subsets(vals)
        w = find_zero_subset(WeightVector.numeric(vals))
        if expected:
            planted_hits += 1
            assert w is not None and w.subset in expected
            assert w.subset == min(expected, key=lambda s: (len(s), s))
        else:
            assert w is None
    assert planted_hits >= 40


@pytest.mark.parametrize("k, vals", [(2, [1, -1]), (3, [1, 2, -3])])
def test_obstruction_reports(chains, k, vals):
    wv = WeightVector.numeric(vals)
    w = find_zero_subset(wv)
    rep = demonstrate_obstruction(chains[k], w, wv)
    assert rep.passed and rep.leading_value == 0 and rep.power_sums_vanish
    assert not rep.notes


def test_bad_witness_rejected(chains):
    wv = WeightVector.numeric([1, 2])
    with pytest.raises(ValueError):
        demonstrate_obstruction(chains[2], ObstructionWitness((1,)), wv)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_leading_coefficient_vanishes_on_hyperplanes(chains, k):
    checks = leading_coefficient_factors_check(chains[k])
    assert len(checks) == 2 ** k - 1 and all(c.vanishes for c in checks)
