import json
import random

import pytest
from gmpy2 import mpq

from diagtrace.poly import MultiPoly, d, parse, substitute
from diagtrace.symfun import (
    EMPTY,
    ArityMismatch,
    MixedIdentity,
    Partition,
    PureIdentity,
    WeightVector,
    eval_mixed_slot,
    eval_pure,
    identity_from_json,
    is_mixed_identity,
    is_pure_identity,
    is_sufficiently_monic,
    matrix_eval,
    ones,
    partitions_of,
    partitions_up_to,
    power_sum,
)
from oracles import partition_count

P = Partition


def test_partition_counts_match_recurrence():
    for n in range(31):
        assert sum(1 for _ in partitions_of(n)) == partition_count(n)
    assert sum(1 for _ in partitions_of(16)) == 231


def test_partition_order_and_content():
    assert [tuple(lam) for lam in partitions_of(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(partitions_of(0)) == [EMPTY]
    assert list(partitions_up_to(2)) == [EMPTY, P((1,)), P((2,)), P((1, 1))]
    for lam in partitions_of(9):
        assert lam.weight == 9 and list(lam) == sorted(lam, reverse=True)


def test_partition_helpers():
    lam = P.from_parts([1, 3, 1])
    assert lam == (3, 1, 1) and lam.length == 3 and lam.multiplicities() == {3: 1, 1: 2}
    assert lam.add_part(2) == (3, 2, 1, 1)
    assert ones(3) == (1, 1, 1)
    with pytest.raises(ValueError):
        P((1, 2))


def test_power_sum_examples():
    assert power_sum(WeightVector.numeric([2, 3]), 2).to_text() == "2*x1^2 + 3*x2^2"
    assert power_sum(WeightVector.symbolic_of(2), 1) == parse("d1*x1 + d2*x2")
    with pytest.raises(ValueError):
        power_sum(WeightVector.numeric([1]), 0)


def test_weight_vector_validation():
    with pytest.raises(ValueError):
        WeightVector.numeric([1, 0])
    with pytest.raises((ValueError, TypeError)):
        WeightVector.numeric([0.5])
    assert WeightVector.parse("1/2,-3").values == (mpq(1, 2), mpq(-3))
    assert WeightVector.parse("symbolic", 3).symbolic


def test_eval_examples():
    f = PureIdentity(1, 2, {P((1, 1)): MultiPoly.const(1), P((2,)): -MultiPoly.var(d(1))})
    assert not eval_pure(f, WeightVector.symbolic_of(1))
    assert is_pure_identity(f, WeightVector.symbolic_of(1))
    g = MixedIdentity(1, 1, {P((1,)): MultiPoly.const(1), EMPTY: -MultiPoly.var(d(1))})
    assert is_mixed_identity(g, WeightVector.numeric([7]))
    bad = PureIdentity(2, 2, {P((1, 1)): MultiPoly.const(1), P((2,)): -MultiPoly.var(d(1))})
    assert not is_pure_identity(bad, WeightVector.symbolic_of(2))
    assert not is_pure_identity(bad, WeightVector.symbolic_of(2), precheck=False)
    with pytest.raises(ArityMismatch):
        eval_pure(bad, WeightVector.symbolic_of(3))


def test_two_evaluation_paths_agree(chains):
    rng = random.Random(5)
    f = chains[2].mixed
    for _ in range(4):
        wv = WeightVector.numeric([mpq(rng.randint(-9, 9) or 1, rng.randint(1, 5)) for _ in range(2)])
        direct = tuple(eval_mixed_slot(f, wv, j) for j in (1, 2))
        assert matrix_eval(f, wv).slots == direct
    broken = MixedIdentity(2, 4, {**f.coeffs, P((2, 2)): f[P((2, 2))] + 1})
    wv = WeightVector.numeric([2, 3])
    assert not matrix_eval(broken, wv).is_zero()
    assert not is_mixed_identity(broken, wv)
    assert matrix_eval(broken, wv).first_nonzero() is not None


def test_specialization_commutes(chains):
    f = chains[2].pure
    wv = WeightVector.numeric([mpq(3, 2), -5])
    assert eval_pure(f.specialize(wv), wv) == substitute(eval_pure(f, WeightVector.symbolic_of(2)), wv.bindings())


def test_monic_reports(chains):
    assert is_sufficiently_monic(chains[2].mixed)
    assert not is_sufficiently_monic(chains[2].mixed, WeightVector.numeric([1, -1]))
    assert is_sufficiently_monic(chains[2].mixed, WeightVector.numeric([2, 3]))
    f = chains[1].pure.scale(2)
    rep = is_sufficiently_monic(f)
    assert not rep and "not 1" in rep.reason
    assert is_sufficiently_monic(f.normalized())


def test_identity_json_round_trip(chains):
    for f in (chains[2].mixed, chains[2].pure, chains[1].mixed):
        text = f.to_json()
        g = identity_from_json(text)
        assert g == f and g.to_json() == text
        assert json.loads(text)["format_version"] == 1


def test_text_rendering():
    f = MixedIdentity(1, 1, {P((1,)): MultiPoly.const(1), EMPTY: -MultiPoly.var(d(1))})
    assert f.to_text() == "p1 - d1*t"
