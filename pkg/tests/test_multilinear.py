import pytest

from diagtrace.multilinear import (
    expand,
    multilinearize,
    set_partitions,
    trace_count_report,
    verify_multilinear,
)
from diagtrace.poly import MultiPoly, parse
from diagtrace.symfun import Partition, PureIdentity, WeightVector


def bell(n):
    return sum(1 for _ in set_partitions(n))


def test_set_partition_counts():
    assert [bell(n) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_k1(chains):
    m = multilinearize(chains[1].pure)
    assert m.terms == {Partition((1, 1)): MultiPoly.const(2), Partition((2,)): parse("-2*d1")}
    assert verify_multilinear(m, WeightVector.symbolic_of(1))
    assert trace_count_report(m).reducing


def test_single_power_sum():
    f = PureIdentity(1, 3, {Partition((3,)): MultiPoly.const(1)})
    assert multilinearize(f).terms == {Partition((3,)): MultiPoly.const(6)}


def test_k2_symmetry_and_negative_control(chains):
    m = multilinearize(chains[2].pure)
    wv = WeightVector.symbolic_of(2)
    assert m.terms[Partition((1,) * 5)] == MultiPoly.const(120)
    assert verify_multilinear(m, wv)
    for perm in [(2, 1, 3, 4, 5), (5, 4, 3, 2, 1), (3, 1, 5, 2, 4)]:
        assert not expand(m, wv, relabel=dict(zip(range(1, 6), perm)))
    mu = next(mu for mu in m.terms if mu != Partition((1,) * 5))
    assert not verify_multilinear(m.without(mu), wv)


def test_limit():
    f = PureIdentity(1, 6, {Partition((6,)): MultiPoly.const(1)})
    with pytest.raises(ValueError):
        multilinearize(f, limit=5)
