"""Determinantal identities ``det(p_{a_i + b_j}) = 0`` of size ``k+1``."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .poly import MultiPoly, p
from .symfun import PureIdentity, WeightVector, is_pure_identity


@dataclass(frozen=True)
class HankelSpec:
    """Row offsets ``a`` and column offsets ``b`` for an arity-``k`` determinant.

    Every entry ``a_i + b_j`` must be at least 1, since ``p_0`` is not
    defined.  Repeated offsets are accepted; they give a zero determinant.
    """

    arity: int
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if self.arity < 1:
            raise ValueError("arity must be positive")
        n = self.arity + 1
        if len(self.a) != n or len(self.b) != n:
            raise ValueError(f"arity {self.arity} needs {n} row and {n} column offsets")
        if any(ai + bj < 1 for ai in self.a for bj in self.b):
            raise ValueError(f"offsets {self.a}, {self.b} produce an entry p_n with n < 1")

    @property
    def weight(self) -> int:
        return sum(self.a) + sum(self.b)


def _det(rows: list[list[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = MultiPoly()
    for j in range(n):
        entry = rows[0][j]
        if not entry:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = entry * _det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def determinant(a, b) -> MultiPoly:
    """Cofactor expansion of ``det(p_{a_i + b_j})`` in the power-sum ring."""
    rows = [[MultiPoly.var(p(ai + bj)) for bj in b] for ai in a]
    return _det(rows)


def hankel_identity(spec: HankelSpec) -> PureIdentity:
    return PureIdentity.from_poly(determinant(spec.a, spec.b), spec.arity, spec.weight)


@dataclass(frozen=True)
class HankelResult:
    spec: HankelSpec
    passed: bool
    terms: int


def verify_hankel(spec: HankelSpec) -> HankelResult:
    f = hankel_identity(spec)
    ok = is_pure_identity(f, WeightVector.symbolic_of(spec.arity))
    return HankelResult(spec, ok, len(f))


def _specs(k: int, bound: int, trials: int | None, seed: int):
    n = k + 1
    values = range(0, bound + 1)
    if trials is None:
        for a in itertools.product(values, repeat=n):
            for b in itertools.product(values, repeat=n):
                if all(ai + bj >= 1 for ai in a for bj in b):
                    yield HankelSpec(k, a, b)
        return
    rng = random.Random(seed)
    made = 0
    while made < trials:
        a = tuple(rng.randint(0, bound) for _ in range(n))
        b = tuple(rng.randint(0, bound) for _ in range(n))
        if all(ai + bj >= 1 for ai in a for bj in b):
            made += 1
            yield HankelSpec(k, a, b)


def verify_hankel_batch(k: int, bound: int, trials: int | None = None, seed: int = 0, max_k: int = 4) -> list[HankelResult]:
    """Verify every spec with offsets in ``0..bound`` (``trials=None``) or a random sample."""
    if k > max_k:
        raise ValueError(f"k={k} exceeds configured maximum {max_k}")
    return [verify_hankel(s) for s in _specs(k, bound, trials, seed)]


def minor_vanishes(k: int, a, b) -> bool:
    """Whether the ``len(a)``-sized determinant vanishes at arity ``k`` (negative control)."""
    f = PureIdentity.from_poly(determinant(a, b), k, sum(a) + sum(b))
    return is_pure_identity(f, WeightVector.symbolic_of(k))
