"""Zero subset sums of the trace weights and their effect on monic relations.

If the weights indexed by a non-empty set ``I`` sum to zero, sending
``x_i -> x`` for ``i`` in ``I`` and every other ``x_i -> 0`` kills every power
sum while ``X`` itself survives, so no relation with a non-zero ``t^N``
coefficient can hold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq

from .forge import ChainResult
from .poly import MultiPoly, d, substitute, x
from .symfun import MixedIdentity, WeightVector, eval_mixed_slot, power_sum


@dataclass(frozen=True)
class ObstructionWitness:
    subset: tuple  # 1-based indices, increasing
    total: object = mpq(0)

    def specialization(self, k: int) -> dict:
        """``x_i -> x_1`` on the subset, ``x_i -> 0`` elsewhere (``x_1`` plays the role of ``x``)."""
        xv = MultiPoly.var(x(1))
        return {x(i): (xv if i in self.subset else MultiPoly()) for i in range(1, k + 1)}


def subsets(k: int):
    for r in range(1, k + 1):
        yield from itertools.combinations(range(1, k + 1), r)


def find_zero_subset(wv: WeightVector) -> ObstructionWitness | None:
    """First non-empty ``I`` (by size, then lexicographically) with ``sum d_I = 0``."""
    if wv.symbolic:
        raise ValueError("needs numeric weights")
    vals = wv.values
    for s in subsets(wv.arity):
        if sum(vals[i - 1] for i in s) == 0:
            return ObstructionWitness(s)
    return None


@dataclass
class ObstructionReport:
    weights: str
    subset: tuple
    power_sums_vanish: bool
    checked_up_to: int
    leading_value: object
    specialized_slot: MultiPoly
    passed: bool
    notes: list = field(default_factory=list)


def demonstrate_obstruction(f: MixedIdentity | ChainResult, witness: ObstructionWitness, wv: WeightVector) -> ObstructionReport:
    """Apply the witness specialization and confirm the top coefficient vanishes at ``wv``."""
    if isinstance(f, ChainResult):
        f = f.mixed
    if wv.symbolic:
        raise ValueError("needs numeric weights")
    if f.arity != wv.arity:
        raise ValueError("arity mismatch")
    vals = wv.values
    if not witness.subset or any(not 1 <= i <= wv.arity for i in witness.subset):
        raise ValueError(f"witness {witness.subset} is not a subset of 1..{wv.arity}")
    if sum(vals[i - 1] for i in witness.subset) != 0:
        raise ValueError(f"witness {witness.subset} does not sum to zero at d={wv}")
    spec = witness.specialization(wv.arity)
    vanish = all(not substitute(power_sum(wv, n), spec) for n in range(1, f.weight + 1))
    lead = substitute(f.leading_coefficient, wv.bindings())
    lead_val = lead.constant_value() if lead else mpq(0)
    # a slot inside the subset sees t = x, so the whole identity collapses to lead * x^N
    j = witness.subset[0]
    slot = substitute(eval_mixed_slot(f, wv, j), spec)
    expected = MultiPoly.var(x(1), f.weight).scale(lead_val)
    notes = []
    if slot != expected:
        notes.append("specialized slot differs from alpha_empty(d) * x^N")
    passed = vanish and lead_val == 0 and not slot
    return ObstructionReport(str(wv), witness.subset, vanish, f.weight, lead_val, slot, passed, notes)


@dataclass
class HyperplaneCheck:
    subset: tuple
    substitution: str
    vanishes: bool


def leading_coefficient_factors_check(chain: ChainResult | MixedIdentity) -> list[HyperplaneCheck]:
    """Restrict ``alpha_empty`` to every hyperplane ``sum_{i in I} d_i = 0`` and expand."""
    f = chain.mixed if isinstance(chain, ChainResult) else chain
    lead = f.leading_coefficient
    out = []
    for s in subsets(f.arity):
        top = s[-1]
        image = MultiPoly()
        for i in s[:-1]:
            image = image - MultiPoly.var(d(i))
        restricted = substitute(lead, {d(top): image})
        out.append(HyperplaneCheck(s, f"d{top} -> {image}", not restricted))
    return out
