"""Inductive construction of sufficiently monic identities.

Starting from ``p1 - d1*t`` for a single diagonal slot, each level alternates

* the *lift*: a pure identity ``f`` of arity ``k`` gives, for each slot ``i`` of
  arity ``k+1``, the polynomial obtained by dropping ``d_i`` from the weights
  and replacing ``p_j`` by ``p_j - d_i t^j``; it vanishes at ``t = x_i``;
* the *product*: multiplying the ``k+1`` lifts kills every slot, giving a
  mixed identity of weight ``(k+1) N``;
* the *trace step*: multiply a mixed identity by ``t`` and take the trace,
  turning ``t^e`` into ``p_(e+1)``; the result is a pure identity of weight
  ``N + 1`` with the same top and ``p_1^N`` coefficients.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .poly import POWER_SUM_WEIGHTS, Family, MultiPoly, T, coefficient_of, d, is_homogeneous, p, substitute
from .symfun import (
    EMPTY,
    ArityMismatch,
    MixedIdentity,
    Partition,
    PureIdentity,
    WeightVector,
    _PowerSumTable,
    eval_mixed_slot,
    is_mixed_identity,
    is_pure_identity,
    is_sufficiently_monic,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_K = 4


class ResourceLimitError(RuntimeError):
    """A configured degree or term budget would be exceeded.

    ``levels`` holds the chain levels finished before the guard tripped.
    """

    def __init__(self, message, levels=()):
        super().__init__(message)
        self.levels = list(levels)


class ReductionUnavailable(ArithmeticError):
    """The top coefficient of the relation vanishes at the requested weights."""


def base_mixed_k1() -> MixedIdentity:
    """``p1 - d1*t``: a single diagonal entry is its own trace divided by ``d1``."""
    return MixedIdentity(1, 1, {EMPTY: -MultiPoly.var(d(1)), Partition((1,)): 1})


def base_pure_k1() -> PureIdentity:
    """``p1^2 - d1*p2``, which holds because ``(d1 x)^2 = d1 (d1 x^2)``."""
    return PureIdentity(1, 2, {Partition((1, 1)): 1, Partition((2,)): -MultiPoly.var(d(1))})


# ---------------------------------------------------------------------------
# lift


def _deleted_weights(arity_plus: int, i: int) -> dict:
    """Rename ``d_1..d_k`` to the weights of ``d+`` with ``d_i`` removed."""
    out = {}
    for j in range(1, arity_plus):
        target = j if j < i else j + 1
        if target != j:
            out[d(j)] = MultiPoly.var(d(target))
    return out


def shifted_product(lam: Partition, i: int) -> MultiPoly:
    """``prod_j (p_{lam_j} - d_i t^{lam_j})``."""
    di = MultiPoly.var(d(i))
    out = MultiPoly.const(1)
    for a in lam:
        out = out * (MultiPoly.var(p(a)) - di * MultiPoly.var(T, a))
    return out


def lift(f: PureIdentity, i: int) -> MixedIdentity:
    """The polynomial ``g_i(t) = f(d-hat_i; p_j - d_i t^j)`` at arity ``k+1``."""
    k = f.arity
    if not 1 <= i <= k + 1:
        raise IndexError(f"lift index {i} outside 1..{k + 1}")
    rename = _deleted_weights(k + 1, i)
    cache: dict[Partition, MultiPoly] = {}
    total = MultiPoly()
    for lam, a in f.sorted_items():
        shifted = cache.get(lam)
        if shifted is None:
            shifted = cache[lam] = shifted_product(lam, i)
        total = total + (substitute(a, rename) if rename else a) * shifted
    return MixedIdentity.from_poly(total, k + 1, f.weight)


def lift_is_root_identity(f: PureIdentity, i: int, wv_plus: WeightVector) -> bool:
    """Check that ``g_i`` vanishes once ``t = x_i`` and ``p_n`` are the power sums of ``wv_plus``."""
    if wv_plus.arity != f.arity + 1:
        raise ArityMismatch(f"lift of arity-{f.arity} identity needs {f.arity + 1} weights")
    g = lift(f, i)
    return not eval_mixed_slot(g, wv_plus, i)


def top_t_coefficient(f: PureIdentity, i: int) -> MultiPoly:
    """``sum_lam alpha_lam(d-hat_i) (-d_i)^len(lam)``, predicted top coefficient of ``lift(f, i)``."""
    rename = _deleted_weights(f.arity + 1, i)
    neg_di = -MultiPoly.var(d(i))
    out = MultiPoly()
    for lam, a in f.coeffs.items():
        out = out + (substitute(a, rename) if rename else a) * neg_di ** lam.length
    return out


# ---------------------------------------------------------------------------
# product and trace step


def multiply_mixed(f: MixedIdentity, g: MixedIdentity) -> MixedIdentity:
    if f.arity != g.arity:
        raise ValueError("arity mismatch in product")
    return MixedIdentity.from_poly(f.to_poly() * g.to_poly(), f.arity, f.weight + g.weight)


def mixed_from_pure(f: PureIdentity, term_budget: int | None = None) -> MixedIdentity:
    """``prod_i lift(f, i)`` over all ``k+1`` slots of the next arity."""
    k = f.arity
    acc = None
    for i in range(1, k + 2):
        g = lift(f, i).to_poly()
        if acc is not None and term_budget is not None and len(acc) * len(g) > term_budget:
            # checked before multiplying: the product itself may not fit in memory or time
            raise ResourceLimitError(
                f"product of lifts 1..{i} would expand {len(acc)} x {len(g)} terms, budget {term_budget}"
            )
        acc = g if acc is None else acc * g
    return MixedIdentity.from_poly(acc, k + 1, (k + 1) * f.weight)


def power_relation(f: MixedIdentity, shift: int = 1) -> PureIdentity:
    """``tr(t^shift * f)``: each ``t^e`` becomes ``p_(e+shift)``.

    With ``shift >= 1`` no ``p_0`` can appear.  Symbolic weights give the
    undivided relation ``alpha_empty * p_(N+shift) + ... = 0``.
    """
    if shift < 1:
        raise ValueError("shift must be at least 1 (p0 is undefined)")
    out: dict[Partition, MultiPoly] = {}
    for lam, a in f.coeffs.items():
        # distinct (lam, t^e) terms can land on the same partition
        key = lam.add_part(f.weight - lam.weight + shift)
        out[key] = out[key] + a if key in out else a
    return PureIdentity(f.arity, f.weight + shift, out)


def pure_from_mixed(f: MixedIdentity) -> PureIdentity:
    """Multiply by ``t`` and take the trace."""
    return power_relation(f, 1)


# ---------------------------------------------------------------------------
# chain


@dataclass(frozen=True)
class ChainLevel:
    arity: int
    mixed_weight: int
    pure_weight: int
    mixed_terms: int
    pure_terms: int
    lift_indices: tuple
    seconds: float


@dataclass
class ChainResult:
    arity: int
    mixed: MixedIdentity
    pure: PureIdentity
    levels: list = field(default_factory=list)

    @property
    def leading_coefficient(self) -> MultiPoly:
        return self.mixed.leading_coefficient


def build_chain(k: int, max_k: int = DEFAULT_MAX_K, term_budget: int | None = None) -> ChainResult:
    """Level ``k`` of the alternating lift-product / trace-step construction."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > max_k:
        raise ResourceLimitError(f"k={k} exceeds the configured maximum {max_k}")
    start = time.perf_counter()
    mixed = base_mixed_k1()
    pure = pure_from_mixed(mixed)
    levels = [ChainLevel(1, mixed.weight, pure.weight, mixed.term_count(), pure.term_count(), (), time.perf_counter() - start)]
    for j in range(1, k):
        start = time.perf_counter()
        try:
            mixed = mixed_from_pure(pure, term_budget=term_budget)
        except ResourceLimitError as exc:
            raise ResourceLimitError(f"level {j + 1}: {exc}", levels) from exc
        pure = pure_from_mixed(mixed)
        level = ChainLevel(
            j + 1,
            mixed.weight,
            pure.weight,
            mixed.term_count(),
            pure.term_count(),
            tuple(range(1, j + 2)),
            time.perf_counter() - start,
        )
        log.info("chain level %d: weights %d/%d, %d terms", j + 1, mixed.weight, pure.weight, level.mixed_terms)
        levels.append(level)
    return ChainResult(k, mixed, pure, levels)


def check_chain_monic(chain: ChainResult) -> bool:
    return bool(is_sufficiently_monic(chain.mixed)) and bool(is_sufficiently_monic(chain.pure))


# ---------------------------------------------------------------------------
# reduction of high power sums


def _numeric_relation(relation, wv: WeightVector) -> MixedIdentity:
    if isinstance(relation, ChainResult):
        relation = relation.mixed
    if relation.arity != wv.arity:
        raise ArityMismatch(f"relation has arity {relation.arity}, weights have {wv.arity}")
    return relation.specialize(wv)


def reduce_power(n: int, wv: WeightVector, relation) -> MultiPoly:
    """Write ``p_n`` as a polynomial in ``p_1..p_N`` at numeric weights.

    ``relation`` is a :class:`ChainResult` or any mixed identity of weight
    ``N``.  Multiplying it by ``t^i`` and taking traces expresses
    ``p_(N+i)`` through lower power sums after dividing by the top
    coefficient evaluated at ``wv``; this is applied until only ``p_1..p_N``
    remain.
    """
    if wv.symbolic:
        raise ValueError("reduce_power needs numeric weights; use power_relation for the symbolic form")
    rel = _numeric_relation(relation, wv)
    N = rel.weight
    lead = rel.leading_coefficient
    lead_val = lead.constant_value() if lead else mpq(0)
    if lead_val == 0:
        raise ReductionUnavailable(
            f"top coefficient alpha_empty vanishes at d={wv}; p_n cannot be reduced with this relation"
        )
    if n < 1:
        raise ValueError("n must be positive")
    rewrites: dict[int, MultiPoly] = {}

    def rewrite(m: int) -> MultiPoly:
        # p_m for m > N, expressed in p_1..p_N
        if m in rewrites:
            return rewrites[m]
        i = m - N
        acc = MultiPoly()
        for lam, a in rel.coeffs.items():
            if not lam:
                continue
            acc = acc + a * _pexpr(lam) * _pexpr(Partition((N - lam.weight + i,)))
        acc = acc.scale(-1 / lead_val)
        rewrites[m] = acc = _lower(acc)
        return acc

    def _lower(f: MultiPoly) -> MultiPoly:
        bindings = {}
        for v in f.variables():
            if v.family is Family.P and v.index[0] > N:
                bindings[v] = rewrite(v.index[0])
        return substitute(f, bindings) if bindings else f

    def _pexpr(lam: Partition) -> MultiPoly:
        out = MultiPoly.const(1)
        for a in lam:
            out = out * MultiPoly.var(p(a))
        return out

    if n <= N:
        return MultiPoly.var(p(n))
    for m in range(N + 1, n + 1):
        rewrite(m)
    return rewrites[n]


def evaluate_power_expression(expr: MultiPoly, wv: WeightVector) -> MultiPoly:
    """Substitute ``p_n -> power_sum(wv, n)`` into a polynomial in the P family."""
    table = _PowerSumTable(wv)
    bindings = {v: table.p(v.index[0]) for v in expr.variables() if v.family is Family.P}
    bindings.update(wv.bindings())
    return substitute(expr, bindings)


def lift_structure_ok(lam: Partition, i: int) -> bool:
    """Top ``t`` coefficient of the shifted product is ``(-d_i)^len`` and its constant part is ``p_lam``."""
    g = shifted_product(lam, i)
    top = coefficient_of(g, T, lam.weight)
    low = coefficient_of(g, T, 0)
    pl = MultiPoly.const(1)
    for a in lam:
        pl = pl * MultiPoly.var(p(a))
    return top == (-MultiPoly.var(d(i))) ** lam.length and low == pl


# ---------------------------------------------------------------------------
# verification of a whole chain level


@dataclass
class ChainCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ChainVerification:
    arity: int
    mode: str  # "symbolic" or "sampled"
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def expected_weights(k: int) -> tuple[int, int]:
    mixed, pure = 1, 2
    for j in range(1, k):
        mixed = (j + 1) * pure
        pure = mixed + 1
    return mixed, pure


def verify_chain(chain: ChainResult, symbolic: bool = True, samples: int = 5, seed: int = 0) -> ChainVerification:
    """Re-check a chain level from scratch.

    ``symbolic=True`` expands with indeterminate weights.  Otherwise the
    identities are checked at ``samples`` random non-zero rational weight
    vectors, together with homogeneity and the lift-structure checks; the
    result records which mode was used.
    """
    k = chain.arity
    out = ChainVerification(k, "symbolic" if symbolic else "sampled")
    add = out.checks.append
    mw, pw = expected_weights(k)
    add(ChainCheck("weights", (chain.mixed.weight, chain.pure.weight) == (mw, pw),
                   f"{chain.mixed.weight}/{chain.pure.weight} (expected {mw}/{pw})"))
    for name, f in (("mixed", chain.mixed), ("pure", chain.pure)):
        rep = is_sufficiently_monic(f)
        add(ChainCheck(f"{name} sufficiently monic", rep.ok, rep.reason or f"top coefficient has {len(rep.leading)} terms"))
    add(ChainCheck("mixed homogeneous", is_homogeneous(chain.mixed.to_poly(), POWER_SUM_WEIGHTS)))
    add(ChainCheck("pure homogeneous", is_homogeneous(chain.pure.to_poly(), POWER_SUM_WEIGHTS)))
    if symbolic:
        wv = WeightVector.symbolic_of(k)
        add(ChainCheck("mixed identity (symbolic d)", is_mixed_identity(chain.mixed, wv)))
        add(ChainCheck("pure identity (symbolic d)", is_pure_identity(chain.pure, wv)))
    else:
        rng = random.Random(seed)
        for s in range(samples):
            vals = [mpq(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 9)) for _ in range(k)]
            wv = WeightVector.numeric(vals)
            add(ChainCheck(f"mixed identity at d={wv}", is_mixed_identity(chain.mixed, wv)))
            add(ChainCheck(f"pure identity at d={wv}", is_pure_identity(chain.pure, wv)))
        ok = all(lift_structure_ok(lam, i) for lam in chain.pure.coeffs for i in range(1, k + 2))
        add(ChainCheck("lift structure (top and constant t-coefficients)", ok))
    return out
