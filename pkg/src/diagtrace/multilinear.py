"""Multilinearization of one-variable pure identities.

Substituting ``X = c_1 y_1 + ... + c_N y_N`` into ``sum alpha_lam p_lam`` and
keeping the coefficient of ``c_1 ... c_N`` gives an identity in ``N`` matrix
variables.  The expansion here keeps traces formal (a trace of a monomial in
the ``y_i`` is an atom), so what survives is a combination of products of
traces over set partitions of ``{1..N}``.  Those are then grouped by block
sizes; the grouping is checked rather than assumed, i.e. every set partition
of one type must have received the same coefficient.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import factorial

from .poly import MultiPoly, substitute, y
from .symfun import Partition, PureIdentity, WeightVector, canonical_key, ones

DEFAULT_LIMIT = 5


class CollectionError(ValueError):
    """Set partitions of the same type received different coefficients."""


def set_partitions(n: int):
    """All set partitions of ``{1..n}`` as tuples of sorted blocks (restricted growth order)."""
    def rec(i, blocks):
        if i > n:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    if n == 0:
        yield ()
        return
    yield from rec(1, [])


def block_type(sp) -> Partition:
    return Partition.from_parts(len(b) for b in sp)


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _multinomial(e) -> int:
    out = factorial(sum(e))
    for v in e:
        out //= factorial(v)
    return out


def _trace_power(n: int, N: int) -> dict:
    """``tr((c_1 y_1 + ... + c_N y_N)^n)`` with formal traces.

    Keys are ``(c exponents, atoms)`` where an atom is the exponent vector of
    one traced ``y``-monomial.
    """
    return {(e, (e,)): _multinomial(e) for e in _compositions(n, N)}


def _times(f: dict, g: dict) -> dict:
    out: dict = defaultdict(int)
    for (ce1, at1), v1 in f.items():
        for (ce2, at2), v2 in g.items():
            ce = tuple(a + b for a, b in zip(ce1, ce2))
            out[ce, tuple(sorted(at1 + at2))] += v1 * v2
    return {k: v for k, v in out.items() if v}


@dataclass
class MultilinearTraceIdentity:
    """``sum_mu coeff_mu * T_mu`` where ``T_mu`` sums ``prod_B tr(prod_{i in B} y_i)`` over set partitions of type ``mu``."""

    n: int
    arity: int
    terms: dict = field(default_factory=dict)
    set_partition_table: dict = field(default_factory=dict, repr=False)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: canonical_key(kv[0]))

    def without(self, mu: Partition) -> "MultilinearTraceIdentity":
        terms = {k: v for k, v in self.terms.items() if k != mu}
        table = {sp: v for sp, v in self.set_partition_table.items() if block_type(sp) != mu}
        return MultilinearTraceIdentity(self.n, self.arity, terms, table)

    def to_dict(self) -> dict:
        return {
            "kind": "multilinear",
            "n": self.n,
            "arity": self.arity,
            "terms": [{"type": list(mu), "coeff": a.to_text()} for mu, a in self.sorted_items()],
        }

    def table_text(self) -> str:
        lines = [f"{'type':<16} coefficient"]
        for mu, a in sorted(self.terms.items(), key=lambda kv: canonical_key(kv[0]), reverse=True):
            lines.append(f"{str(mu):<16} {a}")
        return "\n".join(lines)


def multilinearize(f: PureIdentity, limit: int = DEFAULT_LIMIT) -> MultilinearTraceIdentity:
    N = f.weight
    if N > limit:
        raise ValueError(f"weight {N} exceeds the multilinearization limit {limit}")
    target = (1,) * N
    powers = {}
    per_sp: dict = defaultdict(MultiPoly)
    for lam, alpha in f.sorted_items():
        expansion = {((0,) * N, ()): 1}
        for part in lam:
            if part not in powers:
                powers[part] = _trace_power(part, N)
            expansion = _times(expansion, powers[part])
        for (ce, atoms), v in expansion.items():
            if ce != target:
                continue
            sp = tuple(sorted(tuple(i + 1 for i, e in enumerate(a) if e) for a in atoms))
            per_sp[sp] = per_sp[sp] + alpha.scale(v)
    table = {sp: v for sp, v in per_sp.items() if v}
    # every set partition of a type must carry the same coefficient
    by_type: dict = {}
    counts: dict = defaultdict(int)
    for sp in set_partitions(N):
        counts[block_type(sp)] += 1
    seen: dict = defaultdict(int)
    for sp, v in table.items():
        mu = block_type(sp)
        if mu in by_type and by_type[mu] != v:
            raise CollectionError(f"set partitions of type {mu} have different coefficients")
        by_type[mu] = v
        seen[mu] += 1
    for mu, n_seen in seen.items():
        if n_seen != counts[mu]:
            raise CollectionError(f"only {n_seen} of {counts[mu]} set partitions of type {mu} appear")
    return MultilinearTraceIdentity(N, f.arity, by_type, table)


def trace_term(sp, wv: WeightVector) -> MultiPoly:
    """``prod_B tr(prod_{i in B} y_i)`` with ``y_i = diag(y_{i,1}..y_{i,k})`` and weighted trace."""
    out = MultiPoly.const(1)
    for block in sp:
        tr = MultiPoly()
        for j, dj in enumerate(wv.entries, start=1):
            mono = dj
            for i in block:
                mono = mono * MultiPoly.var(y(i, j))
            tr = tr + mono
        out = out * tr
    return out


def expand(m: MultilinearTraceIdentity, wv: WeightVector, relabel: dict | None = None) -> MultiPoly:
    """Full expansion in the ``y_{i,j}`` (and symbolic ``d``); ``relabel`` permutes the ``y_i``."""
    if m.arity != wv.arity:
        raise ValueError(f"identity has arity {m.arity}, weights have {wv.arity}")
    b = wv.bindings()
    out = MultiPoly()
    for sp in set_partitions(m.n):
        mu = block_type(sp)
        coeff = m.terms.get(mu)
        if not coeff:
            continue
        if relabel:
            sp = tuple(tuple(relabel[i] for i in block) for block in sp)
        out = out + (substitute(coeff, b) if b else coeff) * trace_term(sp, wv)
    return out


def verify_multilinear(m: MultilinearTraceIdentity, wv: WeightVector) -> bool:
    return not expand(m, wv)


@dataclass(frozen=True)
class TraceCountReport:
    n: int
    max_product_length: int
    singleton_coefficient: MultiPoly
    reducing: bool


def trace_count_report(m: MultilinearTraceIdentity) -> TraceCountReport:
    """Whether the identity rewrites ``tr(y_1)...tr(y_N)`` via products of fewer traces."""
    single = m.terms.get(ones(m.n), MultiPoly())
    longest = max((mu.length for mu in m.terms), default=0)
    return TraceCountReport(m.n, longest, single, bool(single))
