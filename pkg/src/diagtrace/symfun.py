"""Weighted power sums, partitions, identity objects and their verification.

A *pure* identity is a weight-homogeneous combination ``sum a_lam * p_lam``
of power-sum products; a *mixed* one also carries powers of the matrix
variable ``t`` so that every term has total weight ``N``.  Both are checked by
substituting the weighted power sums ``p_n = d_1 x_1^n + ... + d_k x_k^n``
(and ``t = x_j`` for the ``j``-th diagonal slot of a mixed identity) and
expanding exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from gmpy2 import mpq

from .poly import Family, MultiPoly, Rational, T, VarId, d, p, parse, substitute, x

FORMAT_VERSION = 1


class ArityMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# partitions


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    __slots__ = ()

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(a) for a in parts)
        if any(a <= 0 for a in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "Partition":
        return cls(sorted(parts, reverse=True))

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def add_part(self, n: int) -> "Partition":
        return Partition.from_parts(self + (n,))

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a in self:
            out[a] = out.get(a, 0) + 1
        return out

    def __repr__(self):
        return f"Partition({tuple(self)!r})"

    def __str__(self):
        return "(" + ",".join(map(str, self)) + ")" if self else "()"


EMPTY = Partition()


def ones(n: int) -> Partition:
    return Partition((1,) * n)


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order: ``(n)`` first, ``(1^n)`` last."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if max_part is None or max_part > n:
        max_part = n
    if n == 0:
        yield EMPTY
        return

    def rec(remaining, bound, prefix):
        if remaining == 0:
            yield Partition(prefix)
            return
        for first in range(min(remaining, bound), 0, -1):
            yield from rec(remaining - first, first, prefix + (first,))

    yield from rec(n, max_part, ())


def partitions_up_to(n: int) -> list[Partition]:
    """Partitions of weights ``0..n``; increasing weight, reverse lex within a weight."""
    out = []
    for w in range(n + 1):
        out.extend(partitions_of(w))
    return out


def canonical_key(lam: Partition):
    # increasing weight, then reverse lex
    return (lam.weight, tuple(-a for a in lam))


# ---------------------------------------------------------------------------
# weight vectors


@dataclass(frozen=True)
class WeightVector:
    """The trace weights ``(d_1, ..., d_k)``, symbolic or exact rational."""

    entries: tuple
    symbolic: bool

    @classmethod
    def symbolic_of(cls, k: int) -> "WeightVector":
        if k < 1:
            raise ValueError("arity must be positive")
        return cls(tuple(MultiPoly.var(d(i)) for i in range(1, k + 1)), True)

    @classmethod
    def numeric(cls, values: Sequence) -> "WeightVector":
        vals = tuple(_to_mpq(v) for v in values)
        if not vals:
            raise ValueError("arity must be positive")
        if any(v == 0 for v in vals):
            raise ValueError("trace weights must be non-zero")
        return cls(tuple(MultiPoly.const(v) for v in vals), False)

    @classmethod
    def parse(cls, text: str, arity: int | None = None) -> "WeightVector":
        text = text.strip()
        if text == "symbolic":
            if arity is None:
                raise ValueError("symbolic weight vector needs an arity")
            return cls.symbolic_of(arity)
        wv = cls.numeric([s for s in text.split(",") if s.strip()])
        if arity is not None and wv.arity != arity:
            raise ArityMismatch(f"expected {arity} weights, got {wv.arity}")
        return wv

    @property
    def arity(self) -> int:
        return len(self.entries)

    @property
    def values(self) -> tuple:
        """Numeric entries as ``mpq`` (numeric mode only)."""
        if self.symbolic:
            raise ValueError("symbolic weight vector has no numeric values")
        return tuple(e.constant_value() for e in self.entries)

    def bindings(self) -> dict[VarId, MultiPoly]:
        """``d_i -> entry`` substitution (empty in symbolic mode)."""
        if self.symbolic:
            return {}
        return {d(i + 1): e for i, e in enumerate(self.entries)}

    def scaled(self, factor) -> "WeightVector":
        return WeightVector.numeric([v * _to_mpq(factor) for v in self.values])

    def __str__(self):
        if self.symbolic:
            return "symbolic(" + ",".join(f"d{i}" for i in range(1, self.arity + 1)) + ")"
        return "(" + ",".join(_fmt_q(v) for v in self.values) + ")"


def _to_mpq(v) -> Rational:
    if isinstance(v, str):
        return mpq(Fraction(v.strip()))
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    if isinstance(v, float):
        raise TypeError("use exact rationals, not floats")
    return mpq(v)


def _fmt_q(v) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _check_arity(f, wv: WeightVector):
    if f.arity != wv.arity:
        raise ArityMismatch(f"identity has arity {f.arity} but weight vector has {wv.arity}")


# ---------------------------------------------------------------------------
# identity objects


def _clean_coeffs(coeffs: Mapping) -> dict:
    out = {}
    for lam, a in coeffs.items():
        lam = lam if isinstance(lam, Partition) else Partition.from_parts(lam)
        if not isinstance(a, MultiPoly):
            a = MultiPoly.const(a)
        if not a:
            continue
        if a.families() - {Family.D}:
            raise ValueError(f"coefficient of {lam} involves non-weight variables: {a}")
        out[lam] = a
    return out


class _Identity:
    arity: int
    weight: int
    coeffs: dict

    kind = ""

    def __getitem__(self, lam) -> MultiPoly:
        lam = lam if isinstance(lam, Partition) else Partition.from_parts(lam)
        return self.coeffs.get(lam, MultiPoly())

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def sorted_items(self) -> list[tuple[Partition, MultiPoly]]:
        return sorted(self.coeffs.items(), key=lambda kv: canonical_key(kv[0]))

    @property
    def unit_coefficient(self) -> MultiPoly:
        """The coefficient of ``p_1^N``."""
        return self[ones(self.weight)]

    def term_count(self) -> int:
        return sum(len(a) for a in self.coeffs.values())

    def map_coeffs(self, fn):
        return type(self)(self.arity, self.weight, {lam: fn(a) for lam, a in self.coeffs.items()})

    def scale(self, factor):
        return self.map_coeffs(lambda a: a * factor)

    def normalized(self):
        """Scale so the ``p_1^N`` coefficient is 1 when it is a non-zero rational."""
        u = self.unit_coefficient
        if u and u.is_constant() and u.constant_value() != 1:
            return self.scale(1 / u.constant_value())
        return self

    def specialize(self, wv: WeightVector):
        """Substitute numeric weights into every coefficient."""
        _check_arity(self, wv)
        b = wv.bindings()
        if not b:
            return self
        return self.map_coeffs(lambda a: substitute(a, b))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "format_version": FORMAT_VERSION,
            "arity": self.arity,
            "weight": self.weight,
            "terms": [{"partition": list(lam), "coeff": a.to_text()} for lam, a in self.sorted_items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.arity == other.arity
            and self.weight == other.weight
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.to_json())

    def equivalent(self, other) -> bool:
        """Equality up to a non-zero rational multiple."""
        if type(self) is not type(other) or self.arity != other.arity or self.weight != other.weight:
            return False
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        if not self.coeffs:
            return True
        lam = min(self.coeffs, key=canonical_key)
        a, b = self.coeffs[lam], other.coeffs[lam]
        # find a rational ratio from any shared monomial
        (ma, ca), = [next(iter(a))]
        ratio = None
        for mb, cb in b:
            if mb == ma:
                ratio = cb / ca
                break
        if ratio is None:
            return False
        return self.scale(ratio) == other

    def __str__(self):
        return self.to_text()


@dataclass(eq=False)
class PureIdentity(_Identity):
    """``sum_lam alpha_lam(d) p_lam`` over partitions of one weight ``N``."""

    arity: int
    weight: int
    coeffs: dict = field(default_factory=dict)

    kind = "pure"

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be positive")
        self.coeffs = _clean_coeffs(self.coeffs)
        for lam in self.coeffs:
            if lam.weight != self.weight:
                raise ValueError(f"partition {lam} does not have weight {self.weight}")

    @property
    def leading_coefficient(self) -> MultiPoly:
        """The coefficient of ``p_N``."""
        return self[(self.weight,)] if self.weight else self[()]

    def to_poly(self) -> MultiPoly:
        out = MultiPoly()
        for lam, a in self.coeffs.items():
            out = out + a * p_product(lam)
        return out

    @classmethod
    def from_poly(cls, f: MultiPoly, arity: int, weight: int | None = None) -> "PureIdentity":
        coeffs: dict[Partition, list] = {}
        for exps, coeff in f:
            lam_parts, rest = [], {}
            for v, e in exps.items():
                if v.family is Family.P:
                    lam_parts.extend([v.index[0]] * e)
                elif v.family is Family.D:
                    rest[v] = e
                else:
                    raise ValueError(f"unexpected variable {v} in a pure identity")
            lam = Partition.from_parts(lam_parts)
            if weight is None:
                weight = lam.weight
            coeffs.setdefault(lam, []).append((rest, coeff))
        return cls(arity, weight or 0, {lam: MultiPoly.from_terms(items) for lam, items in coeffs.items()})

    def to_text(self) -> str:
        return _identity_text(self, lambda lam: _p_text(lam))


@dataclass(eq=False)
class MixedIdentity(_Identity):
    """``sum_lam alpha_lam(d) p_lam t^(N-|lam|)`` with ``|lam| <= N``."""

    arity: int
    weight: int
    coeffs: dict = field(default_factory=dict)

    kind = "mixed"

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be positive")
        self.coeffs = _clean_coeffs(self.coeffs)
        for lam in self.coeffs:
            if lam.weight > self.weight:
                raise ValueError(f"partition {lam} heavier than weight {self.weight}")

    @property
    def leading_coefficient(self) -> MultiPoly:
        """The coefficient of ``t^N``."""
        return self[EMPTY]

    def to_poly(self) -> MultiPoly:
        out = MultiPoly()
        for lam, a in self.coeffs.items():
            out = out + a * p_product(lam) * MultiPoly.var(T, self.weight - lam.weight)
        return out

    @classmethod
    def from_poly(cls, f: MultiPoly, arity: int, weight: int) -> "MixedIdentity":
        coeffs: dict[Partition, list] = {}
        for exps, coeff in f:
            lam_parts, rest, texp = [], {}, 0
            for v, e in exps.items():
                if v.family is Family.P:
                    lam_parts.extend([v.index[0]] * e)
                elif v.family is Family.D:
                    rest[v] = e
                elif v.family is Family.T:
                    texp = e
                else:
                    raise ValueError(f"unexpected variable {v} in a mixed identity")
            lam = Partition.from_parts(lam_parts)
            if lam.weight + texp != weight:
                raise ValueError(f"term {exps} is not of weight {weight}")
            coeffs.setdefault(lam, []).append((rest, coeff))
        return cls(arity, weight, {lam: MultiPoly.from_terms(items) for lam, items in coeffs.items()})

    def t_coefficient(self, e: int) -> PureIdentity:
        """The part multiplying ``t^e``, as a pure expression of weight ``N - e``."""
        w = self.weight - e
        return PureIdentity(self.arity, w, {lam: a for lam, a in self.coeffs.items() if lam.weight == w})

    def to_text(self) -> str:
        def mono(lam):
            e = self.weight - lam.weight
            parts = [_p_text(lam)] if lam else []
            if e:
                parts.append("t" if e == 1 else f"t^{e}")
            return "*".join(parts)

        return _identity_text(self, mono)


def _p_text(lam: Partition) -> str:
    out = []
    for a, m in sorted(lam.multiplicities().items(), reverse=True):
        out.append(f"p{a}" if m == 1 else f"p{a}^{m}")
    return "*".join(out)


def _identity_text(f: _Identity, mono) -> str:
    if not f.coeffs:
        return "0"
    parts = []
    for lam, a in sorted(f.coeffs.items(), key=lambda kv: canonical_key(kv[0]), reverse=True):
        m = mono(lam)
        neg = len(a) == 1 and next(iter(a))[1] < 0
        if neg:
            a = -a
        if a.is_constant():
            mag = _fmt_q(a.constant_value())
            body = m if (mag == "1" and m) else (f"{mag}*{m}" if m else mag)
        elif len(a) == 1:
            body = f"{a.to_text()}*{m}" if m else a.to_text()
        else:
            body = f"({a.to_text()})*{m}" if m else f"({a.to_text()})"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def identity_from_dict(data: Mapping) -> PureIdentity | MixedIdentity:
    kind = data.get("kind")
    cls = {"pure": PureIdentity, "mixed": MixedIdentity}.get(kind)
    if cls is None:
        raise ValueError(f"unknown identity kind {kind!r}")
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {version}")
    coeffs = {}
    for term in data["terms"]:
        lam = Partition.from_parts(term["partition"])
        if lam in coeffs:
            raise ValueError(f"duplicate partition {lam}")
        coeffs[lam] = parse(str(term["coeff"]))
    return cls(int(data["arity"]), int(data["weight"]), coeffs)


def identity_from_json(text: str) -> PureIdentity | MixedIdentity:
    return identity_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# evaluation


@lru_cache(maxsize=None)
def p_product(lam: Partition) -> MultiPoly:
    """The abstract monomial ``p_lam`` in the P family."""
    out = MultiPoly.const(1)
    for a, m in lam.multiplicities().items():
        out = out * MultiPoly.var(p(a), m)
    return out


def power_sum(wv: WeightVector, n: int) -> MultiPoly:
    """``d_1 x_1^n + ... + d_k x_k^n``."""
    if n < 1:
        raise ValueError("power sums are defined for n >= 1")
    out = MultiPoly()
    for i, di in enumerate(wv.entries, start=1):
        out = out + di * MultiPoly.var(x(i), n)
    return out


class _PowerSumTable:
    """Memoised ``p_lam`` evaluations for one weight vector, built by prefix."""

    def __init__(self, wv: WeightVector):
        self.wv = wv
        self.sums: dict[int, MultiPoly] = {}
        self.products: dict[Partition, MultiPoly] = {EMPTY: MultiPoly.const(1)}

    def p(self, n: int) -> MultiPoly:
        s = self.sums.get(n)
        if s is None:
            s = self.sums[n] = power_sum(self.wv, n)
        return s

    def __call__(self, lam: Partition) -> MultiPoly:
        out = self.products.get(lam)
        if out is None:
            # drop the smallest part so prefixes are shared across partitions
            out = self(Partition(lam[:-1])) * self.p(lam[-1])
            self.products[lam] = out
        return out


def _coeff_at(a: MultiPoly, wv: WeightVector) -> MultiPoly:
    b = wv.bindings()
    return substitute(a, b) if b else a


def eval_pure(f: PureIdentity, wv: WeightVector) -> MultiPoly:
    """Expand ``f`` after ``p_n -> power_sum(wv, n)``."""
    _check_arity(f, wv)
    table = _PowerSumTable(wv)
    out = MultiPoly()
    for lam, a in f.sorted_items():
        out = out + _coeff_at(a, wv) * table(lam)
    return out


def eval_mixed_slot(f: MixedIdentity, wv: WeightVector, j: int, _table=None) -> MultiPoly:
    """The ``j``-th diagonal entry of ``f`` evaluated at ``X = diag(x_1..x_k)``."""
    _check_arity(f, wv)
    if not 1 <= j <= wv.arity:
        raise IndexError(f"slot {j} out of range 1..{wv.arity}")
    table = _table or _PowerSumTable(wv)
    # group by t-exponent so each power of x_j multiplies once
    by_weight: dict[int, MultiPoly] = {}
    for lam, a in f.sorted_items():
        w = lam.weight
        by_weight[w] = by_weight.get(w, MultiPoly()) + _coeff_at(a, wv) * table(lam)
    out = MultiPoly()
    for w, part in by_weight.items():
        out = out + part * MultiPoly.var(x(j), f.weight - w)
    return out


def _quick_nonzero(f, wv: WeightVector, rng: random.Random, slot: int | None = None) -> bool:
    """Evaluate at random rationals; ``True`` proves ``f`` does not vanish."""
    k = wv.arity
    xs = [mpq(rng.randint(-97, 97), rng.randint(1, 13)) for _ in range(k)]
    if wv.symbolic:
        ds = [mpq(rng.randint(-97, 97) or 1, rng.randint(1, 13)) for _ in range(k)]
    else:
        ds = list(wv.values)
    dmap = {d(i + 1): MultiPoly.const(v) for i, v in enumerate(ds)}
    sums = {}

    def ps(n):
        if n not in sums:
            sums[n] = sum(di * xi**n for di, xi in zip(ds, xs))
        return sums[n]

    total = mpq(0)
    for lam, a in f.coeffs.items():
        val = substitute(a, dmap).constant_value()
        for part in lam:
            val *= ps(part)
        if slot is not None:
            val *= xs[slot - 1] ** (f.weight - lam.weight)
        total += val
    return total != 0


def is_pure_identity(f: PureIdentity, wv: WeightVector, precheck: bool = True) -> bool:
    _check_arity(f, wv)
    if precheck and _quick_nonzero(f, wv, random.Random(0x5EED)):
        return False
    return not eval_pure(f, wv)


def is_mixed_identity(f: MixedIdentity, wv: WeightVector, precheck: bool = True) -> bool:
    _check_arity(f, wv)
    rng = random.Random(0x5EED)
    if precheck and any(_quick_nonzero(f, wv, rng, slot=j) for j in range(1, wv.arity + 1)):
        return False
    table = _PowerSumTable(wv)
    return all(not eval_mixed_slot(f, wv, j, _table=table) for j in range(1, wv.arity + 1))


@dataclass(frozen=True)
class DiagonalEval:
    arity: int
    slots: tuple

    def is_zero(self) -> bool:
        return all(not s for s in self.slots)

    def first_nonzero(self):
        """``(slot, monomial text)`` of the first surviving term, or ``None``."""
        for j, s in enumerate(self.slots, start=1):
            if s:
                exps, coeff = s.terms()[0]
                return j, str(MultiPoly.monomial(exps, coeff))
        return None


def matrix_eval(f: MixedIdentity, wv: WeightVector) -> DiagonalEval:
    """Evaluate ``f(X)`` for ``X = diag(x_1..x_k)`` by generic substitution.

    Deliberately shares no code with :func:`eval_mixed_slot`: the identity is
    flattened to a single polynomial in ``d, p, t`` and pushed through
    :func:`substitute`.
    """
    _check_arity(f, wv)
    flat = f.to_poly()
    bindings: dict[VarId, MultiPoly] = dict(wv.bindings())
    for v in flat.variables():
        if v.family is Family.P:
            bindings[v] = power_sum(wv, v.index[0])
    base = substitute(flat, bindings)
    slots = tuple(substitute(base, {T: MultiPoly.var(x(j))}) for j in range(1, wv.arity + 1))
    return DiagonalEval(wv.arity, slots)


# ---------------------------------------------------------------------------
# sufficient monicity


@dataclass(frozen=True)
class MonicReport:
    ok: bool
    leading: MultiPoly
    unit: MultiPoly
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_sufficiently_monic(f: PureIdentity | MixedIdentity, wv: WeightVector | None = None) -> MonicReport:
    """Top coefficient non-zero and ``p_1^N`` coefficient exactly 1.

    The top coefficient is ``alpha_(N)`` for pure identities and
    ``alpha_empty`` (the ``t^N`` coefficient) for mixed ones.  With symbolic
    weights "non-zero" means "not the zero polynomial"; passing a numeric
    ``wv`` also evaluates both coefficients there.
    """
    lead, unit = f.leading_coefficient, f.unit_coefficient
    if wv is not None and not wv.symbolic:
        lead, unit = _coeff_at(lead, wv), _coeff_at(unit, wv)
    if f.weight < 1:
        return MonicReport(False, lead, unit, "weight must be positive")
    if not lead:
        return MonicReport(False, lead, unit, "top coefficient vanishes")
    if unit != MultiPoly.const(1):
        return MonicReport(False, lead, unit, f"p1^{f.weight} coefficient is {unit}, not 1")
    return MonicReport(True, lead, unit)
