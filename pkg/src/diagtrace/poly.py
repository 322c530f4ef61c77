"""Sparse multivariate polynomials with exact rational coefficients.

Variables come from six indexed families (weights ``d``, diagonal entries
``x``, power sums ``p``, the matrix variable ``t``, multilinearization scalars
``c`` and matrix entries ``y``).  Every variable is interned to a 16-bit slot of
a packed integer, so a monomial is a plain ``int`` and multiplying monomials is
integer addition.  Slot numbers are process-local; anything that leaves the
process (text, ordering, hashing of serialized forms) goes through the
canonical :class:`VarId` order instead.

Text grammar (what :func:`parse` accepts and :meth:`MultiPoly.to_text` emits)::

    poly    := ["-"] term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := atom ["^" int]
    atom    := number | var | "(" poly ")"
    number  := int ["/" int]
    var     := "d" int | "x" int | "p" int | "t" | "c" int | "y" int "_" int

Canonical output lists terms by descending lex order of exponent vectors
over the variable order ``d1 < d2 < ... < x1 < ... < p1 < ... < t < c1 < ...
< y1_1 < y1_2 < ...``, writes coefficients as ``num`` or ``num/den`` and
omits unit coefficients and exponents.
"""

from __future__ import annotations

import enum
import re
from math import gcd
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from gmpy2 import mpq

__all__ = [
    "Family",
    "VarId",
    "MultiPoly",
    "Rational",
    "d",
    "x",
    "p",
    "t",
    "c",
    "y",
    "T",
    "parse",
    "add",
    "mul",
    "substitute",
    "coefficient_of",
    "weighted_degree",
    "is_homogeneous",
    "POWER_SUM_WEIGHTS",
    "factor_content",
]

Rational = type(mpq())
Number = Union[int, "mpq", Rational]

_BITS = 16
_MASK = (1 << _BITS) - 1
_MAX_EXP = _MASK


class Family(enum.IntEnum):
    D = 0
    X = 1
    P = 2
    T = 3
    C = 4
    Y = 5


_PREFIX = {Family.D: "d", Family.X: "x", Family.P: "p", Family.T: "t", Family.C: "c", Family.Y: "y"}


@dataclass(frozen=True, order=True)
class VarId:
    """A variable: a family tag plus its index (two indices for ``y``)."""

    family: Family
    index: tuple

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        idx = tuple(int(i) for i in self.index)
        object.__setattr__(self, "index", idx)
        if any(i < 0 for i in idx):
            raise ValueError(f"negative variable index {idx}")
        if fam is Family.Y:
            if len(idx) != 2:
                raise ValueError("y variables take two indices")
        elif len(idx) != 1:
            raise ValueError(f"{fam.name} variables take one index")
        if fam is Family.P and idx[0] < 1:
            raise ValueError("power sums start at p1")
        if fam is Family.T and idx[0] != 0:
            raise ValueError("t is the only member of its family")

    def __str__(self):
        prefix = _PREFIX[self.family]
        if self.family is Family.T:
            return prefix
        if self.family is Family.Y:
            return f"{prefix}{self.index[0]}_{self.index[1]}"
        return f"{prefix}{self.index[0]}"

    __repr__ = __str__


def d(i: int) -> VarId:
    return VarId(Family.D, (i,))


def x(i: int) -> VarId:
    return VarId(Family.X, (i,))


def p(n: int) -> VarId:
    return VarId(Family.P, (n,))


def c(i: int) -> VarId:
    return VarId(Family.C, (i,))


def y(i: int, j: int) -> VarId:
    return VarId(Family.Y, (i, j))


T = VarId(Family.T, (0,))


def t() -> VarId:
    return T


# Slot registry.  Append-only; never reordered.
_slot_of: dict[VarId, int] = {}
_var_at: list[VarId] = []


def _slot(v: VarId) -> int:
    s = _slot_of.get(v)
    if s is None:
        s = len(_var_at)
        _slot_of[v] = s
        _var_at.append(v)
    return s


def _pack(exps: Mapping[VarId, int]) -> int:
    key = 0
    for v, e in exps.items():
        if e < 0:
            raise ValueError("negative exponent")
        if e > _MAX_EXP:
            raise OverflowError(f"exponent {e} exceeds {_MAX_EXP}")
        if e:
            key += e << (_BITS * _slot(v))
    return key


def _unpack(key: int) -> dict[VarId, int]:
    out = {}
    s = 0
    while key:
        e = key & _MASK
        if e:
            out[_var_at[s]] = e
        key >>= _BITS
        s += 1
    return out


def _unpack_slots(key: int) -> list[tuple[int, int]]:
    out = []
    s = 0
    while key:
        e = key & _MASK
        if e:
            out.append((s, e))
        key >>= _BITS
        s += 1
    return out


def _key_degree(key: int) -> int:
    total = 0
    while key:
        total += key & _MASK
        key >>= _BITS
    return total


def _q(value) -> Rational:
    if isinstance(value, Rational):
        return value
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not supported")
    return mpq(value)


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps packed monomial to ``mpq``.

    Instances support ``+ - *``, integer powers, equality and hashing.
    Zero coefficients are never stored, so ``not f`` tests for zero.
    """

    __slots__ = ("_terms", "_deg")

    def __init__(self, terms: Mapping | None = None, *, _deg: int | None = None, _clean: bool = False):
        if terms is None:
            self._terms = {}
        elif _clean:
            self._terms = terms
        else:
            self._terms = {k: _q(v) for k, v in terms.items() if v}
        self._deg = _deg

    # -- construction ---------------------------------------------------
    @classmethod
    def const(cls, value: Number) -> "MultiPoly":
        value = _q(value)
        return cls({0: value} if value else {}, _deg=0, _clean=True)

    @classmethod
    def var(cls, v: VarId, exp: int = 1) -> "MultiPoly":
        return cls({_pack({v: exp}): mpq(1)}, _deg=exp, _clean=True)

    @classmethod
    def monomial(cls, exps: Mapping[VarId, int], coeff: Number = 1) -> "MultiPoly":
        coeff = _q(coeff)
        if not coeff:
            return cls()
        return cls({_pack(exps): coeff}, _clean=True)

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Mapping[VarId, int], Number]]) -> "MultiPoly":
        out: dict[int, Rational] = {}
        for exps, coeff in items:
            k = _pack(exps)
            out[k] = out.get(k, 0) + _q(coeff)
        return cls({k: v for k, v in out.items() if v}, _clean=True)

    # -- inspection -----------------------------------------------------
    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self) -> Iterator[tuple[dict[VarId, int], Rational]]:
        for k, v in self._terms.items():
            yield _unpack(k), v

    def terms(self) -> list[tuple[dict[VarId, int], Rational]]:
        """Terms as ``(exponent map, coefficient)`` in canonical order."""
        return [(_unpack(k), self._terms[k]) for k in self._sorted_keys()]

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self._terms.get(0, mpq(0))

    def total_degree(self) -> int:
        return max((_key_degree(k) for k in self._terms), default=0)

    def _degree_bound(self) -> int:
        # upper bound only; cancellation can leave it above the true degree
        if self._deg is None:
            self._deg = self.total_degree()
        return self._deg

    def variables(self) -> set[VarId]:
        seen = 0
        for k in self._terms:
            seen |= k
        out = set()
        s = 0
        while seen:
            if seen & _MASK:
                out.add(_var_at[s])
            seen >>= _BITS
            s += 1
        return out

    def families(self) -> set[Family]:
        return {v.family for v in self.variables()}

    def degree_in(self, v: VarId) -> int:
        s = _slot_of.get(v)
        if s is None:
            return 0
        shift = _BITS * s
        return max(((k >> shift) & _MASK for k in self._terms), default=0)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        if len(self._terms) < len(other._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for k, v in small.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s = s + v
                if s:
                    out[k] = s
                else:
                    del out[k]
        deg = None
        if self._deg is not None and other._deg is not None:
            deg = max(self._deg, other._deg)
        return MultiPoly(out, _deg=deg, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({k: -v for k, v in self._terms.items()}, _deg=self._deg, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.const(other) - self

    def scale(self, factor: Number) -> "MultiPoly":
        factor = _q(factor)
        if not factor:
            return MultiPoly()
        return MultiPoly({k: v * factor for k, v in self._terms.items()}, _deg=self._deg, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return MultiPoly()
        deg = self._degree_bound() + other._degree_bound()
        if deg > _MAX_EXP:
            raise OverflowError("product degree exceeds packed exponent range")
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            return MultiPoly({ma + mb: ca * cb for ma, ca in a.items()}, _deg=deg, _clean=True)
        out: dict[int, Rational] = {}
        get = out.get
        a_items = list(a.items())
        for mb, cb in b.items():
            for ma, ca in a_items:
                m = ma + mb
                out[m] = get(m, 0) + ca * cb
        return MultiPoly({k: v for k, v in out.items() if v}, _deg=deg, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == MultiPoly.const(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(self.to_text())

    # -- canonical text -------------------------------------------------
    def _sorted_keys(self) -> list[int]:
        def order(k):
            # Descending lex over VarId order: compare sorted (var, -exp) lists,
            # a variable absent from one side counts as exponent 0.
            return _CanonKey(sorted(_unpack(k).items()))

        return sorted(self._terms, key=order)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k in self._sorted_keys():
            coeff = self._terms[k]
            mono = _format_monomial(_unpack(k))
            neg = coeff < 0
            mag = -coeff if neg else coeff
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_format_number(mag)}*{mono}"
            else:
                body = _format_number(mag)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"


class _CanonKey:
    """Sort key realising descending lex order on sparse exponent vectors."""

    __slots__ = ("items",)

    def __init__(self, items):
        self.items = items

    def __lt__(self, other):
        a, b = self.items, other.items
        for (va, ea), (vb, eb) in zip(a, b):
            if va != vb:
                # the side holding the smaller variable has a positive exponent
                # where the other has zero, so it is lex-larger and sorts first
                return va < vb
            if ea != eb:
                return ea > eb
        return len(a) > len(b)

    def __eq__(self, other):
        return self.items == other.items


def _format_number(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_monomial(exps: Mapping[VarId, int]) -> str:
    out = []
    for v in sorted(exps):
        e = exps[v]
        out.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(out)


# ---------------------------------------------------------------------------
# free-function API


def add(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return f + g


def mul(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return f * g


def substitute(f: MultiPoly, bindings: Mapping[VarId, MultiPoly | Number]) -> MultiPoly:
    """Ring-homomorphic substitution; variables without a binding pass through."""
    if not bindings or not f:
        return f
    slot_images: dict[int, MultiPoly] = {}
    bound_mask = 0
    for v, img in bindings.items():
        s = _slot_of.get(v)
        if s is None:
            continue  # variable never seen, so it cannot occur in f
        if not isinstance(img, MultiPoly):
            img = MultiPoly.const(img)
        slot_images[s] = img
        bound_mask |= _MASK << (_BITS * s)
    if not slot_images:
        return f

    power_cache: dict[tuple[int, int], MultiPoly] = {}

    def power(s, e):
        key = (s, e)
        val = power_cache.get(key)
        if val is None:
            val = slot_images[s] if e == 1 else power(s, e - 1) * slot_images[s]
            power_cache[key] = val
        return val

    # Group terms sharing the same bound part so each image product is built once.
    groups: dict[int, dict[int, Rational]] = {}
    for k, coeff in f._terms.items():
        bound = k & bound_mask
        free = k ^ bound
        g = groups.setdefault(bound, {})
        g[free] = coeff
    out = MultiPoly()
    for bound, free_terms in groups.items():
        image = MultiPoly.const(1)
        for s, e in _unpack_slots(bound):
            image = image * power(s, e)
        out = out + image * MultiPoly(free_terms, _clean=True)
    return out


def coefficient_of(f: MultiPoly, v: VarId, e: int) -> MultiPoly:
    """The coefficient of ``v**e`` in ``f``, as a polynomial free of ``v``."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    s = _slot_of.get(v)
    if s is None:
        return f if e == 0 else MultiPoly()
    shift = _BITS * s
    out = {}
    for k, coeff in f._terms.items():
        if (k >> shift) & _MASK == e:
            out[k - (e << shift)] = coeff
    return MultiPoly(out, _clean=True)


def weighted_degree(f: MultiPoly, weights: Mapping[VarId, int] | "WeightFn") -> int:
    """Maximum weighted degree over the terms of ``f`` (``-1`` for zero)."""
    degs = _term_weights(f, weights)
    return max(degs, default=-1)


def is_homogeneous(f: MultiPoly, weights: Mapping[VarId, int] | "WeightFn" = None) -> bool:
    if weights is None:
        weights = POWER_SUM_WEIGHTS
    return len(set(_term_weights(f, weights))) <= 1


def _term_weights(f: MultiPoly, weights) -> list[int]:
    fn = weights if callable(weights) else (lambda v: weights.get(v, 0))
    slot_w = {}
    out = []
    for k in f._terms:
        w = 0
        for s, e in _unpack_slots(k):
            ws = slot_w.get(s)
            if ws is None:
                ws = slot_w[s] = fn(_var_at[s])
            w += ws * e
        out.append(w)
    return out


def POWER_SUM_WEIGHTS(v: VarId) -> int:
    """The trace grading: ``p_n`` has weight ``n``; ``t``, ``x_i`` weight 1; ``d_i`` weight 0."""
    if v.family is Family.P:
        return v.index[0]
    if v.family in (Family.T, Family.X):
        return 1
    return 0


WeightFn = type(POWER_SUM_WEIGHTS)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(y)(\d+)_(\d+)|([dxpc])(\d+)|(t)(?![A-Za-z0-9])|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            out.append(("num", int(m.group(1))))
        elif m.group(2):
            out.append(("var", y(int(m.group(3)), int(m.group(4)))))
        elif m.group(5):
            fam = {"d": d, "x": x, "p": p, "c": c}[m.group(5)]
            out.append(("var", fam(int(m.group(6)))))
        elif m.group(7):
            out.append(("var", T))
        else:
            ch = m.group(8)
            if ch not in "+-*/^()":
                raise ValueError(f"unexpected character {ch!r}")
            out.append(("op", ch))
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError(f"parse error near token {self.i}: expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def poly(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term().scale(sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            base = base ** self.take("num")[1]
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            num = val
            if self.peek() == ("op", "/"):
                self.take()
                den = self.take("num")[1]
                if den == 0:
                    raise ValueError("zero denominator")
                return MultiPoly.const(mpq(num, den))
            return MultiPoly.const(num)
        if kind == "var":
            self.take()
            return MultiPoly.var(val)
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.poly()
            self.take("op", ")")
            return inner
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.factor()
        raise ValueError(f"unexpected token {val!r}")


def parse(text: str) -> MultiPoly:
    """Parse the text grammar in the module docstring (factored input is expanded)."""
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty polynomial")
    parser = _Parser(tokens)
    out = parser.poly()
    if parser.i != len(tokens):
        raise ValueError(f"trailing input at token {parser.i}")
    return out


def factor_content(f: MultiPoly) -> str:
    """Text of ``f`` with its rational content and common monomial pulled out.

    Only this trivial factorisation is done, e.g.
    ``d1^3*d2 + 2*d1^2*d2^2 + d1*d2^3`` becomes ``d1*d2*(d1^2 + 2*d1*d2 + d2^2)``.
    """
    if len(f._terms) <= 1:
        return f.to_text()
    keys = list(f._terms)
    common = {}
    first = _unpack(keys[0])
    for v, e in first.items():
        common[v] = min(_unpack(k).get(v, 0) for k in keys)
    common = {v: e for v, e in common.items() if e}
    num = 0
    den = 1
    for q in f._terms.values():
        num = gcd(num, int(q.numerator))
        den = den * int(q.denominator) // gcd(den, int(q.denominator))
    lead_sign = -1 if f._terms[f._sorted_keys()[0]] < 0 else 1
    content = mpq(lead_sign * num, den)
    shift = _pack(common)
    inner = MultiPoly({k - shift: v / content for k, v in f._terms.items()}, _clean=True)
    prefix = []
    if content == -1:
        sign = "-"
    else:
        sign = ""
        if content != 1:
            prefix.append(_format_number(content))
    if common:
        prefix.append(_format_monomial(common))
    if not prefix:
        return sign + "(" + inner.to_text() + ")" if sign else inner.to_text()
    return sign + "*".join(prefix) + "*(" + inner.to_text() + ")"
