"""Brute-force search for identities at fixed numeric weights.

Every unknown coefficient ``a_lam`` multiplies a known polynomial in the
``x_i`` (``p_lam`` for pure identities, ``p_lam x_j^(N-|lam|)`` in slot ``j``
for mixed ones), so requiring the whole combination to vanish is a linear
system with one equation per ``x``-monomial and slot.  Its exact nullspace is
the space of identities of that weight.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import prod

from gmpy2 import mpq

from .forge import ChainResult
from .integrality import find_zero_subset
from .linalg import mat_vec, nullspace
from .poly import MultiPoly, x
from .symfun import (
    MixedIdentity,
    Partition,
    PureIdentity,
    WeightVector,
    _PowerSumTable,
    ones,
    partitions_of,
    partitions_up_to,
)


class Kind(str, enum.Enum):
    PURE = "pure"
    MIXED = "mixed"
    MONIC_MIXED = "monic-mixed"


@dataclass(frozen=True)
class SearchProblem:
    weights: WeightVector
    kind: Kind
    weight: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.weight < 1:
            raise ValueError("weight must be at least 1")
        if self.weights.symbolic:
            raise ValueError("search runs at numeric weights only")

    @property
    def columns(self) -> list[Partition]:
        if self.kind is Kind.PURE:
            return list(partitions_of(self.weight))
        return partitions_up_to(self.weight)


@dataclass
class LinearSystem:
    problem: SearchProblem
    columns: list
    rows: list  # list of lists of mpq
    row_labels: list

    @property
    def shape(self):
        return len(self.rows), len(self.columns)


def build_linear_system(problem: SearchProblem) -> LinearSystem:
    wv = problem.weights
    table = _PowerSumTable(wv)
    cols = problem.columns
    N = problem.weight
    entries: dict[tuple, dict[int, mpq]] = {}
    if problem.kind is Kind.PURE:
        for c, lam in enumerate(cols):
            for exps, coeff in table(lam):
                entries.setdefault((0, _mono_key(exps)), {})[c] = coeff
    else:
        for j in range(1, wv.arity + 1):
            for c, lam in enumerate(cols):
                poly = table(lam) * MultiPoly.var(x(j), N - lam.weight)
                for exps, coeff in poly:
                    entries.setdefault((j, _mono_key(exps)), {})[c] = coeff
    labels = sorted(entries)
    rows = []
    for lab in labels:
        row = [mpq(0)] * len(cols)
        for c, v in entries[lab].items():
            row[c] = v
        rows.append(row)
    return LinearSystem(problem, cols, rows, labels)


def _mono_key(exps) -> tuple:
    return tuple(sorted((v.index[0], e) for v, e in exps.items()))


def normalize_vector(v: list, columns: list) -> list:
    """Scale so ``a_(1^N)`` is 1 if non-zero, else the first non-zero entry."""
    N = max((lam.weight for lam in columns), default=0)
    unit = ones(N)
    pivot = None
    if unit in columns and v[columns.index(unit)]:
        pivot = v[columns.index(unit)]
    else:
        pivot = next((a for a in v if a), None)
    if not pivot:
        return list(v)
    return [a / pivot for a in v]


def vector_to_identity(v: list, system: LinearSystem) -> PureIdentity | MixedIdentity:
    prob = system.problem
    coeffs = {lam: MultiPoly.const(a) for lam, a in zip(system.columns, v) if a}
    cls = PureIdentity if prob.kind is Kind.PURE else MixedIdentity
    return cls(prob.weights.arity, prob.weight, coeffs)


def identity_to_vector(f: PureIdentity | MixedIdentity, system: LinearSystem) -> list:
    """Coefficient vector of ``f`` (already numeric) in the system's column order."""
    index = {lam: i for i, lam in enumerate(system.columns)}
    v = [mpq(0)] * len(system.columns)
    for lam, a in f.coeffs.items():
        if lam not in index:
            raise ValueError(f"partition {lam} is not a column of this system")
        v[index[lam]] = a.constant_value()
    return v


@dataclass
class SearchResult:
    problem: SearchProblem
    basis: list  # normalized vectors
    identities: list
    system: LinearSystem

    @property
    def dimension(self) -> int:
        return len(self.basis)


def solve(problem: SearchProblem) -> SearchResult:
    """All identities of the requested kind and weight (monic kind filters by ``a_empty``)."""
    system = build_linear_system(problem)
    basis = nullspace(system.rows, len(system.columns))
    if problem.kind is Kind.MONIC_MIXED:
        # a_empty is column 0; the functional is non-zero on the span iff on a basis vector
        basis = [v for v in basis if v[0]][:1]
    basis = [normalize_vector(v, system.columns) for v in basis]
    return SearchResult(problem, basis, [vector_to_identity(v, system) for v in basis], system)


def minimal_degree(wv: WeightVector, kind: Kind | str, max_degree: int) -> SearchResult | None:
    """Smallest weight ``N <= max_degree`` with a non-trivial solution of ``kind``."""
    for N in range(1, max_degree + 1):
        res = solve(SearchProblem(wv, Kind(kind), N))
        if res.basis:
            return res
    return None


def raise_degree(f: PureIdentity | MixedIdentity) -> PureIdentity | MixedIdentity:
    """Multiply by ``p_1`` (pure) or by ``t`` (mixed): an identity of weight ``N+1``."""
    if isinstance(f, PureIdentity):
        return PureIdentity(f.arity, f.weight + 1, {lam.add_part(1): a for lam, a in f.coeffs.items()})
    return MixedIdentity(f.arity, f.weight + 1, dict(f.coeffs))


def in_nullspace(f: PureIdentity | MixedIdentity, wv: WeightVector) -> bool:
    """Whether the numeric coefficient vector of ``f`` solves the system at its weight."""
    kind = Kind.PURE if isinstance(f, PureIdentity) else Kind.MIXED
    system = build_linear_system(SearchProblem(wv, kind, f.weight))
    v = identity_to_vector(f.specialize(wv), system)
    return not any(mat_vec(system.rows, v))


def cross_validate(chain: ChainResult, wv: WeightVector, include_pure: bool = True) -> bool:
    """Chain identities specialized at ``wv`` lie in the corresponding nullspaces."""
    ok = in_nullspace(chain.mixed, wv)
    if include_pure:
        ok = ok and in_nullspace(chain.pure, wv)
    return ok


# ---------------------------------------------------------------------------
# multiplicity profile predictions


@dataclass(frozen=True)
class MultiplicityProfile:
    values: tuple
    multiplicities: tuple

    @classmethod
    def of(cls, wv: WeightVector) -> "MultiplicityProfile":
        counts: dict = {}
        for v in wv.values:
            counts[v] = counts.get(v, 0) + 1
        keys = sorted(counts)
        return cls(tuple(keys), tuple(counts[k] for k in keys))

    @property
    def m(self) -> int:
        return prod(mi + 1 for mi in self.multiplicities)


@dataclass
class Prediction:
    label: str
    predicted: int
    observed: int | None
    status: str


@dataclass
class ProfileReport:
    weights: str
    profile: MultiplicityProfile
    reading: str
    max_degree: int
    obstruction: tuple | None
    predictions: list = field(default_factory=list)
    monic: SearchResult | None = None


def _status(observed, predicted, max_degree) -> str:
    if observed is None:
        return "INCONCLUSIVE" if max_degree < predicted else "MISMATCH"
    return "MATCH" if observed == predicted else "MISMATCH"


def min_trace_product_degree(wv: WeightVector, max_degree: int) -> int | None:
    """Smallest ``N`` with a pure identity whose ``p_1^N`` coefficient is non-zero."""
    for N in range(1, max_degree + 1):
        system = build_linear_system(SearchProblem(wv, Kind.PURE, N))
        last = len(system.columns) - 1  # (1^N) is last in reverse lex order
        if any(v[last] for v in nullspace(system.rows, len(system.columns))):
            return N
    return None


def profile_report(wv: WeightVector, max_degree: int) -> ProfileReport:
    """Compare observed minimal degrees with the multiplicity-profile predictions.

    Reads the profile from the multiset of weight values.  Two predictions
    are recorded: the minimal degree of a monic mixed relation (``m - 1``)
    and the number of traces in a reducible trace product (``m``), the
    latter measured on one-variable pure identities containing ``p_1^N``.
    """
    prof = MultiplicityProfile.of(wv)
    witness = find_zero_subset(wv)
    monic = minimal_degree(wv, Kind.MONIC_MIXED, max_degree)
    n_monic = monic.problem.weight if monic else None
    n_trace = min_trace_product_degree(wv, max_degree)
    report = ProfileReport(
        str(wv),
        prof,
        "profile = multiplicities of the distinct values in d",
        max_degree,
        witness.subset if witness else None,
        monic=monic,
    )
    report.predictions.append(
        Prediction("integrality degree (m-1)", prof.m - 1, n_monic, _status(n_monic, prof.m - 1, max_degree))
    )
    report.predictions.append(
        Prediction("trace-product length (m)", prof.m, n_trace, _status(n_trace, prof.m, max_degree))
    )
    return report
