"""Regenerate tests/golden/ from the sympy oracle: ``python tests/make_golden.py``.

Arithmetic is done in sympy; the package is used only to print coefficients
in its canonical grammar and to lay out the JSON schema.
"""

import json
import sys
from pathlib import Path

import sympy as sp

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

import oracles  # noqa: E402
from diagtrace.poly import parse  # noqa: E402

GOLDEN = HERE / "golden"


def canon(expr) -> str:
    return parse(oracles.sympy_to_text(expr)).to_text()


def key(lam):
    return (sum(lam), tuple(-v for v in lam))


def dump(kind, arity, weight, table, name):
    terms = [{"partition": list(lam), "coeff": canon(c)} for lam, c in sorted(table.items(), key=lambda kv: key(kv[0]))]
    doc = {"kind": kind, "format_version": 1, "arity": arity, "weight": weight, "terms": terms}
    (GOLDEN / name).write_text(json.dumps(doc, indent=1) + "\n")


def quadratic_table(q):
    poly = sp.Poly(sp.expand(q), oracles.p1, oracles.p2, oracles.t)
    out = {}
    for (e1, e2, et), c in poly.terms():
        out[tuple([2] * e2 + [1] * e1)] = c
    return out


def main():
    GOLDEN.mkdir(exist_ok=True)
    qx, qy = oracles.expected_quadratics()
    dump("mixed", 2, 2, quadratic_table(qx), "k2_lift1.json")
    dump("mixed", 2, 2, quadratic_table(qy), "k2_lift2.json")
    mixed = oracles.k2_mixed_table()
    dump("mixed", 2, 4, {lam: c for (lam, _), c in mixed.items()}, "k2_mixed.json")
    pure = {}
    for (lam, e), c in mixed.items():
        new = tuple(sorted(lam + (e + 1,), reverse=True))
        pure[new] = sp.expand(pure.get(new, 0) + c)
    dump("pure", 2, 5, {lam: c for lam, c in pure.items() if c != 0}, "k2_pure.json")


if __name__ == "__main__":
    main()
