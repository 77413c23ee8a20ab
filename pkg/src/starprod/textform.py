"""Canonical JSON form for multivectors; bit-exact round trips.

Schema::

    {"terms": [{"blade": [0, 1],
                "coeff": [{"hb": 2, "re": "0", "im": "1/2"}, ...],
                "exps": {"q1": 2, "p0": 1}}]}

One entry per (blade, monomial) pair; rationals travel as strings, hb powers
as integers.  Term order is deterministic: blades by (grade, indices), then
monomials by descending exponent vector, so equal values serialize to equal
bytes.  The canonical *text* form is the str() of the value itself and is
read back by the expression parser.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import DomainError
from .multivector import Multivector
from .poly import PhasePoly
from .scalar import ScalarH


def scalar_to_obj(value: ScalarH) -> list[dict]:
    return [
        {"hb": k, "re": str(re), "im": str(im)}
        for k, re, im in value.terms()
    ]


def scalar_from_obj(obj) -> ScalarH:
    terms = {}
    for entry in obj:
        k = int(entry["hb"])
        terms[k] = (Fraction(entry.get("re", "0")), Fraction(entry.get("im", "0")))
    return ScalarH(terms)


def multivector_to_obj(mv: Multivector) -> dict:
    out = []
    for blade, poly in mv.components():
        for exps, coeff in poly.terms():
            out.append(
                {
                    "blade": list(blade.indices),
                    "coeff": scalar_to_obj(coeff),
                    "exps": {
                        name: e for name, e in zip(PhasePoly.VARS, exps) if e
                    },
                }
            )
    return {"terms": out}


def multivector_from_obj(obj) -> Multivector:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise DomainError("multivector JSON must be an object with a 'terms' list")
    total = Multivector.zero()
    for entry in obj["terms"]:
        coeff = scalar_from_obj(entry.get("coeff", []))
        poly = PhasePoly.monomial(entry.get("exps", {}), coeff)
        total = total + Multivector.blade(entry.get("blade", ()), poly)
    return total


def multivector_to_json(mv: Multivector) -> str:
    return json.dumps(multivector_to_obj(mv), separators=(",", ":"), sort_keys=True)


def multivector_from_json(text: str) -> Multivector:
    return multivector_from_obj(json.loads(text))
