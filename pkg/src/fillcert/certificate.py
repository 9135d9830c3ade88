"""Derivation steps and their canonical JSON form.

Rationals always serialize as "p/q" strings so that certificates compare
byte-for-byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA_VERSION = "1.0"


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_fraction(text):
    """Inverse of the "p/q" encoding; plain integers are accepted too."""
    return Fraction(text)


def step(rule, inputs, outputs, anchor):
    return {
        "rule": rule,
        "inputs": jsonable(inputs),
        "outputs": jsonable(outputs),
        "paper_anchor": anchor,
    }


def dumps(doc):
    return json.dumps(jsonable(doc), sort_keys=True, indent=2)
