"""JSON-ready conversion: every number becomes a decimal string.

Integers print as themselves, rationals as ``"p/q"``, -infinity as
``"-inf"`` and floats with 12 significant digits.
"""

import dataclasses
import json
from fractions import Fraction

SCHEMA = "knapgap/1"


def number(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if x == float("-inf"):
            return "-inf"
        if x == float("inf"):
            return "inf"
        return f"{x:.12g}"
    raise TypeError(f"not a number: {x!r}")


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, float, Fraction)):
        return number(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload):
    """Schema-tagged, key-sorted JSON text with a trailing newline."""
    body = {"schema": SCHEMA}
    body.update(jsonable(payload))
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def parse_number(text):
    text = str(text).strip()
    if text == "-inf":
        return float("-inf")
    return Fraction(text)


def instance_to_json(inst):
    return {"a": [str(x) for x in inst.a], "b": str(inst.b)}


def instance_from_json(data):
    from .knapsack import KnapsackInstance
    return KnapsackInstance(tuple(int(x) for x in data["a"]), int(data["b"]))
