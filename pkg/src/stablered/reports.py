"""Report documents: deterministic JSON with exact rationals.

Every number in a report is an integer or a {"num", "den"} pair; field
elements are serialized as coefficient lists.  Serialization is byte
stable: keys are emitted sorted and the encoder is configured once.
"""

from __future__ import annotations

import dataclasses
import json
from enum import Enum
from fractions import Fraction

SCHEMA_VERSION = "1"

STATUS_OK = "ok"
STATUS_CHECK_FAILED = "check-failed"


def to_jsonable(obj):
    """Recursive conversion to JSON-safe structures, exact throughout."""
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=repr)
        return [to_jsonable(v) for v in items]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if hasattr(obj, "coeffs") and hasattr(obj, "field"):
        if obj.in_prime_field():
            return obj.lift()
        return {"coeffs": list(obj.coeffs), "field": repr(obj.field)}
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floating point is banned from reports")
    return repr(obj)


def make_document(command: str, inputs: dict, results: dict,
                  provenance: list, status: str = STATUS_OK) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "inputs": to_jsonable(inputs),
        "results": to_jsonable(results),
        "provenance": list(provenance),
    }


def dump_document(doc: dict) -> str:
    """Canonical serialization; identical inputs give identical bytes."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True)


def parse_fraction(text) -> Fraction:
    """Exact rational from 'a/b' or 'a' notation."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    parts = str(text).strip().split("/")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    if len(parts) == 2:
        return Fraction(int(parts[0]), int(parts[1]))
    raise ValueError(f"bad rational {text!r}")
