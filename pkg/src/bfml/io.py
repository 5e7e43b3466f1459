"""JSON documents for binary functions and rank tables.

A function document::

    {"ground_set": ["a", "b"], "values": {"": "1", "a": "0", "a,b": "-1/2", "b": "1"}}

Keys are comma-joined sorted labels (empty string for the empty set); every
subset must be present.  Values are exact rational strings, "p/q" or integer.
Rank documents have the same shape with integer values and "" -> "0".
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Sequence, Union

from .core import BinaryFunction, make_binary_function
from .errors import BadEmptySetValue, BFMLError, NonRationalValue, SchemaError

__all__ = [
    "subset_key",
    "format_rational",
    "parse_rational",
    "function_to_document",
    "function_from_document",
    "parse_function",
    "serialize_function",
    "rank_to_document",
    "rank_from_document",
    "parse_rank",
    "serialize_rank",
    "dumps",
]

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def subset_key(labels) -> str:
    return ",".join(sorted(labels))


def format_rational(v: Fraction) -> str:
    return str(Fraction(v))


def parse_rational(text, where: str = "") -> Fraction:
    if isinstance(text, bool) or isinstance(text, float):
        raise NonRationalValue("%svalue %r is not an exact rational string" % (where, text))
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise NonRationalValue("%svalue %r is not of the form 'p/q' or an integer" % (where, text))
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise NonRationalValue("%svalue %r has a zero denominator" % (where, text)) from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load(text: Union[str, bytes]):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("document is not UTF-8: %s" % exc) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("malformed JSON at line %d, column %d: %s" % (exc.lineno, exc.colno, exc.msg)) from None


def _check_ground_set(doc) -> list[str]:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    extra = set(doc) - {"ground_set", "values"}
    if extra:
        raise SchemaError("unexpected top-level keys %s" % sorted(extra))
    gs = doc.get("ground_set")
    if not isinstance(gs, list) or not all(isinstance(x, str) for x in gs):
        raise SchemaError("'ground_set' must be a list of strings")
    for x in gs:
        if not x or "," in x or x != x.strip():
            raise SchemaError("label %r must be non-empty, without commas or surrounding spaces" % x)
    if len(set(gs)) != len(gs):
        raise SchemaError("'ground_set' has duplicate labels")
    if not isinstance(doc.get("values"), dict):
        raise SchemaError("'values' must be an object")
    return gs


def _ordered_values(doc, gs: Sequence[str]) -> list:
    """Values in bitmask order over gs, enforcing key syntax and totality."""
    values = doc["values"]
    index = {x: i for i, x in enumerate(gs)}
    by_mask = {}
    for key, raw in values.items():
        labels = key.split(",") if key else []
        if labels != sorted(labels):
            raise SchemaError("key %r: labels must be sorted" % key)
        m = 0
        for x in labels:
            if x not in index:
                raise SchemaError("key %r: unknown label %r" % (key, x))
            if m >> index[x] & 1:
                raise SchemaError("key %r: repeated label %r" % (key, x))
            m |= 1 << index[x]
        by_mask[m] = (key, raw)
    n = len(gs)
    missing = [m for m in range(1 << n) if m not in by_mask]
    if missing:
        first = subset_key(x for i, x in enumerate(gs) if missing[0] >> i & 1)
        raise SchemaError("table is not total: %d subsets missing, first is %r" % (len(missing), first))
    return [by_mask[m] for m in range(1 << n)]


def function_to_document(f: BinaryFunction) -> dict:
    for x in f.ground_set:
        if not x or "," in x:
            raise SchemaError("label %r cannot be serialized" % x)
    return {
        "ground_set": list(f.ground_set),
        "values": {subset_key(labels): format_rational(v) for labels, v in f.items()},
    }


def function_from_document(doc) -> BinaryFunction:
    gs = _check_ground_set(doc)
    if len(gs) > 20:
        raise SchemaError("ground set of order %d exceeds the cap of 20" % len(gs))
    entries = _ordered_values(doc, gs)
    table = [parse_rational(raw, "key %r: " % key) for key, raw in entries]
    if table[0] != 1:
        raise BadEmptySetValue('value at "" must be 1, got %s' % table[0])
    try:
        return make_binary_function(gs, table)
    except SchemaError:
        raise
    except BFMLError as exc:
        raise SchemaError(str(exc)) from None


def parse_function(text: Union[str, bytes]) -> BinaryFunction:
    return function_from_document(_load(text))


def serialize_function(f: BinaryFunction) -> str:
    return dumps(function_to_document(f))


def rank_to_document(ground_set: Sequence[str], values: Sequence[int]) -> dict:
    labels = list(ground_set)
    return {
        "ground_set": labels,
        "values": {
            subset_key(x for i, x in enumerate(labels) if m >> i & 1): str(int(v)) for m, v in enumerate(values)
        },
    }


def rank_from_document(doc) -> tuple[tuple[str, ...], tuple[int, ...]]:
    gs = _check_ground_set(doc)
    entries = _ordered_values(doc, gs)
    values = []
    for key, raw in entries:
        v = parse_rational(raw, "key %r: " % key)
        if v.denominator != 1:
            raise SchemaError("key %r: rank %s is not an integer" % (key, v))
        values.append(v.numerator)
    if values[0] != 0:
        raise BadEmptySetValue('rank at "" must be 0, got %d' % values[0])
    return tuple(gs), tuple(values)


def parse_rank(text: Union[str, bytes]) -> tuple[tuple[str, ...], tuple[int, ...]]:
    return rank_from_document(_load(text))


def serialize_rank(ground_set: Sequence[str], values: Sequence[int]) -> str:
    return dumps(rank_to_document(ground_set, values))
