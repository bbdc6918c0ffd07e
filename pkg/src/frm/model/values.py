"""Typed attribute values for the normalized data model.

Five value types are admitted: text, integer, decimal, boolean, timestamp.
Decimals carry a fixed 4-place scale so report arithmetic stays exact;
timestamps are UTC milliseconds since the epoch.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum

from frm.errors import TypeMismatch

DECIMAL_PLACES = 4
_QUANTUM = Decimal(1).scaleb(-DECIMAL_PLACES)


class ValueType(str, Enum):
    TEXT = "text"
    INT = "int"
    DEC = "dec"
    BOOL = "bool"
    TS = "ts"


@dataclass(frozen=True)
class AttrValue:
    """One immutable typed value; compare/hash by (type, value)."""

    type: ValueType
    value: object

    def tagged(self) -> dict:
        """Wire form, e.g. {"t": "int", "v": 42}; decimals as fixed-scale strings."""
        if self.type is ValueType.DEC:
            return {"t": self.type.value, "v": format_decimal(self.value)}
        return {"t": self.type.value, "v": self.value}

    def plain(self) -> object:
        """Untagged projection form: decimals as fixed-scale strings, rest as-is."""
        if self.type is ValueType.DEC:
            return format_decimal(self.value)
        return self.value


def text(v: str) -> AttrValue:
    return AttrValue(ValueType.TEXT, v)


def integer(v: int) -> AttrValue:
    return AttrValue(ValueType.INT, v)


def decimal(v) -> AttrValue:
    return AttrValue(ValueType.DEC, quantize(v))


def boolean(v: bool) -> AttrValue:
    return AttrValue(ValueType.BOOL, v)


def timestamp(millis: int) -> AttrValue:
    return AttrValue(ValueType.TS, millis)


def quantize(v) -> Decimal:
    try:
        return Decimal(v).quantize(_QUANTUM)
    except (InvalidOperation, ValueError, TypeError) as exc:
        raise TypeMismatch(f"not a valid decimal: {v!r}") from exc


def format_decimal(d: Decimal) -> str:
    return format(quantize(d), "f")


def coerce(raw: object, vtype: ValueType) -> AttrValue:
    """Coerce a JSON-tree leaf to the declared value type.

    Accepted inputs per type: text <- str; int <- int; dec <- int, float,
    or decimal string; bool <- bool; ts <- int millis. Anything else is a
    TypeMismatch (bool is never an int, None never coerces).
    """
    if vtype is ValueType.TEXT:
        if isinstance(raw, str):
            return text(raw)
    elif vtype is ValueType.INT:
        if isinstance(raw, int) and not isinstance(raw, bool):
            return integer(raw)
    elif vtype is ValueType.DEC:
        if isinstance(raw, bool) or raw is None:
            raise TypeMismatch(f"cannot coerce {raw!r} to dec")
        if isinstance(raw, (int, float, str)):
            return decimal(raw)
    elif vtype is ValueType.BOOL:
        if isinstance(raw, bool):
            return boolean(raw)
    elif vtype is ValueType.TS:
        if isinstance(raw, int) and not isinstance(raw, bool):
            return timestamp(raw)
    raise TypeMismatch(f"cannot coerce {raw!r} to {vtype.value}")


def from_tagged(obj: object) -> AttrValue:
    """Inverse of AttrValue.tagged()."""
    if not isinstance(obj, dict) or set(obj) != {"t", "v"}:
        raise TypeMismatch(f"not a tagged value: {obj!r}")
    try:
        vtype = ValueType(obj["t"])
    except ValueError as exc:
        raise TypeMismatch(f"unknown value tag: {obj['t']!r}") from exc
    v = obj["v"]
    if vtype is ValueType.DEC:
        if not isinstance(v, str):
            raise TypeMismatch(f"decimal wire form must be a string: {v!r}")
        return decimal(v)
    return coerce(v, vtype)
