"""Payload-to-record conversion: path resolution, entity templates, normalize().

Payload paths are dot-separated segments with ``[n]`` array indexing and no
wildcards, e.g. ``customer.name`` or ``items[0].sku``. Entity-id templates
may splice ``{req}`` (the request id) or ``{<payload-path>}`` (a payload
value) into the target entity, e.g. ``customer/{customer.id}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Mapping

from frm.errors import DuplicateAttribute, MissingPath, PayloadUnparsable, TypeMismatch
from frm.model.record import NormalizedRecord
from frm.model.values import AttrValue, ValueType, coerce

_SEGMENT_RE = re.compile(r"^([^.\[\]]+)((\[\d+\])*)$")
_INDEX_RE = re.compile(r"\[(\d+)\]")
_PLACEHOLDER_RE = re.compile(r"\{([^{}]+)\}")

_MISSING = object()


def parse_tree(payload: object) -> dict:
    """Accept raw bytes/str (JSON) or an already-parsed mapping; root must be an object."""
    if isinstance(payload, (bytes, bytearray)):
        try:
            payload = payload.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise PayloadUnparsable(f"payload is not UTF-8: {exc}") from exc
    if isinstance(payload, str):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise PayloadUnparsable(f"payload is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise PayloadUnparsable(f"payload root must be an object, got {type(payload).__name__}")
    return payload


def resolve_path(tree: object, path: str):
    """Return the value at a payload path, or the module-private missing marker."""
    if not path:
        return _MISSING
    node = tree
    for segment in path.split("."):
        m = _SEGMENT_RE.match(segment)
        if m is None:
            raise PayloadUnparsable(f"malformed payload path segment: {segment!r} in {path!r}")
        key, indexes = m.group(1), m.group(2)
        if not isinstance(node, dict) or key not in node:
            return _MISSING
        node = node[key]
        for idx in _INDEX_RE.findall(indexes):
            i = int(idx)
            if not isinstance(node, list) or i >= len(node):
                return _MISSING
            node = node[i]
    return node


def path_missing(value) -> bool:
    return value is _MISSING


@dataclass(frozen=True)
class MappingEntry:
    path: str  # payload path supplying the value
    entity: str  # entity-id template, may contain {req} / {payload.path}
    attribute: str
    value_type: ValueType


@dataclass(frozen=True)
class MappingSpec:
    """Ordered conversion rules; strict specs require every path to resolve.

    The no-duplicate-target invariant is enforced where it becomes decidable:
    inside normalize(), after template expansion.
    """

    entries: tuple[MappingEntry, ...]
    strict: bool = False

    @staticmethod
    def empty() -> "MappingSpec":
        return MappingSpec(entries=(), strict=False)

    def to_canonical(self) -> dict:
        return {
            "strict": self.strict,
            "entries": [
                {"path": e.path, "entity": e.entity, "attribute": e.attribute, "type": e.value_type.value}
                for e in self.entries
            ],
        }

    @staticmethod
    def from_canonical(obj: Mapping) -> "MappingSpec":
        entries = tuple(
            MappingEntry(
                path=e["path"],
                entity=e["entity"],
                attribute=e["attribute"],
                value_type=ValueType(e["type"]),
            )
            for e in obj.get("entries", [])
        )
        return MappingSpec(entries=entries, strict=bool(obj.get("strict", False)))


def expand_entity(template: str, tree: dict, context: Mapping[str, str] | None):
    """Fill {req}/{payload-path} placeholders; missing marker if any cannot resolve."""
    context = context or {}

    failed = []

    def substitute(m: re.Match) -> str:
        name = m.group(1)
        if name in context:
            return str(context[name])
        value = resolve_path(tree, name)
        if value is _MISSING:
            failed.append(name)
            return ""
        if isinstance(value, bool) or not isinstance(value, (str, int)):
            raise TypeMismatch(f"entity template {template!r}: {name!r} is not text or integer")
        return str(value)

    expanded = _PLACEHOLDER_RE.sub(substitute, template)
    if failed:
        return _MISSING
    return expanded


def normalize(
    payload: object,
    spec: MappingSpec,
    context: Mapping[str, str] | None = None,
) -> NormalizedRecord:
    """Convert a payload tree into a NormalizedRecord per the spec's entries.

    Non-strict specs skip entries whose value path or template does not
    resolve; strict specs raise MissingPath. Two entries landing on one
    (entity, attribute) key raise DuplicateAttribute.
    """
    tree = parse_tree(payload)
    bindings: dict[tuple[str, str], AttrValue] = {}
    for entry in spec.entries:
        raw = resolve_path(tree, entry.path)
        if raw is _MISSING:
            if spec.strict:
                raise MissingPath(f"path {entry.path!r} absent from payload")
            continue
        entity = expand_entity(entry.entity, tree, context)
        if entity is _MISSING:
            if spec.strict:
                raise MissingPath(f"entity template {entry.entity!r} did not resolve")
            continue
        key = (entity, entry.attribute)
        value = coerce(raw, entry.value_type)
        if key in bindings:
            if bindings[key] == value:
                continue
            raise DuplicateAttribute(f"two entries target ({key[0]}, {key[1]})")
        bindings[key] = value
    return NormalizedRecord.from_pairs(bindings.items())
