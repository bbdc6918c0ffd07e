"""The normalized record: unique (entity, attribute) -> value bindings.

This is the single common data model every subsystem operates on. The
uniqueness invariant is the load-bearing property: a datum lives in one
and only one binding, so merges must either reject or explicitly resolve
conflicts, never silently duplicate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

from frm.errors import AttributeConflict, RecordInvalid, TypeMismatch
from frm.model.values import AttrValue, from_tagged

Key = tuple[str, str]

# Characters that may not appear in entity ids or attribute names.
_BANNED = set("\\\x00\n\r\t")


class MergePolicy(str, Enum):
    REJECT_CONFLICT = "REJECT_CONFLICT"
    DELTA_WINS = "DELTA_WINS"


@dataclass(frozen=True)
class Violation:
    key: Key
    rule: str

    def __str__(self) -> str:
        return f"{self.rule} at ({self.key[0]}, {self.key[1]!r})"


@dataclass(frozen=True)
class NormalizedRecord:
    """Immutable, deterministically ordered set of bindings.

    Construct through from_pairs()/empty(), which validate the invariants.
    The raw constructor is deliberately unchecked so validate_record can
    inspect malformed instances.
    """

    items: tuple[tuple[Key, AttrValue], ...]

    @staticmethod
    def empty() -> "NormalizedRecord":
        return _EMPTY

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[Key, AttrValue]]) -> "NormalizedRecord":
        seen: dict[Key, AttrValue] = {}
        for key, value in pairs:
            if key in seen:
                raise AttributeConflict(f"duplicate binding for ({key[0]}, {key[1]})")
            seen[key] = value
        record = NormalizedRecord(tuple(sorted(seen.items(), key=lambda kv: kv[0])))
        violations = validate_record(record)
        if violations:
            raise RecordInvalid("; ".join(str(v) for v in violations))
        return record

    def get(self, entity: str, attribute: str) -> AttrValue | None:
        return self.as_dict().get((entity, attribute))

    def has(self, entity: str, attribute: str) -> bool:
        return (entity, attribute) in self.as_dict()

    def keys(self) -> tuple[Key, ...]:
        return tuple(k for k, _ in self.items)

    def as_dict(self) -> Mapping[Key, AttrValue]:
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = dict(self.items)
            object.__setattr__(self, "_index", cached)
        return cached

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[tuple[Key, AttrValue]]:
        return iter(self.items)

    def to_canonical(self) -> dict:
        """JSON object keyed by 'entity/attribute' with tagged values."""
        return {f"{e}/{a}": v.tagged() for (e, a), v in self.items}

    def to_json(self) -> str:
        return json.dumps(self.to_canonical(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @staticmethod
    def from_canonical(obj: Mapping[str, object]) -> "NormalizedRecord":
        pairs = []
        for joined, tagged in obj.items():
            entity, sep, attribute = joined.rpartition("/")
            if not sep or not entity or not attribute:
                raise RecordInvalid(f"malformed canonical key: {joined!r}")
            pairs.append(((entity, attribute), from_tagged(tagged)))
        return NormalizedRecord.from_pairs(pairs)

    @staticmethod
    def from_json(raw: str) -> "NormalizedRecord":
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise RecordInvalid(f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise RecordInvalid("canonical record must be a JSON object")
        return NormalizedRecord.from_canonical(obj)


_EMPTY = NormalizedRecord(())


def _key_violations(key: Key) -> list[Violation]:
    entity, attribute = key
    out = []
    if not entity:
        out.append(Violation(key, "EmptyEntityId"))
    if not attribute:
        out.append(Violation(key, "EmptyAttributeName"))
    if any(c in _BANNED for c in entity) or entity.startswith("/") or entity.endswith("/") or "//" in entity:
        out.append(Violation(key, "IllegalCharacter"))
    if any(c in _BANNED for c in attribute) or "/" in attribute:
        out.append(Violation(key, "IllegalCharacter"))
    return out


def validate_record(record: NormalizedRecord) -> list[Violation]:
    """Check every record invariant; empty list iff the record is well formed."""
    violations: list[Violation] = []
    seen: set[Key] = set()
    for key, value in record.items:
        if key in seen:
            violations.append(Violation(key, "DuplicateKey"))
        seen.add(key)
        violations.extend(_key_violations(key))
        if not isinstance(value, AttrValue):
            violations.append(Violation(key, "NotAnAttrValue"))
    if record.items != tuple(sorted(record.items, key=lambda kv: kv[0])):
        violations.append(Violation(record.items[0][0], "UnsortedItems"))
    return violations


def merge_attributes(
    base: NormalizedRecord,
    delta: NormalizedRecord,
    policy: MergePolicy = MergePolicy.REJECT_CONFLICT,
) -> NormalizedRecord:
    """Union of two records; collisions resolved per policy.

    Equal values on the same key are never a conflict. REJECT_CONFLICT
    raises AttributeConflict on differing values; DELTA_WINS takes delta's.
    """
    merged = dict(base.as_dict())
    for key, value in delta:
        existing = merged.get(key)
        if existing is not None and existing != value:
            if policy is MergePolicy.REJECT_CONFLICT:
                raise AttributeConflict(
                    f"({key[0]}, {key[1]}): {existing.tagged()} vs {value.tagged()}"
                )
        merged[key] = value
    return NormalizedRecord(tuple(sorted(merged.items(), key=lambda kv: kv[0])))
