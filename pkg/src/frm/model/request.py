"""Request lifecycle types: kind, source, state machine, and the request itself."""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, replace
from enum import Enum

from frm.errors import IllegalTransition, UnknownKind
from frm.model.record import NormalizedRecord


class RequestKind(str, Enum):
    ORDER = "ORDER"
    EVENT = "EVENT"
    PROCESS = "PROCESS"
    MESSAGE = "MESSAGE"
    DATA = "DATA"

    @staticmethod
    def parse(raw: str) -> "RequestKind":
        """Case-insensitive mapping; unknown strings are rejected, never coerced."""
        try:
            return RequestKind(raw.strip().upper())
        except (ValueError, AttributeError) as exc:
            raise UnknownKind(f"unknown request kind: {raw!r}") from exc


class SourceVariant(str, Enum):
    EXTERNAL = "EXTERNAL"
    INTERNAL = "INTERNAL"


@dataclass(frozen=True)
class RequestSource:
    variant: SourceVariant
    origin: str

    def __post_init__(self):
        if not self.origin:
            raise ValueError("source origin must be non-empty")

    def to_canonical(self) -> dict:
        return {"variant": self.variant.value, "origin": self.origin}

    @staticmethod
    def from_canonical(obj: dict) -> "RequestSource":
        return RequestSource(SourceVariant(obj["variant"]), obj["origin"])


class RequestState(str, Enum):
    RECEIVED = "RECEIVED"
    NORMALIZED = "NORMALIZED"
    PLANNED = "PLANNED"
    IN_PROGRESS = "IN_PROGRESS"
    FULFILLED = "FULFILLED"
    FAILED = "FAILED"
    COMPENSATED = "COMPENSATED"


# The happy path plus failure edges: any pre-terminal state may fail,
# FAILED may be compensated, FULFILLED and COMPENSATED are final.
LEGAL_TRANSITIONS: frozenset[tuple[RequestState, RequestState]] = frozenset(
    {
        (RequestState.RECEIVED, RequestState.NORMALIZED),
        (RequestState.NORMALIZED, RequestState.PLANNED),
        (RequestState.PLANNED, RequestState.IN_PROGRESS),
        (RequestState.IN_PROGRESS, RequestState.FULFILLED),
        (RequestState.RECEIVED, RequestState.FAILED),
        (RequestState.NORMALIZED, RequestState.FAILED),
        (RequestState.PLANNED, RequestState.FAILED),
        (RequestState.IN_PROGRESS, RequestState.FAILED),
        (RequestState.FAILED, RequestState.COMPENSATED),
    }
)

TERMINAL_STATES = frozenset({RequestState.FULFILLED, RequestState.FAILED, RequestState.COMPENSATED})


def can_transition(current: RequestState, to: RequestState) -> bool:
    return (current, to) in LEGAL_TRANSITIONS


@dataclass(frozen=True)
class Request:
    """An immutable unit of work; state changes produce new values."""

    id: str
    kind: RequestKind
    source: RequestSource
    received_at: int  # UTC millis
    raw_payload: bytes
    normalized: NormalizedRecord | None = None
    state: RequestState = RequestState.RECEIVED

    def advance(self, to: RequestState, normalized: NormalizedRecord | None = None) -> "Request":
        if not can_transition(self.state, to):
            raise IllegalTransition(f"{self.state.value} -> {to.value}")
        updated = replace(self, state=to)
        if normalized is not None:
            updated = replace(updated, normalized=normalized)
        if to is RequestState.NORMALIZED and updated.normalized is None:
            raise IllegalTransition("cannot reach NORMALIZED without a normalized record")
        return updated

    def to_canonical(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "source": self.source.to_canonical(),
            "received_at": self.received_at,
            "raw_payload": base64.b64encode(self.raw_payload).decode("ascii"),
            "normalized": self.normalized.to_canonical() if self.normalized is not None else None,
            "state": self.state.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_canonical(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @staticmethod
    def from_canonical(obj: dict) -> "Request":
        normalized = obj.get("normalized")
        return Request(
            id=obj["id"],
            kind=RequestKind(obj["kind"]),
            source=RequestSource.from_canonical(obj["source"]),
            received_at=obj["received_at"],
            raw_payload=base64.b64decode(obj["raw_payload"]),
            normalized=NormalizedRecord.from_canonical(normalized) if normalized is not None else None,
            state=RequestState(obj["state"]),
        )
