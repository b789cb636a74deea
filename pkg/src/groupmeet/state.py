"""Poll state: the single document the service persists per poll.

The JSON form produced by :func:`poll_to_doc` is the wire format everywhere
(storage, HTTP payloads, CLI state files); timestamps are UTC ISO-8601.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Any, Mapping

from .config import EngineConfig
from .core import PreferenceLevel, PriorityLevel, Response, Slot, SlotGrid

DECISION_SOURCES = ("llm", "fallback")


def now_utc() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc).replace(microsecond=0)


@dataclass(frozen=True)
class ScoreDecision:
    """One adaptation verdict: how many options the next viewer should get.

    ``raw_reply`` keeps the unparsed model output (or a transport error
    summary) for audit; empty when the rule policy answered directly.
    """

    score: int
    reason: str
    source: str
    latency_s: float
    raw_reply: str = ""

    def __post_init__(self) -> None:
        if self.score not in (1, 2, 3, 4):
            raise ValueError("score must be 1..4")
        if not self.reason:
            raise ValueError("reason must be non-empty")
        if self.source not in DECISION_SOURCES:
            raise ValueError(f"source must be one of {DECISION_SOURCES}")
        if self.latency_s < 0:
            raise ValueError("latency cannot be negative")

    def to_doc(self) -> dict[str, Any]:
        return {
            "score": self.score,
            "reason": self.reason,
            "source": self.source,
            "latency_s": self.latency_s,
            "raw_reply": self.raw_reply,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> ScoreDecision:
        return cls(
            score=doc["score"],
            reason=doc["reason"],
            source=doc["source"],
            latency_s=doc["latency_s"],
            raw_reply=doc.get("raw_reply", ""),
        )


class AlreadyFinalizedError(RuntimeError):
    """The poll has a confirmed slot; no further mutation is allowed."""


@dataclass
class PollState:
    """Everything known about one poll. Mutated only under the store's lock."""

    poll_id: str
    grid: SlotGrid
    roster: tuple[str, ...]
    config: EngineConfig
    created_at: dt.datetime
    responses: dict[str, Response] = field(default_factory=dict)
    priorities: dict[str, PriorityLevel] = field(default_factory=dict)
    finalized_slot: Slot | None = None
    decision_log: list[ScoreDecision] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.poll_id:
            raise ValueError("poll_id must be non-empty")
        if not self.roster:
            raise ValueError("roster must be non-empty")
        if len(set(self.roster)) != len(self.roster):
            raise ValueError("roster contains duplicate names")
        if self.finalized_slot is not None and not self.grid.contains(self.finalized_slot):
            raise ValueError("finalized slot is not on the grid")

    # -- attendee bookkeeping -------------------------------------------------

    def attendees(self) -> list[str]:
        """Roster plus anyone who showed up by responding, stable order."""
        seen = list(self.roster)
        for name in self.responses:
            if name not in seen:
                seen.append(name)
        for name in self.priorities:
            if name not in seen:
                seen.append(name)
        return seen

    def knows(self, attendee: str) -> bool:
        return attendee in self.attendees()

    def priority_of(self, attendee: str) -> PriorityLevel:
        # Unlisted attendees default to optional.
        return self.priorities.get(attendee, PriorityLevel.OPTIONAL_TO_ATTEND)

    def group_size(self) -> int:
        return sum(
            1
            for a in self.attendees()
            if self.priority_of(a) is not PriorityLevel.NOT_COMING
        )

    def active_respondent_count(self) -> int:
        return sum(
            1
            for r in self.responses.values()
            if self.priority_of(r.attendee) is not PriorityLevel.NOT_COMING
        )

    def response_rate(self) -> float:
        size = self.group_size()
        if size == 0:
            return 0.0
        return self.active_respondent_count() / size

    # -- mutations ------------------------------------------------------------

    def upsert_response(self, response: Response) -> None:
        """Insert or replace one attendee's response. Marks must be on-grid."""
        if self.finalized_slot is not None:
            raise AlreadyFinalizedError("poll is finalized; submissions are closed")
        for slot in response.marks:
            if not self.grid.contains(slot):
                raise ValueError(f"mark at {slot!r} is off the grid")
        self.responses[response.attendee] = response

    def set_priority(self, attendee: str, level: PriorityLevel) -> None:
        if not self.knows(attendee):
            raise KeyError(f"unknown attendee {attendee!r}")
        self.priorities[attendee] = level

    def record_decision(self, decision: ScoreDecision) -> None:
        # Append-only by construction; nothing ever removes log entries.
        self.decision_log.append(decision)

    def latest_decision(self) -> ScoreDecision:
        if not self.decision_log:
            raise ValueError("poll has no recorded decision")
        return self.decision_log[-1]

    def finalize(self, slot: Slot) -> None:
        if self.finalized_slot is not None:
            raise AlreadyFinalizedError("a slot was already confirmed")
        if not self.grid.contains(slot):
            raise ValueError(f"slot {slot!r} is not on the grid")
        self.finalized_slot = slot


# -- document (de)serialization ----------------------------------------------


def poll_to_doc(poll: PollState) -> dict[str, Any]:
    grid = poll.grid
    responses = sorted(poll.responses.values(), key=lambda r: r.submitted_at)
    return {
        "poll_id": poll.poll_id,
        "created_at": poll.created_at.isoformat(),
        "grid": {
            "dates": [d.isoformat() for d in grid.dates],
            "times": [t.strftime("%H:%M") for t in grid.times],
            "slot_minutes": grid.slot_minutes,
        },
        "roster": list(poll.roster),
        "responses": [
            {
                "attendee": r.attendee,
                "submitted_at": r.submitted_at.isoformat(),
                "marks": {
                    grid.slot_label(slot): level.value
                    for slot, level in sorted(r.marks.items())
                },
                "note": r.note,
            }
            for r in responses
        ],
        "priorities": {
            name: poll.priorities[name].value for name in sorted(poll.priorities)
        },
        "config": poll.config.to_doc(),
        "finalized": (
            None
            if poll.finalized_slot is None
            else {
                "date": grid.dates[poll.finalized_slot[0]].isoformat(),
                "time": grid.times[poll.finalized_slot[1]].strftime("%H:%M"),
            }
        ),
        "decisions": [d.to_doc() for d in poll.decision_log],
    }


def _parse_time(text: str) -> dt.time:
    hh, mm = text.split(":")
    return dt.time(int(hh), int(mm))


def marks_from_doc(
    grid: SlotGrid, marks_doc: Mapping[str, str]
) -> dict[Slot, PreferenceLevel]:
    return {
        grid.parse_slot_label(label): PreferenceLevel(level)
        for label, level in marks_doc.items()
    }


def poll_from_doc(doc: Mapping[str, Any]) -> PollState:
    grid = SlotGrid(
        dates=tuple(dt.date.fromisoformat(d) for d in doc["grid"]["dates"]),
        times=tuple(_parse_time(t) for t in doc["grid"]["times"]),
        slot_minutes=doc["grid"].get("slot_minutes", 30),
    )
    finalized = doc.get("finalized")
    poll = PollState(
        poll_id=doc["poll_id"],
        grid=grid,
        roster=tuple(doc["roster"]),
        config=EngineConfig.from_doc(doc["config"]),
        created_at=dt.datetime.fromisoformat(doc["created_at"]),
        priorities={
            name: PriorityLevel(level)
            for name, level in doc.get("priorities", {}).items()
        },
        finalized_slot=(
            None
            if finalized is None
            else (
                grid.dates.index(dt.date.fromisoformat(finalized["date"])),
                grid.times.index(_parse_time(finalized["time"])),
            )
        ),
        decision_log=[ScoreDecision.from_doc(d) for d in doc.get("decisions", [])],
    )
    for rdoc in doc.get("responses", []):
        response = Response(
            attendee=rdoc["attendee"],
            marks=marks_from_doc(grid, rdoc.get("marks", {})),
            submitted_at=dt.datetime.fromisoformat(rdoc["submitted_at"]),
            note=rdoc.get("note"),
        )
        for slot in response.marks:
            if not grid.contains(slot):
                raise ValueError("stored mark is off the grid")
        poll.responses[response.attendee] = response
    return poll
