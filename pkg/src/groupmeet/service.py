"""Scheduling service core: poll lifecycle, views, recommendations.

Framework-free; the HTTP layer in :mod:`groupmeet.api` and the in-process
CLI client both drive this class and share its payload builders, so every
surface speaks the same wire format. Scoring is recomputed on each
submission (not on each view) and every served plan traces back to a logged
decision.
"""

from __future__ import annotations

import datetime as dt
import secrets
from typing import Any, Iterable, Mapping

from .config import EngineConfig
from .core import (
    PreferenceLevel,
    PriorityLevel,
    Response,
    Slot,
    tally,
)
from .engine import ViewFormat, ViewPlan, expanded_view, plan_view
from .llm import LlmGateway
from .recommend import (
    CANONICAL_SPECS,
    DEFAULT_TOP_K,
    Recommendation,
    has_full_coverage,
    recommend,
    relaxation_pass,
)
from .state import (
    AlreadyFinalizedError,
    PollState,
    ScoreDecision,
    now_utc,
    poll_to_doc,
)
from .storage import PollStore, UnknownPollError


class ServiceError(Exception):
    """Base for request-level failures; ``status`` is the HTTP mapping."""

    status = 400


class UnknownAttendeeError(ServiceError):
    status = 404


class PollClosedError(ServiceError):
    status = 409


class NoResponsesError(ServiceError):
    status = 409


class BadRequestError(ServiceError):
    status = 422


def _new_poll_id() -> str:
    # A leading "-" or "_" would read as a CLI flag or a hidden file.
    while True:
        poll_id = secrets.token_urlsafe(9)
        if poll_id[0] not in "-_":
            return poll_id


class SchedulingService:
    def __init__(
        self,
        store: PollStore,
        gateway: LlmGateway | None = None,
        clock=now_utc,
        id_factory=_new_poll_id,
    ):
        self.store = store
        self.gateway = gateway or LlmGateway(client=None)
        self.clock = clock
        self.id_factory = id_factory

    # -- lifecycle ------------------------------------------------------------

    def create_poll(
        self,
        dates: Iterable[dt.date],
        times: Iterable[dt.time],
        roster: Iterable[str],
        slot_minutes: int = 30,
        config: EngineConfig | Mapping[str, Any] | None = None,
    ) -> PollState:
        from .core import SlotGrid

        if config is None:
            config = EngineConfig()
        elif not isinstance(config, EngineConfig):
            config = EngineConfig.from_doc(config)
        try:
            grid = SlotGrid(tuple(dates), tuple(times), slot_minutes)
            poll = PollState(
                poll_id=self.id_factory(),
                grid=grid,
                roster=tuple(roster),
                config=config,
                created_at=self.clock(),
            )
        except ValueError as exc:
            raise BadRequestError(str(exc)) from exc
        # The first viewer's plan needs a decision on record from the start.
        poll.record_decision(self.gateway.decide(poll))
        self.store.create(poll)
        return poll

    def get_poll(self, poll_id: str) -> PollState:
        return self.store.load(poll_id)

    def submit_response(
        self,
        poll_id: str,
        attendee: str,
        marks: Mapping[Slot, PreferenceLevel],
        note: str | None = None,
    ) -> tuple[PollState, ScoreDecision, ViewPlan]:
        if not attendee:
            raise BadRequestError("attendee name must be non-empty")
        with self.store.lock(poll_id):
            poll = self.store.load(poll_id)
            response = Response(
                attendee=attendee,
                marks=dict(marks),
                submitted_at=self.clock(),
                note=note,
            )
            try:
                poll.upsert_response(response)
            except AlreadyFinalizedError as exc:
                raise PollClosedError(str(exc)) from exc
            except ValueError as exc:
                raise BadRequestError(str(exc)) from exc
            decision = self.gateway.decide(poll)
            poll.record_decision(decision)
            self.store.save(poll)
        return poll, decision, plan_view(poll, decision.score)

    # -- views ----------------------------------------------------------------

    def get_view(
        self,
        poll_id: str,
        attendee: str | None = None,
        expand: bool | None = None,
    ) -> tuple[PollState, ScoreDecision, ViewPlan]:
        poll = self.store.load(poll_id)
        decision = poll.latest_decision()
        plan = plan_view(poll, decision.score)
        if expand is True:
            plan = expanded_view(poll)
        elif expand is False:
            # "See fewer options": from a full calendar, collapse to the
            # promising poll; anything narrower is already collapsed. The
            # first attendee (nobody responded yet) has nothing to collapse to.
            if (
                plan.format is ViewFormat.FULL_CALENDAR
                and poll.active_respondent_count() > 0
            ):
                plan = plan_view(poll, 1)
        return poll, decision, plan

    # -- recommendations -------------------------------------------------------

    def recommendations(
        self, poll_id: str, top_k: int = DEFAULT_TOP_K
    ) -> tuple[PollState, list[Recommendation], bool]:
        if top_k < 1:
            raise BadRequestError("k must be at least 1")
        poll = self.store.load(poll_id)
        if poll.active_respondent_count() == 0:
            raise NoResponsesError("no responses yet; nothing to recommend")
        feasible = has_full_coverage(poll)
        if feasible:
            recs = recommend(poll, top_k)
        else:
            stamp = self.clock()
            recs = [
                relaxation_pass(poll, spec, generated_at=stamp).truncated(top_k)
                for spec in CANONICAL_SPECS
            ]
        return poll, recs, feasible

    def set_priority(
        self, poll_id: str, attendee: str, level: PriorityLevel, top_k: int = DEFAULT_TOP_K
    ) -> tuple[PollState, list[Recommendation], bool]:
        with self.store.lock(poll_id):
            poll = self.store.load(poll_id)
            try:
                poll.set_priority(attendee, level)
            except KeyError as exc:
                raise UnknownAttendeeError(str(exc)) from exc
            self.store.save(poll)
        if poll.active_respondent_count() == 0:
            # Priorities may be edited before anyone votes (or after the only
            # respondent is flagged NotComing); there is nothing to rank yet.
            return poll, [], False
        return self.recommendations(poll_id, top_k)

    def finalize(self, poll_id: str, slot: Slot) -> PollState:
        with self.store.lock(poll_id):
            poll = self.store.load(poll_id)
            try:
                poll.finalize(slot)
            except AlreadyFinalizedError as exc:
                raise PollClosedError(str(exc)) from exc
            except ValueError as exc:
                raise BadRequestError(str(exc)) from exc
            self.store.save(poll)
        return poll


# -- wire payload builders ----------------------------------------------------


def plan_doc(poll: PollState, plan: ViewPlan) -> dict[str, Any]:
    grid = poll.grid
    return {
        "format": plan.format.value,
        "score": plan.score,
        "reason": plan.reason,
        "can_expand": plan.can_expand,
        "slots": [grid.slot_label(s) for s in sorted(plan.slots)],
        "omitted_dates": [grid.dates[d].isoformat() for d in sorted(plan.omitted_dates)],
        "omitted_times": [
            grid.times[t].strftime("%H:%M") for t in sorted(plan.omitted_times)
        ],
    }


def view_doc(
    poll: PollState,
    decision: ScoreDecision,
    plan: ViewPlan,
    attendee: str | None = None,
) -> dict[str, Any]:
    grid = poll.grid
    t = tally(poll)
    popularity = {}
    for slot in grid.all_slots():
        d, ti = slot
        if t.sure[d][ti] or t.maybe[d][ti]:
            popularity[grid.slot_label(slot)] = {
                "sure": t.sure[d][ti],
                "maybe": t.maybe[d][ti],
            }
    own_marks = {}
    if attendee and attendee in poll.responses:
        own_marks = {
            grid.slot_label(slot): level.value
            for slot, level in sorted(poll.responses[attendee].marks.items())
        }
    return {
        "poll_id": poll.poll_id,
        "plan": plan_doc(poll, plan),
        "decision": decision.to_doc(),
        "respondents": poll.active_respondent_count(),
        "group_size": poll.group_size(),
        "grid": {
            "dates": [d.isoformat() for d in grid.dates],
            "times": [x.strftime("%H:%M") for x in grid.times],
            "slot_minutes": grid.slot_minutes,
        },
        "own_marks": own_marks,
        "popularity": popularity,
        "finalized": poll_to_doc(poll)["finalized"],
    }


def recommendation_doc(poll: PollState, rec: Recommendation) -> dict[str, Any]:
    grid = poll.grid
    return {
        "algorithm": {
            "label": rec.algorithm.label,
            "maybe_weight": rec.algorithm.maybe_weight,
            "priority_mode": rec.algorithm.priority_mode.value,
        },
        "generated_at": rec.generated_at.isoformat(),
        "relaxed_away": list(rec.relaxed_away),
        "ranked": [
            {
                "date": grid.dates[e.slot[0]].isoformat(),
                "time": grid.times[e.slot[1]].strftime("%H:%M"),
                "score": round(e.score, 6),
                "sure": sorted(e.sure),
                "maybe": sorted(e.maybe),
            }
            for e in rec.ranked
        ],
    }


def recommendations_doc(
    poll: PollState, recs: list[Recommendation], feasible: bool
) -> dict[str, Any]:
    # The one payload that carries note text: organizers read it here.
    notes = [
        {"attendee": r.attendee, "note": r.note}
        for r in sorted(poll.responses.values(), key=lambda r: r.submitted_at)
        if r.note
    ]
    return {
        "poll_id": poll.poll_id,
        "feasible": feasible,
        "recommendations": [recommendation_doc(poll, r) for r in recs],
        "notes": notes,
    }


def poll_summary_doc(poll: PollState) -> dict[str, Any]:
    # Full poll document minus note text (notes are organizer-only).
    doc = poll_to_doc(poll)
    for response in doc["responses"]:
        response.pop("note", None)
    return doc
