"""HTTP+JSON layer over the scheduling service.

Thin by intent: parse and validate the wire shapes, call the service core,
serialize with the shared payload builders. Timestamps are UTC ISO-8601 and
slot labels are ``YYYY-MM-DDTHH:MM`` throughout.
"""

from __future__ import annotations

import datetime as dt
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .core import PriorityLevel
from .service import (
    SchedulingService,
    ServiceError,
    plan_doc,
    poll_summary_doc,
    recommendations_doc,
    view_doc,
)
from .state import marks_from_doc, poll_to_doc
from .storage import UnknownPollError


class CreatePollBody(BaseModel):
    dates: list[str]
    times: list[str] | None = None
    start_time: str | None = None
    end_time: str | None = None
    slot_minutes: int = 30
    attendees: list[str]
    config: dict[str, Any] = Field(default_factory=dict)


class SubmitBody(BaseModel):
    attendee: str
    marks: dict[str, str] = Field(default_factory=dict)
    note: str | None = None


class PriorityBody(BaseModel):
    priority: str


class FinalizeBody(BaseModel):
    date: str
    time: str


def _parse_time(text: str) -> dt.time:
    hh, mm = text.split(":")
    return dt.time(int(hh), int(mm))


def _times_from_body(body: CreatePollBody) -> list[dt.time]:
    if body.times:
        return [_parse_time(t) for t in body.times]
    if body.start_time and body.end_time:
        times = []
        cursor = dt.datetime.combine(dt.date(2000, 1, 1), _parse_time(body.start_time))
        limit = dt.datetime.combine(dt.date(2000, 1, 1), _parse_time(body.end_time))
        step = dt.timedelta(minutes=body.slot_minutes)
        while cursor + step <= limit:
            times.append(cursor.time())
            cursor += step
        return times
    raise ValueError("provide either times or start_time/end_time")


def create_app(service: SchedulingService) -> FastAPI:
    app = FastAPI(title="groupmeet", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ServiceError)
    async def _service_error(_req: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content={"error": str(exc)})

    @app.exception_handler(UnknownPollError)
    async def _unknown_poll(_req: Request, exc: UnknownPollError) -> JSONResponse:
        return JSONResponse(
            status_code=404, content={"error": f"unknown poll {exc.args[0]!r}"}
        )

    @app.exception_handler(ValueError)
    async def _bad_value(_req: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.post("/polls", status_code=201)
    def create_poll(body: CreatePollBody) -> dict[str, Any]:
        poll = service.create_poll(
            dates=[dt.date.fromisoformat(d) for d in body.dates],
            times=_times_from_body(body),
            roster=body.attendees,
            slot_minutes=body.slot_minutes,
            config=body.config or None,
        )
        return poll_summary_doc(poll)

    @app.get("/polls/{poll_id}")
    def get_poll(poll_id: str) -> dict[str, Any]:
        return poll_summary_doc(service.get_poll(poll_id))

    @app.post("/polls/{poll_id}/responses")
    def submit_response(poll_id: str, body: SubmitBody) -> dict[str, Any]:
        poll = service.get_poll(poll_id)
        marks = marks_from_doc(poll.grid, body.marks)
        poll, decision, plan = service.submit_response(
            poll_id, body.attendee, marks, body.note
        )
        return {
            "poll_id": poll.poll_id,
            "attendee": body.attendee,
            "respondents": poll.active_respondent_count(),
            "decision": decision.to_doc(),
            "plan": plan_doc(poll, plan),
        }

    @app.get("/polls/{poll_id}/view")
    def get_view(
        poll_id: str,
        attendee: str | None = Query(default=None),
        expand: bool | None = Query(default=None),
    ) -> dict[str, Any]:
        poll, decision, plan = service.get_view(poll_id, attendee, expand)
        return view_doc(poll, decision, plan, attendee)

    @app.get("/polls/{poll_id}/recommendations")
    def recommendations(
        poll_id: str, k: int = Query(default=5, ge=1)
    ) -> dict[str, Any]:
        poll, recs, feasible = service.recommendations(poll_id, k)
        return recommendations_doc(poll, recs, feasible)

    @app.put("/polls/{poll_id}/priorities/{attendee}")
    def set_priority(poll_id: str, attendee: str, body: PriorityBody) -> dict[str, Any]:
        level = PriorityLevel(body.priority)
        poll, recs, feasible = service.set_priority(poll_id, attendee, level)
        payload = recommendations_doc(poll, recs, feasible)
        payload["priorities"] = poll_to_doc(poll)["priorities"]
        return payload

    @app.post("/polls/{poll_id}/finalize")
    def finalize(poll_id: str, body: FinalizeBody) -> dict[str, Any]:
        poll = service.get_poll(poll_id)
        slot = poll.grid.parse_slot_label(f"{body.date}T{body.time}")
        poll = service.finalize(poll_id, slot)
        return poll_summary_doc(poll)

    return app
