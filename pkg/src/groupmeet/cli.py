"""Command-line interface: poll management, simulation, offline scoring.

Every subcommand can talk to a running server (``--server URL``) or operate
in-process against a storage directory (``--storage DIR``, default
``./groupmeet-data`` or ``$GROUPMEET_STORAGE_PATH``). Both paths exchange
the same JSON payloads, so output is identical either way. Output is
line-oriented and, under a fixed ``--seed``, byte-stable.
"""

from __future__ import annotations

import datetime as dt
import json
import os
from typing import Any

import click
import httpx

from .core import PriorityLevel
from .llm import LlmSettings, build_prompt
from .recommend import covering_slots
from .service import (
    SchedulingService,
    ServiceError,
    plan_doc,
    poll_summary_doc,
    recommendations_doc,
    view_doc,
)
from .simulate import build_profiles
from .state import marks_from_doc, poll_from_doc
from .storage import PollStore, UnknownPollError

DEFAULT_STORAGE = "./groupmeet-data"


def _storage_dir(storage: str | None) -> str:
    return storage or os.environ.get("GROUPMEET_STORAGE_PATH", DEFAULT_STORAGE)


class LocalClient:
    """Drives the service core in-process; mirrors the HTTP payloads."""

    def __init__(self, storage: str | None):
        store = PollStore(_storage_dir(storage))
        gateway = LlmSettings.from_env().build_gateway()
        self.service = SchedulingService(store, gateway)

    def create_poll(self, body: dict[str, Any]) -> dict[str, Any]:
        times = [_parse_time(t) for t in body["times"]]
        poll = self.service.create_poll(
            dates=[dt.date.fromisoformat(d) for d in body["dates"]],
            times=times,
            roster=body["attendees"],
            slot_minutes=body.get("slot_minutes", 30),
            config=body.get("config") or None,
        )
        return poll_summary_doc(poll)

    def get_poll(self, poll_id: str) -> dict[str, Any]:
        return poll_summary_doc(self.service.get_poll(poll_id))

    def submit(self, poll_id: str, body: dict[str, Any]) -> dict[str, Any]:
        poll = self.service.get_poll(poll_id)
        marks = marks_from_doc(poll.grid, body.get("marks", {}))
        poll, decision, plan = self.service.submit_response(
            poll_id, body["attendee"], marks, body.get("note")
        )
        return {
            "poll_id": poll.poll_id,
            "attendee": body["attendee"],
            "respondents": poll.active_respondent_count(),
            "decision": decision.to_doc(),
            "plan": plan_doc(poll, plan),
        }

    def view(
        self, poll_id: str, attendee: str | None = None, expand: bool | None = None
    ) -> dict[str, Any]:
        poll, decision, plan = self.service.get_view(poll_id, attendee, expand)
        return view_doc(poll, decision, plan, attendee)

    def recommendations(self, poll_id: str, k: int) -> dict[str, Any]:
        poll, recs, feasible = self.service.recommendations(poll_id, k)
        return recommendations_doc(poll, recs, feasible)

    def set_priority(
        self, poll_id: str, attendee: str, priority: str
    ) -> dict[str, Any]:
        poll, recs, feasible = self.service.set_priority(
            poll_id, attendee, PriorityLevel(priority)
        )
        return recommendations_doc(poll, recs, feasible)

    def finalize(self, poll_id: str, body: dict[str, Any]) -> dict[str, Any]:
        poll = self.service.get_poll(poll_id)
        slot = poll.grid.parse_slot_label(f"{body['date']}T{body['time']}")
        return poll_summary_doc(self.service.finalize(poll_id, slot))


class HttpClient:
    """Same interface as LocalClient, over a running server."""

    def __init__(self, base_url: str):
        self.base = base_url.rstrip("/")

    def _check(self, resp: httpx.Response) -> dict[str, Any]:
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("error", resp.text)
            except ValueError:
                detail = resp.text
            raise click.ClickException(f"server said {resp.status_code}: {detail}")
        return resp.json()

    def create_poll(self, body: dict[str, Any]) -> dict[str, Any]:
        return self._check(httpx.post(f"{self.base}/polls", json=body))

    def get_poll(self, poll_id: str) -> dict[str, Any]:
        return self._check(httpx.get(f"{self.base}/polls/{poll_id}"))

    def submit(self, poll_id: str, body: dict[str, Any]) -> dict[str, Any]:
        return self._check(
            httpx.post(f"{self.base}/polls/{poll_id}/responses", json=body)
        )

    def view(
        self, poll_id: str, attendee: str | None = None, expand: bool | None = None
    ) -> dict[str, Any]:
        params: dict[str, Any] = {}
        if attendee:
            params["attendee"] = attendee
        if expand is not None:
            params["expand"] = str(expand).lower()
        return self._check(
            httpx.get(f"{self.base}/polls/{poll_id}/view", params=params)
        )

    def recommendations(self, poll_id: str, k: int) -> dict[str, Any]:
        return self._check(
            httpx.get(f"{self.base}/polls/{poll_id}/recommendations", params={"k": k})
        )

    def set_priority(
        self, poll_id: str, attendee: str, priority: str
    ) -> dict[str, Any]:
        return self._check(
            httpx.put(
                f"{self.base}/polls/{poll_id}/priorities/{attendee}",
                json={"priority": priority},
            )
        )

    def finalize(self, poll_id: str, body: dict[str, Any]) -> dict[str, Any]:
        return self._check(
            httpx.post(f"{self.base}/polls/{poll_id}/finalize", json=body)
        )


def _client(server: str | None, storage: str | None):
    if server:
        return HttpClient(server)
    return LocalClient(storage)


def _run(fn):
    """Convert service-level errors into CLI errors with an exit code."""
    try:
        return fn()
    except UnknownPollError as exc:
        raise click.ClickException(f"unknown poll {exc.args[0]!r}")
    except (ServiceError, ValueError) as exc:
        raise click.ClickException(str(exc))


def _parse_time(text: str) -> dt.time:
    hh, mm = text.split(":")
    return dt.time(int(hh), int(mm))


def _emit(doc: dict[str, Any]) -> None:
    click.echo(json.dumps(doc, indent=1, sort_keys=True))


server_option = click.option("--server", default=None, help="Base URL of a running server.")
storage_option = click.option(
    "--storage", default=None, help="Storage directory for in-process mode."
)
json_option = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")


@click.group()
def main() -> None:
    """Group meeting scheduling with adaptive availability views."""


@main.group()
def poll() -> None:
    """Create and inspect polls."""


@poll.command("create")
@click.option("--date", "dates", multiple=True, required=True, help="ISO date, repeatable.")
@click.option("--start", default="09:00", show_default=True)
@click.option("--end", default="21:00", show_default=True)
@click.option("--time", "times", multiple=True, help="Explicit block start; overrides --start/--end.")
@click.option("--slot-minutes", default=30, show_default=True)
@click.option("--attendee", "attendees", multiple=True, required=True, help="Roster name, repeatable.")
@click.option("--config-json", default=None, help="Engine config overrides as JSON.")
@server_option
@storage_option
@json_option
def poll_create(dates, start, end, times, slot_minutes, attendees, config_json, server, storage, as_json):
    """Create a poll and print its id."""
    if times:
        block_list = list(times)
    else:
        block_list = []
        cursor = dt.datetime.combine(dt.date(2000, 1, 1), _parse_time(start))
        limit = dt.datetime.combine(dt.date(2000, 1, 1), _parse_time(end))
        step = dt.timedelta(minutes=slot_minutes)
        while cursor + step <= limit:
            block_list.append(cursor.time().strftime("%H:%M"))
            cursor += step
    body = {
        "dates": list(dates),
        "times": block_list,
        "slot_minutes": slot_minutes,
        "attendees": list(attendees),
        "config": json.loads(config_json) if config_json else {},
    }
    client = _client(server, storage)
    doc = _run(lambda: client.create_poll(body))
    if as_json:
        _emit(doc)
        return
    grid = doc["grid"]
    click.echo(f"created poll {doc['poll_id']}")
    click.echo(
        f"grid: {len(grid['dates'])} date(s) x {len(grid['times'])} block(s) "
        f"of {grid['slot_minutes']} min"
    )
    click.echo(f"roster: {', '.join(doc['roster'])}")


@poll.command("show")
@click.argument("poll_id")
@server_option
@storage_option
@json_option
def poll_show(poll_id, server, storage, as_json):
    """Dump one poll: grid, respondents, current decision and plan."""
    client = _client(server, storage)
    doc = _run(lambda: client.get_poll(poll_id))
    if as_json:
        _emit(doc)
        return
    grid = doc["grid"]
    click.echo(f"poll {doc['poll_id']} created {doc['created_at']}")
    click.echo(
        f"grid: {len(grid['dates'])} date(s) x {len(grid['times'])} block(s), "
        f"{len(grid['dates']) * len(grid['times'])} slots"
    )
    click.echo(f"roster: {', '.join(doc['roster'])}")
    names = [r["attendee"] for r in doc["responses"]]
    click.echo(f"responses: {len(names)}" + (f" ({', '.join(names)})" if names else ""))
    if doc["priorities"]:
        pairs = [f"{k}={v}" for k, v in sorted(doc["priorities"].items())]
        click.echo(f"priorities: {', '.join(pairs)}")
    if doc["decisions"]:
        latest = doc["decisions"][-1]
        click.echo(
            f"decision: score={latest['score']} source={latest['source']} "
            f"reason={latest['reason']}"
        )
    view = _run(lambda: client.view(poll_id))
    plan = view["plan"]
    click.echo(
        f"plan: {plan['format']} showing {len(plan['slots'])} slot(s)"
        + (
            f", omitting dates {', '.join(plan['omitted_dates'])}"
            if plan["omitted_dates"]
            else ""
        )
        + (
            f", omitting times {', '.join(plan['omitted_times'])}"
            if plan["omitted_times"]
            else ""
        )
    )
    final = doc.get("finalized")
    click.echo(
        "finalized: none" if not final else f"finalized: {final['date']} {final['time']}"
    )


def _poll_stats(poll_doc: dict[str, Any]) -> dict[str, Any]:
    """Promising/possible/feasible snapshot computed from a poll document."""
    from .core import possible_times, promising_times, tally

    poll = poll_from_doc(poll_doc)
    active = poll.active_respondent_count()
    if active == 0:
        # Before the first vote every slot ties at zero availability.
        return {
            "respondents": 0,
            "promising": poll.grid.n_slots,
            "possible": poll.grid.n_slots,
            "feasible": False,
        }
    t = tally(poll)
    flag = poll.config.maybe_counts_as_available
    return {
        "respondents": active,
        "promising": len(promising_times(t, flag)),
        "possible": len(possible_times(t, flag)),
        "feasible": bool(covering_slots(poll)),
    }


@main.command()
@click.argument("poll_id")
@click.option("-n", "count", default=10, show_default=True, help="Attendees to simulate.")
@click.option("--seed", default=0, show_default=True)
@click.option("--profile", default="mixed", show_default=True,
              help="'mixed' or a fixed 'busyness,preference,importance' triple.")
@server_option
@storage_option
@json_option
def simulate(poll_id, count, seed, profile, server, storage, as_json):
    """Submit n synthetic responses and report how the views adapted."""
    client = _client(server, storage)
    poll_doc = _run(lambda: client.get_poll(poll_id))
    grid_doc = poll_doc["grid"]
    grid = poll_from_doc(poll_doc).grid
    attendees = build_profiles(count, seed, profile)
    steps = []
    for attendee in attendees:
        before = _poll_stats(_run(lambda: client.get_poll(poll_id)))
        seen = _run(lambda: client.view(poll_id, attendee=attendee.name))
        marks = attendee.marks(grid)
        body = {
            "attendee": attendee.name,
            "marks": {grid.slot_label(s): lvl.value for s, lvl in sorted(marks.items())},
        }
        _run(lambda: client.submit(poll_id, body))
        if attendee.importance == "more":
            _run(lambda: client.set_priority(poll_id, attendee.name, "must"))
        after = _poll_stats(_run(lambda: client.get_poll(poll_id)))
        steps.append(
            {
                "attendee": attendee.name,
                "busyness": attendee.busyness,
                "preference": attendee.preference,
                "importance": attendee.importance,
                "saw_format": seen["plan"]["format"],
                "saw_score": seen["plan"]["score"],
                "decision_score": seen["decision"]["score"],
                "promising_before": before["promising"],
                "promising_after": after["promising"],
                "possible_after": after["possible"],
            }
        )
    final = _poll_stats(_run(lambda: client.get_poll(poll_id)))
    summary = {
        "n": count,
        "seed": seed,
        "profile": profile,
        "grid_slots": len(grid_doc["dates"]) * len(grid_doc["times"]),
        "steps": steps,
        "formats": [s["saw_format"] for s in steps],
        "scores": [s["saw_score"] for s in steps],
        "final": final,
    }
    if as_json:
        _emit(summary)
        return
    click.echo(f"simulate n={count} seed={seed} profile={profile}")
    for i, s in enumerate(steps, start=1):
        click.echo(
            f"step {i} {s['attendee']} busy={s['busyness']} pref={s['preference']} "
            f"imp={s['importance']} saw={s['saw_format']} score={s['saw_score']} "
            f"promising {s['promising_before']}->{s['promising_after']}"
        )
    click.echo("scores: " + ",".join(str(s) for s in summary["scores"]))
    click.echo(
        f"final respondents={final['respondents']} promising={final['promising']} "
        f"possible={final['possible']} feasible={'yes' if final['feasible'] else 'no'}"
    )


@main.command()
@click.argument("state_file", type=click.Path(exists=True, dir_okay=False))
@json_option
def score(state_file, as_json):
    """Score a poll state file offline: print the prompt and the decision.

    Uses the configured endpoint or fixture file when set in the
    environment, otherwise the deterministic rule policy.
    """
    try:
        with open(state_file, encoding="utf-8") as fh:
            doc = json.load(fh)
        poll = poll_from_doc(doc)
    except (ValueError, KeyError, TypeError) as exc:
        raise click.ClickException(f"state file does not parse: {exc}")
    gateway = LlmSettings.from_env().build_gateway()
    prompt = build_prompt(poll).render()
    decision = gateway.decide(poll)
    if as_json:
        _emit({"prompt": prompt, **decision.to_doc()})
        return
    click.echo("--- prompt ---")
    click.echo(prompt)
    click.echo("--- decision ---")
    click.echo(f"score: {decision.score}")
    click.echo(f"reason: {decision.reason}")
    click.echo(f"source: {decision.source}")


@main.command()
@click.argument("poll_id")
@click.option("-k", "top_k", default=5, show_default=True)
@server_option
@storage_option
@json_option
def recommend(poll_id, top_k, server, storage, as_json):
    """Print the four recommendation lists side by side."""
    client = _client(server, storage)
    doc = _run(lambda: client.recommendations(poll_id, top_k))
    if as_json:
        _emit(doc)
        return
    click.echo(
        f"recommendations for poll {doc['poll_id']} "
        f"(feasible={'yes' if doc['feasible'] else 'no'})"
    )
    for rec in doc["recommendations"]:
        algo = rec["algorithm"]
        click.echo(f"[{algo['label']}] maybe_weight={algo['maybe_weight']}")
        if rec["relaxed_away"]:
            click.echo(f"  relaxed away: {', '.join(rec['relaxed_away'])}")
        for i, entry in enumerate(rec["ranked"], start=1):
            click.echo(
                f"  {i}. {entry['date']} {entry['time']} score={entry['score']} "
                f"sure={len(entry['sure'])} maybe={len(entry['maybe'])}"
            )
    for note in doc["notes"]:
        click.echo(f"note from {note['attendee']}: {note['note']}")


@main.command()
@click.option("--host", default=None, help="Bind address (default $GROUPMEET_HOST or 127.0.0.1).")
@click.option("--port", default=None, type=int, help="Port (default $GROUPMEET_PORT or 8000).")
@storage_option
def serve(host, port, storage):
    """Run the HTTP service."""
    import uvicorn

    from .api import create_app

    store = PollStore(_storage_dir(storage))
    gateway = LlmSettings.from_env().build_gateway()
    app = create_app(SchedulingService(store, gateway))
    uvicorn.run(
        app,
        host=host or os.environ.get("GROUPMEET_HOST", "127.0.0.1"),
        port=port or int(os.environ.get("GROUPMEET_PORT", "8000")),
        log_level="info",
    )


if __name__ == "__main__":
    main(prog_name="groupmeet")
