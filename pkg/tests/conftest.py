"""Shared builders and independent oracles.

The oracle functions recompute expected results by direct enumeration over
the raw responses, deliberately sharing no code with the package internals
they check. Regression fixtures freeze the four known (respondents,
promising, possible) -> score rows the rule policy must reproduce.
"""

from __future__ import annotations

import datetime as dt
import random
from fractions import Fraction

import pytest

from groupmeet.config import EngineConfig, OmissionCriterion
from groupmeet.core import (
    PreferenceLevel,
    PriorityLevel,
    Response,
    SlotGrid,
)
from groupmeet.recommend import AlgorithmSpec, PriorityMode
from groupmeet.state import PollState

UTC = dt.timezone.utc
BASE_TIME = dt.datetime(2026, 9, 1, 12, 0, tzinfo=UTC)

SURE = PreferenceLevel.SURE
MAYBE = PreferenceLevel.MAYBE
UNAVAILABLE = PreferenceLevel.UNAVAILABLE


def make_grid(n_dates: int = 4, n_times: int = 12, slot_minutes: int = 30) -> SlotGrid:
    dates = tuple(dt.date(2026, 9, 7) + dt.timedelta(days=i) for i in range(n_dates))
    first = dt.datetime(2000, 1, 1, 9, 0)
    times = tuple(
        (first + dt.timedelta(minutes=slot_minutes * i)).time() for i in range(n_times)
    )
    return SlotGrid(dates, times, slot_minutes)


def make_poll(
    grid: SlotGrid | None = None,
    roster: tuple[str, ...] = ("a0", "a1"),
    config: EngineConfig | None = None,
    poll_id: str = "testpoll",
) -> PollState:
    return PollState(
        poll_id=poll_id,
        grid=grid or make_grid(),
        roster=roster,
        config=config or EngineConfig(),
        created_at=BASE_TIME,
    )


def add_response(poll, attendee, marks, note=None, minute_offset=None):
    """Append one response with a strictly later timestamp than the last."""
    if minute_offset is None:
        minute_offset = len(poll.responses) + 1
    response = Response(
        attendee=attendee,
        marks=marks,
        submitted_at=BASE_TIME + dt.timedelta(minutes=minute_offset),
        note=note,
    )
    poll.responses[attendee] = response
    return response


# -- frozen regression fixtures ------------------------------------------------
#
# Four poll shapes with known candidate counts and known adaptation scores:
#   (group 10, 10 responded, 1 promising, 1 possible)   -> 1
#   (group 10, 5 responded, 3 promising, 5 possible)    -> 2
#   (group 6, 3 responded, 34 promising, 95 possible)   -> 3
#   (group 10, 1 responded, 48 promising, 48 possible)  -> 4


def regression_poll_score1() -> PollState:
    poll = make_poll(
        grid=make_grid(4, 12), roster=tuple(f"a{i}" for i in range(10)), poll_id="reg1"
    )
    for i in range(10):
        add_response(poll, f"a{i}", {(0, 0): SURE})
    return poll


def regression_poll_score2() -> PollState:
    poll = make_poll(
        grid=make_grid(4, 12), roster=tuple(f"a{i}" for i in range(10)), poll_id="reg2"
    )
    by_slot = {
        (0, 0): ("a0", "a1", "a2", "a3"),
        (0, 1): ("a0", "a1", "a2", "a4"),
        (0, 2): ("a0", "a1", "a3", "a4"),
        (0, 3): ("a0", "a1", "a2"),
        (0, 4): ("a0", "a1", "a3"),
    }
    marks: dict[str, dict] = {f"a{i}": {} for i in range(5)}
    for slot, names in by_slot.items():
        for name in names:
            marks[name][slot] = SURE
    for name, m in marks.items():
        add_response(poll, name, m)
    return poll


def regression_poll_score3() -> PollState:
    poll = make_poll(
        grid=make_grid(6, 16), roster=tuple(f"a{i}" for i in range(6)), poll_id="reg3"
    )
    slots = poll.grid.all_slots()
    add_response(poll, "a0", {s: SURE for s in slots[:95]})
    add_response(poll, "a1", {s: SURE for s in slots[:34]})
    add_response(poll, "a2", {})
    return poll


def regression_poll_score4() -> PollState:
    poll = make_poll(
        grid=make_grid(4, 12), roster=tuple(f"a{i}" for i in range(10)), poll_id="reg4"
    )
    add_response(poll, "a0", {s: SURE for s in poll.grid.all_slots()})
    return poll


REGRESSION_BUILDERS = {
    1: regression_poll_score1,
    2: regression_poll_score2,
    3: regression_poll_score3,
    4: regression_poll_score4,
}


# -- randomized poll generator -------------------------------------------------


def random_poll(
    rng: random.Random,
    max_attendees: int = 10,
    max_dates: int = 6,
    max_times: int = 16,
    require_active: bool = True,
    with_priorities: bool = True,
    poll_id: str = "rnd",
) -> PollState:
    grid = make_grid(rng.randint(1, max_dates), rng.randint(1, max_times))
    n = rng.randint(1, max_attendees)
    roster = tuple(f"a{i}" for i in range(n))
    poll = make_poll(grid=grid, roster=roster, poll_id=poll_id)
    slots = grid.all_slots()
    offset = 1
    for name in roster:
        if rng.random() > 0.85:
            continue
        density = rng.uniform(0.05, 0.95)
        marks = {}
        for slot in slots:
            if rng.random() < density:
                marks[slot] = MAYBE if rng.random() < 0.3 else SURE
        add_response(poll, name, marks, minute_offset=offset)
        offset += 1
    if with_priorities:
        for name in roster:
            roll = rng.random()
            if roll < 0.15:
                poll.priorities[name] = PriorityLevel.MUST_BE_PRESENT
            elif roll < 0.25:
                poll.priorities[name] = PriorityLevel.NOT_COMING
    if require_active and poll.active_respondent_count() == 0:
        poll.priorities.pop(roster[0], None)
        if roster[0] not in poll.responses:
            marks = {s: SURE for s in slots if rng.random() < 0.5}
            add_response(poll, roster[0], marks, minute_offset=offset)
    return poll


# -- oracles -------------------------------------------------------------------


def oracle_active(poll: PollState) -> list[Response]:
    rows = [
        r
        for r in poll.responses.values()
        if poll.priorities.get(r.attendee, PriorityLevel.OPTIONAL_TO_ATTEND)
        is not PriorityLevel.NOT_COMING
    ]
    return sorted(rows, key=lambda r: r.submitted_at)


def oracle_counts(poll: PollState, include_maybe: bool = True) -> dict:
    """Per-slot availability by direct recount over raw responses."""
    counts = {slot: 0 for slot in poll.grid.all_slots()}
    for response in oracle_active(poll):
        for slot, level in response.marks.items():
            if level is SURE or (include_maybe and level is MAYBE):
                counts[slot] += 1
    return counts


def oracle_promising(poll: PollState, include_maybe: bool = True) -> set:
    counts = oracle_counts(poll, include_maybe)
    top = max(counts.values())
    return {slot for slot, c in counts.items() if c == top}


def oracle_possible(poll: PollState, include_maybe: bool = True) -> set:
    counts = oracle_counts(poll, include_maybe)
    top = max(counts.values())
    result = set(oracle_promising(poll, include_maybe))
    result |= {slot for slot, c in counts.items() if c == top - 1}
    return result


def oracle_good(
    poll: PollState, threshold: float = 0.65, include_maybe: bool = True
) -> set:
    counts = oracle_counts(poll, include_maybe)
    n = len(oracle_active(poll))
    return {slot for slot, c in counts.items() if c / n > threshold}


def oracle_ranking(poll: PollState, spec: AlgorithmSpec) -> list:
    """Slot order under exact Fraction arithmetic and true lexicographic keys."""
    weight = Fraction(spec.maybe_weight).limit_denominator(1024)
    overall: dict = {}
    must: dict = {}
    for slot in poll.grid.all_slots():
        overall[slot] = Fraction(0)
        must[slot] = Fraction(0)
    for response in oracle_active(poll):
        is_must = (
            poll.priorities.get(response.attendee, PriorityLevel.OPTIONAL_TO_ATTEND)
            is PriorityLevel.MUST_BE_PRESENT
        )
        for slot, level in response.marks.items():
            value = Fraction(1) if level is SURE else weight
            overall[slot] += value
            if is_must:
                must[slot] += value
    if spec.priority_mode is PriorityMode.IMPORTANT_FIRST:
        key = lambda slot: (-must[slot], -overall[slot], slot)
    else:
        key = lambda slot: (-overall[slot], slot)
    return sorted(poll.grid.all_slots(), key=key)


def oracle_exclusion_order(poll: PollState, strategy: str) -> list[str]:
    """Attendees in removal order: lowest key first, earliest submission first."""
    rank = {
        PriorityLevel.NOT_COMING: 0,
        PriorityLevel.OPTIONAL_TO_ATTEND: 1,
        PriorityLevel.MUST_BE_PRESENT: 2,
    }
    rows = oracle_active(poll)
    if strategy == "lowest_priority":
        key = lambda r: (
            rank[poll.priorities.get(r.attendee, PriorityLevel.OPTIONAL_TO_ATTEND)],
            r.submitted_at,
        )
    else:
        key = lambda r: (
            sum(1 for lvl in r.marks.values() if lvl in (SURE, MAYBE)),
            r.submitted_at,
        )
    return [r.attendee for r in sorted(rows, key=key)]


def boundary_contiguous(omitted: set[int], length: int) -> bool:
    """True when the omitted indices form an edge prefix and/or suffix."""
    if not omitted:
        return True
    remaining = sorted(set(range(length)) - omitted)
    if not remaining:
        return False
    # Everything omitted must sit strictly before or strictly after the kept run.
    return remaining == list(range(remaining[0], remaining[-1] + 1))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260822)
