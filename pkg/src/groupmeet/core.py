"""Availability algebra over a poll's slot grid.

Everything in this module is a pure function of the arguments it is given:
tallies and the promising/possible/good sets are recomputed from scratch on
each call, so results are safe to compare bit-for-bit and to evaluate from
any thread.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Mapping

if TYPE_CHECKING:
    from .state import PollState

# A slot is addressed by (date index, time index) into the grid.
Slot = tuple[int, int]


class PreferenceLevel(str, Enum):
    """Tri-state availability mark an attendee can put on a slot."""

    SURE = "sure"
    MAYBE = "maybe"
    UNAVAILABLE = "unavailable"


class PriorityLevel(str, Enum):
    """Organizer-assigned importance of an attendee."""

    MUST_BE_PRESENT = "must"
    OPTIONAL_TO_ATTEND = "optional"
    NOT_COMING = "not_coming"


class ExclusionStrategy(str, Enum):
    """How to rank attendees when some must be dropped to find a common slot."""

    LOWEST_PRIORITY = "lowest_priority"
    LOWEST_AVAILABILITY = "lowest_availability"


# Removal order for LOWEST_PRIORITY: least important attendees go first.
_PRIORITY_RANK = {
    PriorityLevel.NOT_COMING: 0,
    PriorityLevel.OPTIONAL_TO_ATTEND: 1,
    PriorityLevel.MUST_BE_PRESENT: 2,
}


@dataclass(frozen=True)
class SlotGrid:
    """Candidate meeting slots: the cross product of dates and time blocks.

    ``times`` are block start times of uniform length ``slot_minutes``; the
    blocks need not be contiguous (a grid may skip lunch, for example).
    """

    dates: tuple[dt.date, ...]
    times: tuple[dt.time, ...]
    slot_minutes: int = 30

    def __post_init__(self) -> None:
        if not self.dates or not self.times:
            raise ValueError("grid needs at least one date and one time block")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("time blocks must be strictly increasing")
        if self.slot_minutes <= 0:
            raise ValueError("slot_minutes must be positive")

    @classmethod
    def build(
        cls,
        dates: Iterable[dt.date],
        start: dt.time,
        end: dt.time,
        slot_minutes: int = 30,
    ) -> SlotGrid:
        """Grid with contiguous blocks of ``slot_minutes`` from start to end."""
        if end <= start:
            raise ValueError("end must be after start")
        times = []
        cursor = dt.datetime.combine(dt.date(2000, 1, 1), start)
        limit = dt.datetime.combine(dt.date(2000, 1, 1), end)
        step = dt.timedelta(minutes=slot_minutes)
        while cursor + step <= limit:
            times.append(cursor.time())
            cursor += step
        return cls(tuple(dates), tuple(times), slot_minutes)

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_times(self) -> int:
        return len(self.times)

    @property
    def n_slots(self) -> int:
        return len(self.dates) * len(self.times)

    def all_slots(self) -> list[Slot]:
        return [(d, t) for d in range(len(self.dates)) for t in range(len(self.times))]

    def contains(self, slot: Slot) -> bool:
        d, t = slot
        return 0 <= d < len(self.dates) and 0 <= t < len(self.times)

    def slot_label(self, slot: Slot) -> str:
        """Stable wire label for a slot, e.g. ``2026-09-01T09:00``."""
        d, t = slot
        return f"{self.dates[d].isoformat()}T{self.times[t].strftime('%H:%M')}"

    def parse_slot_label(self, label: str) -> Slot:
        try:
            date_part, time_part = label.split("T")
            date = dt.date.fromisoformat(date_part)
            hh, mm = time_part.split(":")
            time = dt.time(int(hh), int(mm))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"malformed slot label {label!r}") from exc
        try:
            return (self.dates.index(date), self.times.index(time))
        except ValueError as exc:
            raise ValueError(f"slot {label!r} is not on the grid") from exc


@dataclass(frozen=True)
class Response:
    """One attendee's availability marks, plus an optional free-text note.

    Unmarked slots mean Unavailable; explicit Unavailable marks are dropped at
    construction so that the two spellings compare equal everywhere.
    """

    attendee: str
    marks: Mapping[Slot, PreferenceLevel]
    submitted_at: dt.datetime
    note: str | None = None

    def __post_init__(self) -> None:
        if not self.attendee:
            raise ValueError("attendee name must be non-empty")
        kept = {
            slot: level
            for slot, level in self.marks.items()
            if level is not PreferenceLevel.UNAVAILABLE
        }
        object.__setattr__(self, "marks", kept)

    def availability_count(self) -> int:
        """Number of slots marked sure or maybe."""
        return len(self.marks)


@dataclass(frozen=True)
class Tally:
    """Per-slot sure/maybe counts over the active respondents.

    ``sure`` and ``maybe`` are grid-shaped nested tuples indexed
    ``[date][time]``. ``respondent_count`` excludes NotComing attendees.
    """

    sure: tuple[tuple[int, ...], ...]
    maybe: tuple[tuple[int, ...], ...]
    respondent_count: int

    def __post_init__(self) -> None:
        if len(self.sure) != len(self.maybe):
            raise ValueError("sure/maybe grids differ in shape")
        for srow, mrow in zip(self.sure, self.maybe):
            if len(srow) != len(mrow):
                raise ValueError("sure/maybe grids differ in shape")
            for s, m in zip(srow, mrow):
                if s < 0 or m < 0 or s + m > self.respondent_count:
                    raise ValueError("slot counts exceed respondent count")

    @property
    def n_dates(self) -> int:
        return len(self.sure)

    @property
    def n_times(self) -> int:
        return len(self.sure[0]) if self.sure else 0

    def all_slots(self) -> list[Slot]:
        return [(d, t) for d in range(self.n_dates) for t in range(self.n_times)]

    def availability(self, slot: Slot, include_maybe: bool = True) -> int:
        d, t = slot
        count = self.sure[d][t]
        if include_maybe:
            count += self.maybe[d][t]
        return count

    def max_availability(self, include_maybe: bool = True) -> int:
        return max(self.availability(s, include_maybe) for s in self.all_slots())


def active_respondents(poll: PollState) -> list[Response]:
    """Responses that count: submitted and not flagged NotComing.

    Ordered by submission time (ties keep insertion order), which fixes the
    Participant numbering in prompts and the tie-break in exclusion passes.
    """
    rows = [
        r
        for r in poll.responses.values()
        if poll.priority_of(r.attendee) is not PriorityLevel.NOT_COMING
    ]
    rows.sort(key=lambda r: r.submitted_at)
    return rows


def _tally_of(grid: SlotGrid, responses: Iterable[Response]) -> Tally:
    sure = [[0] * grid.n_times for _ in range(grid.n_dates)]
    maybe = [[0] * grid.n_times for _ in range(grid.n_dates)]
    count = 0
    for response in responses:
        count += 1
        for (d, t), level in response.marks.items():
            if level is PreferenceLevel.SURE:
                sure[d][t] += 1
            elif level is PreferenceLevel.MAYBE:
                maybe[d][t] += 1
    return Tally(
        sure=tuple(tuple(row) for row in sure),
        maybe=tuple(tuple(row) for row in maybe),
        respondent_count=count,
    )


def tally(poll: PollState) -> Tally:
    """Recount the poll from scratch. Pure; recomputing is bit-identical."""
    return _tally_of(poll.grid, active_respondents(poll))


def _require_respondents(t: Tally) -> None:
    if t.respondent_count == 0:
        raise ValueError("undefined before the first response")


def promising_times(t: Tally, maybe_counts_as_available: bool = True) -> set[Slot]:
    """Slots where the most respondents can attend (argmax of availability).

    Never empty once anyone has responded: with max availability 0 every slot
    ties at the top.
    """
    _require_respondents(t)
    top = t.max_availability(maybe_counts_as_available)
    return {
        s for s in t.all_slots() if t.availability(s, maybe_counts_as_available) == top
    }


def possible_times(t: Tally, maybe_counts_as_available: bool = True) -> set[Slot]:
    """Promising slots plus those one respondent short of the maximum."""
    _require_respondents(t)
    top = t.max_availability(maybe_counts_as_available)
    return {
        s
        for s in t.all_slots()
        if t.availability(s, maybe_counts_as_available) >= top - 1
    }


def good_times(
    t: Tally,
    threshold: float = 0.65,
    maybe_counts_as_available: bool = True,
) -> set[Slot]:
    """Slots where strictly more than ``threshold`` of respondents can attend."""
    _require_respondents(t)
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be strictly between 0 and 1")
    n = t.respondent_count
    return {
        s
        for s in t.all_slots()
        if t.availability(s, maybe_counts_as_available) / n > threshold
    }


def exclusion_order(poll: PollState, strategy: ExclusionStrategy) -> list[Response]:
    """Active respondents sorted so the first-removed comes first.

    Lowest priority (or fewest sure+maybe marks) goes first; ties are broken
    by earliest submission time.
    """
    rows = active_respondents(poll)
    if strategy is ExclusionStrategy.LOWEST_PRIORITY:
        key = lambda r: (_PRIORITY_RANK[poll.priority_of(r.attendee)], r.submitted_at)
    elif strategy is ExclusionStrategy.LOWEST_AVAILABILITY:
        key = lambda r: (r.availability_count(), r.submitted_at)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return sorted(rows, key=key)


def exclude_and_recount(
    poll: PollState, strategy: ExclusionStrategy, k: int
) -> Tally:
    """Drop the k lowest-ranked active respondents and re-tally the rest."""
    order = exclusion_order(poll, strategy)
    if k < 0:
        raise ValueError("k must be non-negative")
    if k >= len(order) and k > 0:
        raise ValueError(f"cannot exclude {k} of {len(order)} respondents")
    return _tally_of(poll.grid, order[k:])
