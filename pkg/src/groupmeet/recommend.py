"""Slot recommendations for organizers.

Each slot gets a base score: 1 per sure attendee, a configurable fraction per
maybe attendee, NotComing attendees ignored. Four canonical algorithm
variants (two maybe weights crossed with two priority treatments) are always
computed side by side so organizers can compare their tails.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Sequence

from .core import (
    ExclusionStrategy,
    PreferenceLevel,
    PriorityLevel,
    Response,
    Slot,
    active_respondents,
    exclusion_order,
)
from .state import now_utc

if TYPE_CHECKING:
    from .state import PollState

DEFAULT_TOP_K = 5


class PriorityMode(str, Enum):
    IMPORTANT_FIRST = "important_first"
    OVERALL_ATTENDANCE = "overall_attendance"


@dataclass(frozen=True)
class AlgorithmSpec:
    maybe_weight: float
    priority_mode: PriorityMode
    label: str

    def __post_init__(self) -> None:
        if not 0.0 < self.maybe_weight < 1.0:
            raise ValueError("maybe_weight must be strictly between 0 and 1")


CANONICAL_SPECS: tuple[AlgorithmSpec, ...] = (
    AlgorithmSpec(0.75, PriorityMode.IMPORTANT_FIRST, "maybe-high/important-first"),
    AlgorithmSpec(0.75, PriorityMode.OVERALL_ATTENDANCE, "maybe-high/overall-attendance"),
    AlgorithmSpec(0.25, PriorityMode.IMPORTANT_FIRST, "maybe-low/important-first"),
    AlgorithmSpec(0.25, PriorityMode.OVERALL_ATTENDANCE, "maybe-low/overall-attendance"),
)


@dataclass(frozen=True)
class RankedSlot:
    slot: Slot
    score: float
    sure: frozenset[str]
    maybe: frozenset[str]


@dataclass(frozen=True)
class Recommendation:
    """One algorithm's full ranking, best slot first."""

    algorithm: AlgorithmSpec
    ranked: tuple[RankedSlot, ...]
    generated_at: dt.datetime
    relaxed_away: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        # Non-increasing score, ties ordered by earlier date then time.
        for a, b in zip(self.ranked, self.ranked[1:]):
            if b.score > a.score or (b.score == a.score and b.slot < a.slot):
                raise ValueError("ranking out of order")

    def truncated(self, top_k: int) -> Recommendation:
        return replace(self, ranked=self.ranked[:top_k])


def _included(poll: PollState, excluded: frozenset[str]) -> list[Response]:
    return [r for r in active_respondents(poll) if r.attendee not in excluded]


def _slot_entries(
    poll: PollState, spec: AlgorithmSpec, excluded: frozenset[str] = frozenset()
) -> list[RankedSlot]:
    """Score every grid slot under one spec. Pure; does not sort.

    Important-first ordering is packed into a single real per slot:
    must_base * 4 * (respondents + 1) + overall_base. With the canonical
    weights every base is a multiple of 0.25, so the packing is float-exact
    and sorting by it reproduces the (must_base, overall_base) lexicographic
    order. The factor counts included respondents only, which keeps scores
    identical whether an attendee is flagged NotComing or deleted outright.
    """
    respondents = _included(poll, excluded)
    weight = spec.maybe_weight
    must_factor = 4 * (len(respondents) + 1)
    entries = []
    overall: dict[Slot, float] = {}
    must: dict[Slot, float] = {}
    sure_by_slot: dict[Slot, set[str]] = {}
    maybe_by_slot: dict[Slot, set[str]] = {}
    for response in respondents:
        is_must = (
            poll.priority_of(response.attendee) is PriorityLevel.MUST_BE_PRESENT
        )
        for slot, level in response.marks.items():
            value = 1.0 if level is PreferenceLevel.SURE else weight
            overall[slot] = overall.get(slot, 0.0) + value
            if is_must:
                must[slot] = must.get(slot, 0.0) + value
            bucket = sure_by_slot if level is PreferenceLevel.SURE else maybe_by_slot
            bucket.setdefault(slot, set()).add(response.attendee)
    for slot in poll.grid.all_slots():
        base = overall.get(slot, 0.0)
        if spec.priority_mode is PriorityMode.IMPORTANT_FIRST:
            score = must.get(slot, 0.0) * must_factor + base
        else:
            score = base
        entries.append(
            RankedSlot(
                slot=slot,
                score=score,
                sure=frozenset(sure_by_slot.get(slot, ())),
                maybe=frozenset(maybe_by_slot.get(slot, ())),
            )
        )
    return entries


def score_slot(slot: Slot, poll: PollState, spec: AlgorithmSpec) -> float:
    """The sort key one slot gets under one spec (higher is better)."""
    if not poll.grid.contains(slot):
        raise ValueError(f"slot {slot!r} is not on the grid")
    for entry in _slot_entries(poll, spec):
        if entry.slot == slot:
            return entry.score
    raise AssertionError("unreachable: every grid slot is scored")


def _rank(
    poll: PollState,
    spec: AlgorithmSpec,
    excluded: Sequence[str] = (),
    generated_at: dt.datetime | None = None,
) -> Recommendation:
    entries = _slot_entries(poll, spec, frozenset(excluded))
    entries.sort(key=lambda e: (-e.score, e.slot))
    return Recommendation(
        algorithm=spec,
        ranked=tuple(entries),
        generated_at=generated_at or now_utc(),
        relaxed_away=tuple(excluded),
    )


def recommend(
    poll: PollState,
    top_k: int = DEFAULT_TOP_K,
    specs: Sequence[AlgorithmSpec] = CANONICAL_SPECS,
    generated_at: dt.datetime | None = None,
) -> list[Recommendation]:
    """All four canonical rankings over one snapshot, truncated to top_k."""
    if top_k < 1:
        raise ValueError("top_k must be at least 1")
    if not _included(poll, frozenset()):
        raise ValueError("no active responses to recommend from")
    stamp = generated_at or now_utc()
    return [
        _rank(poll, spec, generated_at=stamp).truncated(top_k) for spec in specs
    ]


def refresh_on_priority_change(
    poll: PollState,
    attendee: str,
    new_priority: PriorityLevel,
    top_k: int = DEFAULT_TOP_K,
) -> list[Recommendation]:
    """Persist a priority edit on the snapshot and re-rank immediately."""
    if not poll.knows(attendee):
        raise KeyError(f"unknown attendee {attendee!r}")
    poll.set_priority(attendee, new_priority)
    return recommend(poll, top_k)


def covering_slots(poll: PollState, excluded: frozenset[str] = frozenset()) -> set[Slot]:
    """Slots where every included respondent is sure-or-maybe available."""
    respondents = _included(poll, excluded)
    if not respondents:
        return set()
    covered = None
    for response in respondents:
        marked = set(response.marks)
        covered = marked if covered is None else covered & marked
    return covered or set()


def has_full_coverage(poll: PollState) -> bool:
    return bool(covering_slots(poll))


def relaxation_pass(
    poll: PollState,
    spec: AlgorithmSpec,
    generated_at: dt.datetime | None = None,
) -> Recommendation:
    """Drop just enough attendees that someone's slot works for all the rest.

    Applies when no slot covers every active respondent. Exclusion order
    follows the spec's priority treatment: important-first drops the lowest
    priority first, overall-attendance drops the least available first. k
    grows one at a time, so the pass terminates at a single-attendee poll in
    the worst case; the excluded attendees are reported on the result.
    """
    if has_full_coverage(poll):
        raise ValueError("a slot already covers every active respondent")
    strategy = (
        ExclusionStrategy.LOWEST_PRIORITY
        if spec.priority_mode is PriorityMode.IMPORTANT_FIRST
        else ExclusionStrategy.LOWEST_AVAILABILITY
    )
    order = exclusion_order(poll, strategy)
    if not order:
        raise ValueError("no active responses to relax")
    excluded: tuple[str, ...] = ()
    for k in range(1, len(order)):
        excluded = tuple(r.attendee for r in order[:k])
        if covering_slots(poll, frozenset(excluded)):
            break
    return _rank(poll, spec, excluded, generated_at=generated_at)
