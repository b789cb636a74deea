"""Adaptive view planning: how much of the grid the next attendee sees.

A score of 1 to 4 maps one-to-one onto a view format, from the narrowest
poll of promising times up to the full calendar. The rule policy here is the
deterministic fallback (and oracle) for the model-backed scorer in
:mod:`groupmeet.llm`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

from .config import EngineConfig, OmissionCriterion
from .core import (
    Slot,
    Tally,
    good_times,
    possible_times,
    promising_times,
    tally,
)

if TYPE_CHECKING:
    from .state import PollState


class ViewFormat(str, Enum):
    POLL_OF_PROMISING = "poll_of_promising"
    POLL_OF_POSSIBLE = "poll_of_possible"
    PRUNED_CALENDAR = "pruned_calendar"
    FULL_CALENDAR = "full_calendar"


SCORE_TO_FORMAT = {
    1: ViewFormat.POLL_OF_PROMISING,
    2: ViewFormat.POLL_OF_POSSIBLE,
    3: ViewFormat.PRUNED_CALENDAR,
    4: ViewFormat.FULL_CALENDAR,
}
FORMAT_TO_SCORE = {fmt: score for score, fmt in SCORE_TO_FORMAT.items()}


@dataclass(frozen=True)
class ViewPlan:
    """A concrete rendering decision: format plus exactly which slots to show."""

    format: ViewFormat
    slots: frozenset[Slot]
    omitted_dates: frozenset[int]
    omitted_times: frozenset[int]
    score: int
    reason: str
    can_expand: bool

    def __post_init__(self) -> None:
        if SCORE_TO_FORMAT.get(self.score) is not self.format:
            raise ValueError("score and format must correspond")
        if not self.slots:
            raise ValueError("a plan must include at least one slot")
        if self.format is not ViewFormat.PRUNED_CALENDAR and (
            self.omitted_dates or self.omitted_times
        ):
            raise ValueError("only pruned calendars omit rows or columns")
        if not self.reason:
            raise ValueError("reason must be non-empty")


def rule_score(poll: PollState, config: EngineConfig | None = None) -> tuple[int, str]:
    """Deterministic adaptation score and a one-line justification.

    Early respondents get the whole picture; after that the candidate pool
    decides: a poll when possible (then promising) times fit between poll_min
    and poll_max, a promising poll once nearly everyone has answered and the
    pool has collapsed, otherwise a pruned calendar.
    """
    cfg = config or poll.config
    respondents = poll.active_respondent_count()
    if respondents < cfg.early_respondent_count:
        if poll.grid.n_slots < cfg.poll_max:
            return 2, (
                f"only {respondents} respondent(s) so far, but the grid has just "
                f"{poll.grid.n_slots} slots, few enough to show every candidate "
                "as a poll"
            )
        return 4, (
            f"only {respondents} respondent(s) so far; showing the full calendar "
            "to collect broad availability"
        )

    t = tally(poll)
    flag = cfg.maybe_counts_as_available
    n_possible = len(possible_times(t, flag))
    n_promising = len(promising_times(t, flag))
    if cfg.poll_min < n_possible < cfg.poll_max:
        return 2, (
            f"{n_possible} possible times fit a poll "
            f"(between {cfg.poll_min} and {cfg.poll_max} exclusive)"
        )
    if cfg.poll_min < n_promising < cfg.poll_max:
        return 1, (
            f"{n_promising} promising times fit a poll; "
            f"{n_possible} possible times would be too many or too few"
        )
    rate = poll.response_rate()
    if n_possible <= cfg.poll_min and rate >= 0.5:
        return 1, (
            f"the pool has collapsed to {n_possible} candidate(s) with "
            f"{rate:.0%} of the group responded; showing the promising poll"
        )
    return 3, (
        f"{n_promising} promising and {n_possible} possible times fit no poll; "
        "showing a calendar with unpromising edges pruned"
    )


def _unpromising_grid(
    t: Tally, cfg: EngineConfig
) -> list[list[bool]] | None:
    """Slot-level unpromising flags, or None when no pruning is allowed."""
    flag = cfg.maybe_counts_as_available
    n = t.respondent_count
    if cfg.omission_criterion is OmissionCriterion.HALF_OF_VOTERS:
        # Proviso: prune only when the promising slots clear half the voters.
        if 2 * t.max_availability(flag) <= n:
            return None
        return [
            [2 * t.availability((d, ti), flag) < n for ti in range(t.n_times)]
            for d in range(t.n_dates)
        ]
    good = good_times(t, cfg.good_threshold, flag)
    if not good:
        # Nothing qualifies as good; pruning everything would show nothing.
        return None
    return [
        [(d, ti) not in good for ti in range(t.n_times)]
        for d in range(t.n_dates)
    ]


def _edge_sweep(flags: list[bool]) -> set[int]:
    """Indices omissible from either edge: maximal all-True prefix and suffix.

    Middle runs are never reached, which keeps interior rows and columns on
    screen no matter how empty they are.
    """
    omitted: set[int] = set()
    i = 0
    while i < len(flags) and flags[i]:
        omitted.add(i)
        i += 1
    j = len(flags) - 1
    while j > i and flags[j]:
        omitted.add(j)
        j -= 1
    return omitted


def omit_rows_cols(
    poll: PollState, config: EngineConfig | None = None
) -> tuple[set[int], set[int]]:
    """Date rows and time columns a pruned calendar may drop.

    A row or column goes only when every slot in it is unpromising and it is
    contiguous with the grid edge (directly or through rows/columns already
    omitted). Returns empty sets when the criterion's guard fails.
    """
    cfg = config or poll.config
    t = tally(poll)
    if t.respondent_count == 0:
        return set(), set()
    unpromising = _unpromising_grid(t, cfg)
    if unpromising is None:
        return set(), set()
    row_flags = [all(row) for row in unpromising]
    col_flags = [
        all(unpromising[d][ti] for d in range(t.n_dates))
        for ti in range(t.n_times)
    ]
    return _edge_sweep(row_flags), _edge_sweep(col_flags)


def _pool_for_score(
    poll: PollState, score: int, cfg: EngineConfig
) -> tuple[frozenset[Slot], frozenset[int], frozenset[int]]:
    """Slots (and omissions, for score 3) that the given score would show."""
    grid = poll.grid
    respondents = poll.active_respondent_count()
    empty: frozenset[int] = frozenset()
    if score == 4:
        return frozenset(grid.all_slots()), empty, empty
    if score == 3:
        od, ot = omit_rows_cols(poll, cfg)
        slots = frozenset(
            (d, t)
            for d, t in grid.all_slots()
            if d not in od and t not in ot
        )
        return slots, frozenset(od), frozenset(ot)
    if respondents == 0:
        if score == 2:
            # Nobody has voted: a poll of the possible means every candidate.
            return frozenset(grid.all_slots()), empty, empty
        return frozenset(), empty, empty
    t = tally(poll)
    flag = cfg.maybe_counts_as_available
    pool = possible_times(t, flag) if score == 2 else promising_times(t, flag)
    return frozenset(pool), empty, empty


def plan_view(
    poll: PollState, score: int, config: EngineConfig | None = None
) -> ViewPlan:
    """Materialize the view for a score, escalating when the pool is empty.

    The only empty pool in practice is a promising poll before any response;
    the plan then falls back to the next-higher score until one can render.
    """
    if score not in SCORE_TO_FORMAT:
        raise ValueError("score must be 1..4")
    cfg = config or poll.config
    for actual in range(score, 5):
        slots, od, ot = _pool_for_score(poll, actual, cfg)
        if not slots:
            continue
        fmt = SCORE_TO_FORMAT[actual]
        reason = f"showing {len(slots)} of {poll.grid.n_slots} slots as {fmt.value}"
        if actual != score:
            reason = (
                f"score {score} had no candidates to show; escalated to "
                f"score {actual}; " + reason
            )
        return ViewPlan(
            format=fmt,
            slots=slots,
            omitted_dates=od,
            omitted_times=ot,
            score=actual,
            reason=reason,
            can_expand=actual < 4,
        )
    raise AssertionError("full calendar pool can never be empty")


def expanded_view(poll: PollState, config: EngineConfig | None = None) -> ViewPlan:
    """The full-calendar plan, for the see-more-options toggle."""
    return plan_view(poll, 4, config)
