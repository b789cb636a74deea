"""Adaptation rule, pruning, and view planning."""

from __future__ import annotations

import pytest

from groupmeet.config import EngineConfig, OmissionCriterion
from groupmeet.core import tally, promising_times
from groupmeet.engine import (
    FORMAT_TO_SCORE,
    SCORE_TO_FORMAT,
    ViewFormat,
    ViewPlan,
    expanded_view,
    omit_rows_cols,
    plan_view,
    rule_score,
)

from conftest import (
    REGRESSION_BUILDERS,
    SURE,
    add_response,
    make_grid,
    make_poll,
    random_poll,
)


# -- score/format mapping ------------------------------------------------------


def test_score_format_bijection():
    assert set(SCORE_TO_FORMAT) == {1, 2, 3, 4}
    assert SCORE_TO_FORMAT[1] is ViewFormat.POLL_OF_PROMISING
    assert SCORE_TO_FORMAT[2] is ViewFormat.POLL_OF_POSSIBLE
    assert SCORE_TO_FORMAT[3] is ViewFormat.PRUNED_CALENDAR
    assert SCORE_TO_FORMAT[4] is ViewFormat.FULL_CALENDAR
    for score, fmt in SCORE_TO_FORMAT.items():
        assert FORMAT_TO_SCORE[fmt] == score


def test_view_plan_validates():
    with pytest.raises(ValueError):
        ViewPlan(
            format=ViewFormat.FULL_CALENDAR,
            slots=frozenset({(0, 0)}),
            omitted_dates=frozenset(),
            omitted_times=frozenset(),
            score=1,
            reason="mismatched",
            can_expand=True,
        )
    with pytest.raises(ValueError):
        ViewPlan(
            format=ViewFormat.POLL_OF_PROMISING,
            slots=frozenset(),
            omitted_dates=frozenset(),
            omitted_times=frozenset(),
            score=1,
            reason="empty",
            can_expand=True,
        )
    with pytest.raises(ValueError):
        ViewPlan(
            format=ViewFormat.FULL_CALENDAR,
            slots=frozenset({(0, 0)}),
            omitted_dates=frozenset({1}),
            omitted_times=frozenset(),
            score=4,
            reason="omissions outside pruned view",
            can_expand=False,
        )


# -- deterministic rule --------------------------------------------------------


@pytest.mark.parametrize("expected", [1, 2, 3, 4])
def test_rule_score_regression_rows(expected):
    poll = REGRESSION_BUILDERS[expected]()
    score, reason = rule_score(poll)
    assert score == expected
    assert reason


def test_rule_score_early_small_grid_shows_poll():
    # 10 slots on the grid, below poll_max: even the first visitor gets a poll.
    poll = make_poll(grid=make_grid(2, 5))
    assert rule_score(poll)[0] == 2
    add_response(poll, "a0", {(0, 0): SURE})
    assert rule_score(poll)[0] == 2


def test_rule_score_early_large_grid_shows_calendar():
    poll = make_poll()
    assert rule_score(poll)[0] == 4
    add_response(poll, "a0", {(0, 0): SURE})
    assert rule_score(poll)[0] == 4


def test_rule_score_collapsed_pool_needs_half_response():
    def build(group: int) -> object:
        poll = make_poll(roster=tuple(f"a{i}" for i in range(group)))
        add_response(poll, "a0", {(0, 0): SURE})
        add_response(poll, "a1", {(0, 0): SURE})
        return poll

    # Two of four responded (50%), one possible slot: promising poll.
    assert rule_score(build(4))[0] == 1
    # Two of five (40%): same pool, but too early to collapse the view.
    assert rule_score(build(5))[0] == 3


def test_rule_score_maybe_flag_changes_pool():
    # Five respondents, counts via maybe: 4,4,4,3,3 -> possible has 5 entries.
    poll = REGRESSION_BUILDERS[2]()
    assert rule_score(poll)[0] == 2
    cfg = EngineConfig(maybe_counts_as_available=False)
    score, _ = rule_score(poll, cfg)
    assert score in {1, 2, 3}  # pool shifts once maybe marks stop counting


# -- pruning -------------------------------------------------------------------


def test_omission_proviso_blocks_weak_consensus():
    # Two respondents with disjoint marks: max availability 1, not above half.
    poll = make_poll()
    add_response(poll, "a0", {(0, 0): SURE})
    add_response(poll, "a1", {(1, 1): SURE})
    assert omit_rows_cols(poll) == (set(), set())


def test_omission_sweeps_only_edge_rows():
    poll = make_poll(grid=make_grid(4, 6), roster=("a0", "a1", "a2"))
    for name in ("a0", "a1", "a2"):
        add_response(poll, name, {(0, t): SURE for t in range(3)})
    od, ot = omit_rows_cols(poll)
    assert od == {1, 2, 3}
    assert ot == {3, 4, 5}


def test_omission_keeps_interior_rows():
    poll = make_poll(grid=make_grid(4, 6), roster=("a0", "a1", "a2"))
    for name in ("a0", "a1", "a2"):
        add_response(poll, name, {(0, 0): SURE, (3, 0): SURE})
    od, ot = omit_rows_cols(poll)
    # Dates 1 and 2 are empty but sit between kept rows; they stay.
    assert od == set()
    assert ot == {1, 2, 3, 4, 5}


def test_omission_zero_respondents_omits_nothing():
    assert omit_rows_cols(make_poll()) == (set(), set())


def test_omission_good_criterion_and_guard():
    cfg = EngineConfig(omission_criterion=OmissionCriterion.GOOD_THRESHOLD)
    poll = make_poll(grid=make_grid(3, 4), roster=("a0", "a1", "a2"))
    for name in ("a0", "a1", "a2"):
        add_response(poll, name, {(1, 0): SURE})
    od, ot = omit_rows_cols(poll, cfg)
    # (1, 0) is good at 3/3; date rows 0 and 2 plus time columns 1..3 drop.
    assert od == {0, 2}
    assert ot == {1, 2, 3}

    sparse = make_poll(grid=make_grid(3, 4), roster=tuple(f"a{i}" for i in range(4)))
    add_response(sparse, "a0", {(0, 0): SURE})
    add_response(sparse, "a1", {(1, 1): SURE})
    add_response(sparse, "a2", {(2, 2): SURE})
    add_response(sparse, "a3", {})
    # No slot clears the good bar: the guard keeps the whole grid.
    assert omit_rows_cols(sparse, cfg) == (set(), set())


def test_promising_slots_survive_pruning(rng):
    for _ in range(60):
        poll = random_poll(rng)
        od, ot = omit_rows_cols(poll)
        t = tally(poll)
        if t.respondent_count == 0:
            assert od == set() and ot == set()
            continue
        for d, ti in promising_times(t, poll.config.maybe_counts_as_available):
            assert d not in od
            assert ti not in ot


# -- view planning -------------------------------------------------------------


def test_plan_view_rejects_bad_score():
    with pytest.raises(ValueError):
        plan_view(make_poll(), 0)
    with pytest.raises(ValueError):
        plan_view(make_poll(), 5)


def test_plan_view_zero_respondents_escalates_promising_poll():
    poll = make_poll()
    plan = plan_view(poll, 1)
    # No votes yet: there are no promising times to poll over, so the plan
    # escalates; the possible poll covers every candidate instead.
    assert plan.score == 2
    assert plan.format is ViewFormat.POLL_OF_POSSIBLE
    assert plan.slots == frozenset(poll.grid.all_slots())
    assert "escalated" in plan.reason


def test_plan_view_zero_respondents_possible_is_every_candidate():
    poll = make_poll()
    plan = plan_view(poll, 2)
    assert plan.score == 2
    assert plan.slots == frozenset(poll.grid.all_slots())
    assert "escalated" not in plan.reason


def test_plan_view_pruned_never_escalates(rng):
    # Pruning always leaves the best row and column, so score 3 renders as 3.
    for _ in range(40):
        poll = random_poll(rng)
        plan = plan_view(poll, 3)
        assert plan.score == 3
        assert plan.slots


def test_plan_view_nesting(rng):
    for _ in range(40):
        poll = random_poll(rng)
        p1 = plan_view(poll, 1)
        p2 = plan_view(poll, 2)
        p3 = plan_view(poll, 3)
        p4 = plan_view(poll, 4)
        assert p1.slots <= p2.slots <= p4.slots
        assert p3.slots <= p4.slots
        assert p4.slots == frozenset(poll.grid.all_slots())


def test_plan_view_deterministic(rng):
    poll = random_poll(rng)
    assert plan_view(poll, 3) == plan_view(poll, 3)
    assert plan_view(poll, 1) == plan_view(poll, 1)


def test_plan_view_can_expand_only_below_full():
    poll = make_poll()
    add_response(poll, "a0", {(0, 0): SURE})
    add_response(poll, "a1", {(0, 0): SURE})
    for score in (1, 2, 3):
        plan = plan_view(poll, score)
        assert plan.can_expand == (plan.score < 4)
    assert plan_view(poll, 4).can_expand is False


def test_expanded_view_is_full_calendar(rng):
    poll = random_poll(rng)
    plan = expanded_view(poll)
    assert plan == plan_view(poll, 4)
    assert plan.format is ViewFormat.FULL_CALENDAR
    assert plan.omitted_dates == frozenset()
    assert plan.omitted_times == frozenset()
    assert plan.can_expand is False


def test_pruned_view_slots_match_omissions(rng):
    for _ in range(30):
        poll = random_poll(rng)
        plan = plan_view(poll, 3)
        expected = {
            (d, t)
            for d, t in poll.grid.all_slots()
            if d not in plan.omitted_dates and t not in plan.omitted_times
        }
        assert plan.slots == expected
