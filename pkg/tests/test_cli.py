"""Command-line interface, exercised offline against file storage."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from groupmeet.cli import main
from groupmeet.state import poll_to_doc

from conftest import make_poll, regression_poll_score3


@pytest.fixture
def runner():
    return CliRunner()


def create_poll(runner, tmp_path, *extra):
    result = runner.invoke(
        main,
        [
            "poll",
            "create",
            "--storage",
            str(tmp_path),
            "--date",
            "2026-09-07",
            "--date",
            "2026-09-08",
            "--date",
            "2026-09-09",
            "--date",
            "2026-09-10",
            "--attendee",
            "organizer",
            "--json",
            *extra,
        ],
    )
    assert result.exit_code == 0, result.output
    return json.loads(result.output)["poll_id"]


def test_create_and_show(runner, tmp_path):
    pid = create_poll(runner, tmp_path)
    shown = runner.invoke(main, ["poll", "show", pid, "--storage", str(tmp_path)])
    assert shown.exit_code == 0, shown.output
    assert f"poll {pid}" in shown.output
    assert "grid: 4 date(s) x 24 block(s), 96 slots" in shown.output
    assert "responses: 0" in shown.output
    assert "plan: full_calendar showing 96 slot(s)" in shown.output
    assert "finalized: none" in shown.output


def test_create_with_explicit_times(runner, tmp_path):
    result = runner.invoke(
        main,
        [
            "poll", "create",
            "--storage", str(tmp_path),
            "--date", "2026-09-07",
            "--time", "09:00", "--time", "13:00",
            "--attendee", "x",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "1 date(s) x 2 block(s)" in result.output


def test_show_unknown_poll_fails_cleanly(runner, tmp_path):
    result = runner.invoke(main, ["poll", "show", "nope", "--storage", str(tmp_path)])
    assert result.exit_code != 0
    assert "nope" in result.output


def test_simulate_first_view_is_full_calendar(runner, tmp_path):
    pid = create_poll(runner, tmp_path)
    result = runner.invoke(
        main,
        ["simulate", pid, "-n", "3", "--seed", "7", "--storage", str(tmp_path), "--json"],
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["steps"][0]["saw_format"] == "full_calendar"
    assert doc["steps"][0]["saw_score"] == 4
    assert len(doc["steps"]) == 3
    assert doc["final"]["respondents"] >= 1
    assert doc["grid_slots"] == 96


def test_simulate_same_seed_same_transcript(runner, tmp_path):
    pid_a = create_poll(runner, tmp_path)
    pid_b = create_poll(runner, tmp_path)
    assert pid_a != pid_b
    args = ["-n", "4", "--seed", "11", "--storage", str(tmp_path)]
    run_a = runner.invoke(main, ["simulate", pid_a, *args])
    run_b = runner.invoke(main, ["simulate", pid_b, *args])
    assert run_a.exit_code == 0, run_a.output
    assert run_a.output == run_b.output
    assert "scores:" in run_a.output
    assert "final respondents=" in run_a.output


def test_simulate_fixed_profile(runner, tmp_path):
    pid = create_poll(runner, tmp_path)
    result = runner.invoke(
        main,
        [
            "simulate", pid, "-n", "2", "--seed", "3",
            "--profile", "5,morning,more",
            "--storage", str(tmp_path), "--json",
        ],
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert all(s["busyness"] == 5 for s in doc["steps"])
    assert all(s["preference"] == "morning" for s in doc["steps"])
    assert all(s["importance"] == "more" for s in doc["steps"])


def test_score_offline_regression_row(runner, tmp_path):
    state = tmp_path / "row3.json"
    state.write_text(json.dumps(poll_to_doc(regression_poll_score3())))
    result = runner.invoke(main, ["score", str(state)])
    assert result.exit_code == 0, result.output
    assert "--- prompt ---" in result.output
    assert "score: 3" in result.output
    assert "source: fallback" in result.output


def test_score_empty_poll_shows_full_calendar(runner, tmp_path):
    state = tmp_path / "empty.json"
    state.write_text(json.dumps(poll_to_doc(make_poll())))
    result = runner.invoke(main, ["score", str(state), "--json"])
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["score"] == 4
    assert doc["source"] == "fallback"
    assert "Responses so far: 0" in doc["prompt"]


def test_score_rejects_malformed_state(runner, tmp_path):
    state = tmp_path / "broken.json"
    state.write_text("{\"grid\": 12}")
    result = runner.invoke(main, ["score", str(state)])
    assert result.exit_code != 0
    assert "does not parse" in result.output


def test_recommend_lists_all_four_algorithms(runner, tmp_path):
    pid = create_poll(runner, tmp_path)
    sim = runner.invoke(
        main, ["simulate", pid, "-n", "3", "--seed", "5", "--storage", str(tmp_path)]
    )
    assert sim.exit_code == 0, sim.output
    result = runner.invoke(
        main, ["recommend", pid, "-k", "3", "--storage", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    for label in (
        "maybe-high/important-first",
        "maybe-high/overall-attendance",
        "maybe-low/important-first",
        "maybe-low/overall-attendance",
    ):
        assert f"[{label}]" in result.output
    assert "1. 2026-09-" in result.output


def test_recommend_before_votes_fails(runner, tmp_path):
    pid = create_poll(runner, tmp_path)
    result = runner.invoke(main, ["recommend", pid, "--storage", str(tmp_path)])
    assert result.exit_code != 0


def test_recommend_json_shape(runner, tmp_path):
    pid = create_poll(runner, tmp_path)
    runner.invoke(
        main, ["simulate", pid, "-n", "2", "--seed", "9", "--storage", str(tmp_path)]
    )
    result = runner.invoke(
        main, ["recommend", pid, "-k", "2", "--storage", str(tmp_path), "--json"]
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["poll_id"] == pid
    assert len(doc["recommendations"]) == 4
    for rec in doc["recommendations"]:
        assert len(rec["ranked"]) <= 2
        scores = [e["score"] for e in rec["ranked"]]
        assert scores == sorted(scores, reverse=True)
