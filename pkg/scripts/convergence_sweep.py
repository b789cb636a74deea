#!/usr/bin/env python3
"""Sweep many seeded simulations and track when polls become infeasible.

For each seed: create a 4-day x 24-block poll, push n synthetic attendees
through the CLI, and record the reported feasibility after every step. The
CLI's feasible flag is cross-checked against a direct recomputation (the
intersection of marked slots over active respondents) read back from the
stored poll document, so a disagreement here means a reporting bug.

Usage: python scripts/convergence_sweep.py [--seeds 200] [--n 6]
"""

from __future__ import annotations

import argparse
import collections
import json
import sys
import tempfile

from click.testing import CliRunner

from groupmeet.cli import main as cli_main


def run_one(runner: CliRunner, storage: str, seed: int, n: int) -> dict:
    created = runner.invoke(
        cli_main,
        [
            "poll", "create", "--storage", storage,
            "--date", "2026-09-07", "--date", "2026-09-08",
            "--date", "2026-09-09", "--date", "2026-09-10",
            "--attendee", "organizer", "--json",
        ],
    )
    if created.exit_code != 0:
        raise RuntimeError(created.output)
    pid = json.loads(created.output)["poll_id"]
    sim = runner.invoke(
        cli_main,
        ["simulate", pid, "-n", str(n), "--seed", str(seed),
         "--storage", storage, "--json"],
    )
    if sim.exit_code != 0:
        raise RuntimeError(sim.output)
    summary = json.loads(sim.output)

    shown = runner.invoke(
        cli_main, ["poll", "show", pid, "--storage", storage, "--json"]
    )
    doc = json.loads(shown.output)
    not_coming = {k for k, v in doc["priorities"].items() if v == "not_coming"}
    mark_sets = [
        set(r["marks"]) for r in doc["responses"] if r["attendee"] not in not_coming
    ]
    brute_feasible = bool(set.intersection(*mark_sets)) if mark_sets else False
    return {
        "seed": seed,
        "final": summary["final"],
        "scores": summary["scores"],
        "brute_feasible": brute_feasible,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=200)
    parser.add_argument("--n", type=int, default=6)
    args = parser.parse_args()

    runner = CliRunner()
    feasible_count = 0
    disagreements = 0
    promising_at_end = []
    score_tail = collections.Counter()
    for seed in range(args.seeds):
        with tempfile.TemporaryDirectory() as storage:
            row = run_one(runner, storage, seed, args.n)
        final = row["final"]
        if final["feasible"] != row["brute_feasible"]:
            disagreements += 1
            print(f"seed {seed}: flag {final['feasible']} vs brute "
                  f"{row['brute_feasible']}", file=sys.stderr)
        if final["feasible"]:
            feasible_count += 1
        promising_at_end.append(final["promising"])
        score_tail[row["scores"][-1]] += 1

    n_seeds = args.seeds
    promising_at_end.sort()
    median = promising_at_end[n_seeds // 2]
    print(f"seeds: {n_seeds}, attendees per poll: {args.n}")
    print(f"feasible at the end: {feasible_count}/{n_seeds} "
          f"({100 * feasible_count / n_seeds:.0f}%)")
    print(f"median promising count at the end: {median} "
          f"(min {promising_at_end[0]}, max {promising_at_end[-1]})")
    print("last-step score distribution: "
          + ", ".join(f"{s}: {c}" for s, c in sorted(score_tail.items())))
    print(f"feasibility flag disagreements with brute force: {disagreements}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    raise SystemExit(main())
