"""Synthetic attendees for development runs and convergence experiments.

A simulated attendee owns a seeded personal calendar: a handful of busy
events dropped onto the grid, denser before or after mid-afternoon depending
on which end of the day they prefer to keep free. Free slots are marked
sure, slots under tentative events maybe, slots under firm events stay
unavailable. Marks are a pure function of (profile, grid, seed).
"""

from __future__ import annotations

import datetime as dt
import random
from dataclasses import dataclass

from .core import PreferenceLevel, Slot, SlotGrid

BUSYNESS_CHOICES = (5, 10)
PREFERENCE_CHOICES = ("morning", "evening")
IMPORTANCE_CHOICES = ("more", "less")

# Events land on one side of this line with 80% probability.
_SPLIT = dt.time(15, 0)
_TENTATIVE_SHARE = 0.3
_MAX_EVENT_BLOCKS = 4


@dataclass(frozen=True)
class SimulatedAttendee:
    name: str
    busyness: int
    preference: str
    importance: str
    seed: int

    def __post_init__(self) -> None:
        if self.busyness not in BUSYNESS_CHOICES:
            raise ValueError(f"busyness must be one of {BUSYNESS_CHOICES}")
        if self.preference not in PREFERENCE_CHOICES:
            raise ValueError(f"preference must be one of {PREFERENCE_CHOICES}")
        if self.importance not in IMPORTANCE_CHOICES:
            raise ValueError(f"importance must be one of {IMPORTANCE_CHOICES}")

    def marks(self, grid: SlotGrid) -> dict[Slot, PreferenceLevel]:
        rng = random.Random(self.seed)
        early = [i for i, t in enumerate(grid.times) if t < _SPLIT]
        late = [i for i, t in enumerate(grid.times) if t >= _SPLIT]
        # Favoring evenings means the calendar is already busy early, and
        # vice versa. Fall back to the whole day on one-sided grids.
        busy_side = early if self.preference == "evening" else late
        other_side = late if self.preference == "evening" else early
        firm: set[Slot] = set()
        tentative: set[Slot] = set()
        for _ in range(self.busyness):
            pool = busy_side if (busy_side and rng.random() < 0.8) else other_side
            if not pool:
                pool = list(range(grid.n_times))
            day = rng.randrange(grid.n_dates)
            start = rng.choice(pool)
            length = rng.randint(1, _MAX_EVENT_BLOCKS)
            covered = {
                (day, t) for t in range(start, min(start + length, grid.n_times))
            }
            if rng.random() < _TENTATIVE_SHARE:
                tentative |= covered
            else:
                firm |= covered
        result: dict[Slot, PreferenceLevel] = {}
        for slot in grid.all_slots():
            if slot in firm:
                continue
            if slot in tentative:
                result[slot] = PreferenceLevel.MAYBE
            else:
                result[slot] = PreferenceLevel.SURE
        return result


def build_profiles(
    n: int, seed: int, profile: str = "mixed"
) -> list[SimulatedAttendee]:
    """n deterministic attendee profiles.

    ``profile`` is either "mixed" (each trait drawn uniformly per attendee)
    or a fixed "busyness,preference,importance" triple such as
    "5,morning,more" applied to everyone.
    """
    rng = random.Random(seed)
    if profile == "mixed":
        traits = [
            (
                rng.choice(BUSYNESS_CHOICES),
                rng.choice(PREFERENCE_CHOICES),
                rng.choice(IMPORTANCE_CHOICES),
            )
            for _ in range(n)
        ]
    else:
        try:
            busy_s, pref, imp = [p.strip() for p in profile.split(",")]
            fixed = (int(busy_s), pref, imp)
        except ValueError as exc:
            raise ValueError(
                "profile must be 'mixed' or 'busyness,preference,importance'"
            ) from exc
        traits = [fixed] * n
    return [
        SimulatedAttendee(
            name=f"sim{i + 1:02d}",
            busyness=busy,
            preference=pref,
            importance=imp,
            seed=rng.randrange(2**32),
        )
        for i, (busy, pref, imp) in enumerate(traits)
    ]
