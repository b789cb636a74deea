"""Engine tuning knobs, one frozen dataclass per poll."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Mapping


class OmissionCriterion(str, Enum):
    """Which slots count as unpromising when pruning calendar rows/columns.

    HALF_OF_VOTERS: below half of the respondents, provided the promising
    slots clear half themselves. GOOD_THRESHOLD: below the good-times cutoff.
    """

    HALF_OF_VOTERS = "half_of_voters"
    GOOD_THRESHOLD = "good_threshold"


@dataclass(frozen=True)
class EngineConfig:
    # Poll formats apply when the candidate set is strictly between these.
    poll_min: int = 2
    poll_max: int = 12
    # Strict fraction of respondents above which a slot counts as good.
    good_threshold: float = 0.65
    # Respondents before this ordinal see the full calendar (or a small poll).
    early_respondent_count: int = 2
    # Sampling temperature for the scoring model.
    temperature: float = 0.1
    maybe_counts_as_available: bool = True
    omission_criterion: OmissionCriterion = OmissionCriterion.HALF_OF_VOTERS

    def __post_init__(self) -> None:
        if not 0 < self.poll_min < self.poll_max:
            raise ValueError("need 0 < poll_min < poll_max")
        if not 0.0 < self.good_threshold < 1.0:
            raise ValueError("good_threshold must be strictly between 0 and 1")
        if self.early_respondent_count < 0:
            raise ValueError("early_respondent_count must be non-negative")
        if self.temperature < 0.0:
            raise ValueError("temperature must be non-negative")
        if not isinstance(self.omission_criterion, OmissionCriterion):
            object.__setattr__(
                self, "omission_criterion", OmissionCriterion(self.omission_criterion)
            )

    def to_doc(self) -> dict[str, Any]:
        doc = asdict(self)
        doc["omission_criterion"] = self.omission_criterion.value
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> EngineConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**dict(doc))
