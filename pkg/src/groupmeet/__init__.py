"""Group meeting scheduling with adaptive availability views."""

from .config import EngineConfig, OmissionCriterion
from .core import (
    ExclusionStrategy,
    PreferenceLevel,
    PriorityLevel,
    Response,
    Slot,
    SlotGrid,
    Tally,
    exclude_and_recount,
    good_times,
    possible_times,
    promising_times,
    tally,
)
from .engine import (
    ViewFormat,
    ViewPlan,
    expanded_view,
    omit_rows_cols,
    plan_view,
    rule_score,
)
from .llm import (
    FixtureClient,
    HttpCompletionClient,
    LlmGateway,
    PromptContext,
    ReplyParseError,
    build_prompt,
    parse_reply,
    score_with_llm,
)
from .recommend import (
    CANONICAL_SPECS,
    AlgorithmSpec,
    PriorityMode,
    Recommendation,
    recommend,
    refresh_on_priority_change,
    relaxation_pass,
    score_slot,
)
from .state import PollState, ScoreDecision, poll_from_doc, poll_to_doc
from .storage import PollStore

__version__ = "0.1.0"

__all__ = [
    "AlgorithmSpec",
    "CANONICAL_SPECS",
    "EngineConfig",
    "ExclusionStrategy",
    "FixtureClient",
    "HttpCompletionClient",
    "LlmGateway",
    "OmissionCriterion",
    "PollState",
    "PollStore",
    "PreferenceLevel",
    "PriorityLevel",
    "PriorityMode",
    "PromptContext",
    "Recommendation",
    "ReplyParseError",
    "Response",
    "ScoreDecision",
    "Slot",
    "SlotGrid",
    "Tally",
    "ViewFormat",
    "ViewPlan",
    "build_prompt",
    "exclude_and_recount",
    "expanded_view",
    "good_times",
    "omit_rows_cols",
    "parse_reply",
    "plan_view",
    "poll_from_doc",
    "poll_to_doc",
    "possible_times",
    "promising_times",
    "recommend",
    "refresh_on_priority_change",
    "relaxation_pass",
    "rule_score",
    "score_slot",
    "score_with_llm",
    "tally",
]
