"""Model-backed adaptation scoring with a deterministic rule fallback.

The gateway builds a prompt from the poll, asks a chat-completion endpoint
for a 1-4 score, and falls back to :func:`groupmeet.engine.rule_score` on
any failure whatsoever, so a decision is always produced and never later
than the configured timeout.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Protocol

import httpx

from .config import EngineConfig
from .core import active_respondents, possible_times, promising_times, tally
from .engine import rule_score
from .state import ScoreDecision

if TYPE_CHECKING:
    from .state import PollState

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 10.0
DEFAULT_MODEL = "gpt-4-turbo-2024-04-09"

# Prompts enumerate at most this many slots per list; the rest are counted.
_ENUMERATION_CAP = 12

_PREAMBLE = (
    "You are helping a group settle on a meeting time. Based on the votes so "
    "far, decide how many candidate slots the next attendee should be shown "
    "when they open the availability page."
)
_DIRECTIVE = (
    "Scores mean: 4 show the full calendar; 3 show the calendar with "
    "unpromising edge rows and columns omitted; 2 show a poll of the possible "
    "times; 1 show a poll of only the promising times.\n"
    "Reply exactly in this format:\n"
    "Score: <1-4>\n"
    "Reason: <one or two sentences>"
)


def prompt_fingerprint(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class PromptContext:
    """Deterministic pieces of the scoring prompt, in render order."""

    group_size: int
    respondent_count: int
    grid_line: str
    response_lines: tuple[str, ...]
    promising_line: str | None
    possible_line: str | None
    preamble: str = _PREAMBLE
    directive: str = _DIRECTIVE

    def render(self) -> str:
        pct = 0 if self.group_size == 0 else round(
            100 * self.respondent_count / self.group_size
        )
        lines = [
            self.preamble,
            f"Group size: {self.group_size} attendee(s).",
            f"Responses so far: {self.respondent_count} of {self.group_size} ({pct}%).",
            self.grid_line,
            *self.response_lines,
        ]
        if self.promising_line is not None:
            lines.append(self.promising_line)
        if self.possible_line is not None:
            lines.append(self.possible_line)
        lines.append(self.directive)
        return "\n".join(lines)


def _slot_list(poll: PollState, slots: set) -> str:
    labels = [
        poll.grid.slot_label(s).replace("T", " ") for s in sorted(slots)
    ]
    if not labels:
        return "no slots"
    if len(labels) > _ENUMERATION_CAP:
        extra = len(labels) - _ENUMERATION_CAP
        return ", ".join(labels[:_ENUMERATION_CAP]) + f" and {extra} more"
    return ", ".join(labels)


def build_prompt(poll: PollState, config: EngineConfig | None = None) -> PromptContext:
    """Assemble the scoring prompt. Pure; equal polls render byte-identical.

    Respondents appear as "Participant N" in submission order; notes and real
    names never enter the prompt. The possible-times line is dropped when the
    promising times already are the slots that work for everyone who voted.
    """
    cfg = config or poll.config
    flag = cfg.maybe_counts_as_available
    grid = poll.grid
    grid_line = (
        f"Candidate grid: {grid.n_dates} date(s) x {grid.n_times} time block(s) "
        f"of {grid.slot_minutes} minutes, {grid.n_slots} slots in total."
    )
    respondents = active_respondents(poll)
    response_lines = []
    for i, response in enumerate(respondents, start=1):
        sure = {s for s, lvl in response.marks.items() if lvl.value == "sure"}
        maybe = {s for s, lvl in response.marks.items() if lvl.value == "maybe"}
        response_lines.append(
            f"Participant {i} is available for sure at {_slot_list(poll, sure)}; "
            f"maybe available at {_slot_list(poll, maybe)}."
        )
    promising_line = possible_line = None
    if respondents:
        t = tally(poll)
        top = t.max_availability(flag)
        promising = promising_times(t, flag)
        promising_line = (
            f"Promising times, where the maximum of {top} respondent(s) can "
            f"attend, {len(promising)} total: {_slot_list(poll, promising)}."
        )
        if top < t.respondent_count:
            possible = possible_times(t, flag)
            possible_line = (
                f"Possible times, where at least {max(top - 1, 0)} respondent(s) "
                f"can attend, {len(possible)} total: {_slot_list(poll, possible)}."
            )
    return PromptContext(
        group_size=poll.group_size(),
        respondent_count=len(respondents),
        grid_line=grid_line,
        response_lines=tuple(response_lines),
        promising_line=promising_line,
        possible_line=possible_line,
    )


class ReplyParseError(ValueError):
    """A model reply that does not yield exactly one usable score.

    ``defect`` is one of "no-score", "out-of-range", "ambiguous".
    """

    def __init__(self, defect: str, message: str):
        super().__init__(message)
        self.defect = defect


# Characters that wrap tokens in markdown-ish replies; stripped before parsing.
_NOISE = str.maketrans("", "", "*`#\"")
_SCORE_RE = re.compile(r"(?i)\bscore\b\s*(?:is|was|[:=\-])?\s*([0-9]+)")
_REASON_RE = re.compile(r"(?is)\breason\b\s*[:=\-]\s*(.+)\Z")


def parse_reply(raw: str) -> tuple[int, str]:
    """Extract (score, reason) from a model reply, or raise ReplyParseError."""
    cleaned = raw.translate(_NOISE)
    matches = list(_SCORE_RE.finditer(cleaned))
    values = {int(m.group(1)) for m in matches}
    if not values:
        raise ReplyParseError("no-score", f"no score declaration in {raw!r}")
    if len(values) > 1:
        raise ReplyParseError(
            "ambiguous", f"conflicting score declarations {sorted(values)}"
        )
    score = values.pop()
    if score not in (1, 2, 3, 4):
        raise ReplyParseError("out-of-range", f"score {score} is outside 1-4")
    reason_match = _REASON_RE.search(cleaned)
    if reason_match:
        reason = reason_match.group(1).strip()
    else:
        reason = cleaned[matches[-1].end():].strip().lstrip(".,;: \t\n")
    return score, reason or "(no reason given)"


class CompletionClient(Protocol):
    def complete(self, prompt: str, *, temperature: float, timeout: float) -> str:
        ...


class HttpCompletionClient:
    """Talks to any chat-completion-compatible HTTP endpoint."""

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        model: str = DEFAULT_MODEL,
    ):
        self._base = base_url.rstrip("/")
        self._api_key = api_key
        self._model = model

    def complete(self, prompt: str, *, temperature: float, timeout: float) -> str:
        headers = {}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        resp = httpx.post(
            f"{self._base}/chat/completions",
            json={
                "model": self._model,
                "temperature": temperature,
                "messages": [{"role": "user", "content": prompt}],
            },
            headers=headers,
            timeout=timeout,
        )
        resp.raise_for_status()
        payload = resp.json()
        return payload["choices"][0]["message"]["content"]


class FixtureClient:
    """Replays canned replies keyed by prompt fingerprint; for tests and demos."""

    def __init__(
        self,
        replies: Mapping[str, str] | None = None,
        path: str | os.PathLike | None = None,
    ):
        if replies is None and path is None:
            raise ValueError("need a reply mapping or a fixture file path")
        if replies is None:
            with open(path, encoding="utf-8") as fh:
                replies = json.load(fh)
        self._replies = dict(replies)

    def complete(self, prompt: str, *, temperature: float, timeout: float) -> str:
        key = prompt_fingerprint(prompt)
        if key not in self._replies:
            raise LookupError(f"no fixture reply for prompt {key[:12]}…")
        return self._replies[key]


def score_with_llm(
    poll: PollState,
    client: CompletionClient | None,
    config: EngineConfig | None = None,
    timeout: float = DEFAULT_TIMEOUT_S,
    _prompt: str | None = None,
) -> ScoreDecision:
    """Ask the model for a score; fall back to the rule policy on any failure.

    All attempts share one wall-clock deadline of ``timeout`` seconds, so a
    retry never extends the caller's wait: a parse failure or a fast transport
    error leaves budget for one identical second attempt, a read timeout does
    not. Transport errors are logged, never raised.
    """
    cfg = config or poll.config
    prompt = _prompt if _prompt is not None else build_prompt(poll, cfg).render()
    start = time.monotonic()
    raw_last = ""
    if client is not None:
        deadline = start + timeout
        for _attempt in range(2):
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
            try:
                raw = client.complete(
                    prompt, temperature=cfg.temperature, timeout=remaining
                )
            except Exception as exc:
                log.warning("completion transport failure: %s", exc)
                raw_last = f"(transport error: {exc})"
                continue
            raw_last = raw
            try:
                score, reason = parse_reply(raw)
            except ReplyParseError as exc:
                log.warning("unusable reply (%s): %s", exc.defect, exc)
                continue
            return ScoreDecision(
                score=score,
                reason=reason,
                source="llm",
                latency_s=time.monotonic() - start,
                raw_reply=raw,
            )
    score, reason = rule_score(poll, cfg)
    return ScoreDecision(
        score=score,
        reason=reason,
        source="fallback",
        latency_s=time.monotonic() - start,
        raw_reply=raw_last,
    )


class LlmGateway:
    """Caches decisions per poll state and serializes calls per poll.

    The cache key covers the rendered prompt and the engine config, so any
    change that could alter the verdict (new response, a NotComing flip, new
    thresholds) misses the cache, while a plain page reload hits it.
    """

    def __init__(
        self,
        client: CompletionClient | None = None,
        timeout: float = DEFAULT_TIMEOUT_S,
    ):
        self.client = client
        self.timeout = timeout
        self._cache: dict[tuple[str, str], ScoreDecision] = {}
        self._poll_locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, poll_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._poll_locks.setdefault(poll_id, threading.Lock())

    def decide(self, poll: PollState, config: EngineConfig | None = None) -> ScoreDecision:
        cfg = config or poll.config
        prompt = build_prompt(poll, cfg).render()
        key = (poll.poll_id, prompt_fingerprint(prompt + "\x00" + repr(cfg)))
        with self._lock_for(poll.poll_id):
            cached = self._cache.get(key)
            if cached is not None:
                return cached
            decision = score_with_llm(
                poll, self.client, cfg, timeout=self.timeout, _prompt=prompt
            )
            self._cache[key] = decision
            return decision


@dataclass(frozen=True)
class LlmSettings:
    """Endpoint wiring read from the environment."""

    base_url: str | None = None
    api_key: str | None = None
    model: str = DEFAULT_MODEL
    timeout: float = DEFAULT_TIMEOUT_S
    fixtures_path: str | None = None

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> LlmSettings:
        env = os.environ if env is None else env
        return cls(
            base_url=env.get("GROUPMEET_LLM_BASE_URL"),
            api_key=env.get("GROUPMEET_LLM_API_KEY"),
            model=env.get("GROUPMEET_LLM_MODEL", DEFAULT_MODEL),
            timeout=float(env.get("GROUPMEET_LLM_TIMEOUT", DEFAULT_TIMEOUT_S)),
            fixtures_path=env.get("GROUPMEET_LLM_FIXTURES"),
        )

    def build_client(self) -> CompletionClient | None:
        if self.fixtures_path:
            return FixtureClient(path=self.fixtures_path)
        if self.base_url:
            return HttpCompletionClient(self.base_url, self.api_key, self.model)
        return None

    def build_gateway(self) -> LlmGateway:
        return LlmGateway(self.build_client(), timeout=self.timeout)
