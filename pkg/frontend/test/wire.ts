// Canned server payloads and a recording fetch stub for the screen tests.
// Shapes follow the service's documented JSON exactly; tests that assert on
// requests read them back from the recorded call list.

import { vi } from "vitest";
import type {
  MarkLevel,
  PlanDoc,
  PollSummaryDoc,
  PriorityName,
  RecommendationsDoc,
  ViewDoc,
} from "../src/types.js";

export const DATES = ["2026-09-07", "2026-09-08"];
export const TIMES = ["09:00", "09:30", "10:00"];

export function allSlots(): string[] {
  const out: string[] = [];
  for (const d of DATES) {
    for (const t of TIMES) {
      out.push(`${d}T${t}`);
    }
  }
  return out;
}

export function fullCalendarPlan(): PlanDoc {
  return {
    format: "full_calendar",
    score: 4,
    reason: "few responses on a small grid",
    can_expand: false,
    slots: allSlots(),
    omitted_dates: [],
    omitted_times: [],
  };
}

export function promisingPollPlan(slots: string[]): PlanDoc {
  return {
    format: "poll_of_promising",
    score: 1,
    reason: "a few slots already stand out",
    can_expand: true,
    slots,
    omitted_dates: [],
    omitted_times: [],
  };
}

export function prunedPlan(slots: string[], omittedDates: string[]): PlanDoc {
  return {
    format: "pruned_calendar",
    score: 3,
    reason: "dropping rows nobody picked",
    can_expand: true,
    slots,
    omitted_dates: omittedDates,
    omitted_times: [],
  };
}

export function viewDoc(overrides: Partial<ViewDoc> = {}): ViewDoc {
  return {
    poll_id: "p1",
    plan: fullCalendarPlan(),
    decision: {
      score: 4,
      reason: "few responses on a small grid",
      source: "fallback",
      latency_s: 0,
      raw_reply: "",
    },
    respondents: 1,
    group_size: 3,
    grid: { dates: [...DATES], times: [...TIMES], slot_minutes: 30 },
    own_marks: {},
    popularity: { "2026-09-07T09:00": { sure: 1, maybe: 0 } },
    finalized: null,
    ...overrides,
  };
}

export function pollDoc(overrides: Partial<PollSummaryDoc> = {}): PollSummaryDoc {
  return {
    poll_id: "p1",
    created_at: "2026-09-01T08:00:00+00:00",
    grid: { dates: [...DATES], times: [...TIMES], slot_minutes: 30 },
    roster: ["ana", "ben", "cara"],
    responses: [
      {
        attendee: "ana",
        submitted_at: "2026-09-01T09:00:00+00:00",
        marks: {
          "2026-09-07T09:00": "sure" as MarkLevel,
          "2026-09-07T09:30": "maybe" as MarkLevel,
        },
      },
    ],
    priorities: {},
    config: {},
    finalized: null,
    decisions: [],
    ...overrides,
  };
}

export const ALGORITHM_LABELS = [
  "maybe-high/important-first",
  "maybe-high/overall-attendance",
  "maybe-low/important-first",
  "maybe-low/overall-attendance",
];

/** Four ranked lists whose content is recognizable by stamp and top time. */
export function recsDoc(stamp: string, topTime: string): RecommendationsDoc {
  return {
    poll_id: "p1",
    feasible: true,
    recommendations: ALGORITHM_LABELS.map((label) => ({
      algorithm: {
        label,
        maybe_weight: label.startsWith("maybe-high") ? 0.75 : 0.25,
        priority_mode: label.endsWith("important-first")
          ? "important_first"
          : "overall_attendance",
      },
      generated_at: stamp,
      relaxed_away: [],
      ranked: [
        {
          date: "2026-09-07",
          time: topTime,
          score: 1.75,
          sure: ["ana"],
          maybe: ["ben"],
        },
      ],
    })),
    notes: [{ attendee: "ana", note: "mornings are easier for me" }],
  };
}

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
}

export interface WireStub {
  calls: RecordedCall[];
  callsMatching(pattern: RegExp): RecordedCall[];
}

type Handler = (call: RecordedCall) => { status: number; json: unknown };

/**
 * Replace global fetch with a recorder that answers from `handler`.
 * Returns the log so tests can count and inspect requests.
 */
export function installFetch(handler: Handler): WireStub {
  const calls: RecordedCall[] = [];
  const fake = async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    const call: RecordedCall = { method, url, body };
    calls.push(call);
    const reply = handler(call);
    return {
      ok: reply.status >= 200 && reply.status < 300,
      status: reply.status,
      json: async () => reply.json,
    } as unknown as Response;
  };
  vi.stubGlobal("fetch", fake);
  return {
    calls,
    callsMatching(pattern: RegExp) {
      return calls.filter((c) => pattern.test(`${c.method} ${c.url}`));
    },
  };
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
