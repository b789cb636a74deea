// Wire types for the scheduling service HTTP API.
// Slot labels are "YYYY-MM-DDTHH:MM" everywhere; dates and times also travel
// separately in some payloads. Shapes mirror the server's JSON exactly.

export type ViewFormatName =
  | "poll_of_promising"
  | "poll_of_possible"
  | "pruned_calendar"
  | "full_calendar";

export type MarkLevel = "sure" | "maybe";

/** What a tap can leave behind. "unavailable" is stored as absence. */
export type DisplayLevel = MarkLevel | "unavailable";

export type PriorityName = "must" | "optional" | "not_coming";

export interface PlanDoc {
  format: ViewFormatName;
  score: number;
  reason: string;
  can_expand: boolean;
  slots: string[];
  omitted_dates: string[];
  omitted_times: string[];
}

export interface DecisionDoc {
  score: number;
  reason: string;
  source: string;
  latency_s: number;
  raw_reply: string;
}

export interface GridDoc {
  dates: string[];
  times: string[];
  slot_minutes: number;
}

export interface PopularityEntry {
  sure: number;
  maybe: number;
}

export interface FinalizedDoc {
  date: string;
  time: string;
}

export interface ViewDoc {
  poll_id: string;
  plan: PlanDoc;
  decision: DecisionDoc;
  respondents: number;
  group_size: number;
  grid: GridDoc;
  own_marks: Record<string, MarkLevel>;
  popularity: Record<string, PopularityEntry>;
  finalized: FinalizedDoc | null;
}

export interface SubmitReply {
  poll_id: string;
  attendee: string;
  respondents: number;
  decision: DecisionDoc;
  plan: PlanDoc;
}

export interface ResponseSummaryDoc {
  attendee: string;
  submitted_at: string;
  marks: Record<string, MarkLevel>;
}

export interface PollSummaryDoc {
  poll_id: string;
  created_at: string;
  grid: GridDoc;
  roster: string[];
  responses: ResponseSummaryDoc[];
  priorities: Record<string, PriorityName>;
  config: Record<string, unknown>;
  finalized: FinalizedDoc | null;
  decisions: DecisionDoc[];
}

export interface AlgorithmDoc {
  label: string;
  maybe_weight: number;
  priority_mode: string;
}

export interface RankedSlotDoc {
  date: string;
  time: string;
  score: number;
  sure: string[];
  maybe: string[];
}

export interface RecommendationDoc {
  algorithm: AlgorithmDoc;
  generated_at: string;
  relaxed_away: string[];
  ranked: RankedSlotDoc[];
}

export interface NoteDoc {
  attendee: string;
  note: string;
}

export interface RecommendationsDoc {
  poll_id: string;
  feasible: boolean;
  recommendations: RecommendationDoc[];
  notes: NoteDoc[];
}

/** Priority updates answer with fresh recommendations plus the new map. */
export interface PrioritiesReply extends RecommendationsDoc {
  priorities: Record<string, PriorityName>;
}

export interface CreatePollBody {
  dates: string[];
  times?: string[];
  start_time?: string;
  end_time?: string;
  slot_minutes?: number;
  attendees: string[];
}
