// Pure client-side state helpers, no DOM. The browser keeps marks in a Map
// keyed by slot label; "unavailable" is represented by absence, which matches
// how the server stores responses, so a save and reload cannot drift.

import type {
  DisplayLevel,
  MarkLevel,
  PopularityEntry,
  ViewDoc,
} from "./types.js";

export type MarkStore = Map<string, MarkLevel>;

export function slotLabel(date: string, time: string): string {
  return `${date}T${time}`;
}

export function splitLabel(label: string): { date: string; time: string } {
  const at = label.indexOf("T");
  if (at < 0) throw new Error(`bad slot label: ${label}`);
  return { date: label.slice(0, at), time: label.slice(at + 1) };
}

export function levelOf(marks: MarkStore, label: string): DisplayLevel {
  return marks.get(label) ?? "unavailable";
}

/** Tap order: unavailable, sure, maybe, back to unavailable. */
export function nextLevel(current: DisplayLevel): DisplayLevel {
  if (current === "unavailable") return "sure";
  if (current === "sure") return "maybe";
  return "unavailable";
}

export function setLevel(
  marks: MarkStore,
  label: string,
  level: DisplayLevel,
): void {
  if (level === "unavailable") {
    marks.delete(label);
  } else {
    marks.set(label, level);
  }
}

export function cycleMark(marks: MarkStore, label: string): DisplayLevel {
  const next = nextLevel(levelOf(marks, label));
  setLevel(marks, label, next);
  return next;
}

export function marksToWire(marks: MarkStore): Record<string, string> {
  const out: Record<string, string> = {};
  for (const label of [...marks.keys()].sort()) {
    out[label] = marks.get(label)!;
  }
  return out;
}

export function marksFromWire(doc: Record<string, MarkLevel>): MarkStore {
  const marks: MarkStore = new Map();
  for (const [label, level] of Object.entries(doc)) {
    if (level === "sure" || level === "maybe") {
      marks.set(label, level);
    }
  }
  return marks;
}

export const POPULARITY_BUCKETS = 5;

/**
 * Map a slot's crowd interest onto one of five discrete shades.
 *
 * Bucket 0 is "nobody yet", bucket 4 is "every active respondent said sure".
 * Maybes count at half weight. The inputs come straight off the wire; this
 * only chooses a shade for them.
 */
export function popularityBucket(
  entry: PopularityEntry | undefined,
  respondents: number,
): number {
  if (!entry || respondents <= 0) return 0;
  const weight = entry.sure + 0.5 * entry.maybe;
  if (weight <= 0) return 0;
  const share = weight / respondents;
  if (share >= 1) return 4;
  if (share > 2 / 3) return 3;
  if (share > 1 / 3) return 2;
  return 1;
}

export function popularityText(entry: PopularityEntry | undefined): string {
  if (!entry || (entry.sure === 0 && entry.maybe === 0)) return "no marks yet";
  return `${entry.sure} sure, ${entry.maybe} maybe`;
}

/** True when the service trimmed or reshaped what this viewer is shown. */
export function isAdapted(view: ViewDoc): boolean {
  return view.plan.format !== "full_calendar";
}

/** Dates that actually appear in the current plan, in grid order. */
export function visibleDates(view: ViewDoc): string[] {
  const present = new Set(view.plan.slots.map((s) => splitLabel(s).date));
  return view.grid.dates.filter((d) => present.has(d));
}

export function visibleTimes(view: ViewDoc): string[] {
  const present = new Set(view.plan.slots.map((s) => splitLabel(s).time));
  return view.grid.times.filter((t) => present.has(t));
}
