// Organizer screen: who answered, how important each person is, four ranked
// suggestion lists, attendee notes, and the finalize control.
//
// Every number shown here is lifted from a server payload. Changing one
// person's priority issues a single request; the reply already carries the
// recomputed rankings, so all four lists repaint from it without a second
// round trip.

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import type {
  PollSummaryDoc,
  PriorityName,
  RecommendationDoc,
  RecommendationsDoc,
} from "./types.js";

const PRIORITY_CHOICES: { value: PriorityName; label: string }[] = [
  { value: "must", label: "Must attend" },
  { value: "optional", label: "Optional" },
  { value: "not_coming", label: "Not coming" },
];

export class OrganizerScreen {
  private readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly pollId: string;

  private poll: PollSummaryDoc | null = null;
  private recs: RecommendationsDoc | null = null;
  private priorities: Record<string, PriorityName> = {};
  private pickDate = "";
  private pickTime = "";
  private conflict = "";
  private error = "";

  constructor(root: HTMLElement, api: ApiClient, pollId: string) {
    this.root = root;
    this.api = api;
    this.pollId = pollId;
  }

  async load(): Promise<void> {
    try {
      this.poll = await this.api.getPoll(this.pollId);
      this.priorities = this.poll.priorities;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      this.render();
      return;
    }
    try {
      this.recs = await this.api.getRecommendations(this.pollId);
    } catch (err) {
      // a poll nobody has answered yet has nothing to rank
      this.recs = null;
      if (!(err instanceof ApiError)) {
        this.error = String(err);
      }
    }
    this.render();
  }

  async changePriority(attendee: string, level: PriorityName): Promise<void> {
    try {
      const reply = await this.api.setPriority(this.pollId, attendee, level);
      this.priorities = reply.priorities;
      this.recs = reply;
      this.error = "";
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  async finalize(): Promise<void> {
    if (!this.pickDate || !this.pickTime) {
      this.error = "Pick a slot before confirming.";
      this.render();
      return;
    }
    try {
      this.poll = await this.api.finalize(this.pollId, this.pickDate, this.pickTime);
      this.conflict = "";
      this.error = "";
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone else confirmed first; show theirs, not ours
        this.conflict = err.message;
        try {
          this.poll = await this.api.getPoll(this.pollId);
        } catch {
          // keep the stale document if the refresh fails
        }
      } else {
        this.error = err instanceof Error ? err.message : String(err);
      }
    }
    this.render();
  }

  private render(): void {
    clear(this.root);
    const poll = this.poll;
    if (!poll) {
      this.root.append(
        el("p", { role: "alert", "data-testid": "error-line", text: this.error || "Loading failed." }),
      );
      return;
    }
    const locked = poll.finalized !== null;

    this.root.append(el("h2", { text: "Organizer dashboard" }));

    if (this.conflict) {
      this.root.append(
        el("div", {
          class: "banner conflict",
          "data-testid": "conflict-banner",
          text: `Could not confirm: ${this.conflict}`,
        }),
      );
    }
    if (locked) {
      this.root.append(
        el("div", {
          class: "banner finalized",
          "data-testid": "finalized-banner",
          text: `Confirmed: ${poll.finalized!.date} at ${poll.finalized!.time}.`,
        }),
      );
    }

    this.root.append(this.buildSummaryTable(poll, locked));
    this.root.append(this.buildRecommendations());
    this.root.append(this.buildNotes());
    this.root.append(this.buildFinalizeControls(poll, locked));

    if (this.error) {
      this.root.append(
        el("p", { class: "error", role: "alert", "data-testid": "error-line", text: this.error }),
      );
    }
  }

  /** Attendees across the top; a not-coming person's whole column greys out. */
  private buildSummaryTable(poll: PollSummaryDoc, locked: boolean): HTMLElement {
    const byName = new Map(poll.responses.map((r) => [r.attendee, r]));
    const names = [...poll.roster];
    for (const r of poll.responses) {
      if (!names.includes(r.attendee)) names.push(r.attendee);
    }

    const columnClass = (name: string): string =>
      this.priorities[name] === "not_coming" ? "col-out" : "";

    const head = el("tr", {}, [el("th", { text: "" })]);
    for (const name of names) {
      head.append(el("th", { scope: "col", class: columnClass(name), text: name }));
    }

    const answeredRow = el("tr", {}, [el("th", { scope: "row", text: "Responded" })]);
    const sureRow = el("tr", {}, [el("th", { scope: "row", text: "Slots marked sure" })]);
    const maybeRow = el("tr", {}, [el("th", { scope: "row", text: "Slots marked maybe" })]);
    const priorityRow = el("tr", {}, [el("th", { scope: "row", text: "Priority" })]);

    for (const name of names) {
      const response = byName.get(name);
      const cls = columnClass(name);
      const markValues = response ? Object.values(response.marks) : [];
      answeredRow.append(el("td", { class: cls, text: response ? "yes" : "not yet" }));
      sureRow.append(
        el("td", { class: cls, text: response ? String(markValues.filter((v) => v === "sure").length) : "" }),
      );
      maybeRow.append(
        el("td", { class: cls, text: response ? String(markValues.filter((v) => v === "maybe").length) : "" }),
      );

      const select = el("select", {
        "data-testid": `priority-${name}`,
        onchange: (ev: Event) => {
          const value = (ev.target as HTMLSelectElement).value as PriorityName;
          void this.changePriority(name, value);
        },
      });
      const current = this.priorities[name] ?? "optional";
      for (const choice of PRIORITY_CHOICES) {
        const option = el("option", { value: choice.value, text: choice.label });
        if (choice.value === current) option.selected = true;
        select.append(option);
      }
      if (locked) select.disabled = true;
      priorityRow.append(el("td", { class: cls }, [select]));
    }

    const table = el("table", { class: "summary", "data-testid": "summary-table" }, [
      head,
      answeredRow,
      sureRow,
      maybeRow,
      priorityRow,
    ]);
    return el("div", { class: "table-scroll" }, [table]);
  }

  private buildRecommendations(): HTMLElement {
    const wrap = el("section", { class: "recommendations", "data-testid": "recommendation-lists" });
    wrap.append(el("h3", { text: "Suggested slots" }));
    const recs = this.recs;
    if (!recs) {
      wrap.append(
        el("p", {
          "data-testid": "recs-waiting",
          text: "Suggestions appear once at least one person has responded.",
        }),
      );
      return wrap;
    }
    if (!recs.feasible) {
      wrap.append(
        el("div", {
          class: "banner infeasible",
          "data-testid": "infeasible-banner",
          text: "No single slot covers everyone; each list below drops as few people as it can.",
        }),
      );
    }
    const row = el("div", { class: "rec-row" });
    for (const rec of recs.recommendations) {
      row.append(this.buildRecommendationCard(rec));
    }
    wrap.append(row);
    return wrap;
  }

  private buildRecommendationCard(rec: RecommendationDoc): HTMLElement {
    const card = el("article", {
      class: "rec-card",
      "data-testid": "rec-card",
      "data-algorithm": rec.algorithm.label,
      "data-generated": rec.generated_at,
    });
    card.append(el("h4", { text: rec.algorithm.label }));
    if (rec.relaxed_away.length > 0) {
      card.append(
        el("p", {
          class: "relaxed",
          text: `Leaves out: ${rec.relaxed_away.join(", ")}`,
        }),
      );
    }
    const list = el("ol", { class: "ranked" });
    for (const entry of rec.ranked) {
      const item = el("li", {}, [
        el("button", {
          type: "button",
          class: "pick",
          text: `${entry.date} at ${entry.time}`,
          onclick: () => {
            this.pickDate = entry.date;
            this.pickTime = entry.time;
            this.render();
          },
        }),
        el("span", { class: "rec-score", text: ` score ${entry.score}` }),
        el("span", {
          class: "rec-people",
          text:
            ` sure: ${entry.sure.join(", ") || "nobody"};` +
            ` maybe: ${entry.maybe.join(", ") || "nobody"}`,
        }),
      ]);
      list.append(item);
    }
    if (rec.ranked.length === 0) {
      card.append(el("p", { class: "rec-empty", text: "Nothing to suggest." }));
    }
    card.append(list);
    return card;
  }

  private buildNotes(): HTMLElement {
    const wrap = el("section", { class: "notes-panel", "data-testid": "notes-panel" });
    wrap.append(el("h3", { text: "Notes from attendees" }));
    const notes = this.recs?.notes ?? [];
    if (notes.length === 0) {
      wrap.append(el("p", { text: "No notes yet." }));
      return wrap;
    }
    const list = el("ul", {});
    for (const note of notes) {
      list.append(el("li", {}, [el("strong", { text: `${note.attendee}: ` }), note.note]));
    }
    wrap.append(list);
    return wrap;
  }

  private buildFinalizeControls(poll: PollSummaryDoc, locked: boolean): HTMLElement {
    const wrap = el("section", { class: "finalize", "data-testid": "finalize-controls" });
    wrap.append(el("h3", { text: "Confirm the meeting" }));
    if (locked) {
      wrap.append(el("p", { text: "Already confirmed; nothing more to do here." }));
      return wrap;
    }
    const dateInput = el("input", {
      type: "text",
      "data-testid": "finalize-date",
      placeholder: "YYYY-MM-DD",
    });
    dateInput.value = this.pickDate;
    dateInput.addEventListener("input", () => {
      this.pickDate = dateInput.value;
    });
    const timeInput = el("input", {
      type: "text",
      "data-testid": "finalize-time",
      placeholder: "HH:MM",
    });
    timeInput.value = this.pickTime;
    timeInput.addEventListener("input", () => {
      this.pickTime = timeInput.value;
    });
    wrap.append(
      el("label", { text: "Date " }, [dateInput]),
      el("label", { text: " Time " }, [timeInput]),
      el("button", {
        type: "button",
        "data-testid": "finalize-button",
        text: "Confirm this slot",
        onclick: () => void this.finalize(),
      }),
    );
    return wrap;
  }
}
