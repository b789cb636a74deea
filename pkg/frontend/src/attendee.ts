// Attendee screen: mark availability on whatever view the service decided to
// show, expand or collapse it, leave a note, save.
//
// Marks live client-side in a Map until saved. Switching between the focused
// view and the full calendar must not touch that Map; only an explicit save
// followed by a reload replaces it with what the server echoed back.

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import {
  MarkStore,
  cycleMark,
  isAdapted,
  levelOf,
  marksFromWire,
  marksToWire,
  popularityBucket,
  popularityText,
  setLevel,
  splitLabel,
  visibleDates,
  visibleTimes,
} from "./model.js";
import type { DisplayLevel, ViewDoc } from "./types.js";

function levelClass(level: DisplayLevel): string {
  return `level-${level}`;
}

export class AttendeeScreen {
  private readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly pollId: string;
  private readonly attendee: string;

  private view: ViewDoc | null = null;
  private marks: MarkStore = new Map();
  private seeded = false;
  private note = "";
  private status = "";
  private error = "";
  private dragLevel: DisplayLevel | null = null;

  constructor(root: HTMLElement, api: ApiClient, pollId: string, attendee: string) {
    this.root = root;
    this.api = api;
    this.pollId = pollId;
    this.attendee = attendee;
    document.addEventListener("mouseup", () => {
      this.dragLevel = null;
    });
  }

  async load(): Promise<void> {
    try {
      const view = await this.api.getView(this.pollId, this.attendee);
      this.view = view;
      if (!this.seeded) {
        // first paint, or right after a save: server state is the baseline
        this.marks = marksFromWire(view.own_marks);
        this.seeded = true;
      }
      this.error = "";
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  /** Swap between the focused view and the full grid. Marks stay put. */
  async toggleExpansion(): Promise<void> {
    if (!this.view) return;
    const wantFull = this.view.plan.can_expand;
    try {
      this.view = await this.api.getView(this.pollId, this.attendee, wantFull);
      this.error = "";
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  async save(): Promise<void> {
    if (!this.view) return;
    try {
      const reply = await this.api.submitResponse(
        this.pollId,
        this.attendee,
        marksToWire(this.marks),
        this.note,
      );
      this.status = `Saved. ${reply.respondents} of ${this.view.group_size} have responded.`;
      this.error = "";
      this.seeded = false;
      await this.load();
      return;
    } catch (err) {
      if (err instanceof ApiError) {
        this.error = err.message;
      } else {
        this.error = String(err);
      }
      this.render();
    }
  }

  wireMarks(): Record<string, string> {
    return marksToWire(this.marks);
  }

  private pressCell(button: HTMLButtonElement, label: string): void {
    const level = cycleMark(this.marks, label);
    this.dragLevel = level;
    this.paintCell(button, label, level);
  }

  private enterCell(button: HTMLButtonElement, label: string): void {
    if (this.dragLevel === null) return;
    setLevel(this.marks, label, this.dragLevel);
    this.paintCell(button, label, this.dragLevel);
  }

  private paintCell(
    button: HTMLButtonElement,
    label: string,
    level: DisplayLevel,
  ): void {
    const view = this.view!;
    const bucket = popularityBucket(view.popularity[label], view.respondents);
    button.className = `slot ${levelClass(level)} pop-${bucket}`;
    if (button.dataset["kind"] === "option") {
      const state = button.querySelector(".option-level");
      if (state) state.textContent = level;
    }
  }

  private render(): void {
    clear(this.root);
    const view = this.view;
    if (!view) {
      this.root.append(
        el("p", { "data-testid": "error-line", role: "alert", text: this.error || "Loading failed." }),
      );
      return;
    }
    const locked = view.finalized !== null;

    this.root.append(
      el("h2", { text: "Mark your availability" }),
      el("p", {
        class: "respondents",
        text: `${view.respondents} of ${view.group_size} invited people have responded.`,
      }),
    );

    if (locked) {
      this.root.append(
        el("div", {
          class: "banner finalized",
          "data-testid": "finalized-banner",
          text: `This meeting is confirmed for ${view.finalized!.date} at ${view.finalized!.time}. Votes are closed.`,
        }),
      );
    }

    if (isAdapted(view)) {
      this.root.append(
        el("div", { class: "banner notice", "data-testid": "adaptation-notice" }, [
          el("strong", { text: "Showing a focused set of options. " }),
          el("span", { text: view.plan.reason }),
        ]),
      );
    }

    this.root.append(
      el("button", {
        type: "button",
        class: "toggle",
        "data-testid": "toggle-view",
        text: view.plan.can_expand ? "See more options" : "See fewer options",
        onclick: () => void this.toggleExpansion(),
      }),
    );

    const isPoll =
      view.plan.format === "poll_of_promising" ||
      view.plan.format === "poll_of_possible";
    this.root.append(isPoll ? this.buildOptionList(view, locked) : this.buildCalendar(view, locked));

    const noteBox = el("textarea", {
      class: "note",
      "data-testid": "note-input",
      placeholder: "Anything the organizer should know?",
      oninput: (ev: Event) => {
        this.note = (ev.target as HTMLTextAreaElement).value;
      },
    });
    noteBox.value = this.note;
    if (locked) noteBox.disabled = true;

    const saveButton = el("button", {
      type: "button",
      class: "save",
      "data-testid": "save-response",
      text: "Save my availability",
      onclick: () => void this.save(),
    });
    if (locked) saveButton.disabled = true;

    this.root.append(
      el("label", { class: "note-label", text: "Note to the organizer" }),
      noteBox,
      saveButton,
    );
    if (this.status) {
      this.root.append(el("p", { class: "status", "data-testid": "status-line", text: this.status }));
    }
    if (this.error) {
      this.root.append(
        el("p", { class: "error", role: "alert", "data-testid": "error-line", text: this.error }),
      );
    }
  }

  private slotButton(view: ViewDoc, label: string, locked: boolean): HTMLButtonElement {
    const button = el("button", { type: "button", "data-slot": label });
    button.title = popularityText(view.popularity[label]);
    this.paintCell(button, label, levelOf(this.marks, label));
    if (locked) {
      button.disabled = true;
    } else {
      button.addEventListener("mousedown", (ev) => {
        ev.preventDefault();
        this.pressCell(button, label);
      });
      button.addEventListener("mouseenter", () => this.enterCell(button, label));
    }
    return button;
  }

  private buildCalendar(view: ViewDoc, locked: boolean): HTMLElement {
    const dates = visibleDates(view);
    const times = visibleTimes(view);
    const shown = new Set(view.plan.slots);

    const head = el("tr", {}, [el("th", { text: "" })]);
    for (const date of dates) {
      head.append(el("th", { scope: "col", text: date }));
    }
    const body: HTMLElement[] = [head];
    for (const time of times) {
      const row = el("tr", {}, [el("th", { scope: "row", text: time })]);
      for (const date of dates) {
        const label = `${date}T${time}`;
        const cell = el("td", {});
        if (shown.has(label)) {
          cell.append(this.slotButton(view, label, locked));
        } else {
          cell.className = "gap";
        }
        row.append(cell);
      }
      body.push(row);
    }
    const table = el("table", { class: "calendar", "data-testid": "calendar" }, body);
    return el("div", { class: "calendar-scroll" }, [table]);
  }

  private buildOptionList(view: ViewDoc, locked: boolean): HTMLElement {
    const list = el("ul", { class: "options", "data-testid": "option-list" });
    for (const label of view.plan.slots) {
      const { date, time } = splitLabel(label);
      const button = this.slotButton(view, label, locked);
      button.dataset["kind"] = "option";
      button.append(
        el("span", { class: "option-level", text: levelOf(this.marks, label) }),
      );
      list.append(
        el("li", {}, [
          el("span", { class: "option-when", text: `${date} at ${time}` }),
          button,
          el("span", { class: "option-pop", text: popularityText(view.popularity[label]) }),
        ]),
      );
    }
    return list;
  }
}
