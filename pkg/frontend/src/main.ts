// Entry point. The URL carries who you are and which poll you are looking at:
//   ?poll=ID&attendee=NAME        attendee screen
//   ?poll=ID&role=organizer       organizer screen
// With no poll parameter a small create form is shown.

import { ApiClient } from "./api.js";
import { AttendeeScreen } from "./attendee.js";
import { clear, el } from "./dom.js";
import { OrganizerScreen } from "./organizer.js";

function parseCsv(text: string): string[] {
  return text
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

function renderCreateForm(root: HTMLElement, api: ApiClient): void {
  clear(root);
  const dates = el("input", { type: "text", placeholder: "2026-09-07, 2026-09-08" });
  const start = el("input", { type: "text", placeholder: "09:00" });
  const end = el("input", { type: "text", placeholder: "17:00" });
  const attendees = el("input", { type: "text", placeholder: "ana, ben, chris" });
  const out = el("div", { class: "create-result" });

  const submit = el("button", {
    type: "button",
    text: "Create poll",
    onclick: () => {
      void (async () => {
        clear(out);
        try {
          const poll = await api.createPoll({
            dates: parseCsv(dates.value),
            start_time: start.value || "09:00",
            end_time: end.value || "17:00",
            attendees: parseCsv(attendees.value),
          });
          const links = el("ul", {});
          for (const name of poll.roster) {
            const href = `?poll=${encodeURIComponent(poll.poll_id)}&attendee=${encodeURIComponent(name)}`;
            links.append(el("li", {}, [el("a", { href, text: `${name}'s voting link` })]));
          }
          const orgHref = `?poll=${encodeURIComponent(poll.poll_id)}&role=organizer`;
          out.append(
            el("p", { text: `Poll ${poll.poll_id} created.` }),
            el("p", {}, [el("a", { href: orgHref, text: "Organizer dashboard" })]),
            links,
          );
        } catch (err) {
          out.append(
            el("p", { class: "error", role: "alert", text: err instanceof Error ? err.message : String(err) }),
          );
        }
      })();
    },
  });

  root.append(
    el("h2", { text: "New scheduling poll" }),
    el("label", { text: "Dates (comma separated) " }, [dates]),
    el("label", { text: "First start time " }, [start]),
    el("label", { text: "End of day " }, [end]),
    el("label", { text: "Invitees " }, [attendees]),
    submit,
    out,
  );
}

export function mount(root: HTMLElement, api: ApiClient, search: string): void {
  const params = new URLSearchParams(search);
  const pollId = params.get("poll");
  if (!pollId) {
    renderCreateForm(root, api);
    return;
  }
  if (params.get("role") === "organizer") {
    void new OrganizerScreen(root, api, pollId).load();
    return;
  }
  const attendee = params.get("attendee");
  if (!attendee) {
    clear(root);
    root.append(
      el("p", {
        role: "alert",
        text: "Add ?attendee=YOURNAME (or &role=organizer) to the address.",
      }),
    );
    return;
  }
  void new AttendeeScreen(root, api, pollId, attendee).load();
}

const rootNode = document.getElementById("app");
if (rootNode) {
  const base = rootNode.dataset["apiBase"] ?? "";
  mount(rootNode, new ApiClient(base), window.location.search);
}
