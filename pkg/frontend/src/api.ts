// Fetch wrapper. Every screen talks to the service through this and nothing
// else, so the mocked surface in tests is exactly the real one.

import type {
  CreatePollBody,
  PollSummaryDoc,
  PrioritiesReply,
  PriorityName,
  RecommendationsDoc,
  SubmitReply,
  ViewDoc,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

async function readError(res: Response): Promise<never> {
  let message = `request failed with status ${res.status}`;
  try {
    const body = (await res.json()) as { error?: unknown };
    if (typeof body.error === "string" && body.error) {
      message = body.error;
    }
  } catch {
    // non-JSON error body, keep the generic message
  }
  throw new ApiError(res.status, message);
}

export class ApiClient {
  readonly baseUrl: string;

  constructor(baseUrl = "") {
    // trailing slash would double up when paths are appended
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.baseUrl + path, {
      headers: init?.body ? { "content-type": "application/json" } : undefined,
      ...init,
    });
    if (!res.ok) {
      await readError(res);
    }
    return (await res.json()) as T;
  }

  createPoll(body: CreatePollBody): Promise<PollSummaryDoc> {
    return this.request("/polls", {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  getPoll(pollId: string): Promise<PollSummaryDoc> {
    return this.request(`/polls/${encodeURIComponent(pollId)}`);
  }

  getView(
    pollId: string,
    attendee?: string,
    expand?: boolean,
  ): Promise<ViewDoc> {
    const params = new URLSearchParams();
    if (attendee) params.set("attendee", attendee);
    if (expand !== undefined) params.set("expand", String(expand));
    const query = params.toString();
    const suffix = query ? `?${query}` : "";
    return this.request(`/polls/${encodeURIComponent(pollId)}/view${suffix}`);
  }

  submitResponse(
    pollId: string,
    attendee: string,
    marks: Record<string, string>,
    note?: string,
  ): Promise<SubmitReply> {
    return this.request(`/polls/${encodeURIComponent(pollId)}/responses`, {
      method: "POST",
      body: JSON.stringify({ attendee, marks, note: note || null }),
    });
  }

  getRecommendations(pollId: string, k?: number): Promise<RecommendationsDoc> {
    const suffix = k === undefined ? "" : `?k=${k}`;
    return this.request(
      `/polls/${encodeURIComponent(pollId)}/recommendations${suffix}`,
    );
  }

  setPriority(
    pollId: string,
    attendee: string,
    priority: PriorityName,
  ): Promise<PrioritiesReply> {
    const path =
      `/polls/${encodeURIComponent(pollId)}` +
      `/priorities/${encodeURIComponent(attendee)}`;
    return this.request(path, {
      method: "PUT",
      body: JSON.stringify({ priority }),
    });
  }

  finalize(pollId: string, date: string, time: string): Promise<PollSummaryDoc> {
    return this.request(`/polls/${encodeURIComponent(pollId)}/finalize`, {
      method: "POST",
      body: JSON.stringify({ date, time }),
    });
  }
}
