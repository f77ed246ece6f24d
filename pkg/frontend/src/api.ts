// Typed client for the tutoring chat API. The UI never derives quiz logic
// itself; everything comes from these responses.

export interface Score {
  correct: number;
  answered: number;
  give_ups: number;
}

export interface SummaryKeyword {
  text: string;
  kind: string;
  color: string;
  char_span: [number, number];
}

export interface SummaryItem {
  text: string;
  role: string;
  color: string;
  keywords: SummaryKeyword[];
}

export interface BotMessage {
  kind: string;
  template_id: string;
  payload: {
    text?: string;
    quiz_id?: string;
    question?: string;
    options?: string[];
    post_title?: string;
    image_ref?: string | null;
    query_mode?: string;
    hint?: string;
    correct?: boolean | null;
    gave_up?: boolean;
    answer?: string;
    chosen?: string | null;
    kind?: string;
    suggestions?: string[];
    items?: SummaryItem[];
    source_comment_id?: string;
    [key: string]: unknown;
  };
}

export interface SessionResponse {
  session_id: string;
  seed: number;
  messages: BotMessage[];
  state: string;
  score: Score;
  legal_actions: string[];
}

export interface TranscriptEntry {
  who: "bot" | "user";
  message?: { kind: string; template_id: string; payload: BotMessage["payload"] };
  action?: UserAction;
}

export interface SessionDetail {
  session_id: string;
  seed: number;
  focus: string[];
  state: string;
  score: Score;
  legal_actions: string[];
  transcript: TranscriptEntry[];
  performance: { kind: string; payload: { by_cluster: Record<string, number> } };
}

export interface PoolStats {
  total: number;
  by_visual_cluster: Record<string, number>;
  needs_review: number;
}

export type UserAction =
  | { type: "choose_option"; index: number }
  | { type: "hint" }
  | { type: "dont_know" }
  | { type: "confirm_give_up"; yes: boolean }
  | { type: "why" }
  | { type: "next" }
  | { type: "explore"; kind: "ui" | "visual" }
  | { type: "submit_keyword"; text: string }
  | { type: "report_answer" };

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: { code?: string; message?: string; legal_actions?: string[] },
  ) {
    super(body.message ?? `API error ${status}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  createSession(focus: string[], seed?: number): Promise<SessionResponse> {
    const body: { focus: string[]; seed?: number } = { focus };
    if (seed !== undefined) body.seed = seed;
    return this.request<SessionResponse>("POST", "/v1/sessions", body);
  }

  postAction(sessionId: string, action: UserAction): Promise<SessionResponse> {
    return this.request<SessionResponse>(
      "POST",
      `/v1/sessions/${encodeURIComponent(sessionId)}/actions`,
      action,
    );
  }

  getSession(sessionId: string): Promise<SessionDetail> {
    return this.request<SessionDetail>(
      "GET",
      `/v1/sessions/${encodeURIComponent(sessionId)}`,
    );
  }

  poolStats(): Promise<PoolStats> {
    return this.request<PoolStats>("GET", "/v1/pool/stats");
  }

  imageUrl(imageRef: string | null | undefined): string | null {
    if (!imageRef) return null;
    if (/^https?:\/\//.test(imageRef)) return imageRef;
    return `${this.baseUrl}/v1/images/${encodeURIComponent(imageRef)}`;
  }
}
