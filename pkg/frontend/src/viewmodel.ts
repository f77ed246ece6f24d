// Session view model: owns the transcript pane, the action bar, and the
// right-hand context (post title, image, progress). Pure client of the API;
// buttons always mirror the server-reported legal actions.

import { ApiClient, ApiError } from "./api.js";
import type { BotMessage, Score, SessionResponse, UserAction } from "./api.js";
import { ACTION_LABELS, renderBotMessage, renderUserAction } from "./render.js";

export interface ViewElements {
  transcript: HTMLElement;
  actions: HTMLElement;
  postTitle: HTMLElement;
  image: HTMLImageElement;
  progress: HTMLElement;
}

export class SessionView {
  sessionId: string | null = null;
  state = "";
  legalActions: string[] = [];
  score: Score = { correct: 0, answered: 0, give_ups: 0 };
  byCluster: Record<string, number> = {};
  currentOptions: string[] = [];
  inFlight = false;
  seenMessages: BotMessage[] = [];

  constructor(
    private api: ApiClient,
    private doc: Document,
    private ui: ViewElements,
  ) {}

  async start(focus: string[], seed?: number): Promise<void> {
    const session = await this.api.createSession(focus, seed);
    this.sessionId = session.session_id;
    this.applyResponse(session);
  }

  /** Send one action. Buttons are disabled while the request is in flight;
   * a 409 means the client drifted, so it re-syncs from the server. */
  async dispatch(action: UserAction): Promise<void> {
    if (!this.sessionId || this.inFlight) return;
    if (!this.legalActions.includes(action.type)) return;
    this.inFlight = true;
    this.renderActions();
    try {
      this.appendUserBubble(action);
      const response = await this.api.postAction(this.sessionId, action);
      this.applyResponse(response);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        await this.resync();
      } else {
        throw error;
      }
    } finally {
      this.inFlight = false;
      this.renderActions();
    }
  }

  /** Light poll: refresh score and tallies without touching the transcript. */
  async refreshProgress(): Promise<void> {
    if (!this.sessionId) return;
    const detail = await this.api.getSession(this.sessionId);
    this.score = detail.score;
    this.byCluster = detail.performance.payload.by_cluster;
    this.renderProgress();
  }

  /** Rebuild transcript and state from the server record. */
  async resync(): Promise<void> {
    if (!this.sessionId) return;
    const detail = await this.api.getSession(this.sessionId);
    this.state = detail.state;
    this.legalActions = detail.legal_actions;
    this.score = detail.score;
    this.byCluster = detail.performance.payload.by_cluster;
    this.ui.transcript.textContent = "";
    this.seenMessages = [];
    for (const entry of detail.transcript) {
      if (entry.who === "bot" && entry.message) {
        const message = entry.message as BotMessage;
        this.trackQuizContext(message);
        this.seenMessages.push(message);
        this.ui.transcript.appendChild(renderBotMessage(this.doc, message));
      } else if (entry.who === "user" && entry.action) {
        this.ui.transcript.appendChild(renderUserAction(this.doc, entry.action));
      }
    }
    this.renderActions();
    this.renderProgress();
  }

  private applyResponse(response: SessionResponse): void {
    this.state = response.state;
    this.legalActions = response.legal_actions;
    this.score = response.score;
    for (const message of response.messages) {
      this.trackQuizContext(message);
      this.seenMessages.push(message);
      this.ui.transcript.appendChild(renderBotMessage(this.doc, message));
    }
    this.renderActions();
    this.renderProgress();
  }

  private trackQuizContext(message: BotMessage): void {
    if (message.kind !== "quiz") return;
    this.currentOptions = message.payload.options ?? [];
    this.ui.postTitle.textContent = message.payload.post_title ?? "";
    const url = this.api.imageUrl(message.payload.image_ref);
    if (url) {
      this.ui.image.src = url;
      this.ui.image.hidden = false;
    } else {
      this.ui.image.hidden = true;
    }
  }

  private appendUserBubble(action: UserAction): void {
    this.ui.transcript.appendChild(renderUserAction(this.doc, action));
  }

  private button(label: string, onClick: () => void, className = "action"): HTMLButtonElement {
    const button = this.doc.createElement("button");
    button.className = className;
    button.textContent = label;
    button.disabled = this.inFlight;
    button.addEventListener("click", onClick);
    return button;
  }

  /** The action bar holds exactly the controls for the legal actions. */
  renderActions(): void {
    const bar = this.ui.actions;
    bar.textContent = "";
    for (const actionType of this.legalActions) {
      switch (actionType) {
        case "choose_option":
          this.currentOptions.forEach((option, index) => {
            bar.appendChild(
              this.button(option, () => void this.dispatch({ type: "choose_option", index }), "action option"),
            );
          });
          break;
        case "confirm_give_up": {
          const pair = this.doc.createElement("div");
          pair.className = "confirm-pair";
          pair.appendChild(
            this.button("Yes, give up", () => void this.dispatch({ type: "confirm_give_up", yes: true })),
          );
          pair.appendChild(
            this.button("Keep trying", () => void this.dispatch({ type: "confirm_give_up", yes: false })),
          );
          bar.appendChild(pair);
          break;
        }
        case "explore":
          bar.appendChild(
            this.button("Explore a UI component", () => void this.dispatch({ type: "explore", kind: "ui" })),
          );
          bar.appendChild(
            this.button("Explore a visual element", () => void this.dispatch({ type: "explore", kind: "visual" })),
          );
          break;
        case "submit_keyword": {
          const input = this.doc.createElement("input");
          input.type = "text";
          input.className = "keyword-input";
          input.placeholder = "type a keyword";
          input.disabled = this.inFlight;
          const send = this.button("Send", () => {
            const text = input.value.trim();
            if (text) void this.dispatch({ type: "submit_keyword", text });
          });
          input.addEventListener("keydown", (event) => {
            if ((event as KeyboardEvent).key === "Enter") send.click();
          });
          bar.appendChild(input);
          bar.appendChild(send);
          break;
        }
        default:
          bar.appendChild(
            this.button(ACTION_LABELS[actionType] ?? actionType, () =>
              void this.dispatch({ type: actionType } as UserAction),
            ),
          );
      }
    }
  }

  renderProgress(): void {
    const clusters = Object.entries(this.byCluster)
      .map(([cluster, count]) => `${cluster}: ${count}`)
      .join("  ");
    this.ui.progress.textContent =
      `${this.score.correct} / ${this.score.answered} correct` +
      (this.score.give_ups ? `, ${this.score.give_ups} passed` : "") +
      (clusters ? ` — ${clusters}` : "");
  }
}
