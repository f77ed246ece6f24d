// Bubble renderers. Colors follow the server's rendering contract exactly;
// the summary renderer must not restyle or re-derive them.

import type { BotMessage, SummaryItem, UserAction } from "./api.js";

export const ROLE_COLORS: Record<string, string> = {
  critique: "#000000",
  suggestion: "#2F3756",
  rationale: "#CC0000",
};

export const KEYWORD_COLORS: Record<string, string> = {
  ui_component: "#660000",
  visual_element: "#660099",
};

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** One summary sentence with its keyword spans overlaid in their own colors. */
function renderSummaryItem(doc: Document, item: SummaryItem): HTMLElement {
  const container = el(doc, "p", "summary-item");
  const roleColor = ROLE_COLORS[item.role];
  if (roleColor === undefined) {
    console.warn(`unknown summary role "${item.role}"; rendering unstyled`);
  } else {
    container.setAttribute("style", `color: ${roleColor}`);
  }
  container.dataset.role = item.role;

  const spans = [...item.keywords].sort((a, b) => a.char_span[0] - b.char_span[0]);
  let cursor = 0;
  for (const keyword of spans) {
    const [lo, hi] = keyword.char_span;
    if (lo > cursor) {
      container.appendChild(doc.createTextNode(item.text.slice(cursor, lo)));
    }
    const mark = el(doc, "span", "summary-keyword", item.text.slice(lo, hi));
    const keywordColor = KEYWORD_COLORS[keyword.kind];
    if (keywordColor === undefined) {
      console.warn(`unknown keyword kind "${keyword.kind}"; rendering unstyled`);
    } else {
      mark.setAttribute("style", `color: ${keywordColor}`);
    }
    mark.dataset.kind = keyword.kind;
    container.appendChild(mark);
    cursor = hi;
  }
  if (cursor < item.text.length) {
    container.appendChild(doc.createTextNode(item.text.slice(cursor)));
  }
  return container;
}

export function renderStructuredSummary(
  doc: Document,
  payload: { text?: string; items?: SummaryItem[] },
): HTMLElement {
  const box = el(doc, "div", "summary");
  if (payload.text) box.appendChild(el(doc, "p", "lead", payload.text));
  const items = payload.items ?? [];
  if (items.length === 0) {
    box.appendChild(el(doc, "p", "placeholder", "no explanation available"));
    return box;
  }
  for (const item of items) {
    box.appendChild(renderSummaryItem(doc, item));
  }
  return box;
}

export function renderBotMessage(doc: Document, message: BotMessage): HTMLElement {
  const bubble = el(doc, "div", `bubble bot ${message.kind}`);
  bubble.dataset.kind = message.kind;
  const { payload } = message;
  switch (message.kind) {
    case "quiz": {
      if (payload.text) bubble.appendChild(el(doc, "p", "lead", payload.text));
      bubble.appendChild(el(doc, "p", "question", payload.question ?? ""));
      break;
    }
    case "hint": {
      if (payload.text) bubble.appendChild(el(doc, "p", "lead", payload.text));
      if (payload.hint) bubble.appendChild(el(doc, "p", "hint-text", payload.hint));
      break;
    }
    case "answer_reveal": {
      if (payload.text) bubble.appendChild(el(doc, "p", "lead", payload.text));
      bubble.appendChild(el(doc, "p", "answer", payload.answer ?? ""));
      break;
    }
    case "structured_summary":
      return structuredBubble(doc, message);
    case "apology": {
      if (payload.text) bubble.appendChild(el(doc, "p", "lead", payload.text));
      const suggestions = payload.suggestions ?? [];
      if (suggestions.length) {
        const row = el(doc, "p", "suggestions", `Try: ${suggestions.join(", ")}`);
        bubble.appendChild(row);
      }
      break;
    }
    default: {
      bubble.appendChild(el(doc, "p", "lead", payload.text ?? ""));
    }
  }
  return bubble;
}

function structuredBubble(doc: Document, message: BotMessage): HTMLElement {
  const bubble = el(doc, "div", "bubble bot structured_summary");
  bubble.dataset.kind = message.kind;
  bubble.appendChild(renderStructuredSummary(doc, message.payload));
  return bubble;
}

export const ACTION_LABELS: Record<string, string> = {
  hint: "I need a hint",
  dont_know: "I don't know",
  why: "Why?",
  next: "Next question",
  report_answer: "Report answer",
};

export function renderUserAction(doc: Document, action: UserAction): HTMLElement {
  const bubble = el(doc, "div", "bubble user");
  let label: string;
  switch (action.type) {
    case "choose_option":
      label = `Option ${action.index + 1}`;
      break;
    case "confirm_give_up":
      label = action.yes ? "Yes, give up" : "Keep trying";
      break;
    case "explore":
      label = action.kind === "ui" ? "Explore a UI component" : "Explore a visual element";
      break;
    case "submit_keyword":
      label = action.text;
      break;
    default:
      label = ACTION_LABELS[action.type] ?? action.type;
  }
  bubble.textContent = label;
  return bubble;
}
