// Entry point: wires the two-pane chat layout to the API, adds the
// full-screen image viewer and a light state poll.

import { ApiClient } from "./api.js";
import { SessionView } from "./viewmodel.js";

const POLL_INTERVAL_MS = 5000;

function required(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const view = new SessionView(api, document, {
    transcript: required("transcript"),
    actions: required("actions"),
    postTitle: required("post-title"),
    image: required("quiz-image") as HTMLImageElement,
    progress: required("progress"),
  });

  // focus picker: checked clusters become the session focus
  const form = required("focus-form") as HTMLFormElement;
  const startButton = required("start-session") as HTMLButtonElement;
  startButton.addEventListener("click", async () => {
    const focus = Array.from(
      form.querySelectorAll<HTMLInputElement>("input[name=cluster]:checked"),
    ).map((box) => box.value);
    if (focus.length === 0) return;
    startButton.disabled = true;
    try {
      await view.start(focus);
      required("setup").hidden = true;
      required("chat").hidden = false;
    } catch (error) {
      startButton.disabled = false;
      const note = required("setup-error");
      note.textContent = error instanceof Error ? error.message : String(error);
      note.hidden = false;
    }
  });

  // full-screen image zoom
  const image = required("quiz-image") as HTMLImageElement;
  const overlay = required("image-overlay");
  const overlayImage = required("image-overlay-img") as HTMLImageElement;
  image.addEventListener("click", () => {
    overlayImage.src = image.src;
    overlay.hidden = false;
  });
  overlay.addEventListener("click", () => {
    overlay.hidden = true;
  });

  // periodic poll keeps score/per-cluster tallies fresh
  setInterval(() => {
    if (view.sessionId && !view.inFlight) {
      void view.refreshProgress().catch(() => undefined);
    }
  }, POLL_INTERVAL_MS);
}

void boot();
