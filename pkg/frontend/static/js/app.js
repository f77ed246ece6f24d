// Entry point: wires the two-pane chat layout to the API, adds the
// full-screen image viewer and a light state poll.
import { ApiClient } from "./api.js";
import { SessionView } from "./viewmodel.js";
const POLL_INTERVAL_MS = 5000;
function required(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing #${id}`);
    return node;
}
async function boot() {
    const api = new ApiClient("");
    const view = new SessionView(api, document, {
        transcript: required("transcript"),
        actions: required("actions"),
        postTitle: required("post-title"),
        image: required("quiz-image"),
        progress: required("progress"),
    });
    // focus picker: checked clusters become the session focus
    const form = required("focus-form");
    const startButton = required("start-session");
    startButton.addEventListener("click", async () => {
        const focus = Array.from(form.querySelectorAll("input[name=cluster]:checked")).map((box) => box.value);
        if (focus.length === 0)
            return;
        startButton.disabled = true;
        try {
            await view.start(focus);
            required("setup").hidden = true;
            required("chat").hidden = false;
        }
        catch (error) {
            startButton.disabled = false;
            const note = required("setup-error");
            note.textContent = error instanceof Error ? error.message : String(error);
            note.hidden = false;
        }
    });
    // full-screen image zoom
    const image = required("quiz-image");
    const overlay = required("image-overlay");
    const overlayImage = required("image-overlay-img");
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
