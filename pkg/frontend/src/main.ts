/** Page bootstrap: wire the file picker, load the server's default model. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

async function start(): Promise<void> {
  const api = new ApiClient();
  const app = new App(api, {
    panel: document.getElementById("panel") as HTMLElement,
    log: document.getElementById("log") as HTMLElement,
    messages: document.getElementById("messages") as HTMLElement,
  });

  const picker = document.getElementById("model-file") as HTMLInputElement;
  picker.addEventListener("change", async () => {
    const file = picker.files?.[0];
    if (file) await app.loadModel(await file.text());
  });

  const fallback = document.getElementById("no-model") as HTMLElement;
  const def = await api.defaultModel().catch(() => null);
  if (def) {
    fallback.hidden = true;
    await app.loadModel(def.source);
  } else {
    fallback.hidden = false;
  }
}

document.addEventListener("DOMContentLoaded", () => void start());
