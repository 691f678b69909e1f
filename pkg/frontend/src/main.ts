/** Browser entry point: session form, then the workbench. */

import { ApiClient } from "./api.js";
import { Controller } from "./controller.js";

function bootstrap(): void {
  const root = document.getElementById("app");
  const form = document.getElementById("session-form") as HTMLFormElement | null;
  if (!root || !form) return;

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const baseUrl = String(data.get("server") || "http://127.0.0.1:8000");
    const group = String(data.get("group") || "none");
    const phase = String(data.get("phase") || "learning");
    const pseudonym = String(data.get("pseudonym") || "") || undefined;

    const api = new ApiClient(baseUrl);
    const controller = new Controller(api, root);
    form.style.display = "none";
    void controller.startSession(group, phase, pseudonym).catch((err) => {
      form.style.display = "";
      root.textContent = `Could not start the session: ${err}`;
    });
  });
}

document.addEventListener("DOMContentLoaded", bootstrap);
