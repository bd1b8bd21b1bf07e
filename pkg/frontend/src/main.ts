/**
 * Page entry point: wire the app to the real HTTP client and keep the
 * conversation id in the URL fragment so a refresh finds the transcript
 * again (the server replays it from its own store).
 */
import { HttpApi } from "./api";
import { createApp } from "./app";

function boot(): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const handle = createApp(root, new HttpApi(""), {
    onConversationChange: (id) => {
      window.location.hash = id;
    },
  });
  const existing = window.location.hash.replace(/^#/, "");
  if (existing) {
    void handle.restore(existing);
  }
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
