/**
 * The chat page: article pane, transcript, composer, and a debug table
 * showing every candidate the engine weighed for the latest reply.
 *
 * The page never chooses or reorders replies.  The reply bubble shows the
 * server's "reply" string verbatim and the debug table renders candidates
 * in exactly the order the server sent them; the only client-side logic
 * is presentation and error recovery.
 *
 * Failure handling:
 *   - network failure or 5xx while sending: the user's bubble stays marked
 *     pending, an inline message appears, and a retry button re-sends the
 *     same text;
 *   - 404: the conversation is gone (service restarted with a fresh data
 *     directory, or a bad link); the page switches to an "expired" state
 *     and the composer locks;
 *   - any other rejection: the message is shown inline and the composer
 *     unlocks so the user can continue.
 */
import {
  ApiClient,
  ApiError,
  CandidateWire,
  ConversationRecord,
  NetworkError,
} from "./api";

export type Phase = "setup" | "creating" | "ready" | "sending" | "expired";

export interface AppOptions {
  onConversationChange?: (conversationId: string) => void;
}

export interface AppHandle {
  start(): Promise<void>;
  send(): Promise<void>;
  retry(): Promise<void>;
  reload(): Promise<void>;
  restore(conversationId: string): Promise<void>;
  readonly phase: Phase;
  readonly conversationId: string | null;
  readonly inflight: Promise<void> | null;
}

const LAYOUT = `
  <header class="masthead">
    <h1>talkerbox</h1>
    <p class="tagline">a committee of talkers, one reply</p>
  </header>
  <section id="setup" class="pane">
    <h2>Start a conversation</h2>
    <p class="hint">Paste an article; the bot reads it and takes questions.</p>
    <textarea id="article" rows="6" placeholder="Paste an article here"></textarea>
    <div class="row">
      <label for="seed">seed (optional)</label>
      <input id="seed" inputmode="numeric" placeholder="random" />
      <button id="start" type="button">Start</button>
    </div>
    <div id="setup-error" class="error" hidden></div>
  </section>
  <section id="chat" class="pane" hidden>
    <div class="chat-meta">
      <span>conversation <code id="conversation-id"></code></span>
      <button id="reload" type="button" title="Re-fetch the transcript from the server">Reload</button>
    </div>
    <div id="transcript" aria-live="polite"></div>
    <form id="composer">
      <input id="message" autocomplete="off" placeholder="Say something" />
      <button id="send" type="submit">Send</button>
    </form>
    <div class="status-row">
      <div id="status" class="status" hidden></div>
      <button id="retry" type="button" hidden>Retry</button>
    </div>
    <details id="debug" open>
      <summary>Candidates for the last reply</summary>
      <div class="table-scroll">
        <table>
          <thead>
            <tr>
              <th>talker</th>
              <th>round</th>
              <th>raw</th>
              <th>calibrated</th>
              <th>text</th>
            </tr>
          </thead>
          <tbody id="debug-rows"></tbody>
        </table>
      </div>
    </details>
  </section>
`;

export function createApp(root: HTMLElement, api: ApiClient, options: AppOptions = {}): AppHandle {
  root.innerHTML = LAYOUT;
  const doc = root.ownerDocument;

  const pick = <T extends HTMLElement>(id: string): T => {
    const el = root.querySelector<T>(`#${id}`);
    if (!el) {
      throw new Error(`layout is missing #${id}`);
    }
    return el;
  };

  const articleInput = pick<HTMLTextAreaElement>("article");
  const seedInput = pick<HTMLInputElement>("seed");
  const startButton = pick<HTMLButtonElement>("start");
  const setupError = pick<HTMLElement>("setup-error");
  const setupPane = pick<HTMLElement>("setup");
  const chatPane = pick<HTMLElement>("chat");
  const conversationLabel = pick<HTMLElement>("conversation-id");
  const reloadButton = pick<HTMLButtonElement>("reload");
  const transcript = pick<HTMLElement>("transcript");
  const composer = pick<HTMLFormElement>("composer");
  const messageInput = pick<HTMLInputElement>("message");
  const sendButton = pick<HTMLButtonElement>("send");
  const statusLine = pick<HTMLElement>("status");
  const retryButton = pick<HTMLButtonElement>("retry");
  const debugRows = pick<HTMLElement>("debug-rows");

  let phase: Phase = "setup";
  let conversationId: string | null = null;
  let inflight: Promise<void> | null = null;
  let pendingText: string | null = null;
  let pendingBubble: HTMLElement | null = null;

  function applyPhase(next: Phase): void {
    phase = next;
    startButton.disabled = next === "creating";
    const locked = next === "sending" || next === "expired";
    sendButton.disabled = locked;
    messageInput.disabled = next === "expired";
    reloadButton.disabled = next === "expired";
    chatPane.classList.toggle("expired", next === "expired");
  }

  function setStatus(text: string, kind: "error" | "info" | null): void {
    if (kind === null) {
      statusLine.hidden = true;
      statusLine.textContent = "";
      statusLine.className = "status";
    } else {
      statusLine.hidden = false;
      statusLine.textContent = text;
      statusLine.className = `status ${kind}`;
    }
  }

  function addBubble(speaker: "user" | "bot", text: string, pending = false): HTMLElement {
    const bubble = doc.createElement("div");
    bubble.className = `bubble ${speaker}`;
    if (pending) {
      bubble.dataset.pending = "true";
    }
    const who = doc.createElement("span");
    who.className = "speaker";
    who.textContent = speaker === "user" ? "you" : "bot";
    const body = doc.createElement("span");
    body.className = "text";
    body.textContent = text;
    bubble.append(who, body);
    transcript.appendChild(bubble);
    bubble.scrollIntoView?.({ block: "end" });
    return bubble;
  }

  function renderDebug(candidates: CandidateWire[], selectedTalker: string | null, reply: string | null): void {
    debugRows.textContent = "";
    if (candidates.length === 0) {
      const row = doc.createElement("tr");
      const cell = doc.createElement("td");
      cell.colSpan = 5;
      cell.className = "empty";
      cell.textContent = "no candidates recorded";
      row.appendChild(cell);
      debugRows.appendChild(row);
      return;
    }
    // Render in the order received; ranking is the server's job.
    let highlighted = false;
    for (const cand of candidates) {
      const row = doc.createElement("tr");
      const isSelected =
        !highlighted && cand.talker === selectedTalker && (reply === null || cand.text === reply);
      if (isSelected) {
        row.classList.add("selected");
        highlighted = true;
      }
      const talker = doc.createElement("td");
      talker.className = "talker";
      talker.textContent = cand.talker;
      const round = doc.createElement("td");
      const tag = doc.createElement("span");
      tag.className = `tag round-${cand.round}`;
      tag.textContent = cand.round;
      round.appendChild(tag);
      const raw = doc.createElement("td");
      raw.className = "num";
      raw.textContent = cand.raw.toFixed(3);
      const calibrated = doc.createElement("td");
      calibrated.className = "num";
      calibrated.textContent = cand.calibrated.toFixed(3);
      const text = doc.createElement("td");
      text.className = "candidate-text";
      text.textContent = cand.text;
      row.append(talker, round, raw, calibrated, text);
      debugRows.appendChild(row);
    }
  }

  function enterChat(id: string): void {
    conversationId = id;
    conversationLabel.textContent = id;
    setupPane.hidden = true;
    chatPane.hidden = false;
    options.onConversationChange?.(id);
  }

  function renderTranscript(record: ConversationRecord): void {
    transcript.textContent = "";
    for (const turn of record.turns) {
      addBubble(turn.speaker === "user" ? "user" : "bot", turn.text);
    }
    const lastBot = [...record.turns].reverse().find((t) => t.candidates !== null);
    if (lastBot && lastBot.candidates) {
      renderDebug(lastBot.candidates, lastBot.talker_id, lastBot.text);
    } else {
      renderDebug([], null, null);
    }
  }

  function expire(): void {
    setStatus("This conversation has expired. Reload the page to start a new one.", "error");
    retryButton.hidden = true;
    if (pendingBubble) {
      pendingBubble.classList.add("failed");
      delete pendingBubble.dataset.pending;
    }
    pendingBubble = null;
    pendingText = null;
    applyPhase("expired");
  }

  async function start(): Promise<void> {
    if (phase !== "setup") {
      return;
    }
    const article = articleInput.value.trim();
    if (!article) {
      setupError.hidden = false;
      setupError.textContent = "Paste an article first; the bot needs something to read.";
      return;
    }
    let seed: number | undefined;
    const seedRaw = seedInput.value.trim();
    if (seedRaw) {
      if (!/^-?\d+$/.test(seedRaw)) {
        setupError.hidden = false;
        setupError.textContent = "The seed must be an integer.";
        return;
      }
      seed = Number.parseInt(seedRaw, 10);
    }
    setupError.hidden = true;
    applyPhase("creating");
    try {
      const id = await api.createConversation(article, seed);
      enterChat(id);
      applyPhase("ready");
    } catch (err) {
      applyPhase("setup");
      setupError.hidden = false;
      setupError.textContent =
        err instanceof NetworkError
          ? "Could not reach the service. Is it running?"
          : err instanceof Error
            ? err.message
            : String(err);
    }
  }

  async function deliver(text: string): Promise<void> {
    if (conversationId === null) {
      return;
    }
    try {
      const response = await api.sendMessage(conversationId, text);
      if (pendingBubble) {
        delete pendingBubble.dataset.pending;
      }
      pendingBubble = null;
      pendingText = null;
      addBubble("bot", response.reply);
      renderDebug(response.candidates, response.talker, response.reply);
      setStatus("", null);
      retryButton.hidden = true;
      applyPhase("ready");
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        expire();
      } else if (err instanceof NetworkError || (err instanceof ApiError && err.status >= 500)) {
        setStatus("The reply did not arrive. Check the connection and retry.", "error");
        retryButton.hidden = false;
        // Stay in "sending": the turn is still open until retried or expired.
      } else {
        if (pendingBubble) {
          pendingBubble.classList.add("failed");
          delete pendingBubble.dataset.pending;
        }
        pendingBubble = null;
        pendingText = null;
        setStatus(err instanceof Error ? err.message : String(err), "error");
        applyPhase("ready");
      }
    }
  }

  async function send(): Promise<void> {
    if (phase !== "ready") {
      return;
    }
    const text = messageInput.value.trim();
    if (!text) {
      setStatus("Type a message first.", "info");
      return;
    }
    setStatus("", null);
    messageInput.value = "";
    pendingText = text;
    pendingBubble = addBubble("user", text, true);
    applyPhase("sending");
    inflight = deliver(text);
    return inflight;
  }

  async function retry(): Promise<void> {
    if (phase !== "sending" || pendingText === null) {
      return;
    }
    retryButton.hidden = true;
    setStatus("Retrying...", "info");
    inflight = deliver(pendingText);
    return inflight;
  }

  async function reload(): Promise<void> {
    if (conversationId === null || phase === "sending") {
      return;
    }
    try {
      const record = await api.getConversation(conversationId);
      renderTranscript(record);
      setStatus("", null);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        expire();
      } else {
        setStatus(
          err instanceof NetworkError
            ? "Could not reach the service to reload the transcript."
            : err instanceof Error
              ? err.message
              : String(err),
          "error",
        );
      }
    }
  }

  async function restore(id: string): Promise<void> {
    enterChat(id);
    applyPhase("ready");
    await reload();
  }

  startButton.addEventListener("click", () => {
    void start();
  });
  composer.addEventListener("submit", (event) => {
    event.preventDefault();
    void send();
  });
  retryButton.addEventListener("click", () => {
    void retry();
  });
  reloadButton.addEventListener("click", () => {
    void reload();
  });

  return {
    start,
    send,
    retry,
    reload,
    restore,
    get phase() {
      return phase;
    },
    get conversationId() {
      return conversationId;
    },
    get inflight() {
      return inflight;
    },
  };
}
