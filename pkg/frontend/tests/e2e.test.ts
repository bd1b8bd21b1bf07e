/**
 * End-to-end: the real page modules against the real service.
 *
 * The suite builds the static bundle, boots the Python service with the
 * bundle mounted on /ui, then drives the same DOM code the bundle ships
 * (createApp + HttpApi) in jsdom against live HTTP.  It checks the whole
 * acceptance path: create a conversation from an article, ask for
 * 2 plus 2, see a reply containing "4", and confirm the debug panel
 * shows candidates in exactly the order the API returned.
 */
import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { HttpApi } from "../src/api";
import { AppHandle, createApp } from "../src/app";

// vitest runs with frontend/ as the working directory.
const frontendDir = process.cwd();
const repoRoot = resolve(frontendDir, "..");

const ARTICLE =
  "Cyclone Monica was the most intense tropical cyclone on record to strike " +
  "Australia. It formed in the Coral Sea and crossed the coast of the " +
  "Northern Territory near Maningrida.";

let service: ChildProcess | null = null;
let base = "";
let stderrLog = "";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.on("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

async function waitForHealth(deadlineMs: number): Promise<void> {
  const deadline = Date.now() + deadlineMs;
  for (;;) {
    try {
      const response = await fetch(`${base}/health`);
      if (response.ok) {
        return;
      }
    } catch {
      // Not up yet.
    }
    if (Date.now() > deadline) {
      throw new Error(`service never became healthy; stderr so far:\n${stderrLog}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

beforeAll(async () => {
  execFileSync(process.execPath, ["build.mjs"], { cwd: frontendDir, stdio: "pipe" });

  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  const scratch = mkdtempSync(join(tmpdir(), "talkerbox-e2e-"));
  const configPath = join(scratch, "service.json");
  writeFileSync(
    configPath,
    JSON.stringify({
      host: "127.0.0.1",
      port,
      data_dir: join(scratch, "conversations"),
      static_dir: join(frontendDir, "dist"),
      engine: { parallel: false, seed: 7 },
    }),
  );

  const env: NodeJS.ProcessEnv = {};
  for (const [key, value] of Object.entries(process.env)) {
    if (!key.startsWith("TALKERBOX_")) {
      env[key] = value;
    }
  }
  service = spawn("python3", ["-m", "talkerbox.cli", "serve", "--config", configPath], {
    cwd: repoRoot,
    env,
    stdio: ["ignore", "ignore", "pipe"],
  });
  service.stderr?.on("data", (chunk: Buffer) => {
    stderrLog += chunk.toString();
  });

  await waitForHealth(90_000);
});

afterAll(async () => {
  if (!service) {
    return;
  }
  const child = service;
  const exited = new Promise<void>((resolve) => child.once("exit", () => resolve()));
  child.kill("SIGTERM");
  await Promise.race([exited, new Promise((resolve) => setTimeout(resolve, 5_000))]);
  if (child.exitCode === null) {
    child.kill("SIGKILL");
  }
});

function buildApp(): { handle: AppHandle; root: HTMLElement } {
  document.body.innerHTML = '<main id="app"></main>';
  const root = document.getElementById("app") as HTMLElement;
  const handle = createApp(root, new HttpApi(base));
  return { handle, root };
}

function textOf(root: HTMLElement, selector: string): string[] {
  return [...root.querySelectorAll<HTMLElement>(selector)].map((n) => n.textContent ?? "");
}

describe("static hosting", () => {
  it("serves the single-page bundle from the service's /ui route", async () => {
    const page = await fetch(`${base}/ui/`);
    expect(page.status).toBe(200);
    const html = await page.text();
    expect(html).toContain('id="app"');
    expect(html).toContain("bundle.js");

    const script = await fetch(`${base}/ui/bundle.js`);
    expect(script.status).toBe(200);
    const js = await script.text();
    expect(js).toContain("/conversations");
  });
});

describe("a scripted session", () => {
  it("creates a conversation, gets 4 for 2 plus 2, and mirrors the API's candidate order", async () => {
    const { handle, root } = buildApp();
    (root.querySelector("#article") as HTMLTextAreaElement).value = ARTICLE;
    (root.querySelector("#seed") as HTMLInputElement).value = "3";

    await handle.start();
    expect(handle.conversationId).not.toBeNull();
    const conversationId = handle.conversationId as string;

    (root.querySelector("#message") as HTMLInputElement).value = "What is 2 plus 2";
    root
      .querySelector("#composer")
      ?.dispatchEvent(new Event("submit", { cancelable: true }));
    await handle.inflight;

    const bubbleTexts = textOf(root, ".bubble .text");
    expect(bubbleTexts[0]).toBe("What is 2 plus 2");
    expect(bubbleTexts[1]).toContain("4");

    // The debug panel must list candidates in exactly the API's order.
    const record = await new HttpApi(base).getConversation(conversationId);
    const lastBot = [...record.turns].reverse().find((t) => t.candidates !== null);
    expect(lastBot).toBeDefined();
    const apiOrder = (lastBot?.candidates ?? []).map((c) => `${c.talker}/${c.round}`);
    expect(apiOrder.length).toBeGreaterThan(0);
    const panelOrder = [...root.querySelectorAll<HTMLTableRowElement>("#debug-rows tr")].map(
      (row) =>
        `${row.querySelector(".talker")?.textContent}/${row.querySelector(".tag")?.textContent}`,
    );
    expect(panelOrder).toEqual(apiOrder);

    // Reloading reproduces the stored transcript bubble for bubble.
    await handle.reload();
    const reloaded = textOf(root, ".bubble .text");
    expect(reloaded).toEqual(record.turns.map((t) => t.text));
  });

  it("shows the expired state for a conversation the server does not know", async () => {
    const { handle, root } = buildApp();

    await handle.restore("000000000000");

    expect(handle.phase).toBe("expired");
    expect(root.querySelector("#status")?.textContent).toContain("expired");
  });
});
