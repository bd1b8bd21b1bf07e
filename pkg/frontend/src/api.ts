/**
 * Typed client for the conversation service HTTP API.
 *
 * Everything the page knows about the service goes through this module:
 * the four endpoints, the JSON shapes they return, and the three ways a
 * call can fail (the server said no, the network dropped, or the payload
 * did not match the contract).  The parsers validate shape but never
 * reorder anything; candidate ordering is the server's decision and the
 * UI renders it verbatim.
 */

export interface CandidateWire {
  talker: string;
  text: string;
  raw: number;
  calibrated: number;
  round: string;
}

export interface MessageResponse {
  reply: string;
  talker: string;
  candidates: CandidateWire[];
}

export interface TurnWire {
  speaker: string;
  text: string;
  timestamp: number;
  talker_id: string | null;
  candidates: CandidateWire[] | null;
}

export interface ConversationRecord {
  id: string;
  article: string;
  seed: number;
  created: number;
  turns: TurnWire[];
}

export interface HealthInfo {
  status: string;
  version: string;
  talkers: string[];
  budget_seconds: number;
}

/** The server answered with an error payload ({"error", "detail"}). */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code} (${status}): ${detail}`);
    this.name = "ApiError";
  }
}

/** The request never completed: connection refused, dropped, or aborted. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`request failed: ${cause instanceof Error ? cause.message : String(cause)}`);
    this.name = "NetworkError";
  }
}

/** The server answered 2xx but the body does not match the contract. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

// ---------------------------------------------------------------------------
// Parsers: unknown JSON in, typed values out, SchemaError on mismatch.
// ---------------------------------------------------------------------------

function asObject(value: unknown, where: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new SchemaError(`${where}: expected an object`);
  }
  return value as Record<string, unknown>;
}

function asString(value: unknown, where: string): string {
  if (typeof value !== "string") {
    throw new SchemaError(`${where}: expected a string`);
  }
  return value;
}

function asNumber(value: unknown, where: string): number {
  if (typeof value !== "number" || Number.isNaN(value)) {
    throw new SchemaError(`${where}: expected a number`);
  }
  return value;
}

function asArray(value: unknown, where: string): unknown[] {
  if (!Array.isArray(value)) {
    throw new SchemaError(`${where}: expected an array`);
  }
  return value;
}

function parseCandidate(value: unknown, where: string): CandidateWire {
  const obj = asObject(value, where);
  return {
    talker: asString(obj.talker, `${where}.talker`),
    text: asString(obj.text, `${where}.text`),
    raw: asNumber(obj.raw, `${where}.raw`),
    calibrated: asNumber(obj.calibrated, `${where}.calibrated`),
    round: asString(obj.round, `${where}.round`),
  };
}

export function parseCreated(value: unknown): { id: string } {
  const obj = asObject(value, "created");
  return { id: asString(obj.id, "created.id") };
}

export function parseMessageResponse(value: unknown): MessageResponse {
  const obj = asObject(value, "message");
  return {
    reply: asString(obj.reply, "message.reply"),
    talker: asString(obj.talker, "message.talker"),
    candidates: asArray(obj.candidates, "message.candidates").map((c, i) =>
      parseCandidate(c, `message.candidates[${i}]`),
    ),
  };
}

function parseTurn(value: unknown, where: string): TurnWire {
  const obj = asObject(value, where);
  return {
    speaker: asString(obj.speaker, `${where}.speaker`),
    text: asString(obj.text, `${where}.text`),
    timestamp: asNumber(obj.timestamp, `${where}.timestamp`),
    talker_id: obj.talker_id === null ? null : asString(obj.talker_id, `${where}.talker_id`),
    candidates:
      obj.candidates === null
        ? null
        : asArray(obj.candidates, `${where}.candidates`).map((c, i) =>
            parseCandidate(c, `${where}.candidates[${i}]`),
          ),
  };
}

export function parseConversationRecord(value: unknown): ConversationRecord {
  const obj = asObject(value, "conversation");
  return {
    id: asString(obj.id, "conversation.id"),
    article: asString(obj.article, "conversation.article"),
    seed: asNumber(obj.seed, "conversation.seed"),
    created: asNumber(obj.created, "conversation.created"),
    turns: asArray(obj.turns, "conversation.turns").map((t, i) =>
      parseTurn(t, `conversation.turns[${i}]`),
    ),
  };
}

export function parseHealth(value: unknown): HealthInfo {
  const obj = asObject(value, "health");
  return {
    status: asString(obj.status, "health.status"),
    version: asString(obj.version, "health.version"),
    talkers: asArray(obj.talkers, "health.talkers").map((t, i) =>
      asString(t, `health.talkers[${i}]`),
    ),
    budget_seconds: asNumber(obj.budget_seconds, "health.budget_seconds"),
  };
}

export function parseApiError(status: number, value: unknown): ApiError {
  try {
    const obj = asObject(value, "error");
    return new ApiError(status, asString(obj.error, "error.error"), asString(obj.detail, "error.detail"));
  } catch {
    return new ApiError(status, "unexpected_error", `the server answered ${status}`);
  }
}

// ---------------------------------------------------------------------------
// The client itself.
// ---------------------------------------------------------------------------

export interface ApiClient {
  createConversation(article: string, seed?: number): Promise<string>;
  sendMessage(conversationId: string, text: string): Promise<MessageResponse>;
  getConversation(conversationId: string): Promise<ConversationRecord>;
  health(): Promise<HealthInfo>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class HttpApi implements ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    let payload: unknown;
    try {
      payload = await response.json();
    } catch {
      payload = undefined;
    }
    if (!response.ok) {
      throw parseApiError(response.status, payload);
    }
    return payload;
  }

  async createConversation(article: string, seed?: number): Promise<string> {
    const body: Record<string, unknown> = { article };
    if (seed !== undefined) {
      body.seed = seed;
    }
    return parseCreated(await this.request("POST", "/conversations", body)).id;
  }

  async sendMessage(conversationId: string, text: string): Promise<MessageResponse> {
    const raw = await this.request(
      "POST",
      `/conversations/${encodeURIComponent(conversationId)}/messages`,
      { text },
    );
    return parseMessageResponse(raw);
  }

  async getConversation(conversationId: string): Promise<ConversationRecord> {
    const raw = await this.request("GET", `/conversations/${encodeURIComponent(conversationId)}`);
    return parseConversationRecord(raw);
  }

  async health(): Promise<HealthInfo> {
    return parseHealth(await this.request("GET", "/health"));
  }
}
