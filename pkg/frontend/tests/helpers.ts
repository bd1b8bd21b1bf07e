/** Shared test scaffolding: a controllable fake API and a deferred helper. */
import {
  ApiClient,
  ConversationRecord,
  HealthInfo,
  MessageResponse,
} from "../src/api";

export interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (reason: unknown) => void;
}

export function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (reason: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

/** Let already-settled promise chains run their callbacks. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 10; i += 1) {
    await Promise.resolve();
  }
}

type SendBehavior =
  | { kind: "resolve"; value: MessageResponse }
  | { kind: "reject"; error: unknown }
  | { kind: "defer"; deferred: Deferred<MessageResponse> };

export class FakeApi implements ApiClient {
  createdWith: Array<{ article: string; seed?: number }> = [];
  sentWith: Array<{ conversationId: string; text: string }> = [];
  nextId = "fake00000001";
  record: ConversationRecord | null = null;
  recordError: unknown = null;
  private sendQueue: SendBehavior[] = [];

  queueReply(value: MessageResponse): void {
    this.sendQueue.push({ kind: "resolve", value });
  }

  queueFailure(error: unknown): void {
    this.sendQueue.push({ kind: "reject", error });
  }

  queueDeferred(): Deferred<MessageResponse> {
    const d = deferred<MessageResponse>();
    this.sendQueue.push({ kind: "defer", deferred: d });
    return d;
  }

  async createConversation(article: string, seed?: number): Promise<string> {
    this.createdWith.push(seed === undefined ? { article } : { article, seed });
    return this.nextId;
  }

  async sendMessage(conversationId: string, text: string): Promise<MessageResponse> {
    this.sentWith.push({ conversationId, text });
    const behavior = this.sendQueue.shift();
    if (!behavior) {
      throw new Error("FakeApi: no queued behavior for sendMessage");
    }
    if (behavior.kind === "resolve") {
      return behavior.value;
    }
    if (behavior.kind === "reject") {
      throw behavior.error;
    }
    return behavior.deferred.promise;
  }

  async getConversation(conversationId: string): Promise<ConversationRecord> {
    if (this.recordError !== null) {
      throw this.recordError;
    }
    if (!this.record) {
      throw new Error("FakeApi: no record configured");
    }
    return { ...this.record, id: conversationId };
  }

  async health(): Promise<HealthInfo> {
    return { status: "ok", version: "0", talkers: [], budget_seconds: 3 };
  }
}

export function sampleResponse(overrides: Partial<MessageResponse> = {}): MessageResponse {
  return {
    reply: "It is 4.",
    talker: "abacus",
    candidates: [
      { talker: "abacus", text: "It is 4.", raw: 1.0, calibrated: 1.0, round: "proposal" },
      { talker: "alice", text: "Do go on.", raw: 0.4, calibrated: 0.2, round: "followup" },
    ],
    ...overrides,
  };
}
