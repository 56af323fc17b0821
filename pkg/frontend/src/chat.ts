import type { MessageExchange, TurnRecord } from "./types";

export type ChatPhase = "idle" | "streaming" | "ended";

/** Chat state machine: input stays disabled from send until the turn lands. */
export class ChatController {
  phase: ChatPhase = "idle";
  turns: TurnRecord[] = [];
  pendingLearnerText: string | null = null;
  streamingText = "";
  summary: string | null = null;
  error: string | null = null;

  constructor(opening?: TurnRecord) {
    if (opening) this.turns.push(opening);
  }

  get inputDisabled(): boolean {
    return this.phase !== "idle";
  }

  beginSend(text: string): string {
    if (this.phase === "streaming") throw new Error("a reply is already streaming");
    if (this.phase === "ended") throw new Error("the session has ended");
    const trimmed = text.trim();
    if (!trimmed) throw new Error("message is empty");
    this.phase = "streaming";
    this.pendingLearnerText = trimmed;
    this.streamingText = "";
    this.error = null;
    return trimmed;
  }

  onToken(text: string): void {
    if (this.phase !== "streaming") return;
    this.streamingText = this.streamingText ? `${this.streamingText} ${text}` : text;
  }

  onTurn(exchange: MessageExchange): void {
    this.turns.push(exchange.learner_turn, exchange.tutor_turn);
    this.pendingLearnerText = null;
    this.streamingText = "";
    this.phase = "idle";
  }

  onError(message: string): void {
    this.error = message;
    this.pendingLearnerText = null;
    this.streamingText = "";
    if (this.phase === "streaming") this.phase = "idle";
  }

  onEnded(summary: string): void {
    this.summary = summary;
    this.phase = "ended";
  }
}
