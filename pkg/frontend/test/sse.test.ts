import { describe, expect, it } from "vitest";

import { SseParser, parseSseText } from "../src/sse";
import type { MessageExchange } from "../src/types";
import { fixture } from "./helpers";

const STREAM = fixture("message_stream.txt");

describe("parseSseText", () => {
  it("splits the recorded stream into token events plus one turn event", () => {
    const events = parseSseText(STREAM);
    const tokens = events.filter((e) => e.event === "token");
    const turns = events.filter((e) => e.event === "turn");
    expect(tokens.length).toBeGreaterThanOrEqual(1);
    expect(turns).toHaveLength(1);
    expect(events).toHaveLength(tokens.length + turns.length);
  });

  it("token texts joined with spaces equal the final tutor text", () => {
    const events = parseSseText(STREAM);
    const assembled = events
      .filter((e) => e.event === "token")
      .map((e) => (JSON.parse(e.data) as { text: string }).text)
      .join(" ");
    const turn = events.find((e) => e.event === "turn");
    const exchange = JSON.parse(turn!.data) as MessageExchange;
    expect(assembled).toBe(exchange.tutor_turn.text);
  });

  it("defaults the event name and joins multiple data lines", () => {
    expect(parseSseText("data: hi\n\n")).toEqual([
      { event: "message", data: "hi" },
    ]);
    expect(parseSseText("event: x\ndata: a\ndata: b\n\n")).toEqual([
      { event: "x", data: "a\nb" },
    ]);
  });

  it("ignores blocks without data", () => {
    expect(parseSseText("event: ping\n\n")).toEqual([]);
  });
});

describe("SseParser chunking", () => {
  function feed(chunkSize: number) {
    const parser = new SseParser();
    const events = [];
    for (let i = 0; i < STREAM.length; i += chunkSize) {
      events.push(...parser.push(STREAM.slice(i, i + chunkSize)));
    }
    events.push(...parser.flush());
    return events;
  }

  it("is invariant to where chunk boundaries fall", () => {
    const whole = parseSseText(STREAM);
    expect(feed(1)).toEqual(whole);
    expect(feed(7)).toEqual(whole);
    expect(feed(4096)).toEqual(whole);
  });

  it("normalizes CRLF line endings", () => {
    const crlf = STREAM.replace(/\n/g, "\r\n");
    expect(parseSseText(crlf)).toEqual(parseSseText(STREAM));
  });

  it("holds an incomplete block until the separator arrives", () => {
    const parser = new SseParser();
    expect(parser.push("event: token\ndata: {\"text\": \"a\"}")).toEqual([]);
    expect(parser.push("\n\n")).toEqual([
      { event: "token", data: '{"text": "a"}' },
    ]);
  });
});
