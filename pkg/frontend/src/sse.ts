// Incremental server-sent-events parser. The service separates events with
// a blank line and uses one `event:` and one `data:` line per event, but the
// parser accepts the general framing: multiple data lines join with "\n" and
// chunk boundaries may fall anywhere, including inside a line.

export interface SseEvent {
  event: string;
  data: string;
}

function parseBlock(block: string): SseEvent | null {
  let name = "message";
  const data: string[] = [];
  for (const line of block.split("\n")) {
    if (line.startsWith("event:")) {
      name = line.slice("event:".length).trim();
    } else if (line.startsWith("data:")) {
      let value = line.slice("data:".length);
      if (value.startsWith(" ")) value = value.slice(1);
      data.push(value);
    }
  }
  if (data.length === 0) return null;
  return { event: name, data: data.join("\n") };
}

export class SseParser {
  private buffer = "";

  push(chunk: string): SseEvent[] {
    this.buffer += chunk.replace(/\r\n/g, "\n");
    const events: SseEvent[] = [];
    let separator: number;
    while ((separator = this.buffer.indexOf("\n\n")) !== -1) {
      const block = this.buffer.slice(0, separator);
      this.buffer = this.buffer.slice(separator + 2);
      const event = parseBlock(block);
      if (event) events.push(event);
    }
    return events;
  }

  flush(): SseEvent[] {
    const rest = this.buffer;
    this.buffer = "";
    if (!rest.trim()) return [];
    const event = parseBlock(rest);
    return event ? [event] : [];
  }
}

export function parseSseText(text: string): SseEvent[] {
  const parser = new SseParser();
  return [...parser.push(text), ...parser.flush()];
}
