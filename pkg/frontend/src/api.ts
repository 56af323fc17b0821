import { SseParser } from "./sse";
import type {
  ErrorBody,
  KcsResult,
  LikertDoc,
  MatrixDoc,
  MessageExchange,
  ScenarioCreateBody,
  ScenarioCreated,
  ScenarioDetail,
  ScenarioListing,
  SessionCreateBody,
  SessionCreated,
  SessionView,
  SurveyBody,
  ThemeGraphDoc,
  TreeExpansion,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface StreamHandlers {
  onToken?: (text: string) => void;
  onTurn?: (exchange: MessageExchange) => void;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorFrom(response: Response): Promise<ApiError> {
  let body: Partial<ErrorBody> = {};
  try {
    body = (await response.json()) as Partial<ErrorBody>;
  } catch {
    // non-JSON error body; fall through to the status text
  }
  return new ApiError(
    response.status,
    body.code ?? "Unknown",
    body.message ?? response.statusText,
  );
}

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as T;
  }

  expandTree(level: string, selections: Record<string, string> = {}): Promise<TreeExpansion> {
    return this.request("POST", "/tree/expand", { level, selections });
  }

  createScenario(body: ScenarioCreateBody): Promise<ScenarioCreated> {
    return this.request("POST", "/scenarios", body);
  }

  listScenarios(): Promise<ScenarioListing> {
    return this.request("GET", "/scenarios");
  }

  getScenario(id: string): Promise<ScenarioDetail> {
    return this.request("GET", `/scenarios/${id}`);
  }

  generateKcs(id: string): Promise<KcsResult> {
    return this.request("POST", `/scenarios/${id}/kcs`);
  }

  generateMatrix(id: string): Promise<MatrixDoc> {
    return this.request("POST", `/scenarios/${id}/matrix`);
  }

  createSession(body: SessionCreateBody): Promise<SessionCreated> {
    return this.request("POST", "/sessions", body);
  }

  sendMessage(sessionId: string, text: string): Promise<MessageExchange> {
    return this.request("POST", `/sessions/${sessionId}/messages`, { text });
  }

  endSession(sessionId: string): Promise<{ summary: string }> {
    return this.request("POST", `/sessions/${sessionId}/end`);
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  submitSurvey(body: SurveyBody): Promise<{ id: string }> {
    return this.request("POST", "/surveys", body);
  }

  likert(): Promise<LikertDoc> {
    return this.request("GET", "/analytics/likert");
  }

  themes(): Promise<ThemeGraphDoc> {
    return this.request("GET", "/analytics/themes");
  }

  /** Send a learner message and stream the tutor reply token by token. */
  async streamMessage(
    sessionId: string,
    text: string,
    handlers: StreamHandlers = {},
  ): Promise<MessageExchange> {
    const response = await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/messages`, {
      method: "POST",
      headers: {
        "content-type": "application/json",
        accept: "text/event-stream",
      },
      body: JSON.stringify({ text }),
    });
    if (!response.ok) throw await errorFrom(response);

    const parser = new SseParser();
    let exchange: MessageExchange | null = null;
    const handle = (events: ReturnType<SseParser["push"]>) => {
      for (const event of events) {
        if (event.event === "token") {
          handlers.onToken?.((JSON.parse(event.data) as { text: string }).text);
        } else if (event.event === "turn") {
          exchange = JSON.parse(event.data) as MessageExchange;
          handlers.onTurn?.(exchange);
        }
      }
    };

    if (response.body) {
      const reader = response.body.getReader();
      const decoder = new TextDecoder();
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        handle(parser.push(decoder.decode(value, { stream: true })));
      }
    } else {
      handle(parser.push(await response.text()));
    }
    handle(parser.flush());

    if (!exchange) {
      throw new ApiError(502, "StreamTruncated", "stream ended without a turn event");
    }
    return exchange;
  }
}
