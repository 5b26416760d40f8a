/** Gateway client: HTTP fetches plus the chat WebSocket.
 *
 * The WebSocket constructor is injectable so the same client runs in the
 * browser (global WebSocket) and under node tests (the `ws` package).
 */

import type { Binding, Bundle, ChatMessage, ScenarioMeta } from "./types.js";

export interface ChatSocket {
  send(text: string): void;
  close(): void;
}

interface WebSocketLike {
  onopen: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  send(data: string): void;
  close(): void;
}

type WebSocketCtor = new (url: string) => WebSocketLike;

export class GatewayClient {
  constructor(
    readonly baseUrl: string,
    private readonly wsCtor: WebSocketCtor =
      (globalThis as { WebSocket?: WebSocketCtor }).WebSocket!,
  ) {}

  private async fetchJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw new Error(`${path}: HTTP ${response.status}`);
    }
    return response.json() as Promise<T>;
  }

  listScenarios(): Promise<ScenarioMeta[]> {
    return this.fetchJson("/scenarios");
  }

  getScenario(id: string): Promise<Bundle> {
    return this.fetchJson(`/scenarios/${encodeURIComponent(id)}`);
  }

  mediaUrl(scenarioId: string, mediaPath: string): string {
    return `${this.baseUrl}/scenarios/${encodeURIComponent(scenarioId)}/media/${mediaPath}`;
  }

  query(patterns: string[][]): Promise<Binding[]> {
    return this.fetchJson("/ekg/query", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ patterns }),
    });
  }

  async intentions(): Promise<string[]> {
    const body = await this.fetchJson<{ active: string[] }>("/intentions");
    return body.active;
  }

  async consent(granted: boolean): Promise<void> {
    await this.fetchJson("/consent", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ granted }),
    });
  }

  /** Open the chat socket; resolves once the connection is established. */
  openChat(onMessage: (message: ChatMessage) => void,
           onClose?: () => void): Promise<ChatSocket> {
    const url = this.baseUrl.replace(/^http/, "ws") + "/ws/chat";
    const socket = new this.wsCtor(url);
    return new Promise((resolve, reject) => {
      socket.onopen = () => resolve({
        send: (text: string) => socket.send(JSON.stringify({ text })),
        close: () => socket.close(),
      });
      socket.onerror = (ev) => reject(new Error(`websocket error: ${ev}`));
      socket.onmessage = (ev) => {
        onMessage(JSON.parse(String(ev.data)) as ChatMessage);
      };
      socket.onclose = () => onClose?.();
    });
  }
}
