/** End-to-end: the UI's client layer against a live gateway process. */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import WebSocket from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { GatewayClient } from "../src/api.js";
import { parsePattern } from "../src/pattern.js";
import { bundleToLanes } from "../src/timeline.js";
import type { ChatMessage } from "../src/types.js";

const here = fileURLToPath(new URL(".", import.meta.url));
const configPath = resolve(
  here, "../../src/combus/data/config/leolani.ini");
const port = 18000 + Math.floor(Math.random() * 10000);
const base = `http://127.0.0.1:${port}`;

let gateway: ChildProcess;
const client = new GatewayClient(base, WebSocket as never);

class Replies {
  private messages: ChatMessage[] = [];
  private waiters: ((m: ChatMessage) => void)[] = [];

  push(message: ChatMessage): void {
    const waiter = this.waiters.shift();
    if (waiter) {
      waiter(message);
    } else {
      this.messages.push(message);
    }
  }

  next(timeoutMs = 10000): Promise<ChatMessage> {
    const queued = this.messages.shift();
    if (queued) {
      return Promise.resolve(queued);
    }
    return new Promise((resolvePromise, reject) => {
      const timer = setTimeout(
        () => reject(new Error("timed out waiting for reply")), timeoutMs);
      this.waiters.push((m) => {
        clearTimeout(timer);
        resolvePromise(m);
      });
    });
  }
}

beforeAll(async () => {
  const cwd = mkdtempSync(join(tmpdir(), "combus-ui-"));
  gateway = spawn(
    "python3", ["-m", "combus.gateway", "--config", configPath,
                "--port", String(port)],
    { cwd, stdio: ["ignore", "pipe", "pipe"] },
  );
  const deadline = Date.now() + 30000;
  for (;;) {
    try {
      await client.intentions();
      return;
    } catch {
      if (Date.now() > deadline || gateway.exitCode !== null) {
        throw new Error("gateway did not come up");
      }
      await new Promise((r) => setTimeout(r, 250));
    }
  }
}, 40000);

afterAll(() => {
  gateway?.kill("SIGTERM");
});

describe("gateway end-to-end", () => {
  it("answers from the knowledge graph, fills the timeline, and matches patterns", async () => {
    const replies = new Replies();
    const socket = await client.openChat((m) => replies.push(m));

    socket.send("I am from Amsterdam");
    const first = await replies.next();
    expect(first.direction).toBe("agent");
    expect(first.text.length).toBeGreaterThan(0);

    socket.send("Where am I from?");
    const second = await replies.next();
    expect(second.text).toContain("Amsterdam");

    const scenarios = await client.listScenarios();
    expect(scenarios.length).toBe(1);
    const bundle = await client.getScenario(scenarios[0].id);
    const lanes = bundleToLanes(bundle);
    expect(lanes.text.length).toBeGreaterThanOrEqual(4);

    const rows = await client.query([parsePattern("?s be-from ?o")]);
    expect(rows.length).toBe(1);
    expect(rows[0]["?o"]).toBe("leolaniWorld:amsterdam");

    const active = await client.intentions();
    expect(active).toContain("Leolani");

    socket.close();
  }, 30000);
});
