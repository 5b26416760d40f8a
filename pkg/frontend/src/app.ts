/** Single-page app wiring: chat, timeline, eKG panel, intentions, consent.
 *
 * Writes are limited to chat frames and the consent POST; everything else
 * is read-only, refreshed by polling the gateway every 2 seconds.
 */

import { GatewayClient, type ChatSocket } from "./api.js";
import {
  appendMessage, isSessionEnd, refreshBadges, userMessage, type LogEntry,
} from "./chat.js";
import { clear, el } from "./dom.js";
import { claimDetail, bindingColumns, termText } from "./ekg.js";
import { parsePatterns, PatternError } from "./pattern.js";
import {
  bundleToLanes, lanesExtent, mentionHighlights, MODALITIES,
  type LaneItem, type Lanes,
} from "./timeline.js";
import type { Bundle, Mention } from "./types.js";

const POLL_MS = 2000;

const gatewayUrl =
  new URLSearchParams(location.search).get("gateway") ?? "http://127.0.0.1:8680";
const client = new GatewayClient(gatewayUrl);

// -- state -------------------------------------------------------------

let log: LogEntry[] = [];
let socket: ChatSocket | null = null;
let bundle: Bundle | null = null;
let selectedMention: Mention | null = null;
let sessionEnded = false;

// -- chat panel --------------------------------------------------------

const chatLog = document.getElementById("chat-log") as HTMLElement;
const chatInput = document.getElementById("chat-input") as HTMLInputElement;
const chatForm = document.getElementById("chat-form") as HTMLFormElement;
const banner = document.getElementById("session-banner") as HTMLElement;

function renderChat(): void {
  clear(chatLog);
  for (const entry of log) {
    const badges = entry.badges.map((b) =>
      el("span", { class: "badge" }, [b]));
    chatLog.append(el("div", { class: `bubble ${entry.direction}` }, [
      el("span", {}, [entry.text]), ...badges,
    ]));
  }
  chatLog.scrollTop = chatLog.scrollHeight;
  banner.hidden = !sessionEnded;
}

chatForm.addEventListener("submit", (event) => {
  event.preventDefault();
  const text = chatInput.value.trim();
  if (!text || !socket) {
    return;
  }
  log = appendMessage(log, userMessage(text));
  socket.send(text);
  chatInput.value = "";
  renderChat();
});

// -- timeline panel ----------------------------------------------------

const timelineRoot = document.getElementById("timeline") as HTMLElement;
const inspector = document.getElementById("mention-inspector") as HTMLElement;

function highlightedSignals(): Map<string, Mention["segments"]> {
  const map = new Map<string, Mention["segments"]>();
  if (selectedMention) {
    for (const { signalId, segment } of mentionHighlights(selectedMention)) {
      const list = map.get(signalId) ?? [];
      list.push(segment);
      map.set(signalId, list);
    }
  }
  return map;
}

function renderItem(item: LaneItem, extent: number,
                    highlighted: Map<string, Mention["segments"]>): HTMLElement {
  const left = (item.start / extent) * 100;
  const width = Math.max(((item.end - item.start) / extent) * 100, 1.5);
  const classes = ["lane-item"];
  if (highlighted.has(item.signalId)) {
    classes.push("highlight");
  }
  const node = el("div", {
    class: classes.join(" "),
    style: `left:${left}%;width:${width}%`,
    title: `${item.label} (${item.source})`,
  }, [item.label]);
  if (item.modality === "image" && item.file && bundle) {
    node.append(imageThumb(item));
  }
  for (const mention of item.mentions) {
    const chip = el("span", { class: "mention-chip" }, ["@"]);
    chip.addEventListener("click", (event) => {
      event.stopPropagation();
      selectedMention = mention;
      renderTimeline();
    });
    node.append(chip);
  }
  return node;
}

function imageThumb(item: LaneItem): HTMLElement {
  const wrap = el("div", { class: "thumb" });
  const img = el("img", {
    src: client.mediaUrl(bundle!.scenario.id, item.file!),
    width: "96",
  });
  wrap.append(img);
  if (item.dims) {
    const [w, h] = item.dims;
    for (const mention of item.mentions) {
      for (const segment of mention.segments) {
        if (segment.type === "bbox") {
          wrap.append(el("div", {
            class: "bbox",
            style: `left:${(segment.x0 / w) * 96}px;` +
              `top:${(segment.y0 / h) * 96 * (h / w)}px;` +
              `width:${((segment.x1 - segment.x0) / w) * 96}px;` +
              `height:${((segment.y1 - segment.y0) / h) * 96 * (h / w)}px`,
          }));
        }
      }
    }
  }
  return wrap;
}

function renderInspector(): void {
  clear(inspector);
  if (!selectedMention) {
    inspector.append(el("p", { class: "hint" }, ["Select a mention (@) to inspect it."]));
    return;
  }
  inspector.append(el("h3", {}, [`Mention ${selectedMention.id.slice(-8)}`]));
  for (const annotation of selectedMention.annotations) {
    inspector.append(el("div", { class: "annotation" }, [
      el("b", {}, [annotation.type]),
      ` = ${JSON.stringify(annotation.value)} `,
      el("i", {}, [`(${annotation.source})`]),
    ]));
  }
  for (const segment of selectedMention.segments) {
    inspector.append(el("div", { class: "segment" }, [JSON.stringify(segment)]));
  }
}

function renderTimeline(): void {
  clear(timelineRoot);
  if (!bundle) {
    timelineRoot.append(el("p", { class: "hint" }, ["No scenario yet."]));
    renderInspector();
    return;
  }
  const lanes: Lanes = bundleToLanes(bundle);
  const extent = lanesExtent(lanes);
  const highlighted = highlightedSignals();
  for (const modality of MODALITIES) {
    const laneNode = el("div", { class: "lane" }, [
      el("span", { class: "lane-label" }, [modality]),
    ]);
    const track = el("div", { class: "lane-track" });
    for (const item of lanes[modality]) {
      track.append(renderItem(item, extent, highlighted));
    }
    laneNode.append(track);
    timelineRoot.append(laneNode);
  }
  renderInspector();
}

// -- eKG panel ---------------------------------------------------------

const ekgForm = document.getElementById("ekg-form") as HTMLFormElement;
const ekgInput = document.getElementById("ekg-pattern") as HTMLTextAreaElement;
const ekgResults = document.getElementById("ekg-results") as HTMLElement;
const ekgDetail = document.getElementById("ekg-detail") as HTMLElement;

ekgForm.addEventListener("submit", async (event) => {
  event.preventDefault();
  clear(ekgResults);
  clear(ekgDetail);
  let patterns: string[][];
  try {
    patterns = parsePatterns(ekgInput.value);
  } catch (error) {
    if (error instanceof PatternError) {
      ekgResults.append(el("p", { class: "error" }, [error.message]));
      return;
    }
    throw error;
  }
  const bindings = await client.query(patterns);
  if (bindings.length === 0) {
    ekgResults.append(el("p", { class: "hint" }, ["no matches"]));
    return;
  }
  const columns = bindingColumns(bindings);
  const head = el("tr", {}, columns.map((c) => el("th", {}, [c])));
  const table = el("table", {}, [head]);
  for (const binding of bindings) {
    const row = el("tr", {},
      columns.map((c) => el("td", {}, [termText(binding[c] ?? "")])));
    row.addEventListener("click", () => showClaim(patterns[0], binding));
    table.append(row);
  }
  ekgResults.append(table);
});

async function showClaim(pattern: string[], binding: Record<string, unknown>): Promise<void> {
  const resolve = (term: string) =>
    term.startsWith("?") ? termText((binding as Record<string, never>)[term]) : term;
  const detail = await claimDetail(
    client, resolve(pattern[0]), resolve(pattern[1]), resolve(pattern[2]));
  clear(ekgDetail);
  if (!detail) {
    ekgDetail.append(el("p", { class: "hint" }, ["no claim attribution for this row"]));
    return;
  }
  ekgDetail.append(el("h3", {}, [detail.claimGraph]));
  for (const [key, value] of Object.entries(detail)) {
    if (key !== "claimGraph") {
      ekgDetail.append(el("div", {}, [el("b", {}, [key]), `: ${value}`]));
    }
  }
}

// -- intentions + consent ---------------------------------------------

const intentionBox = document.getElementById("intentions") as HTMLElement;
const consentDialog = document.getElementById("consent-dialog") as HTMLDialogElement;

async function pollIntentions(): Promise<void> {
  try {
    const active = await client.intentions();
    intentionBox.textContent = active.length ? active.join(", ") : "(none)";
  } catch {
    intentionBox.textContent = "(gateway unreachable)";
  }
}

(document.getElementById("consent-yes") as HTMLButtonElement)
  .addEventListener("click", async () => {
    await client.consent(true);
    consentDialog.close();
  });
(document.getElementById("consent-no") as HTMLButtonElement)
  .addEventListener("click", async () => {
    await client.consent(false);
    consentDialog.close();
  });

// -- polling loop ------------------------------------------------------

async function pollScenario(): Promise<void> {
  try {
    const scenarios = await client.listScenarios();
    if (scenarios.length === 0) {
      bundle = null;
    } else {
      bundle = await client.getScenario(scenarios[scenarios.length - 1].id);
      log = refreshBadges(log, bundle);
    }
  } catch {
    bundle = null;
  }
  renderTimeline();
  renderChat();
}

async function start(): Promise<void> {
  socket = await client.openChat((message) => {
    log = appendMessage(log, message);
    if (isSessionEnd(message)) {
      sessionEnded = true;
    }
    renderChat();
  });
  consentDialog.showModal();
  await pollScenario();
  await pollIntentions();
  setInterval(pollScenario, POLL_MS);
  setInterval(pollIntentions, POLL_MS);
}

start().catch((error) => {
  banner.hidden = false;
  banner.textContent = `Cannot reach gateway at ${gatewayUrl}: ${error}`;
});
