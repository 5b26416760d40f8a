/** Chat panel state: an append-only message log plus reply badges.
 *
 * Gesture/emotion badges surface annotations that interpretation
 * components attach to the agent's reply signal after the fact.
 */

import type { Bundle, ChatMessage } from "./types.js";

export interface LogEntry extends ChatMessage {
  badges: string[];
}

export function appendMessage(log: LogEntry[], message: ChatMessage): LogEntry[] {
  return [...log, { ...message, badges: [] }];
}

export function userMessage(text: string): ChatMessage {
  return { direction: "user", text, timestamp: Date.now() };
}

const BADGE_TYPES = new Set(["gesture", "emotion"]);

/** Pull gesture/emotion annotation values for a reply's signal. */
export function badgesForSignal(bundle: Bundle, signalId: string): string[] {
  const signal = bundle.text.find((s) => s.id === signalId);
  if (!signal) {
    return [];
  }
  const badges: string[] = [];
  for (const mention of signal.mentions ?? []) {
    for (const annotation of mention.annotations) {
      if (BADGE_TYPES.has(annotation.type)) {
        badges.push(`${annotation.type}:${String(annotation.value)}`);
      }
    }
  }
  return badges;
}

/** Refresh badges on agent entries from the latest scenario bundle. */
export function refreshBadges(log: LogEntry[], bundle: Bundle): LogEntry[] {
  return log.map((entry) =>
    entry.direction === "agent" && entry.signal_id
      ? { ...entry, badges: badgesForSignal(bundle, entry.signal_id) }
      : entry,
  );
}

/** A goodbye reply ends the session; the UI shows a banner. */
export function isSessionEnd(message: ChatMessage): boolean {
  return message.direction === "agent" && /\bgoodbye\b/i.test(message.text);
}
