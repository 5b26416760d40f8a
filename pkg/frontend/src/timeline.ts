/** Pure timeline model: map a scenario bundle onto per-modality lanes.
 *
 * Signals are grounded on the scenario's temporal ruler; each lane item is
 * a rectangle [start, end] in scenario-relative milliseconds plus the
 * mentions attached to the signal. Selecting a mention yields highlight
 * segments across every lane that shares a signal with it.
 */

import type { Bundle, Mention, Segment, Signal } from "./types.js";

export const MODALITIES = ["text", "audio", "image", "rdf"] as const;
export type Modality = (typeof MODALITIES)[number];

export interface LaneItem {
  signalId: string;
  modality: Modality;
  start: number; // ms relative to scenario start
  end: number;
  label: string;
  source: string;
  file: string | null;
  dims: [number, number] | null;
  mentions: Mention[];
}

export type Lanes = Record<Modality, LaneItem[]>;

function signalLabel(signal: Signal): string {
  if (signal.text) {
    return signal.text;
  }
  if (signal.file) {
    return signal.file;
  }
  if (signal.data && typeof signal.data === "object") {
    const kind = (signal.data as { type?: string }).type;
    return kind ? `capsule:${kind}` : "capsule";
  }
  return signal.id;
}

export function bundleToLanes(bundle: Bundle): Lanes {
  const origin = bundle.scenario.ruler.start_ms;
  const lanes: Lanes = { text: [], audio: [], image: [], rdf: [] };
  for (const modality of MODALITIES) {
    for (const signal of bundle[modality] ?? []) {
      const start = signal.time.start_ms - origin;
      const end = (signal.time.end_ms ?? signal.time.start_ms) - origin;
      lanes[modality].push({
        signalId: signal.id,
        modality,
        start,
        end: Math.max(end, start),
        label: signalLabel(signal),
        source: signal.source,
        file: signal.file,
        dims: signal.dims,
        mentions: signal.mentions ?? [],
      });
    }
    lanes[modality].sort((a, b) => a.start - b.start ||
      a.signalId.localeCompare(b.signalId));
  }
  return lanes;
}

/** Total extent of the lanes in ms (at least 1 to avoid zero-width scales). */
export function lanesExtent(lanes: Lanes): number {
  let extent = 1;
  for (const modality of MODALITIES) {
    for (const item of lanes[modality]) {
      extent = Math.max(extent, item.end);
    }
  }
  return extent;
}

export interface Highlight {
  signalId: string;
  segment: Segment;
}

/** All segments of one mention, for drawing alignment bars across lanes. */
export function mentionHighlights(mention: Mention): Highlight[] {
  return mention.segments.map((segment) => ({
    signalId: segment.signal_id,
    segment,
  }));
}

/** Find a mention by id anywhere in the lanes. */
export function findMention(lanes: Lanes, mentionId: string):
    { item: LaneItem; mention: Mention } | null {
  for (const modality of MODALITIES) {
    for (const item of lanes[modality]) {
      const mention = item.mentions.find((m) => m.id === mentionId);
      if (mention) {
        return { item, mention };
      }
    }
  }
  return null;
}
