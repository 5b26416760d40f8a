/** eKG panel helpers: term display and the claim-detail query plan. */

import type { Binding, Term } from "./types.js";
import { GatewayClient } from "./api.js";

export function termText(term: Term): string {
  return typeof term === "string" ? term : term.value;
}

/** Column order: variables in first-appearance order across the bindings. */
export function bindingColumns(bindings: Binding[]): string[] {
  const columns: string[] = [];
  for (const binding of bindings) {
    for (const key of Object.keys(binding)) {
      if (!columns.includes(key)) {
        columns.push(key);
      }
    }
  }
  return columns;
}

export interface ClaimDetail {
  claimGraph: string;
  source: string;
  certainty: string;
  polarity: string;
  sentiment: string;
  emotion: string;
  date: string;
}

export function formatDate(epochMs: number): string {
  return new Date(epochMs).toISOString().slice(0, 10);
}

/** Fetch attribution detail for the claim graph holding (s, p, o). */
export async function claimDetail(
  client: GatewayClient, s: string, p: string, o: string,
): Promise<ClaimDetail | null> {
  const graphs = await client.query([[s, p, o, "?g"]]);
  const claimGraph = graphs
    .map((b) => termText(b["?g"]))
    .find((g) => g.startsWith("leolaniWorld:claim_"));
  if (!claimGraph) {
    return null;
  }
  const rows = await client.query([
    ["?attr", "grasp:isAttributionFor", claimGraph],
    ["?attr", "grasp:hasCertaintyValue", "?certainty"],
    ["?attr", "grasp:hasPolarityValue", "?polarity"],
    ["?attr", "grasp:hasSentimentValue", "?sentiment"],
    ["?attr", "grasp:hasEmotionValue", "?emotion"],
    [claimGraph, "grasp:wasAttributedTo", "?source"],
    ["?utt", "grasp:hasAttribution", "?attr"],
    ["?utt", "sem:hasTime", "?time"],
  ]);
  if (rows.length === 0) {
    return null;
  }
  const row = rows[0];
  return {
    claimGraph,
    source: termText(row["?source"]),
    certainty: termText(row["?certainty"]),
    polarity: termText(row["?polarity"]),
    sentiment: termText(row["?sentiment"]),
    emotion: termText(row["?emotion"]),
    date: formatDate(Number(termText(row["?time"]))),
  };
}
