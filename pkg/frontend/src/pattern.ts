/** Parse the eKG panel's pattern input into gateway query terms.
 *
 * A pattern line is 3 or 4 whitespace-separated terms (subject, predicate,
 * object, optional graph). `?name` terms are variables. Bare names get the
 * common prefixes filled in — `n2mu:` for predicates, `leolaniWorld:` for
 * subjects and objects — so "?s be-from ?o" works without ceremony.
 */

export class PatternError extends Error {}

const POSITION_PREFIX = ["leolaniWorld:", "n2mu:", "leolaniWorld:", ""];

export function normalizeTerm(raw: string, position: number): string {
  if (raw.startsWith("?")) {
    if (raw.length === 1) {
      throw new PatternError("variable needs a name after '?'");
    }
    return raw;
  }
  if (raw.includes(":")) {
    return raw;
  }
  return POSITION_PREFIX[position] + raw;
}

export function parsePattern(line: string): string[] {
  const terms = line.trim().split(/\s+/).filter((t) => t.length > 0);
  if (terms.length < 3 || terms.length > 4) {
    throw new PatternError(
      `pattern needs 3 or 4 terms, got ${terms.length}`);
  }
  return terms.map((term, i) => normalizeTerm(term, i));
}

/** Parse a multi-line input into a basic graph pattern (one line each). */
export function parsePatterns(text: string): string[][] {
  const lines = text.split("\n").map((l) => l.trim()).filter((l) => l);
  if (lines.length === 0) {
    throw new PatternError("enter at least one pattern");
  }
  return lines.map(parsePattern);
}
