import { ParseFailure } from "./errors.js";

export interface ScriptResult {
  predictions: number[];
  metrics: Record<string, string>;
}

/** Structured values from the PRED:/METRIC: lines a backend script prints. */
export function parseScriptOutput(stdout: string): ScriptResult {
  const predictions: number[] = [];
  const metrics: Record<string, string> = {};
  for (const raw of stdout.split("\n")) {
    const line = raw.trim();
    if (line.startsWith("PRED:")) {
      const value = Number(line.slice("PRED:".length));
      if (Number.isNaN(value)) {
        throw new ParseFailure(`unparsable prediction line: ${line}`);
      }
      predictions.push(value);
    } else if (line.startsWith("METRIC:")) {
      const body = line.slice("METRIC:".length);
      const eq = body.indexOf("=");
      if (eq < 0) {
        throw new ParseFailure(`unparsable metric line: ${line}`);
      }
      metrics[body.slice(0, eq)] = body.slice(eq + 1);
    }
  }
  if (predictions.length === 0) {
    throw new ParseFailure("script printed no PRED: lines");
  }
  return { predictions, metrics };
}
