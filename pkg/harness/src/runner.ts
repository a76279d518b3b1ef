import { spawnSync } from "node:child_process";
import { readFileSync } from "node:fs";

import { ScriptCrashed } from "./errors.js";
import { parseHeader } from "./header.js";
import { parseScriptOutput, ScriptResult } from "./output.js";

export interface EmittedRun extends ScriptResult {
  header: Record<string, string>;
}

/** Run one emitted backend script in a subprocess and parse its output.
 *
 * The script executes with the fixtures directory as working directory so
 * its relative data paths resolve.  Non-zero exit raises ScriptCrashed
 * with the captured stderr attached.
 */
export function runEmitted(scriptPath: string, fixturesDir: string): EmittedRun {
  const header = parseHeader(readFileSync(scriptPath, "utf-8"));
  const proc = spawnSync("python3", [scriptPath], {
    cwd: fixturesDir,
    encoding: "utf-8",
    timeout: 120_000,
  });
  if (proc.error) {
    throw new ScriptCrashed(`could not start ${scriptPath}: ${proc.error}`, "");
  }
  if (proc.status !== 0) {
    throw new ScriptCrashed(
      `${scriptPath} exited with status ${proc.status}`,
      proc.stderr ?? "",
    );
  }
  return { header, ...parseScriptOutput(proc.stdout ?? "") };
}
