#!/usr/bin/env node
/** Conformance runner.
 *
 *   harness run --scripts DIR --fixtures DIR --tol 1e-6 --report report.json
 *
 * The scripts directory holds the engine's paired outputs per statement:
 * stmtNN_backend.py (emitted script) and stmtNN_result.csv (native run).
 * Each script is executed as a subprocess with the fixtures directory as
 * its working directory; predictions are parsed from PRED: lines and
 * compared row by row against the native CSV.
 */

import { readdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import process from "node:process";

import { compare } from "./compare.js";
import { readNumericColumn } from "./csvread.js";
import { runEmitted } from "./runner.js";
import { checkStructure } from "./structure.js";

interface ScriptReport {
  script: string;
  resultCsv: string;
  kind: string;
  rows?: number;
  maxAbsDiff?: number;
  pass: boolean;
  skipped?: boolean;
  error?: string;
  structureProblems?: string[];
  metrics?: Record<string, string>;
}

/** Only prediction scripts carry a numeric agreement guarantee. */
function comparable(kind: string): boolean {
  return kind.startsWith("pred") || kind === "best_pred" ||
    kind === "construct_pred";
}

export interface HarnessReport {
  tolerance: number;
  scripts: ScriptReport[];
  pass: boolean;
}

export function runHarness(
  scriptsDir: string,
  fixturesDir: string,
  tolerance: number,
): HarnessReport {
  const scripts = readdirSync(scriptsDir)
    .filter((name) => /^stmt\d+_backend\.py$/.test(name))
    .sort();
  const reports: ScriptReport[] = [];
  for (const name of scripts) {
    const scriptPath = join(scriptsDir, name);
    const resultCsv = join(
      scriptsDir,
      name.replace("_backend.py", "_result.csv"),
    );
    const text = readFileSync(scriptPath, "utf-8");
    const kind = /# mql:kind=(\S+)/.exec(text)?.[1] ?? "unknown";
    const entry: ScriptReport = {
      script: scriptPath,
      resultCsv,
      kind,
      pass: false,
    };
    if (!comparable(kind)) {
      entry.skipped = true;
      entry.pass = true;
      entry.structureProblems = checkStructure(text, kind);
      if (entry.structureProblems.length > 0) entry.pass = false;
      reports.push(entry);
      continue;
    }
    try {
      const run = runEmitted(scriptPath, fixturesDir);
      const native = readNumericColumn(resultCsv, "prediction");
      const comparison = compare(native, run.predictions, tolerance);
      entry.rows = comparison.rows;
      entry.maxAbsDiff = comparison.maxAbsDiff;
      entry.pass = comparison.pass;
      entry.metrics = run.metrics;
      entry.structureProblems = checkStructure(text, kind);
      if (entry.structureProblems.length > 0) entry.pass = false;
    } catch (err) {
      entry.error = err instanceof Error ? `${err.name}: ${err.message}` : String(err);
    }
    reports.push(entry);
  }
  const compared = reports.filter((r) => !r.skipped);
  return {
    tolerance,
    scripts: reports,
    pass: compared.length > 0 && reports.every((r) => r.pass),
  };
}

function parseArgs(argv: string[]): Record<string, string> {
  const flags: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 1) {
    if (argv[i].startsWith("--")) {
      flags[argv[i].slice(2)] = argv[i + 1] ?? "";
      i += 1;
    }
  }
  return flags;
}

export function main(argv: string[]): number {
  if (argv[0] !== "run") {
    console.error(
      "usage: harness run --scripts DIR --fixtures DIR [--tol 1e-6] [--report FILE]",
    );
    return 2;
  }
  const flags = parseArgs(argv.slice(1));
  if (!flags.scripts || !flags.fixtures) {
    console.error("harness run: --scripts and --fixtures are required");
    return 2;
  }
  const tolerance = flags.tol ? Number(flags.tol) : 1e-6;
  const report = runHarness(flags.scripts, flags.fixtures, tolerance);
  const text = JSON.stringify(report, null, 2);
  if (flags.report) {
    writeFileSync(flags.report, text + "\n");
  }
  console.log(text);
  return report.pass ? 0 : 1;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
