export { compare, ComparisonReport } from "./compare.js";
export { readCsv, readNumericColumn } from "./csvread.js";
export { LengthMismatch, ParseFailure, ScriptCrashed } from "./errors.js";
export { parseHeader } from "./header.js";
export { parseScriptOutput, ScriptResult } from "./output.js";
export { EmittedRun, runEmitted } from "./runner.js";
export { checkStructure } from "./structure.js";
export { HarnessReport, main, runHarness } from "./cli.js";
