import { ParseFailure } from "./errors.js";

/** Key/value pairs from the leading `# mql:key=value` comment block. */
export function parseHeader(scriptText: string): Record<string, string> {
  const header: Record<string, string> = {};
  for (const line of scriptText.split("\n")) {
    if (!line.startsWith("# mql:")) break;
    const body = line.slice("# mql:".length);
    const eq = body.indexOf("=");
    if (eq < 0) {
      throw new ParseFailure(`malformed header line: ${line}`);
    }
    header[body.slice(0, eq)] = body.slice(eq + 1);
  }
  if (Object.keys(header).length === 0) {
    throw new ParseFailure("script carries no # mql: header block");
  }
  return header;
}
