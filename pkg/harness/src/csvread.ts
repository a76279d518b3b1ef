import { readFileSync } from "node:fs";

import { ParseFailure } from "./errors.js";

/** Minimal RFC-4180 reader, sufficient for engine result files. */
export function readCsv(path: string): string[][] {
  const text = readFileSync(path, "utf-8");
  const rows: string[][] = [];
  let row: string[] = [];
  let cell = "";
  let inQuotes = false;
  let i = 0;
  const push = () => {
    row.push(cell);
    cell = "";
  };
  const endRow = () => {
    push();
    rows.push(row);
    row = [];
  };
  while (i < text.length) {
    const ch = text[i];
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          cell += '"';
          i += 2;
          continue;
        }
        inQuotes = false;
        i += 1;
        continue;
      }
      cell += ch;
      i += 1;
      continue;
    }
    if (ch === '"') {
      inQuotes = true;
    } else if (ch === ",") {
      push();
    } else if (ch === "\n") {
      endRow();
    } else if (ch !== "\r") {
      cell += ch;
    }
    i += 1;
  }
  if (cell.length > 0 || row.length > 0) endRow();
  return rows;
}

/** Numeric values of one named column of a headered CSV. */
export function readNumericColumn(path: string, column: string): number[] {
  const rows = readCsv(path);
  if (rows.length === 0) {
    throw new ParseFailure(`${path}: empty file`);
  }
  const index = rows[0].indexOf(column);
  if (index < 0) {
    throw new ParseFailure(`${path}: no column named ${column}`);
  }
  return rows.slice(1).map((r, i) => {
    const value = Number(r[index]);
    if (Number.isNaN(value)) {
      throw new ParseFailure(`${path}: row ${i + 1} has non-numeric ${column}`);
    }
    return value;
  });
}
