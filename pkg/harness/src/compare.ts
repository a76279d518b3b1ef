import { LengthMismatch } from "./errors.js";

export interface ComparisonReport {
  rows: number;
  maxAbsDiff: number;
  pass: boolean;
  tolerance: number;
}

/** Per-row absolute differences; pass iff the maximum is within tolerance. */
export function compare(
  native: number[],
  backend: number[],
  tolerance: number,
): ComparisonReport {
  if (native.length !== backend.length) {
    throw new LengthMismatch(
      `native has ${native.length} rows, backend has ${backend.length}`,
    );
  }
  let maxAbsDiff = 0;
  for (let i = 0; i < native.length; i += 1) {
    maxAbsDiff = Math.max(maxAbsDiff, Math.abs(native[i] - backend[i]));
  }
  return {
    rows: native.length,
    maxAbsDiff,
    pass: maxAbsDiff <= tolerance,
    tolerance,
  };
}
