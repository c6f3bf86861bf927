import Papa from "papaparse";

export const HEADER = [
  "scenario", "arm", "variable", "value", "n_s", "coop_fraction", "trials",
  "seed", "mean_eta", "ci95", "mean_eta_coop", "mean_eta_noncoop", "delta_c",
] as const;

export type Column = (typeof HEADER)[number];

// All cells kept as verbatim strings; blank means the value is undefined
// for that row (e.g. a gain with a zero baseline).
export type SweepRow = Record<Column, string>;

export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new Error(`CSV parse failed: ${parsed.errors[0].message}`);
  }
  const [header, ...lines] = parsed.data;
  if (!header || header.join(",") !== HEADER.join(",")) {
    throw new Error(
      `unexpected CSV header "${(header ?? []).join(",")}"; ` +
      `expected "${HEADER.join(",")}"`,
    );
  }
  return lines.map((cells, i) => {
    if (cells.length !== HEADER.length) {
      throw new Error(`row ${i + 2} has ${cells.length} cells, ` +
        `expected ${HEADER.length}`);
    }
    const row = {} as SweepRow;
    HEADER.forEach((col, j) => { row[col] = cells[j]; });
    return row;
  });
}
