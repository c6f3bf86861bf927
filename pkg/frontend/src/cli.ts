import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { parseSweepCsv } from "./csv.js";
import { FIGURE_IDS, buildFigureData, isFigureId } from "./figures.js";
import { renderSvg, sidecarText } from "./render.js";

const USAGE = `usage: figures --in <csv> --fig <${FIGURE_IDS.join("|")}> --out <path>`;

export function main(argv: string[]): number {
  let values: { in?: string; fig?: string; out?: string };
  try {
    values = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        fig: { type: "string" },
        out: { type: "string" },
      },
    }).values;
  } catch (e) {
    console.error(`${(e as Error).message}\n${USAGE}`);
    return 2;
  }
  const { in: input, fig, out } = values;
  if (!input || !fig || !out) {
    console.error(USAGE);
    return 2;
  }
  if (!isFigureId(fig)) {
    console.error(`unknown figure id "${fig}"\n${USAGE}`);
    return 2;
  }
  try {
    const rows = parseSweepCsv(readFileSync(input, "utf8"));
    const data = buildFigureData(rows, fig);
    writeFileSync(out, renderSvg(data));
    writeFileSync(`${out}.points.txt`, sidecarText(data));
    console.log(`wrote ${out} and ${out}.points.txt`);
    return 0;
  } catch (e) {
    console.error(`error: ${(e as Error).message}`);
    return 1;
  }
}
