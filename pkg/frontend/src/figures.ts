import type { Column, SweepRow } from "./csv.js";

export const FIGURE_IDS = ["3a", "3b", "3c", "4a", "4b"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

interface FigureDef {
  scenario: string;
  xLabel: string;
  kind: "arms" | "classes" | "gain";
}

const FIGURES: Record<FigureId, FigureDef> = {
  "3a": { scenario: "distance_sweep", xLabel: "distance l (µm)", kind: "arms" },
  "3b": { scenario: "population_sweep", xLabel: "population size N_s", kind: "gain" },
  "3c": { scenario: "coop_fraction_sweep", xLabel: "chemoattractant density c0 (µM)", kind: "classes" },
  "4a": { scenario: "density_sweep", xLabel: "chemoattractant density c0 (µM)", kind: "arms" },
  "4b": { scenario: "gain_vs_density", xLabel: "chemoattractant density c0 (µM)", kind: "gain" },
};

// One plotted point; x/y/ci95 are verbatim CSV strings (ci95 may be "").
export interface SeriesPoint { x: string; y: string; ci95: string }

export interface Series {
  name: string;
  points: SeriesPoint[];
  band: boolean; // render a 95% CI band from ci95
}

export interface FigureData {
  id: FigureId;
  scenario: string;
  xLabel: string;
  yLabel: string;
  percent: boolean; // y axis displays value * 100
  series: Series[];
}

export function isFigureId(id: string): id is FigureId {
  return (FIGURE_IDS as readonly string[]).includes(id);
}

function pickPoints(rows: SweepRow[], arm: string, yCol: Column,
                    withCi: boolean): SeriesPoint[] {
  return rows
    .filter((r) => r.arm === arm && r[yCol] !== "")
    .map((r) => ({ x: r.value, y: r[yCol], ci95: withCi ? r.ci95 : "" }));
}

export function buildFigureData(rows: SweepRow[], id: FigureId): FigureData {
  const def = FIGURES[id];
  const scoped = rows.filter((r) => r.scenario === def.scenario);
  if (scoped.length === 0) {
    throw new Error(`input CSV has no rows for scenario "${def.scenario}" ` +
      `(figure ${id})`);
  }

  let series: Series[];
  let yLabel = "mean success rate η";
  let percent = false;
  if (def.kind === "arms") {
    series = [
      { name: "cooperative", points: pickPoints(scoped, "coop", "mean_eta", true), band: true },
      { name: "non-cooperative", points: pickPoints(scoped, "noncoop", "mean_eta", true), band: true },
    ];
  } else if (def.kind === "classes") {
    series = [
      { name: "mixed population", points: pickPoints(scoped, "mixed", "mean_eta", true), band: true },
      { name: "cooperator class", points: pickPoints(scoped, "mixed", "mean_eta_coop", false), band: false },
      { name: "non-cooperator class", points: pickPoints(scoped, "mixed", "mean_eta_noncoop", false), band: false },
    ];
  } else {
    series = [
      { name: "relative gain", points: pickPoints(scoped, "delta", "delta_c", true), band: true },
    ];
    yLabel = "relative gain Δ_c (%)";
    percent = true;
  }

  for (const s of series) {
    if (s.points.length === 0) {
      throw new Error(`scenario "${def.scenario}" has no usable points ` +
        `for series "${s.name}" (figure ${id})`);
    }
  }
  return { id, scenario: def.scenario, xLabel: def.xLabel, yLabel, percent, series };
}
