import { LineChart } from "echarts/charts";
import { GridComponent, LegendComponent, TitleComponent } from "echarts/components";
import { init, use } from "echarts/core";
import { SVGRenderer } from "echarts/renderers";
import type { FigureData, Series } from "./figures.js";

use([LineChart, GridComponent, LegendComponent, TitleComponent, SVGRenderer]);

const WIDTH = 800;
const HEIGHT = 520;
const BAND_OPACITY = 0.18;

function scale(fig: FigureData): number {
  return fig.percent ? 100 : 1;
}

// Main line plus, when the series carries CIs, the two stacked helper
// series that shade mean +- ci95 (the standard band construction).
function echartsSeries(fig: FigureData, s: Series): object[] {
  const k = scale(fig);
  const line = {
    name: s.name,
    type: "line",
    symbol: "circle",
    symbolSize: 6,
    data: s.points.map((p) => [Number(p.x), Number(p.y) * k]),
  };
  if (!s.band) return [line];
  const lower = s.points.map((p) =>
    [Number(p.x), (Number(p.y) - Number(p.ci95 || "0")) * k]);
  const width = s.points.map((p) =>
    [Number(p.x), 2 * Number(p.ci95 || "0") * k]);
  const stack = `${s.name}-band`;
  return [
    line,
    { name: `${s.name} (95% CI)`, type: "line", stack, data: lower,
      lineStyle: { opacity: 0 }, symbol: "none", silent: true,
      tooltip: { show: false } },
    { name: `${s.name} (95% CI)`, type: "line", stack, data: width,
      lineStyle: { opacity: 0 }, symbol: "none", silent: true,
      areaStyle: { opacity: BAND_OPACITY }, tooltip: { show: false } },
  ];
}

export function renderSvg(fig: FigureData): string {
  const chart = init(null, null, {
    renderer: "svg", ssr: true, width: WIDTH, height: HEIGHT,
  });
  chart.setOption({
    animation: false,
    backgroundColor: "#ffffff",
    title: { text: `Figure ${fig.id}: ${fig.scenario.replace(/_/g, " ")}` },
    legend: { top: 28, data: fig.series.map((s) => s.name) },
    grid: { left: 70, right: 30, top: 70, bottom: 55 },
    xAxis: { type: "value", name: fig.xLabel, nameLocation: "middle",
             nameGap: 30, scale: true },
    yAxis: { type: "value", name: fig.yLabel, nameLocation: "middle",
             nameGap: 50 },
    series: fig.series.flatMap((s) => echartsSeries(fig, s)),
  });
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

// Plain-text record of every plotted point, in CSV units and with the
// verbatim CSV number strings, so correctness checks never touch the SVG.
export function sidecarText(fig: FigureData): string {
  const lines = [`figure ${fig.id} scenario ${fig.scenario}`];
  for (const s of fig.series) {
    lines.push(`series ${s.name}`);
    for (const p of s.points) {
      lines.push(`x=${p.x} y=${p.y} ci95=${p.ci95}`);
    }
  }
  return lines.join("\n") + "\n";
}
