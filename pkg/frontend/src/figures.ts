/**
 * The three figure kinds rendered from a simulation output directory:
 *
 *   pc-sequence   — per-TTI power commands of both arms (final episode)
 *   sinr-timeline — effective downlink SINR vs TTI with the target and
 *                   minimum reference lines from the CSV's constant columns
 *   mos-bars      — MOS comparison across arms
 *
 * Each kind declares the CSV columns it needs; schema violations raise
 * SchemaError with the missing column names.
 */

import { readFileSync, writeFileSync } from "fs";
import path from "path";

import { numeric, parseCsv, requireColumns, type Table } from "./csv.js";
import { renderBarChart, renderChart, type Series } from "./chart.js";

export type FigureKind = "pc-sequence" | "sinr-timeline" | "mos-bars";

export interface FigureSpec {
  kind: FigureKind;
  inputPath: string;
  outputPath: string;
}

export const FIGURE_INPUTS: Record<FigureKind, string> = {
  "pc-sequence": "fig_pc_sequence.csv",
  "sinr-timeline": "fig_sinr_timeline.csv",
  "mos-bars": "fig_mos_comparison.csv",
};

export const FIGURE_KINDS = Object.keys(FIGURE_INPUTS) as FigureKind[];

const ARM_COLORS: Record<string, string> = {
  fpa: "#e63946",
  qlearn: "#2855c8",
};

function color(arm: string, index: number): string {
  return ARM_COLORS[arm] ?? ["#2a9d8f", "#7d3ac1", "#b5651d"][index % 3];
}

function loadTable(inputPath: string): Table {
  const text = readFileSync(inputPath, "utf-8");
  return parseCsv(text, path.basename(inputPath));
}

function byArm(table: Table): Map<string, Record<string, string>[]> {
  const groups = new Map<string, Record<string, string>[]>();
  for (const row of table.rows) {
    const arm = row["arm"]!;
    if (!groups.has(arm)) {
      groups.set(arm, []);
    }
    groups.get(arm)!.push(row);
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Renderers
// ---------------------------------------------------------------------------

function pcSequenceSvg(table: Table, source: string): string {
  requireColumns(table, ["arm", "episode", "t", "c", "eta", "command_db"], source);
  const series: Series[] = [];
  let i = 0;
  for (const [arm, rows] of byArm(table)) {
    series.push({
      label: arm,
      color: color(arm, i++),
      step: true,
      markers: true,
      points: rows.map((r) => [numeric(r, "t"), numeric(r, "command_db")]),
    });
  }
  return renderChart({
    title: "Power control commands, final episode",
    xLabel: "TTI",
    yLabel: "net command (dB)",
    series,
  });
}

function sinrTimelineSvg(table: Table, source: string): string {
  requireColumns(
    table,
    ["arm", "episode", "t", "sinr_db", "target_db", "min_db"],
    source,
  );
  const series: Series[] = [];
  let i = 0;
  for (const [arm, rows] of byArm(table)) {
    series.push({
      label: arm,
      color: color(arm, i++),
      markers: true,
      points: rows.map((r) => [numeric(r, "t"), numeric(r, "sinr_db")]),
    });
  }
  const first = table.rows[0]!;
  const target = numeric(first, "target_db");
  const minimum = numeric(first, "min_db");
  return renderChart({
    title: "Effective downlink SINR, final episode",
    xLabel: "TTI",
    yLabel: "effective SINR (dB)",
    series,
    refLines: [
      { value: target, label: `target ${target} dB`, color: "#2d6a4f" },
      { value: minimum, label: `minimum ${minimum} dB`, color: "#c1121f" },
    ],
  });
}

function mosBarsSvg(table: Table, source: string): string {
  requireColumns(table, ["arm", "mos", "retainability", "mean_per"], source);
  return renderBarChart({
    title: "Mean opinion score by power control scheme",
    yLabel: "MOS",
    yMin: 1.0,
    yMax: 4.5,
    bars: table.rows.map((r, i) => ({
      label: r["arm"]!,
      value: numeric(r, "mos"),
      color: color(r["arm"]!, i),
    })),
  });
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/** Render one figure; returns the output path. Inputs are never modified. */
export function render(spec: FigureSpec): string {
  const table = loadTable(spec.inputPath);
  const source = path.basename(spec.inputPath);
  let svg: string;
  switch (spec.kind) {
    case "pc-sequence":
      svg = pcSequenceSvg(table, source);
      break;
    case "sinr-timeline":
      svg = sinrTimelineSvg(table, source);
      break;
    case "mos-bars":
      svg = mosBarsSvg(table, source);
      break;
    default:
      throw new Error(`unknown figure kind ${String(spec.kind)}`);
  }
  writeFileSync(spec.outputPath, svg + "\n");
  return spec.outputPath;
}

/** Render the selected kinds from a run directory into an output directory. */
export function renderAll(
  inDir: string,
  outDir: string,
  kinds: FigureKind[] = FIGURE_KINDS,
): string[] {
  return kinds.map((kind) =>
    render({
      kind,
      inputPath: path.join(inDir, FIGURE_INPUTS[kind]),
      outputPath: path.join(outDir, `${kind}.svg`),
    }),
  );
}
