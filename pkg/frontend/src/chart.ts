/**
 * Hand-rolled SVG chart builder: line/step series, bars, axes with ticks,
 * and labelled horizontal reference lines.
 *
 * Reference lines carry a `data-level` attribute with their y-value so that
 * rendered figures are machine-checkable.
 */

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>;
  step?: boolean;
  markers?: boolean;
}

export interface RefLine {
  value: number;
  label: string;
  color: string;
  dash?: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  refLines?: RefLine[];
  width?: number;
  height?: number;
  yMin?: number;
  yMax?: number;
}

export interface Bar {
  label: string;
  value: number;
  color: string;
}

export interface BarChartSpec {
  title: string;
  yLabel: string;
  bars: Bar[];
  yMin?: number;
  yMax?: number;
  width?: number;
  height?: number;
}

const MARGIN = { top: 34, right: 24, bottom: 44, left: 58 };

// ---------------------------------------------------------------------------
// Scales and primitives
// ---------------------------------------------------------------------------

function niceTicks(min: number, max: number, count = 6): number[] {
  if (min === max) {
    return [min];
  }
  const span = max - min;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / chosen) * chosen; v <= max + 1e-9; v += chosen) {
    ticks.push(Number(v.toFixed(10)));
  }
  return ticks;
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : String(Number(v.toFixed(6)));
}

class Scale {
  constructor(
    private d0: number,
    private d1: number,
    private r0: number,
    private r1: number,
  ) {}

  map(v: number): number {
    if (this.d1 === this.d0) {
      return (this.r0 + this.r1) / 2;
    }
    return this.r0 + ((v - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }
}

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 720;
  const height = spec.height ?? 420;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = spec.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = spec.series
    .flatMap((s) => s.points.map((p) => p[1]))
    .concat((spec.refLines ?? []).map((r) => r.value));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  let yMin = spec.yMin ?? Math.min(...ys);
  let yMax = spec.yMax ?? Math.max(...ys);
  if (yMin === yMax) {
    yMin -= 1;
    yMax += 1;
  }
  const pad = 0.06 * (yMax - yMin);
  if (spec.yMin === undefined) yMin -= pad;
  if (spec.yMax === undefined) yMax += pad;

  const sx = new Scale(xMin, xMax, MARGIN.left, MARGIN.left + plotW);
  const sy = new Scale(yMin, yMax, MARGIN.top + plotH, MARGIN.top);

  const parts: string[] = [];
  parts.push(header(width, height, spec.title));
  parts.push(axes(sx, sy, xMin, xMax, yMin, yMax, plotW, plotH, spec.xLabel, spec.yLabel));

  for (const ref of spec.refLines ?? []) {
    const y = sy.map(ref.value);
    parts.push(
      `<line class="refline" data-level="${fmt(ref.value)}" ` +
        `x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" ` +
        `stroke="${ref.color}" stroke-dasharray="${ref.dash ?? "6,4"}" stroke-width="1.5"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left + plotW - 4}" y="${y - 5}" text-anchor="end" ` +
        `fill="${ref.color}" font-size="11">${esc(ref.label)}</text>`,
    );
  }

  spec.series.forEach((s, idx) => {
    const coords = s.points.map(([x, y]) => [sx.map(x), sy.map(y)] as const);
    let d = "";
    coords.forEach(([x, y], i) => {
      if (i === 0) {
        d += `M${x},${y}`;
      } else if (s.step) {
        d += `H${x}V${y}`;
      } else {
        d += `L${x},${y}`;
      }
    });
    parts.push(
      `<path class="series" data-label="${esc(s.label)}" d="${d}" ` +
        `fill="none" stroke="${s.color}" stroke-width="1.8"/>`,
    );
    if (s.markers) {
      for (const [x, y] of coords) {
        parts.push(`<circle cx="${x}" cy="${y}" r="2.4" fill="${s.color}"/>`);
      }
    }
    parts.push(legendEntry(idx, s.label, s.color));
  });

  parts.push("</svg>");
  return parts.join("\n");
}

export function renderBarChart(spec: BarChartSpec): string {
  const width = spec.width ?? 480;
  const height = spec.height ?? 380;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const yMin = spec.yMin ?? 0;
  const yMax = spec.yMax ?? Math.max(...spec.bars.map((b) => b.value)) * 1.1;
  const sy = new Scale(yMin, yMax, MARGIN.top + plotH, MARGIN.top);

  const parts: string[] = [];
  parts.push(header(width, height, spec.title));
  const slot = plotW / spec.bars.length;
  spec.bars.forEach((bar, i) => {
    const x = MARGIN.left + slot * i + slot * 0.2;
    const w = slot * 0.6;
    const y = sy.map(bar.value);
    const base = sy.map(yMin);
    parts.push(
      `<rect class="bar" data-label="${esc(bar.label)}" data-value="${fmt(bar.value)}" ` +
        `x="${x}" y="${y}" width="${w}" height="${base - y}" fill="${bar.color}"/>`,
    );
    parts.push(
      `<text x="${x + w / 2}" y="${y - 6}" text-anchor="middle" font-size="12">` +
        `${fmt(Number(bar.value.toFixed(3)))}</text>`,
    );
    parts.push(
      `<text x="${x + w / 2}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" ` +
        `font-size="12">${esc(bar.label)}</text>`,
    );
  });
  for (const tick of niceTicks(yMin, yMax)) {
    const y = sy.map(tick);
    parts.push(
      `<line x1="${MARGIN.left - 4}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="#333"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" font-size="11">${fmt(tick)}</text>`,
    );
  }
  parts.push(
    `<text transform="rotate(-90)" x="${-(MARGIN.top + plotH / 2)}" y="16" ` +
      `text-anchor="middle" font-size="12">${esc(spec.yLabel)}</text>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${MARGIN.top + plotH}" stroke="#333"/>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" ` +
      `x2="${MARGIN.left + plotW}" y2="${MARGIN.top + plotH}" stroke="#333"/>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}

// ---------------------------------------------------------------------------
// Shared fragments
// ---------------------------------------------------------------------------

function header(width: number, height: number, title: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="14" ` +
    `font-weight="bold">${esc(title)}</text>`
  );
}

function axes(
  sx: Scale,
  sy: Scale,
  xMin: number,
  xMax: number,
  yMin: number,
  yMax: number,
  plotW: number,
  plotH: number,
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  parts.push(`<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="#333"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="#333"/>`);
  for (const tick of niceTicks(xMin, xMax)) {
    const x = sx.map(tick);
    parts.push(`<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 4}" stroke="#333"/>`);
    parts.push(
      `<text x="${x}" y="${y0 + 16}" text-anchor="middle" font-size="11">${fmt(tick)}</text>`,
    );
  }
  for (const tick of niceTicks(yMin, yMax)) {
    const y = sy.map(tick);
    parts.push(`<line x1="${x0 - 4}" y1="${y}" x2="${x0}" y2="${y}" stroke="#333"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${y + 4}" text-anchor="end" font-size="11">${fmt(tick)}</text>`,
    );
    parts.push(
      `<line x1="${x0}" y1="${y}" x2="${x0 + plotW}" y2="${y}" stroke="#eee"/>`,
    );
  }
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${y0 + 34}" text-anchor="middle" ` +
      `font-size="12">${esc(xLabel)}</text>`,
  );
  parts.push(
    `<text transform="rotate(-90)" x="${-(MARGIN.top + plotH / 2)}" y="16" ` +
      `text-anchor="middle" font-size="12">${esc(yLabel)}</text>`,
  );
  return parts.join("\n");
}

function legendEntry(index: number, label: string, color: string): string {
  const x = MARGIN.left + 10;
  const y = MARGIN.top + 12 + index * 16;
  return (
    `<line x1="${x}" y1="${y - 4}" x2="${x + 18}" y2="${y - 4}" stroke="${color}" ` +
    `stroke-width="2"/>` +
    `<text x="${x + 24}" y="${y}" font-size="11">${esc(label)}</text>`
  );
}
