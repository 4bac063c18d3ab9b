import { scaleLinear, scaleLog, ScaleContinuousNumeric } from "d3-scale";
import { line as d3line } from "d3-shape";
import { Figure, Panel, SeriesFamily } from "./figure.js";

const WIDTH = 880;
const PLOT_LEFT = 64;
const PLOT_W = 600;
const PANEL_H = 280;
const PANEL_GAP = 58;
const TITLE_H = 34;
const CAPTION_H = 18;
const LEGEND_X = PLOT_LEFT + PLOT_W + 18;

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
];

type Scale = ScaleContinuousNumeric<number, number>;

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(v: number): string {
  return String(Math.round(v * 100) / 100);
}

// off-scale points keep their direction but stay within sane coordinates
function clampPx(px: number): number {
  if (!Number.isFinite(px)) return -10 * PANEL_H;
  return Math.min(Math.max(px, -10 * PANEL_H), 11 * PANEL_H);
}

function plottable(v: number, log: boolean): boolean {
  return Number.isFinite(v) && (!log || v > 0);
}

function yExtent(panel: Panel): [number, number] | null {
  const vs: number[] = [];
  for (const fam of panel.families) {
    if (fam.line) vs.push(...fam.line);
    if (fam.markers) {
      vs.push(...fam.markers.y);
      const se = fam.markers.se;
      if (se) {
        fam.markers.y.forEach((y, i) => {
          if (Number.isFinite(se[i]) && se[i] > 0) {
            vs.push(y - se[i], y + se[i]);
          }
        });
      }
    }
  }
  const kept = vs.filter((v) => plottable(v, panel.yLog));
  if (kept.length === 0) return null;
  return [Math.min(...kept), Math.max(...kept)];
}

function makeYScale(panel: Panel): { scale: Scale; log: boolean } {
  let log = panel.yLog;
  let ext = yExtent(panel);
  if (log && ext === null) {
    log = false;
    ext = yExtent({ ...panel, yLog: false });
  }
  if (ext === null) ext = [0, 1];
  let [lo, hi] = ext;
  if (log) {
    if (lo === hi) {
      lo /= 10;
      hi *= 10;
    }
    // show at most 12 decades; anything deeper is clipped, not squeezed
    lo = Math.max(lo, hi * 1e-12);
    return { scale: scaleLog().domain([lo, hi]).range([PANEL_H, 0]).nice(), log };
  }
  if (lo === hi) {
    const pad = Math.max(1, Math.abs(lo)) * 0.1;
    lo -= pad;
    hi += pad;
  } else {
    const pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
  return { scale: scaleLinear().domain([lo, hi]).range([PANEL_H, 0]).nice(), log };
}

function makeXScale(x: number[]): Scale {
  const finite = x.filter(Number.isFinite);
  let lo = finite.length ? Math.min(...finite) : 0;
  let hi = finite.length ? Math.max(...finite) : 1;
  if (lo === hi) {
    const pad = Math.max(1, Math.abs(lo)) * 0.05;
    lo -= pad;
    hi += pad;
  } else {
    const pad = (hi - lo) * 0.02;
    lo -= pad;
    hi += pad;
  }
  return scaleLinear().domain([lo, hi]).range([0, PLOT_W]);
}

interface Tick {
  v: number;
  label: string;
}

function linearTicks(scale: Scale, count: number, integersOnly: boolean): Tick[] {
  let vs = scale.ticks(count);
  if (integersOnly) vs = vs.filter((v) => Number.isInteger(v));
  const f = scale.tickFormat(count);
  return vs.map((v) => ({ v, label: f(v) }));
}

function logTicks(scale: Scale): Tick[] {
  const [d0, d1] = scale.domain();
  const k0 = Math.ceil(Math.log10(d0) - 1e-9);
  const k1 = Math.floor(Math.log10(d1) + 1e-9);
  const step = Math.max(1, Math.ceil((k1 - k0) / 6));
  const ticks: Tick[] = [];
  for (let k = k0; k <= k1; k += step) {
    ticks.push({ v: Math.pow(10, k), label: `1e${k}` });
  }
  return ticks;
}

function lineMarkup(
  values: number[],
  x: number[],
  xs: Scale,
  ys: Scale,
  log: boolean,
  color: string,
  dashed: boolean,
): string {
  const gen = d3line<number>()
    .x((_, i) => Math.round(xs(x[i]) * 100) / 100)
    .y((v) => Math.round(clampPx(ys(v)) * 100) / 100)
    .defined((v, i) => plottable(v, log) && Number.isFinite(x[i]));
  const d = gen(values);
  if (!d) return "";
  const dash = dashed ? ' stroke-dasharray="6 4"' : "";
  return `<path d="${d}" fill="none" stroke="${color}" stroke-width="1.5"${dash}/>`;
}

function markerMarkup(
  fam: SeriesFamily,
  x: number[],
  xs: Scale,
  ys: Scale,
  log: boolean,
  color: string,
): string {
  const out: string[] = [];
  const m = fam.markers!;
  for (let i = 0; i < m.y.length; i++) {
    const y = m.y[i];
    if (!plottable(y, log) || !Number.isFinite(x[i])) continue;
    const cx = fmt(xs(x[i]));
    const cy = fmt(clampPx(ys(y)));
    const se = m.se ? m.se[i] : 0;
    if (Number.isFinite(se) && se > 0) {
      const hiPx = fmt(clampPx(ys(y + se)));
      const lo = y - se;
      const truncated = log && lo <= 0;
      const loPx = truncated ? fmt(PANEL_H) : fmt(clampPx(ys(lo)));
      out.push(
        `<line x1="${cx}" y1="${loPx}" x2="${cx}" y2="${hiPx}" stroke="${color}" stroke-width="1"/>`,
        `<line x1="${Number(cx) - 3}" y1="${hiPx}" x2="${Number(cx) + 3}" y2="${hiPx}" stroke="${color}" stroke-width="1"/>`,
      );
      if (!truncated) {
        out.push(
          `<line x1="${Number(cx) - 3}" y1="${loPx}" x2="${Number(cx) + 3}" y2="${loPx}" stroke="${color}" stroke-width="1"/>`,
        );
      }
    }
    const open = m.unreliable ? m.unreliable[i] : false;
    if (open) {
      out.push(`<circle cx="${cx}" cy="${cy}" r="2.6" fill="none" stroke="${color}" stroke-width="1"/>`);
    } else {
      out.push(`<circle cx="${cx}" cy="${cy}" r="2.6" fill="${color}"/>`);
    }
  }
  return out.join("\n");
}

function legendMarkup(panel: Panel, top: number): string {
  const out: string[] = [];
  panel.families.forEach((fam, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = top + 8 + i * 17;
    if (fam.line) {
      out.push(`<line x1="${LEGEND_X}" y1="${y}" x2="${LEGEND_X + 20}" y2="${y}" stroke="${color}" stroke-width="1.5"/>`);
    } else if (fam.dashed) {
      out.push(
        `<line x1="${LEGEND_X}" y1="${y}" x2="${LEGEND_X + 20}" y2="${y}" stroke="${color}" stroke-width="1.5" stroke-dasharray="6 4"/>`,
      );
    }
    if (fam.markers) {
      out.push(`<circle cx="${LEGEND_X + 10}" cy="${y}" r="2.6" fill="${color}"/>`);
    }
    out.push(
      `<text x="${LEGEND_X + 26}" y="${y + 3.5}" font-size="10.5" fill="#333">${esc(fam.base)}</text>`,
    );
  });
  return out.join("\n");
}

function panelMarkup(
  fig: Figure,
  panel: Panel,
  index: number,
  slug: string,
  xs: Scale,
  xTicks: Tick[],
): string {
  const top = TITLE_H + index * (PANEL_H + PANEL_GAP);
  const { scale: ys, log } = makeYScale(panel);
  const yTicks = log ? logTicks(ys) : linearTicks(ys, 6, false);
  const clipId = `${slug}-p${index}`;
  const out: string[] = [];
  out.push(`<g transform="translate(${PLOT_LEFT},${top})">`);

  for (const t of yTicks) {
    const py = fmt(ys(t.v));
    out.push(`<line x1="0" y1="${py}" x2="${PLOT_W}" y2="${py}" stroke="#e0e0e0" stroke-width="0.7"/>`);
    out.push(`<text x="-8" y="${Number(py) + 3.5}" font-size="10.5" text-anchor="end" fill="#333">${esc(t.label)}</text>`);
  }
  for (const t of xTicks) {
    const px = fmt(xs(t.v));
    out.push(`<line x1="${px}" y1="${PANEL_H}" x2="${px}" y2="${PANEL_H + 5}" stroke="#333" stroke-width="1"/>`);
    out.push(
      `<text x="${px}" y="${PANEL_H + 17}" font-size="10.5" text-anchor="middle" fill="#333">${esc(t.label)}</text>`,
    );
  }
  out.push(`<rect x="0" y="0" width="${PLOT_W}" height="${PANEL_H}" fill="none" stroke="#333" stroke-width="1"/>`);
  out.push(
    `<text x="${PLOT_W / 2}" y="${PANEL_H + 36}" font-size="12" text-anchor="middle" fill="#111">${esc(fig.xLabel)}</text>`,
  );
  out.push(
    `<text transform="translate(${-52},${PANEL_H / 2}) rotate(-90)" font-size="12" text-anchor="middle" fill="#111">${esc(panel.yLabel)}</text>`,
  );

  out.push(`<g clip-path="url(#${clipId})">`);
  panel.families.forEach((fam, i) => {
    const color = PALETTE[i % PALETTE.length];
    if (fam.dashed) out.push(lineMarkup(fam.dashed, fig.x, xs, ys, log, color, true));
    if (fam.line) out.push(lineMarkup(fam.line, fig.x, xs, ys, log, color, false));
    if (fam.markers) out.push(markerMarkup(fam, fig.x, xs, ys, log, color));
  });
  out.push("</g>");
  out.push("</g>");
  out.push(legendMarkup(panel, top));
  return out.filter((s) => s !== "").join("\n");
}

function captionText(fig: Figure): string {
  const parts: string[] = [];
  const fams = fig.panels.flatMap((p) => p.families);
  if (fams.some((f) => f.markers)) parts.push("markers: simulated, bars: +/- 1 SE");
  if (fams.some((f) => f.dashed)) parts.push("dashed: asymptotic");
  if (fams.some((f) => f.markers?.unreliable?.some((u) => u))) {
    parts.push("open markers: flagged unreliable");
  }
  return parts.join("; ");
}

/** Render a figure to a standalone SVG document. */
export function renderFigure(fig: Figure): string {
  const slug = fig.name.replace(/[^A-Za-z0-9_-]/g, "-") || "figure";
  const caption = captionText(fig);
  const height =
    TITLE_H + fig.panels.length * (PANEL_H + PANEL_GAP) + (caption ? CAPTION_H : 0);
  const xs = makeXScale(fig.x);
  const integersOnly = fig.x.every((v) => Number.isInteger(v));
  const xTicks = linearTicks(xs, 6, integersOnly);

  const out: string[] = [];
  out.push('<?xml version="1.0" encoding="UTF-8"?>');
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${height}" ` +
      `viewBox="0 0 ${WIDTH} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  out.push(`<rect x="0" y="0" width="${WIDTH}" height="${height}" fill="#ffffff"/>`);
  out.push("<defs>");
  fig.panels.forEach((_, i) => {
    out.push(
      `<clipPath id="${slug}-p${i}"><rect x="0" y="0" width="${PLOT_W}" height="${PANEL_H}"/></clipPath>`,
    );
  });
  out.push("</defs>");
  out.push(
    `<text x="${PLOT_LEFT + PLOT_W / 2}" y="22" font-size="14" font-weight="bold" text-anchor="middle" fill="#111">${esc(fig.name)}</text>`,
  );
  fig.panels.forEach((panel, i) => {
    out.push(panelMarkup(fig, panel, i, slug, xs, xTicks));
  });
  if (caption) {
    out.push(
      `<text x="${PLOT_LEFT}" y="${height - 6}" font-size="10.5" fill="#555">${esc(caption)}</text>`,
    );
  }
  out.push("</svg>");
  return out.join("\n");
}
