import { MissingColumnError, SchemaError, Table } from "./schema.js";

export interface MarkerSeries {
  y: number[];
  se?: number[];
  unreliable?: boolean[];
}

export interface SeriesFamily {
  base: string;
  line?: number[];
  dashed?: number[];
  markers?: MarkerSeries;
}

export interface Panel {
  metric: string;
  yLabel: string;
  yLog: boolean;
  families: SeriesFamily[];
}

export interface Figure {
  name: string;
  xLabel: string;
  x: number[];
  panels: Panel[];
}

const X_LABELS: Record<string, string> = {
  p_dbm: "transmit power [dBm]",
  kappa_sq: "distortion power ratio",
  rho_indoor: "indoor power share",
  x: "envelope value",
  m: "element count",
};

const PANEL_STYLE: Record<string, { label: string; log: boolean }> = {
  op: { label: "outage probability", log: true },
  ec: { label: "rate [bit/s/Hz]", log: false },
  pdf: { label: "density", log: false },
  cdf: { label: "cumulative probability", log: false },
  error: { label: "truncation error", log: true },
};

type Role = "unreliable" | "se" | "mc" | "line" | "dashed";

// longer suffixes first so _mc_se is not claimed by _mc
const SUFFIX_ROLES: Array<[string, Role]> = [
  ["_mc_unreliable", "unreliable"],
  ["_mc_se", "se"],
  ["_mc", "mc"],
  ["_analytic", "line"],
  ["_asymptotic", "dashed"],
];

function splitColumn(name: string): { base: string; role: Role } {
  for (const [suffix, role] of SUFFIX_ROLES) {
    if (name.endsWith(suffix)) {
      return { base: name.slice(0, -suffix.length), role };
    }
  }
  return { base: name, role: "line" };
}

function panelMetric(base: string): string {
  if (base.endsWith("truncation_error")) {
    return "error";
  }
  for (const token of base.split("_")) {
    if (token === "op" || token === "ec" || token === "pdf" || token === "cdf") {
      return token;
    }
  }
  return "values";
}

export function xAxisLabel(name: string): string {
  return X_LABELS[name] ?? name;
}

/** Group the value columns of a parsed table into per-base series families. */
export function buildFigure(t: Table): Figure {
  if (t.columns.length < 2) {
    throw new SchemaError(`table '${t.name}' has no series columns`);
  }
  const xName = t.columns[0];
  const x = t.rows.map((r) => r[0]);

  const order: string[] = [];
  const collected = new Map<string, Partial<Record<Role, number[]>>>();
  for (let j = 1; j < t.columns.length; j++) {
    const { base, role } = splitColumn(t.columns[j]);
    let entry = collected.get(base);
    if (!entry) {
      entry = {};
      collected.set(base, entry);
      order.push(base);
    }
    if (entry[role]) {
      throw new SchemaError(`duplicate series '${t.columns[j]}' for base '${base}'`);
    }
    entry[role] = t.rows.map((r) => r[j]);
  }

  const families = new Map<string, SeriesFamily>();
  for (const base of order) {
    const entry = collected.get(base)!;
    const fam: SeriesFamily = { base };
    if (entry.line) fam.line = entry.line;
    if (entry.dashed) fam.dashed = entry.dashed;
    if (entry.mc) {
      fam.markers = { y: entry.mc };
      if (entry.se) fam.markers.se = entry.se;
      if (entry.unreliable) fam.markers.unreliable = entry.unreliable.map((v) => v !== 0);
    } else if (entry.se || entry.unreliable) {
      throw new MissingColumnError(`${base}_mc`, `table '${t.name}' has its companions`);
    }
    families.set(base, fam);
  }

  const panels: Panel[] = [];
  const panelIndex = new Map<string, number>();
  for (const base of order) {
    const metric = panelMetric(base);
    let idx = panelIndex.get(metric);
    if (idx === undefined) {
      const style = PANEL_STYLE[metric] ?? { label: "value", log: false };
      idx = panels.length;
      panelIndex.set(metric, idx);
      panels.push({ metric, yLabel: style.label, yLog: style.log, families: [] });
    }
    panels[idx].families.push(families.get(base)!);
  }

  return { name: t.name, xLabel: xAxisLabel(xName), x, panels };
}
