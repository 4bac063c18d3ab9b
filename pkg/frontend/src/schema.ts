import Papa from "papaparse";

export const SCHEMA_LINE = "# schema=star-thz-perf/v1";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export class MissingColumnError extends SchemaError {
  column: string;

  constructor(column: string, context: string) {
    super(`missing column '${column}' (${context})`);
    this.name = "MissingColumnError";
    this.column = column;
  }
}

export interface Table {
  name: string;
  columns: string[];
  rows: number[][];
}

const SPECIAL_FLOATS: Record<string, number> = {
  inf: Infinity,
  "-inf": -Infinity,
  nan: NaN,
  "-nan": NaN,
};

function parseCell(cell: string, row: number, col: string): number {
  const key = cell.trim();
  if (key in SPECIAL_FLOATS) {
    return SPECIAL_FLOATS[key];
  }
  const v = Number(cell);
  if (key === "" || Number.isNaN(v)) {
    throw new SchemaError(`row ${row}, column '${col}': not a number: '${cell}'`);
  }
  return v;
}

export function parseTable(text: string, name: string): Table {
  if (text.trim() === "") {
    throw new SchemaError("empty file");
  }
  const eol = text.indexOf("\n");
  const first = (eol < 0 ? text : text.slice(0, eol)).replace(/\r$/, "");
  if (first !== SCHEMA_LINE) {
    throw new SchemaError(
      `malformed schema header: expected '${SCHEMA_LINE}', got '${first}'`,
    );
  }
  const body = eol < 0 ? "" : text.slice(eol + 1);
  const parsed = Papa.parse<string[]>(body, { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`csv parse error: ${e.message}`);
  }
  const records = parsed.data;
  if (records.length === 0) {
    throw new SchemaError("missing header row");
  }
  const columns = records[0];
  if (columns.some((c) => c.trim() === "")) {
    throw new SchemaError("header row has an empty column name");
  }
  const seen = new Set<string>();
  for (const c of columns) {
    if (seen.has(c)) throw new SchemaError(`duplicate column '${c}'`);
    seen.add(c);
  }
  if (records.length === 1) {
    throw new SchemaError("no data rows");
  }
  const rows: number[][] = [];
  for (let i = 1; i < records.length; i++) {
    const rec = records[i];
    if (rec.length !== columns.length) {
      throw new SchemaError(
        `row ${i} has ${rec.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(rec.map((cell, j) => parseCell(cell, i, columns[j])));
  }
  return { name, columns, rows };
}

export function column(t: Table, name: string): number[] {
  const idx = t.columns.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(name, `table '${t.name}'`);
  }
  return t.rows.map((r) => r[idx]);
}
