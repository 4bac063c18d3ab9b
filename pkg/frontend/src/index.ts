export { SCHEMA_LINE, SchemaError, MissingColumnError, parseTable, column } from "./schema.js";
export type { Table } from "./schema.js";
export { buildFigure, xAxisLabel } from "./figure.js";
export type { Figure, Panel, SeriesFamily, MarkerSeries } from "./figure.js";
export { renderFigure } from "./svg.js";
export { renderCsvFile, main } from "./cli.js";
