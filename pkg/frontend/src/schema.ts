/**
 * Parsers for the thermocap CLI's versioned CSV/JSON outputs.
 *
 * Both formats carry an explicit schema version; anything else is refused
 * so figures are never silently rendered from incompatible data.
 */

import Papa from "papaparse";

export const CSV_SCHEMA = "thermocap-csv/1";
export const JSON_SCHEMA = "thermocap/1";

export class SchemaError extends Error {}
export class EmptyDataError extends Error {}

export type CellValue = number | boolean | null;

export interface CsvTable {
  command: string;
  config: Record<string, unknown>;
  columns: string[];
  rows: Record<string, CellValue>[];
}

function parseCell(raw: string): CellValue {
  const s = raw.trim();
  if (s === "") return null;
  if (s === "true") return true;
  if (s === "false") return false;
  if (s === "inf") return Infinity;
  const num = Number(s);
  if (!Number.isNaN(num)) return num;
  throw new SchemaError(`unparseable cell value ${JSON.stringify(raw)}`);
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/);
  const first = lines[0] ?? "";
  const match = first.match(/^# schema: (.+)$/);
  if (!match) throw new SchemaError("missing schema header comment");
  if (match[1] !== CSV_SCHEMA) {
    throw new SchemaError(`unknown CSV schema version ${JSON.stringify(match[1])}`);
  }
  let command = "";
  let config: Record<string, unknown> = {};
  for (const line of lines) {
    const cmd = line.match(/^# command: (.+)$/);
    if (cmd) command = cmd[1];
    const cfg = line.match(/^# config: (.+)$/);
    if (cfg) config = JSON.parse(cfg[1]);
  }
  const body = lines.filter((l) => !l.startsWith("#")).join("\n");
  const parsed = Papa.parse<Record<string, string>>(body, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse error: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  const rows = parsed.data.map((raw) => {
    const row: Record<string, CellValue> = {};
    for (const col of columns) row[col] = parseCell(raw[col] ?? "");
    return row;
  });
  if (rows.length === 0) throw new EmptyDataError("CSV contains no data rows");
  return { command, config, columns, rows };
}

export interface JsonDocument {
  command: string;
  config: Record<string, unknown>;
  [key: string]: unknown;
}

export function parseJson(text: string): JsonDocument {
  const obj = JSON.parse(text) as Record<string, unknown>;
  if (obj.schema_version !== JSON_SCHEMA) {
    throw new SchemaError(
      `unknown JSON schema version ${JSON.stringify(obj.schema_version)}`,
    );
  }
  return obj as JsonDocument;
}
