/**
 * Minimal CSV reader for the simulator's output files.
 *
 * Files start with `#` comment lines (config hash / seed stamp), then a
 * header row, then data rows. Parsing is strict: figure kinds declare the
 * columns they need and anything missing raises a SchemaError naming them.
 */

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string, source = "<csv>"): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0 && !line.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty CSV (no header row)`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `${source}: row ${i + 1} has ${cells.length} fields, expected ${columns.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((col, j) => (row[col] = cells[j].trim()));
    return row;
  });
  return { columns, rows };
}

/** Assert the table carries every required column and at least one row. */
export function requireColumns(
  table: Table,
  required: string[],
  source = "<csv>",
): void {
  const missing = required.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${source}: missing required column(s) ${missing.join(", ")}; ` +
        `found ${table.columns.join(", ")}`,
    );
  }
  if (table.rows.length === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
}

export function numeric(row: Record<string, string>, column: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`non-numeric value ${row[column]!} in column ${column}`);
  }
  return value;
}
