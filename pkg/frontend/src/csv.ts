/**
 * Readers for the engine's CSV files.
 *
 * All files are comma-separated, UTF-8, LF, with optional leading `#` comment
 * lines (the engine writes a `# config_hash=<hex>` line). Three schemas:
 *
 *   convergence:  n,sup_error,l2_error,observed_order,wall_ms
 *                 (observed_order is empty on the last row)
 *   grid state:   q,re,im
 *   monte carlo:  label,mean,std_error,n_paths,n_steps,seed
 *                 (labels look like "expectation q0=-2" / "girsanov q0=0")
 */

export class SchemaError extends Error {
  constructor(
    public readonly column: string,
    message: string,
  ) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface ConvergenceRow {
  n: number;
  supError: number;
  l2Error: number;
  /** Per-doubling observed order; null on the final (reference) row. */
  observedOrder: number | null;
  wallMs: number;
}

export interface GridPoint {
  q: number;
  re: number;
  im: number;
}

export interface McRow {
  label: string;
  /** Start point parsed out of the label's `q0=` part. */
  q0: number;
  mean: number;
  stdError: number;
  nPaths: number;
  nSteps: number;
  seed: number;
}

interface RawTable {
  header: string[];
  rows: string[][];
}

function splitTable(text: string): RawTable {
  const lines = text
    .split("\n")
    .map((l) => (l.endsWith("\r") ? l.slice(0, -1) : l))
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaError("(header)", "file has no header row");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((l) => l.split(","));
  return { header, rows };
}

function checkHeader(header: string[], expected: string[]): void {
  for (let i = 0; i < expected.length; i++) {
    if (header[i] !== expected[i]) {
      throw new SchemaError(
        expected[i],
        `expected column ${i + 1} to be "${expected[i]}", found "${header[i] ?? "(missing)"}"`,
      );
    }
  }
  if (header.length > expected.length) {
    throw new SchemaError(header[expected.length], `unexpected extra column "${header[expected.length]}"`);
  }
}

function num(value: string, column: string, line: number): number {
  const v = Number(value);
  if (value.trim() === "" || Number.isNaN(v)) {
    throw new SchemaError(column, `row ${line}: "${value}" is not a number in column "${column}"`);
  }
  return v;
}

export function parseConvergence(text: string): ConvergenceRow[] {
  const { header, rows } = splitTable(text);
  checkHeader(header, ["n", "sup_error", "l2_error", "observed_order", "wall_ms"]);
  return rows.map((r, i) => ({
    n: num(r[0], "n", i + 1),
    supError: num(r[1], "sup_error", i + 1),
    l2Error: num(r[2], "l2_error", i + 1),
    observedOrder: r[3] === "" ? null : num(r[3], "observed_order", i + 1),
    wallMs: num(r[4], "wall_ms", i + 1),
  }));
}

export function parseGrid(text: string): GridPoint[] {
  const { header, rows } = splitTable(text);
  checkHeader(header, ["q", "re", "im"]);
  const pts = rows.map((r, i) => ({
    q: num(r[0], "q", i + 1),
    re: num(r[1], "re", i + 1),
    im: num(r[2], "im", i + 1),
  }));
  if (pts.length === 0) {
    throw new SchemaError("q", "grid file has no data rows");
  }
  return pts;
}

export function parseMc(text: string): McRow[] {
  const { header, rows } = splitTable(text);
  checkHeader(header, ["label", "mean", "std_error", "n_paths", "n_steps", "seed"]);
  if (rows.length === 0) {
    throw new SchemaError("label", "monte carlo file has no data rows");
  }
  return rows.map((r, i) => {
    const label = r[0];
    const m = /q0=(-?[0-9.eE+-]+)/.exec(label);
    if (!m) {
      throw new SchemaError("label", `row ${i + 1}: label "${label}" has no "q0=<value>" part`);
    }
    return {
      label,
      q0: num(m[1], "label", i + 1),
      mean: num(r[1], "mean", i + 1),
      stdError: num(r[2], "std_error", i + 1),
      nPaths: num(r[3], "n_paths", i + 1),
      nSteps: num(r[4], "n_steps", i + 1),
      seed: num(r[5], "seed", i + 1),
    };
  });
}
