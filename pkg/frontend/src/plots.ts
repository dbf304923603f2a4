/** The three plot kinds, each a pure function from parsed CSV rows to SVG text. */

import type { ConvergenceRow, GridPoint, McRow } from "./csv.js";
import { Figure, PALETTE, linearScale, logScale } from "./svg.js";

export interface Segment {
  /** Midpoint (geometric) of the two n values, for annotation placement. */
  nMid: number;
  errMid: number;
  /** log(err_i/err_{i+1}) / log(n_{i+1}/n_i) over the segment. */
  order: number;
}

/** Observed order over each consecutive pair of rows (the reference row excluded upstream). */
export function segmentOrders(rows: ConvergenceRow[]): Segment[] {
  const out: Segment[] = [];
  for (let i = 0; i + 1 < rows.length; i++) {
    const a = rows[i];
    const b = rows[i + 1];
    out.push({
      nMid: Math.sqrt(a.n * b.n),
      errMid: Math.sqrt(a.supError * b.supError),
      order: Math.log(a.supError / b.supError) / Math.log(b.n / a.n),
    });
  }
  return out;
}

/** Least-squares slope of log(err) against log(1/n); NaN with fewer than two rows. */
export function fittedOrder(rows: ConvergenceRow[]): number {
  if (rows.length < 2) return NaN;
  const xs = rows.map((r) => Math.log(r.n));
  const ys = rows.map((r) => Math.log(r.supError));
  const mx = xs.reduce((s, v) => s + v, 0) / xs.length;
  const my = ys.reduce((s, v) => s + v, 0) / ys.length;
  let num = 0;
  let den = 0;
  for (let i = 0; i < xs.length; i++) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return -num / den;
}

export function renderConvergence(rows: ConvergenceRow[], title = "Convergence"): string {
  // Zero-error rows (exact constant-coefficient runs) cannot sit on a log axis.
  const plottable = rows.filter((r) => r.supError > 0);
  if (plottable.length === 0) {
    throw new Error("no rows with positive sup_error to plot on a log scale");
  }
  const fig = new Figure();
  const ns = plottable.map((r) => r.n);
  const errs = plottable.map((r) => r.supError);
  const x = logScale([Math.min(...ns) / 1.3, Math.max(...ns) * 1.3], [fig.plotLeft, fig.plotRight]);
  const y = logScale([Math.min(...errs) / 2, Math.max(...errs) * 2], [fig.plotBottom, fig.plotTop]);
  const overall = fittedOrder(plottable);
  const heading = Number.isNaN(overall) ? title : `${title} (fitted order ${overall.toFixed(2)})`;
  fig.axes(x, y, "n (number of factors)", "sup error", heading);
  fig.polyline(
    plottable.map((r) => [x(r.n), y(r.supError)]),
    PALETTE[0],
  );
  for (const r of plottable) {
    fig.circle(x(r.n), y(r.supError), 3.5, PALETTE[0]);
  }
  for (const seg of segmentOrders(plottable)) {
    fig.text(x(seg.nMid) + 6, y(seg.errMid) - 6, `order ${seg.order.toFixed(2)}`, {
      size: 10,
      fill: "#555",
    });
  }
  return fig.render();
}

export interface NamedSeries {
  label: string;
  points: GridPoint[];
}

export function renderSnapshot(series: NamedSeries[], title = "State snapshot"): string {
  if (series.length === 0) {
    throw new Error("snapshot needs at least one input file");
  }
  const fig = new Figure();
  const qs = series.flatMap((s) => s.points.map((p) => p.q));
  const vs = series.flatMap((s) => s.points.map((p) => p.re));
  const lo = Math.min(...vs);
  const hi = Math.max(...vs);
  const pad = (hi - lo || 1) * 0.08;
  const x = linearScale([Math.min(...qs), Math.max(...qs)], [fig.plotLeft, fig.plotRight]);
  const y = linearScale([lo - pad, hi + pad], [fig.plotBottom, fig.plotTop]);
  fig.axes(x, y, "q", "Re value", title);
  series.forEach((s, i) => {
    fig.polyline(
      s.points.map((p) => [x(p.q), y(p.re)]),
      PALETTE[i % PALETTE.length],
    );
  });
  fig.legend(series.map((s, i) => ({ label: s.label, color: PALETTE[i % PALETTE.length] })));
  return fig.render();
}

/** Linear interpolation of the grid curve's real part at q. */
export function interpolateCurve(points: GridPoint[], q: number): number {
  if (q <= points[0].q) return points[0].re;
  const last = points[points.length - 1];
  if (q >= last.q) return last.re;
  let lo = 0;
  let hi = points.length - 1;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (points[mid].q <= q) lo = mid;
    else hi = mid;
  }
  const a = points[lo];
  const b = points[hi];
  const w = (q - a.q) / (b.q - a.q);
  return a.re + w * (b.re - a.re);
}

export interface McCheck {
  row: McRow;
  curveValue: number;
  /** |mean - curve| in units of std_error. */
  z: number;
  /** Whether the 3-sigma bar [mean ± 3 SE] covers the curve value. */
  barIntersectsCurve: boolean;
}

export function compareMcToCurve(grid: GridPoint[], mc: McRow[]): McCheck[] {
  return mc.map((row) => {
    const curveValue = interpolateCurve(grid, row.q0);
    const z = Math.abs(row.mean - curveValue) / row.stdError;
    return { row, curveValue, z, barIntersectsCurve: z <= 3.0 };
  });
}

export function renderMcCompare(grid: GridPoint[], mc: McRow[], title = "Monte Carlo vs grid"): string {
  const fig = new Figure();
  const qs = grid.map((p) => p.q).concat(mc.map((r) => r.q0));
  const vs = grid.map((p) => p.re).concat(mc.flatMap((r) => [r.mean - 3 * r.stdError, r.mean + 3 * r.stdError]));
  const lo = Math.min(...vs);
  const hi = Math.max(...vs);
  const pad = (hi - lo || 1) * 0.08;
  const x = linearScale([Math.min(...qs), Math.max(...qs)], [fig.plotLeft, fig.plotRight]);
  const y = linearScale([lo - pad, hi + pad], [fig.plotBottom, fig.plotTop]);
  fig.axes(x, y, "q", "value", title);
  fig.polyline(
    grid.map((p) => [x(p.q), y(p.re)]),
    PALETTE[0],
  );
  for (const row of mc) {
    const cx = x(row.q0);
    fig.line(cx, y(row.mean - 3 * row.stdError), cx, y(row.mean + 3 * row.stdError), PALETTE[1], 1.5);
    fig.line(cx - 4, y(row.mean - 3 * row.stdError), cx + 4, y(row.mean - 3 * row.stdError), PALETTE[1], 1.5);
    fig.line(cx - 4, y(row.mean + 3 * row.stdError), cx + 4, y(row.mean + 3 * row.stdError), PALETTE[1], 1.5);
    fig.circle(cx, y(row.mean), 3.5, PALETTE[1]);
  }
  fig.legend([
    { label: "grid curve", color: PALETTE[0] },
    { label: "MC mean ± 3 SE", color: PALETTE[1] },
  ]);
  return fig.render();
}
