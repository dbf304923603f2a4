/** Minimal SVG figure builder: scales, axes, lines, markers, text. */

export interface Scale {
  (value: number): number;
  ticks(): number[];
}

function niceLinearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= target) ?? 10 * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return ticks;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.ticks = () => niceLinearTicks(d0, d1);
  return fn;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const [r0, r1] = range;
  const span = l1 - l0 || 1;
  const fn = ((v: number) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0)) as Scale;
  fn.ticks = () => {
    const ticks: number[] = [];
    for (let e = Math.ceil(l0 - 1e-9); e <= Math.floor(l1 + 1e-9); e++) {
      ticks.push(Math.pow(10, e));
    }
    return ticks.length >= 2 ? ticks : [d0, d1];
  };
  return fn;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(0).replace("e+", "e").replace("e-", "e-");
  }
  return String(Number(v.toPrecision(6)));
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export const PALETTE = ["#1f6fb2", "#d95f02", "#2a9d58", "#7b4fa6", "#c23a4b", "#6b6b6b"];

export interface Margins {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export class Figure {
  private parts: string[] = [];
  readonly margins: Margins = { left: 64, right: 20, top: 36, bottom: 48 };

  constructor(
    readonly width = 720,
    readonly height = 480,
  ) {}

  get plotLeft(): number {
    return this.margins.left;
  }
  get plotRight(): number {
    return this.width - this.margins.right;
  }
  get plotTop(): number {
    return this.margins.top;
  }
  get plotBottom(): number {
    return this.height - this.margins.bottom;
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#000", width = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" y2="${y2.toFixed(2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    this.parts.push(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="${r}" fill="${fill}"/>`);
  }

  text(
    x: number,
    y: number,
    content: string,
    opts: { size?: number; anchor?: string; fill?: string; rotate?: boolean } = {},
  ): void {
    const { size = 12, anchor = "start", fill = "#222", rotate = false } = opts;
    const transform = rotate ? ` transform="rotate(-90 ${x.toFixed(2)} ${y.toFixed(2)})"` : "";
    this.parts.push(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-size="${size}" text-anchor="${anchor}" fill="${fill}" font-family="sans-serif"${transform}>${esc(content)}</text>`,
    );
  }

  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string, title: string): void {
    const { plotLeft: l, plotRight: r, plotTop: t, plotBottom: b } = this;
    this.line(l, b, r, b, "#333");
    this.line(l, t, l, b, "#333");
    for (const v of xScale.ticks()) {
      const x = xScale(v);
      if (x < l - 0.5 || x > r + 0.5) continue;
      this.line(x, b, x, b + 5, "#333");
      this.line(x, t, x, b, "#e5e5e5", 0.5);
      this.text(x, b + 18, formatTick(v), { anchor: "middle", size: 11 });
    }
    for (const v of yScale.ticks()) {
      const y = yScale(v);
      if (y < t - 0.5 || y > b + 0.5) continue;
      this.line(l - 5, y, l, y, "#333");
      this.line(l, y, r, y, "#e5e5e5", 0.5);
      this.text(l - 8, y + 4, formatTick(v), { anchor: "end", size: 11 });
    }
    this.text((l + r) / 2, this.height - 10, xLabel, { anchor: "middle" });
    this.text(16, (t + b) / 2, yLabel, { anchor: "middle", rotate: true });
    this.text((l + r) / 2, 20, title, { anchor: "middle", size: 14 });
  }

  legend(entries: Array<{ label: string; color: string }>): void {
    const x = this.plotLeft + 12;
    let y = this.plotTop + 16;
    for (const { label, color } of entries) {
      this.line(x, y - 4, x + 22, y - 4, color, 2);
      this.text(x + 28, y, label, { size: 11 });
      y += 16;
    }
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">` +
      `<rect width="${this.width}" height="${this.height}" fill="#ffffff"/>` +
      this.parts.join("") +
      "</svg>"
    );
  }
}
