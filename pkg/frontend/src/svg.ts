/**
 * Minimal deterministic SVG plotting helpers: fixed size, fixed styling,
 * no timestamps, numbers formatted to a fixed precision so re-rendering
 * identical inputs is byte-identical.
 */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 40, right: 30, bottom: 52, left: 64 };

export const PALETTE = ["#1f6fb2", "#d1495b", "#3f8f57", "#8a5ab5", "#b9772e"];

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  const s = x.toPrecision(6);
  // normalize away trailing zeros so the output is stable across engines
  return String(Number(s));
}

export interface Scale {
  (x: number): number;
  ticks(): number[];
}

function niceLinearTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  const f = ((x: number) => outLo + ((x - lo) / span) * (outHi - outLo)) as Scale;
  f.ticks = () => niceLinearTicks(lo, hi);
  return f;
}

export function log10Scale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const a = Math.log10(lo);
  const b = Math.log10(hi);
  const span = b - a || 1;
  const f = ((x: number) => outLo + ((Math.log10(x) - a) / span) * (outHi - outLo)) as Scale;
  f.ticks = () => {
    const ticks: number[] = [];
    for (let e = Math.ceil(a); e <= Math.floor(b) + 1e-9; e += 1) {
      ticks.push(Math.pow(10, e));
    }
    return ticks;
  };
  return f;
}

export class SvgBuilder {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${escapeXml(title)}</text>`,
    );
  }

  raw(s: string): void {
    this.parts.push(s);
  }

  axes(
    xScale: Scale,
    yScale: Scale,
    xLabel: string,
    yLabel: string,
    xTickFmt: (v: number) => string = fmt,
    yTickFmt: (v: number) => string = fmt,
  ): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333" stroke-width="1"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333" stroke-width="1"/>`,
    );
    for (const t of xScale.ticks()) {
      const px = fmt(xScale(t));
      this.parts.push(
        `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`,
        `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11">${xTickFmt(t)}</text>`,
      );
    }
    for (const t of yScale.ticks()) {
      const py = fmt(yScale(t));
      this.parts.push(
        `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`,
        `<text x="${x0 - 9}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="11">${yTickFmt(t)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">${escapeXml(xLabel)}</text>`,
      `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`,
    );
  }

  polyline(points: [number, number][], color: string, dashed = false, extra = ""): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const dash = dashed ? ` stroke-dasharray="6 4"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"${dash}${extra}/>`,
    );
  }

  text(x: number, y: number, label: string, color = "#333", size = 12): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" fill="${color}">${escapeXml(label)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}
