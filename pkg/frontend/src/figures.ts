/**
 * Figure renderers over the thermocap CLI's CSV/JSON outputs.
 *
 * Three kinds:
 *  - ci-curve: coherent information vs input strength for several noise
 *    levels, with the -log2(eN) capacity asymptotes as dashed guides;
 *  - delta-ci: the perturbative CI difference vs input strength with the
 *    sign-change marker at the root reported in the scan JSON;
 *  - capacity: Q(N) with the critical-noise marker from the nc JSON and
 *    the certified region shaded.
 *
 * All renderers are pure string -> string and deterministic.
 */

import { CsvTable, EmptyDataError, JsonDocument, SchemaError } from "./schema.js";
import {
  PALETTE,
  Scale,
  SvgBuilder,
  fmt,
  linearScale,
  log10Scale,
  plotArea,
} from "./svg.js";

export type FigureKind = "ci-curve" | "delta-ci" | "capacity";

export interface FigureSpec {
  kind: FigureKind;
  /** parsed inputs: CSV tables and/or JSON documents, in argument order */
  inputs: (CsvTable | JsonDocument)[];
  /** x-axis scale; figures default to log where curves span decades */
  xScale?: "log" | "linear";
}

const LOG2E = Math.LOG2E;

function num(v: unknown, what: string): number {
  if (typeof v !== "number" || Number.isNaN(v)) {
    throw new SchemaError(`expected a number for ${what}, got ${JSON.stringify(v)}`);
  }
  return v;
}

export function renderCiCurve(tables: CsvTable[], xScale: "log" | "linear" = "log"): string {
  if (tables.length === 0) throw new EmptyDataError("no ci-curve inputs");
  for (const t of tables) {
    if (t.command !== "ci-curve") {
      throw new SchemaError(`expected a ci-curve CSV, got command ${JSON.stringify(t.command)}`);
    }
  }
  const area = plotArea();
  const allNs = tables.flatMap((t) => t.rows.map((r) => num(r.N_s, "N_s")));
  const allIc = tables.flatMap((t) => t.rows.map((r) => num(r.I_c, "I_c")));
  const guides = tables.map((t) => {
    const n = num(t.config.noise, "config.noise");
    return { n, level: n > 0 ? -Math.log2(Math.E * n) : NaN };
  });
  const yHi = Math.max(...allIc, ...guides.map((g) => g.level).filter(Number.isFinite));
  const yLo = Math.min(0, ...allIc);
  const sx: Scale =
    xScale === "log"
      ? log10Scale(Math.min(...allNs), Math.max(...allNs), area.x0, area.x1)
      : linearScale(Math.min(...allNs), Math.max(...allNs), area.x0, area.x1);
  const sy = linearScale(yLo, yHi * 1.05, area.y0, area.y1);

  const svg = new SvgBuilder("Coherent information of the thermal-noise channel");
  svg.axes(sx, sy, "input mean photon number N_s", "I_c (bits)");
  tables.forEach((t, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = t.rows.map(
      (r) => [sx(num(r.N_s, "N_s")), sy(num(r.I_c, "I_c"))] as [number, number],
    );
    svg.polyline(pts, color, false, ` data-series="ci" data-noise="${fmt(guides[i].n)}"`);
    const last = pts[pts.length - 1];
    svg.text(area.x1 - 120, area.y1 + 18 + 16 * i, `N = ${fmt(guides[i].n)}`, color);
    if (Number.isFinite(guides[i].level)) {
      const py = sy(guides[i].level);
      svg.polyline(
        [
          [area.x0, py],
          [area.x1, py],
        ],
        color,
        true,
        ` data-series="asymptote" data-level="${fmt(guides[i].level)}"`,
      );
    }
    void last;
  });
  return svg.render();
}

interface ScanRow {
  n_s: number;
  delta_ci: number;
  sign: number;
}

export function renderDeltaCi(doc: JsonDocument): string {
  const report = doc.report as { rows?: ScanRow[]; N_s0?: number | null; N?: number } | undefined;
  if (!report || !Array.isArray(report.rows)) {
    throw new SchemaError("expected a verify-scan JSON with report.rows");
  }
  if (report.rows.length === 0) throw new EmptyDataError("scan has no rows");
  const area = plotArea();
  const rows = report.rows;
  const sx = log10Scale(
    Math.min(...rows.map((r) => r.n_s)),
    Math.max(...rows.map((r) => r.n_s)),
    area.x0,
    area.x1,
  );
  // the difference spans many decades with a sign change: use an
  // inverse-hyperbolic-sine axis so both branches stay visible
  const mag = (v: number) => Math.asinh(v / 1e-6);
  const vals = rows.map((r) => mag(r.delta_ci));
  const sy = linearScale(Math.min(...vals) * 1.05, Math.max(...vals) * 1.05, area.y0, area.y1);

  const svg = new SvgBuilder("Perturbative coherent-information difference");
  svg.axes(sx, sy, "input mean photon number N_s", "delta I_c per eps^2 (asinh scale)", fmt, () => "");
  const zero = sy(0);
  svg.polyline(
    [
      [area.x0, zero],
      [area.x1, zero],
    ],
    "#999",
    true,
  );
  svg.polyline(
    rows.map((r) => [sx(r.n_s), sy(mag(r.delta_ci))] as [number, number]),
    PALETTE[0],
    false,
    ` data-series="delta-ci"`,
  );
  if (typeof report.N_s0 === "number") {
    const px = sx(report.N_s0);
    svg.polyline(
      [
        [px, area.y0],
        [px, area.y1],
      ],
      PALETTE[1],
      true,
      ` data-marker="ns0" data-ns0="${fmt(report.N_s0)}"`,
    );
    svg.text(px + 6, area.y1 + 14, `N_s0 = ${fmt(report.N_s0)}`, PALETTE[1]);
  }
  return svg.render();
}

export function renderCapacity(table: CsvTable, ncDoc: JsonDocument): string {
  if (table.command !== "capacity") {
    throw new SchemaError(`expected a capacity CSV, got command ${JSON.stringify(table.command)}`);
  }
  const nc = num(ncDoc.N_c, "N_c");
  const area = plotArea();
  const rows = table.rows.filter((r) => Number.isFinite(num(r.N, "N")));
  const xs = rows.map((r) => num(r.N, "N"));
  const qs = rows.map((r) => num(r.Q, "Q"));
  const xHi = Math.max(...xs, 1 / Math.E);
  const sx = linearScale(0, xHi * 1.02, area.x0, area.x1);
  const sy = linearScale(0, Math.max(...qs) * 1.05, area.y0, area.y1);

  const svg = new SvgBuilder("Quantum capacity vs channel noise");
  // certified region: noise at or below the critical value
  svg.raw(
    `<rect x="${fmt(sx(0))}" y="${area.y1}" width="${fmt(sx(nc) - sx(0))}" ` +
      `height="${area.y0 - area.y1}" fill="#3f8f57" fill-opacity="0.10" data-region="certified"/>`,
  );
  svg.axes(sx, sy, "channel noise photon number N", "Q (bits per use)");
  svg.polyline(
    rows.map((r) => [sx(num(r.N, "N")), sy(num(r.Q, "Q"))] as [number, number]),
    PALETTE[0],
    false,
    ` data-series="capacity"`,
  );
  const pxNc = sx(nc);
  svg.polyline(
    [
      [pxNc, area.y0],
      [pxNc, area.y1],
    ],
    PALETTE[1],
    true,
    ` data-marker="nc" data-nc="${fmt(nc)}"`,
  );
  svg.text(pxNc + 6, area.y1 + 14, `N_c = ${fmt(nc)}`, PALETTE[1]);
  const pxZero = sx(1 / Math.E);
  svg.polyline(
    [
      [pxZero, area.y0 - 6],
      [pxZero, area.y0],
    ],
    "#333",
    false,
    ` data-marker="zero-noise" data-n="${fmt(1 / Math.E)}"`,
  );
  svg.text(pxZero - 22, area.y0 - 10, "N = 1/e", "#333", 11);
  return svg.render();
}

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case "ci-curve":
      return renderCiCurve(spec.inputs as CsvTable[], spec.xScale ?? "log");
    case "delta-ci":
      return renderDeltaCi(spec.inputs[0] as JsonDocument);
    case "capacity":
      return renderCapacity(spec.inputs[0] as CsvTable, spec.inputs[1] as JsonDocument);
    default:
      throw new SchemaError(`unknown figure kind ${JSON.stringify(spec.kind)}`);
  }
}
