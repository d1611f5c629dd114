import { readFileSync } from "fs";
import path from "path";
import { describe, expect, it } from "vitest";

import { renderCapacity, renderCiCurve, renderDeltaCi } from "../src/figures.js";
import { EmptyDataError, SchemaError, parseCsv, parseJson } from "../src/schema.js";

const DATA = path.join(__dirname, "..", "data");
const read = (name: string) => readFileSync(path.join(DATA, name), "utf-8");

const ciTables = () =>
  ["ci-curve-n005.csv", "ci-curve-n01.csv", "ci-curve-n0175.csv"].map((f) =>
    parseCsv(read(f)),
  );

describe("schema parsing", () => {
  it("parses the shipped capacity CSV", () => {
    const table = parseCsv(read("capacity.csv"));
    expect(table.command).toBe("capacity");
    expect(table.columns).toContain("Q");
    expect(table.rows.length).toBeGreaterThan(10);
    expect(table.config.grid).toBe("0.02:0.40:0.02");
  });

  it("refuses unknown CSV schema versions", () => {
    const tampered = read("capacity.csv").replace("thermocap-csv/1", "thermocap-csv/999");
    expect(() => parseCsv(tampered)).toThrow(SchemaError);
    expect(() => parseCsv("N,Q\n0.1,1.0\n")).toThrow(SchemaError);
  });

  it("refuses unknown JSON schema versions", () => {
    const tampered = read("nc.json").replace("thermocap/1", "thermocap/999");
    expect(() => parseJson(tampered)).toThrow(SchemaError);
  });

  it("refuses empty CSV bodies", () => {
    const headerOnly = read("capacity.csv").split("\n").slice(0, 4).join("\n") + "\n";
    expect(() => parseCsv(headerOnly)).toThrow(EmptyDataError);
  });
});

describe("ci-curve figure", () => {
  it("renders one labeled curve and one asymptote guide per noise level", () => {
    const svg = renderCiCurve(ciTables());
    expect((svg.match(/data-series="ci"/g) ?? []).length).toBe(3);
    expect((svg.match(/data-series="asymptote"/g) ?? []).length).toBe(3);
    expect(svg).toContain("N = 0.05");
    expect(svg).toContain("N = 0.175");
    // guide levels are the -log2(eN) capacities
    const level = -Math.log2(Math.E * 0.1);
    expect(svg).toContain(`data-level="${Number(level.toPrecision(6))}"`);
  });

  it("rejects non-ci-curve inputs", () => {
    expect(() => renderCiCurve([parseCsv(read("capacity.csv"))])).toThrow(SchemaError);
  });
});

describe("delta-ci figure", () => {
  it("places the sign-change marker at the JSON root", () => {
    const doc = parseJson(read("delta-ci-scan.json"));
    const svg = renderDeltaCi(doc);
    const report = doc.report as { N_s0: number; rows: { n_s: number; delta_ci: number }[] };
    expect(svg).toContain(`data-ns0="${Number(report.N_s0.toPrecision(6))}"`);
    // the marker is consistent with the tabulated sign change
    const below = Math.max(...report.rows.filter((r) => r.delta_ci > 0).map((r) => r.n_s));
    const above = Math.min(...report.rows.filter((r) => r.delta_ci < 0).map((r) => r.n_s));
    expect(report.N_s0).toBeGreaterThan(below);
    expect(report.N_s0).toBeLessThan(above);
  });
});

describe("capacity figure", () => {
  it("marks N_c from the JSON and shades the certified region", () => {
    const svg = renderCapacity(parseCsv(read("capacity.csv")), parseJson(read("nc.json")));
    const nc = (parseJson(read("nc.json")).N_c as number);
    expect(svg).toContain(`data-nc="${Number(nc.toPrecision(6))}"`);
    expect(svg).toContain('data-region="certified"');
    expect(svg).toContain('data-marker="zero-noise"');
  });

  it("curve reaches zero by N = 1/e", () => {
    const table = parseCsv(read("capacity.csv"));
    const beyond = table.rows.filter((r) => (r.N as number) >= 1 / Math.E);
    expect(beyond.length).toBeGreaterThan(0);
    for (const r of beyond) expect(r.Q).toBe(0);
  });
});

describe("determinism", () => {
  it("re-rendering identical inputs is byte-identical", () => {
    const a = renderCiCurve(ciTables());
    const b = renderCiCurve(ciTables());
    expect(a).toBe(b);
    const ca = renderCapacity(parseCsv(read("capacity.csv")), parseJson(read("nc.json")));
    const cb = renderCapacity(parseCsv(read("capacity.csv")), parseJson(read("nc.json")));
    expect(ca).toBe(cb);
    const da = renderDeltaCi(parseJson(read("delta-ci-scan.json")));
    const db = renderDeltaCi(parseJson(read("delta-ci-scan.json")));
    expect(da).toBe(db);
  });
});
