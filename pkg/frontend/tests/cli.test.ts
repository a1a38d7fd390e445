import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { main } from "../src/cli.js";
import { decodePng } from "../src/png.js";

const fixture = (name: string): string =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

let dir: string;
let stderrSpy: ReturnType<typeof vi.spyOn>;

beforeEach(() => {
  dir = mkdtempSync(join(tmpdir(), "plots-"));
  stderrSpy = vi.spyOn(process.stderr, "write").mockImplementation(() => true);
});

afterEach(() => {
  rmSync(dir, { recursive: true, force: true });
  stderrSpy.mockRestore();
});

const stderrText = (): string =>
  stderrSpy.mock.calls.map((call) => String(call[0])).join("");

describe("heatmap command", () => {
  it("renders the fixture and embeds the sidecar config automatically", () => {
    const out = join(dir, "field.png");
    const code = main(["heatmap", "--input", fixture("rank-field.csv"), "--output", out]);
    expect(code).toBe(0);
    const { image, texts } = decodePng(readFileSync(out));
    expect(image.width).toBe(24 * 8);
    expect(texts["axes"]).toBe("alpha,beta");
    const sidecar = readFileSync(fixture("rank-field.json"), "utf8");
    expect(texts["config"]).toBe(sidecar);
    expect(JSON.parse(texts["config"]!)["command"]).toBe("scope-region");
  });

  it("accepts an explicit sidecar and cell size", () => {
    const csv = join(dir, "one.csv");
    writeFileSync(csv, "alpha,beta,omega,rank,in_region\n0.25,0.25,0.5,1,true\n");
    const meta = join(dir, "meta.json");
    writeFileSync(meta, '{"note":"hand-made"}');
    const out = join(dir, "one.png");
    const code = main([
      "heatmap",
      "--input", csv,
      "--output", out,
      "--cell-size", "1",
      "--sidecar", meta,
    ]);
    expect(code).toBe(0);
    const { image, texts } = decodePng(readFileSync(out));
    expect([image.width, image.height]).toEqual([1, 1]);
    expect(texts["config"]).toBe('{"note":"hand-made"}');
  });

  it("renders without config metadata when no sidecar exists", () => {
    const csv = join(dir, "plain.csv");
    writeFileSync(csv, "alpha,beta,omega,rank,in_region\n0.25,0.25,0.5,1,true\n");
    const out = join(dir, "plain.png");
    expect(main(["heatmap", "--input", csv, "--output", out])).toBe(0);
    const { texts } = decodePng(readFileSync(out));
    expect("config" in texts).toBe(false);
  });

  it("is byte-identical across reruns", () => {
    const a = join(dir, "a.png");
    const b = join(dir, "b.png");
    main(["heatmap", "--input", fixture("rank-field.csv"), "--output", a]);
    main(["heatmap", "--input", fixture("rank-field.csv"), "--output", b]);
    expect(readFileSync(a).equals(readFileSync(b))).toBe(true);
  });

  it("fails with a diagnostic on malformed CSV", () => {
    const csv = join(dir, "bad.csv");
    writeFileSync(csv, "alpha,beta\n1,2\n");
    expect(main(["heatmap", "--input", csv, "--output", join(dir, "x.png")])).toBe(1);
    expect(stderrText()).toMatch(/expected header/);
  });

  it("fails on a missing input file, a bad axis pair, a bad cell size", () => {
    const good = fixture("rank-field.csv");
    expect(
      main(["heatmap", "--input", join(dir, "nope.csv"), "--output", join(dir, "x.png")]),
    ).toBe(1);
    expect(
      main(["heatmap", "--input", good, "--output", join(dir, "x.png"), "--axes", "alpha"]),
    ).toBe(1);
    expect(
      main(["heatmap", "--input", good, "--output", join(dir, "x.png"), "--axes", "beta,beta"]),
    ).toBe(1);
    expect(
      main(["heatmap", "--input", good, "--output", join(dir, "x.png"), "--cell-size", "0"]),
    ).toBe(1);
  });

  it("requires --input and --output", () => {
    expect(main(["heatmap", "--output", join(dir, "x.png")])).toBe(1);
    expect(stderrText()).toMatch(/--input and --output/);
  });
});

describe("coverage-bars command", () => {
  const reports = [
    fixture("coverage-scope.json"),
    fixture("coverage-asym_ellipsoid.json"),
    fixture("coverage-res_bootstrap.json"),
    fixture("coverage-lr_bootstrap.json"),
  ];

  it("renders four fixture reports as four bars", () => {
    const out = join(dir, "bars.png");
    expect(main(["coverage-bars", "--output", out, ...reports])).toBe(0);
    const { image } = decodePng(readFileSync(out));
    expect(image.width).toBe(2 * 12 + 4 * 40 + 3 * 12);
  });

  it("rejects an empty report list with a usage error", () => {
    expect(main(["coverage-bars", "--output", join(dir, "bars.png")])).toBe(1);
    expect(stderrText()).toMatch(/at least one report/);
  });

  it("rejects schema mismatches with a diagnostic", () => {
    const other = join(dir, "v2.json");
    const doc = JSON.parse(readFileSync(reports[0]!, "utf8"));
    doc.schema_version = 2;
    writeFileSync(other, JSON.stringify(doc));
    expect(
      main(["coverage-bars", "--output", join(dir, "bars.png"), reports[0]!, other]),
    ).toBe(1);
    expect(stderrText()).toMatch(/schema versions/);
  });
});

describe("top-level interface", () => {
  it("rejects unknown commands and unknown flags", () => {
    expect(main(["resize"])).toBe(1);
    expect(stderrText()).toMatch(/unknown command/);
    expect(main(["heatmap", "--inptu", "x"])).toBe(1);
    expect(stderrText()).toMatch(/unknown flag/);
  });

  it("prints usage when called with no command", () => {
    expect(main([])).toBe(1);
    expect(stderrText()).toMatch(/usage:/);
  });
});
