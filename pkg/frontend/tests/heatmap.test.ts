import { describe, expect, it } from "vitest";
import { fileURLToPath } from "node:url";

import { readRankFieldCsv, type RankFieldRow, InputError } from "../src/csv.js";
import {
  CONTOUR_RGB,
  MASK_RGB,
  computeLayout,
  renderHeatmap,
  shadeForRank,
} from "../src/heatmap.js";
import { encodePng, getPixel, type Image } from "../src/png.js";

const fixture = (name: string): string =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

const row = (
  alpha: number,
  beta: number,
  rank: number,
  inRegion: boolean,
): RankFieldRow => ({ alpha, beta, omega: 1 - alpha - beta, rank, inRegion });

function collectColors(image: Image): Map<string, number> {
  const counts = new Map<string, number>();
  for (let y = 0; y < image.height; y++) {
    for (let x = 0; x < image.width; x++) {
      const key = getPixel(image, x, y).join(",");
      counts.set(key, (counts.get(key) ?? 0) + 1);
    }
  }
  return counts;
}

describe("renderHeatmap basics", () => {
  it("renders a single cell as a 1x1 image with no contour", () => {
    const image = renderHeatmap({
      rows: [row(0.3, 0.2, 1, true)],
      axes: ["alpha", "beta"],
      cellSize: 1,
    });
    expect(image.width).toBe(1);
    expect(image.height).toBe(1);
    const shade = shadeForRank(1, 1, 1);
    expect(getPixel(image, 0, 0)).toEqual([shade, shade, shade]);
  });

  it("renders equal ranks as a uniform color with no contour crossings", () => {
    const rows = [
      row(0.1, 0.1, 5, true),
      row(0.3, 0.1, 5, true),
      row(0.1, 0.3, 5, true),
      row(0.3, 0.3, 5, true),
    ];
    const image = renderHeatmap({ rows, axes: ["alpha", "beta"], cellSize: 4 });
    const colors = collectColors(image);
    expect(colors.size).toBe(1);
    expect(colors.has(CONTOUR_RGB.join(","))).toBe(false);
  });

  it("masks cells whose alpha + beta reaches one", () => {
    const rows = [row(0.2, 0.2, 1, true), { ...row(0.6, 0.2, 9, false), omega: 0.4, alpha: 0.8 }];
    // second row has alpha=0.8, beta=0.2 -> masked
    const image = renderHeatmap({ rows, axes: ["alpha", "beta"], cellSize: 2 });
    const colors = collectColors(image);
    expect(colors.get(MASK_RGB.join(","))).toBe(4);
  });

  it("shades smaller ranks darker", () => {
    const rows = [row(0.1, 0.1, 1, true), row(0.5, 0.1, 90, true)];
    const image = renderHeatmap({ rows, axes: ["alpha", "beta"], cellSize: 1 });
    const dark = getPixel(image, 0, 0);
    const light = getPixel(image, 1, 0);
    expect(dark[0]).toBeLessThan(light[0]);
    expect(dark[0]).toBe(dark[1]);
    expect(dark[1]).toBe(dark[2]); // grayscale
  });

  it("rejects identical axes and duplicate cells", () => {
    const rows = [row(0.1, 0.1, 1, true)];
    expect(() => renderHeatmap({ rows, axes: ["beta", "beta"] })).toThrow(InputError);
    expect(() =>
      renderHeatmap({ rows: [rows[0]!, rows[0]!], axes: ["alpha", "beta"] }),
    ).toThrow(/duplicate grid cell/);
  });

  it("supports the beta-omega axis pair", () => {
    const rows = [
      { alpha: 0.4, beta: 0.1, omega: 0.2, rank: 1, inRegion: true },
      { alpha: 0.4, beta: 0.1, omega: 0.6, rank: 8, inRegion: false },
      { alpha: 0.4, beta: 0.3, omega: 0.2, rank: 3, inRegion: true },
      { alpha: 0.4, beta: 0.3, omega: 0.6, rank: 9, inRegion: false },
    ];
    const image = renderHeatmap({ rows, axes: ["beta", "omega"], cellSize: 3 });
    expect(image.width).toBe(6);
    expect(image.height).toBe(6);
  });

  it("is deterministic byte for byte", () => {
    const rows = readRankFieldCsv(fixture("rank-field.csv"));
    const spec = { rows, axes: ["alpha", "beta"] as ["alpha", "beta"] };
    expect(encodePng(renderHeatmap(spec)).equals(encodePng(renderHeatmap(spec)))).toBe(
      true,
    );
  });
});

describe("rank-field fixture rendering", () => {
  const rows = readRankFieldCsv(fixture("rank-field.csv"));
  const cellSize = 8;
  const image = renderHeatmap({ rows, axes: ["alpha", "beta"], cellSize });
  const layout = computeLayout(rows, ["alpha", "beta"]);

  it("covers the stationary triangle and masks the rest", () => {
    expect(layout.xs.length).toBe(24);
    expect(layout.ys.length).toBe(24);
    const colors = collectColors(image);
    const maskPixels = colors.get(MASK_RGB.join(",")) ?? 0;
    expect(maskPixels).toBe((24 * 24 - 300) * cellSize * cellSize);
  });

  it("draws a visible region contour", () => {
    const colors = collectColors(image);
    expect(colors.get(CONTOUR_RGB.join(",")) ?? 0).toBeGreaterThan(0);
  });

  it("contour pixels partition the cells exactly as in_region", () => {
    // Reconstruct, from the CSV alone, the exact set of pixels that must be
    // red: for each present cell, its facing border line toward any present
    // neighbor with the opposite membership.  The rendered image must carry
    // red exactly there and nowhere else.
    const expected = new Set<string>();
    const present = (ix: number, iy: number) =>
      iy >= 0 && iy < layout.ys.length && ix >= 0 && ix < layout.xs.length
        ? layout.cells[iy]![ix]
        : null;
    for (let iy = 0; iy < layout.ys.length; iy++) {
      for (let ix = 0; ix < layout.xs.length; ix++) {
        const cell = present(ix, iy);
        if (cell === null || cell.masked) continue;
        const x0 = ix * cellSize;
        const y0 = iy * cellSize;
        const neighbors: [number, number, (k: number) => [number, number]][] = [
          [ix - 1, iy, (k) => [x0, y0 + k]],
          [ix + 1, iy, (k) => [x0 + cellSize - 1, y0 + k]],
          [ix, iy - 1, (k) => [x0 + k, y0]],
          [ix, iy + 1, (k) => [x0 + k, y0 + cellSize - 1]],
        ];
        for (const [nx, ny, line] of neighbors) {
          const other = present(nx, ny);
          if (other !== null && !other.masked && other.row.inRegion !== cell.row.inRegion) {
            for (let k = 0; k < cellSize; k++) {
              expected.add(line(k).join(","));
            }
          }
        }
      }
    }
    expect(expected.size).toBeGreaterThan(0);
    const contour = CONTOUR_RGB.join(",");
    const actual = new Set<string>();
    for (let y = 0; y < image.height; y++) {
      for (let x = 0; x < image.width; x++) {
        if (getPixel(image, x, y).join(",") === contour) {
          actual.add(`${x},${y}`);
        }
      }
    }
    expect(actual).toEqual(expected);
  });

  it("shades every present cell by its rank, center pixels untouched by contour", () => {
    const ranks = rows.map((r) => r.rank);
    const minRank = Math.min(...ranks);
    const maxRank = Math.max(...ranks);
    for (let iy = 0; iy < layout.ys.length; iy++) {
      for (let ix = 0; ix < layout.xs.length; ix++) {
        const cell = layout.cells[iy]![ix];
        if (cell === null) continue;
        const shade = shadeForRank(cell.row.rank, minRank, maxRank);
        const center = getPixel(
          image,
          ix * cellSize + cellSize / 2,
          iy * cellSize + cellSize / 2,
        );
        expect(center).toEqual([shade, shade, shade]);
      }
    }
  });
});
