/**
 * Rank-field heatmap: one square block per grid cell, grayscale shading with
 * darker = smaller rank, white mask for absent cells and for cells with
 * alpha + beta >= 1, and a red contour along edges where `in_region` flips.
 *
 * The contour is derived from the CSV's `in_region` column, never
 * re-thresholded from the rank values, so the image cannot contradict the
 * artifact that produced the CSV.  Contour segments are drawn only between
 * two cells that are both present and unmasked; a lone cell renders without
 * any contour.
 */

import type { RankFieldRow } from "./csv.js";
import { InputError } from "./csv.js";
import { type Image, makeImage, setPixel } from "./png.js";

export type AxisName = "alpha" | "beta" | "omega";

export interface HeatmapSpec {
  rows: RankFieldRow[];
  /** [x axis, y axis]; must be distinct columns. */
  axes: [AxisName, AxisName];
  /** Pixels per grid cell (>= 1). */
  cellSize?: number;
  /** Texts to embed into the PNG (e.g. the sidecar config). */
  texts?: Record<string, string>;
}

export interface Cell {
  row: RankFieldRow;
  masked: boolean;
}

export interface Layout {
  /** Sorted unique x-axis values, ascending (left to right). */
  xs: number[];
  /** Sorted unique y-axis values, descending (top to bottom, plot style). */
  ys: number[];
  /** cells[iy][ix]; null where no CSV row exists. */
  cells: (Cell | null)[][];
}

export const MASK_RGB: [number, number, number] = [255, 255, 255];
export const CONTOUR_RGB: [number, number, number] = [255, 0, 0];
const SHADE_MIN = 40;
const SHADE_MAX = 215;

export function shadeForRank(rank: number, minRank: number, maxRank: number): number {
  if (maxRank === minRank) {
    return Math.round((SHADE_MIN + SHADE_MAX) / 2);
  }
  return (
    SHADE_MIN +
    Math.round(((rank - minRank) / (maxRank - minRank)) * (SHADE_MAX - SHADE_MIN))
  );
}

export function computeLayout(rows: RankFieldRow[], axes: [AxisName, AxisName]): Layout {
  const [xAxis, yAxis] = axes;
  if (xAxis === yAxis) {
    throw new InputError(`axes must name two distinct columns, got ${xAxis},${yAxis}`);
  }
  const xs = [...new Set(rows.map((row) => row[xAxis]))].sort((a, b) => a - b);
  const ys = [...new Set(rows.map((row) => row[yAxis]))].sort((a, b) => b - a);
  const xIndex = new Map(xs.map((v, i) => [v, i]));
  const yIndex = new Map(ys.map((v, i) => [v, i]));
  const cells: (Cell | null)[][] = ys.map(() => xs.map(() => null));
  for (const row of rows) {
    const ix = xIndex.get(row[xAxis])!;
    const iy = yIndex.get(row[yAxis])!;
    if (cells[iy]![ix] !== null) {
      throw new InputError(
        `duplicate grid cell at ${xAxis}=${row[xAxis]}, ${yAxis}=${row[yAxis]}`,
      );
    }
    cells[iy]![ix] = { row, masked: row.alpha + row.beta >= 1 };
  }
  return { xs, ys, cells };
}

function visible(layout: Layout, ix: number, iy: number): Cell | null {
  if (iy < 0 || iy >= layout.ys.length || ix < 0 || ix >= layout.xs.length) {
    return null;
  }
  const cell = layout.cells[iy]![ix] ?? null;
  return cell !== null && !cell.masked ? cell : null;
}

export function renderHeatmap(spec: HeatmapSpec): Image {
  const cellSize = spec.cellSize ?? 8;
  if (!Number.isInteger(cellSize) || cellSize < 1) {
    throw new InputError(`cell size must be a positive integer, got ${cellSize}`);
  }
  const layout = computeLayout(spec.rows, spec.axes);
  const unmaskedRanks = spec.rows
    .filter((row) => row.alpha + row.beta < 1)
    .map((row) => row.rank);
  const minRank = Math.min(...unmaskedRanks);
  const maxRank = Math.max(...unmaskedRanks);

  const image = makeImage(layout.xs.length * cellSize, layout.ys.length * cellSize);
  for (let iy = 0; iy < layout.ys.length; iy++) {
    for (let ix = 0; ix < layout.xs.length; ix++) {
      const cell = layout.cells[iy]![ix] ?? null;
      const shade =
        cell === null || cell.masked
          ? null
          : shadeForRank(cell.row.rank, minRank, maxRank);
      for (let dy = 0; dy < cellSize; dy++) {
        for (let dx = 0; dx < cellSize; dx++) {
          const [r, g, b] = shade === null ? MASK_RGB : [shade, shade, shade];
          setPixel(image, ix * cellSize + dx, iy * cellSize + dy, r!, g!, b!);
        }
      }
    }
  }

  // Contour: each cell paints its own side of an edge shared with a visible
  // neighbor whose membership differs.
  const [cr, cg, cb] = CONTOUR_RGB;
  for (let iy = 0; iy < layout.ys.length; iy++) {
    for (let ix = 0; ix < layout.xs.length; ix++) {
      const cell = visible(layout, ix, iy);
      if (cell === null) {
        continue;
      }
      const x0 = ix * cellSize;
      const y0 = iy * cellSize;
      const edges: [number, number, (k: number) => [number, number]][] = [
        [ix - 1, iy, (k) => [x0, y0 + k]], // left column
        [ix + 1, iy, (k) => [x0 + cellSize - 1, y0 + k]], // right column
        [ix, iy - 1, (k) => [x0 + k, y0]], // top row
        [ix, iy + 1, (k) => [x0 + k, y0 + cellSize - 1]], // bottom row
      ];
      for (const [nx, ny, line] of edges) {
        const neighbor = visible(layout, nx, ny);
        if (neighbor !== null && neighbor.row.inRegion !== cell.row.inRegion) {
          for (let k = 0; k < cellSize; k++) {
            const [px, py] = line(k);
            setPixel(image, px, py, cr, cg, cb);
          }
        }
      }
    }
  }
  return image;
}
