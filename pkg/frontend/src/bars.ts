/**
 * Coverage bar chart: one gray bar per report in input order, heights
 * proportional to empirical coverage, with the shared nominal level drawn
 * as a red horizontal line across the plot area.
 *
 * All reports must share the same schema version and the same nominal
 * level; disagreement is an input error, not something to paper over with
 * multiple lines.
 */

import type { CoverageReport } from "./csv.js";
import { InputError } from "./csv.js";
import { type Image, makeImage, setPixel } from "./png.js";

export const MARGIN = 12;
export const BAR_WIDTH = 40;
export const BAR_GAP = 12;
export const PLOT_HEIGHT = 200;
export const BAR_RGB: [number, number, number] = [80, 80, 80];
export const NOMINAL_RGB: [number, number, number] = [255, 0, 0];

export function barGeometry(index: number): { x0: number; x1: number } {
  const x0 = MARGIN + index * (BAR_WIDTH + BAR_GAP);
  return { x0, x1: x0 + BAR_WIDTH - 1 };
}

export function coverageToY(coverage: number): number {
  return MARGIN + PLOT_HEIGHT - Math.round(coverage * PLOT_HEIGHT);
}

export function renderCoverageBars(reports: CoverageReport[]): Image {
  if (reports.length === 0) {
    throw new InputError("at least one coverage report is required");
  }
  const schema = reports[0]!.schemaVersion;
  const nominal = reports[0]!.nominalCoverage;
  for (const report of reports) {
    if (report.schemaVersion !== schema) {
      throw new InputError(
        `reports mix schema versions ${schema} and ${report.schemaVersion}`,
      );
    }
    if (report.nominalCoverage !== nominal) {
      throw new InputError(
        `reports mix nominal levels ${nominal} and ${report.nominalCoverage}`,
      );
    }
    if (report.empiricalCoverage < 0 || report.empiricalCoverage > 1) {
      throw new InputError(
        `${report.method}: empirical coverage ${report.empiricalCoverage} is outside [0, 1]`,
      );
    }
  }
  const width =
    2 * MARGIN + reports.length * BAR_WIDTH + (reports.length - 1) * BAR_GAP;
  const height = 2 * MARGIN + PLOT_HEIGHT;
  const image = makeImage(width, height);

  const [br, bg, bb] = BAR_RGB;
  const baseline = MARGIN + PLOT_HEIGHT;
  for (let index = 0; index < reports.length; index++) {
    const { x0, x1 } = barGeometry(index);
    const top = coverageToY(reports[index]!.empiricalCoverage);
    for (let y = top; y < baseline; y++) {
      for (let x = x0; x <= x1; x++) {
        setPixel(image, x, y, br, bg, bb);
      }
    }
  }

  const [nr, ng, nb] = NOMINAL_RGB;
  const lineY = coverageToY(nominal);
  for (let x = MARGIN; x < width - MARGIN; x++) {
    setPixel(image, x, lineY, nr, ng, nb);
  }
  return image;
}
