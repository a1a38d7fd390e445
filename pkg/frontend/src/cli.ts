#!/usr/bin/env node
/**
 * Command-line renderer for the primary artifact's outputs.
 *
 *   scopegarch-plots heatmap --input field.csv --output field.png
 *                            [--axes alpha,beta] [--cell-size 8]
 *                            [--sidecar field.json]
 *   scopegarch-plots coverage-bars --output bars.png report.json [more.json...]
 *
 * The heatmap embeds the producing config into the PNG (tEXt chunk
 * "config"): explicitly via --sidecar, or automatically when the sidecar
 * sits next to the CSV under the primary artifact's naming rule
 * (field.csv -> field.json, name collision -> field.csv.sidecar.json).
 */

import { existsSync, readFileSync, writeFileSync } from "node:fs";

import { InputError, readCoverageReport, readRankFieldCsv } from "./csv.js";
import { type AxisName, renderHeatmap } from "./heatmap.js";
import { renderCoverageBars } from "./bars.js";
import { encodePng } from "./png.js";

const USAGE = `usage:
  scopegarch-plots heatmap --input field.csv --output field.png [--axes alpha,beta] [--cell-size N] [--sidecar field.json]
  scopegarch-plots coverage-bars --output bars.png report.json [more.json...]`;

class UsageError extends Error {}

function parseFlags(
  argv: string[],
  flags: Record<string, boolean>, // name -> takes a value
): { options: Map<string, string>; positional: string[] } {
  const options = new Map<string, string>();
  const positional: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (!arg.startsWith("--")) {
      positional.push(arg);
      continue;
    }
    const name = arg.slice(2);
    if (!(name in flags)) {
      throw new UsageError(`unknown flag --${name}`);
    }
    const value = argv[++i];
    if (value === undefined) {
      throw new UsageError(`--${name} needs a value`);
    }
    options.set(name, value);
  }
  return { options, positional };
}

function defaultSidecar(csvPath: string): string | null {
  const swapped = csvPath.replace(/\.[^./\\]+$/, ".json");
  const candidate = swapped !== csvPath ? swapped : `${csvPath}.json`;
  if (candidate !== csvPath && existsSync(candidate)) {
    return candidate;
  }
  const collision = `${csvPath}.sidecar.json`;
  return existsSync(collision) ? collision : null;
}

const AXES: AxisName[] = ["alpha", "beta", "omega"];

function runHeatmap(argv: string[]): void {
  const { options, positional } = parseFlags(argv, {
    input: true,
    output: true,
    axes: true,
    "cell-size": true,
    sidecar: true,
  });
  if (positional.length > 0) {
    throw new UsageError(`unexpected argument ${JSON.stringify(positional[0])}`);
  }
  const input = options.get("input");
  const output = options.get("output");
  if (input === undefined || output === undefined) {
    throw new UsageError("heatmap needs --input and --output");
  }
  const axesText = options.get("axes") ?? "alpha,beta";
  const axesParts = axesText.split(",");
  if (
    axesParts.length !== 2 ||
    !AXES.includes(axesParts[0] as AxisName) ||
    !AXES.includes(axesParts[1] as AxisName)
  ) {
    throw new UsageError(
      `--axes must be two of ${AXES.join("/")} separated by a comma, got ${JSON.stringify(axesText)}`,
    );
  }
  const cellSizeText = options.get("cell-size") ?? "8";
  const cellSize = Number(cellSizeText);

  const rows = readRankFieldCsv(input);
  const texts: Record<string, string> = { axes: axesText };
  const sidecarPath = options.get("sidecar") ?? defaultSidecar(input);
  if (sidecarPath !== null) {
    try {
      texts["config"] = readFileSync(sidecarPath, "utf8");
    } catch (err) {
      throw new InputError(`cannot read ${sidecarPath}: ${(err as Error).message}`);
    }
  }
  const image = renderHeatmap({
    rows,
    axes: [axesParts[0] as AxisName, axesParts[1] as AxisName],
    cellSize,
    texts,
  });
  writeFileSync(output, encodePng(image, texts));
}

function runCoverageBars(argv: string[]): void {
  const { options, positional } = parseFlags(argv, { output: true });
  const output = options.get("output");
  if (output === undefined) {
    throw new UsageError("coverage-bars needs --output");
  }
  if (positional.length === 0) {
    throw new UsageError("coverage-bars needs at least one report JSON");
  }
  const reports = positional.map(readCoverageReport);
  writeFileSync(output, encodePng(renderCoverageBars(reports)));
}

export function main(argv: string[]): number {
  try {
    const [command, ...rest] = argv;
    if (command === "heatmap") {
      runHeatmap(rest);
    } else if (command === "coverage-bars") {
      runCoverageBars(rest);
    } else {
      throw new UsageError(
        command === undefined ? USAGE : `unknown command ${JSON.stringify(command)}`,
      );
    }
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof InputError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] !== undefined && import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
