/**
 * Strict readers for the primary artifact's file formats.
 *
 * The rank-field CSV has the fixed header `alpha,beta,omega,rank,in_region`;
 * every row is five fields: three finite floats, a positive integer rank and
 * a `true`/`false` membership flag.  Coverage reports are JSON documents
 * carrying `schema_version`, `method`, `empirical_coverage` and
 * `nominal_coverage`.  Anything else is a hard error naming the offending
 * line or field — these files are machine-written, so leniency only hides
 * bugs upstream.
 */

import { readFileSync } from "node:fs";

export const RANK_FIELD_HEADER = "alpha,beta,omega,rank,in_region";

export interface RankFieldRow {
  alpha: number;
  beta: number;
  omega: number;
  rank: number;
  inRegion: boolean;
}

export class InputError extends Error {}

function parseFloatStrict(text: string, where: string): number {
  const value = Number(text);
  if (text.trim() === "" || !Number.isFinite(value)) {
    throw new InputError(`${where}: ${JSON.stringify(text)} is not a finite number`);
  }
  return value;
}

export function parseRankFieldCsv(text: string): RankFieldRow[] {
  const lines = text.split("\n");
  if (lines.length === 0 || lines[0] !== RANK_FIELD_HEADER) {
    throw new InputError(
      `rank-field CSV line 1: expected header ${JSON.stringify(RANK_FIELD_HEADER)}`,
    );
  }
  const rows: RankFieldRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line === "") {
      continue; // trailing newline
    }
    const where = `rank-field CSV line ${i + 1}`;
    const fields = line.split(",");
    if (fields.length !== 5) {
      throw new InputError(`${where}: expected 5 fields, got ${fields.length}`);
    }
    const rank = Number(fields[3]);
    if (!Number.isInteger(rank) || rank < 1) {
      throw new InputError(
        `${where}: rank must be a positive integer, got ${JSON.stringify(fields[3])}`,
      );
    }
    const flag = fields[4];
    if (flag !== "true" && flag !== "false") {
      throw new InputError(
        `${where}: in_region must be true/false, got ${JSON.stringify(flag)}`,
      );
    }
    rows.push({
      alpha: parseFloatStrict(fields[0]!, where),
      beta: parseFloatStrict(fields[1]!, where),
      omega: parseFloatStrict(fields[2]!, where),
      rank,
      inRegion: flag === "true",
    });
  }
  if (rows.length === 0) {
    throw new InputError("rank-field CSV has no data rows");
  }
  return rows;
}

export function readRankFieldCsv(path: string): RankFieldRow[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new InputError(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseRankFieldCsv(text);
}

export interface CoverageReport {
  schemaVersion: number;
  method: string;
  empiricalCoverage: number;
  nominalCoverage: number;
}

export function readCoverageReport(path: string): CoverageReport {
  let doc: unknown;
  try {
    doc = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new InputError(`cannot read ${path}: ${(err as Error).message}`);
  }
  if (typeof doc !== "object" || doc === null) {
    throw new InputError(`${path}: report must be a JSON object`);
  }
  const record = doc as Record<string, unknown>;
  const need = (key: string): unknown => {
    if (!(key in record)) {
      throw new InputError(`${path}: report is missing ${JSON.stringify(key)}`);
    }
    return record[key];
  };
  const numeric = (key: string): number => {
    const value = need(key);
    if (typeof value !== "number" || !Number.isFinite(value)) {
      throw new InputError(`${path}: ${JSON.stringify(key)} must be a finite number`);
    }
    return value;
  };
  const method = need("method");
  if (typeof method !== "string") {
    throw new InputError(`${path}: "method" must be a string`);
  }
  return {
    schemaVersion: numeric("schema_version"),
    method,
    empiricalCoverage: numeric("empirical_coverage"),
    nominalCoverage: numeric("nominal_coverage"),
  };
}
