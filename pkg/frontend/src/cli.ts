#!/usr/bin/env node
/**
 * Figure regeneration CLI:
 *
 *   volteq-plots --in <run-dir> --out <dir> [--kinds pc-sequence,sinr-timeline,mos-bars]
 *
 * Reads the simulator's figure CSVs from the run directory and writes one
 * SVG per kind. Exit codes: 0 success, 2 schema/usage error, 3 I/O error.
 */

import { mkdirSync } from "fs";
import { parseArgs } from "util";

import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, renderAll, type FigureKind } from "./figures.js";

function usageError(message: string): never {
  console.error(`error: ${message}`);
  console.error(
    "usage: volteq-plots --in <run-dir> --out <dir> " +
      `[--kinds ${FIGURE_KINDS.join(",")}]`,
  );
  process.exit(2);
}

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        kinds: { type: "string" },
      },
    }));
  } catch (e) {
    usageError((e as Error).message);
  }
  if (!values.in || !values.out) {
    usageError("--in and --out are required");
  }

  let kinds: FigureKind[] = FIGURE_KINDS;
  if (values.kinds) {
    const requested = values.kinds.split(",").map((k) => k.trim()).filter(Boolean);
    const unknown = requested.filter((k) => !FIGURE_KINDS.includes(k as FigureKind));
    if (unknown.length > 0) {
      usageError(`unknown figure kind(s) ${unknown.join(", ")}`);
    }
    kinds = requested as FigureKind[];
  }

  try {
    mkdirSync(values.out, { recursive: true });
    const written = renderAll(values.in, values.out, kinds);
    for (const p of written) {
      console.log(`wrote ${p}`);
    }
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`schema error: ${e.message}`);
      return 2;
    }
    console.error(`error: ${(e as Error).message}`);
    return 3;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
