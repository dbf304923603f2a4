/**
 * fellerplot <convergence|snapshot|mc-compare> <inputs...> -o <image> [--title <t>]
 *
 * convergence: one convergence CSV.
 * snapshot:    one or more grid-state CSVs, overlaid with a legend.
 * mc-compare:  a grid-state CSV followed by a Monte Carlo CSV; draws the grid
 *              curve with MC points and 3-sigma error bars.
 *
 * Output format is picked from the -o extension: .svg always works; .png needs
 * the optional "sharp" package. Inputs are never modified.
 */

import { readFile, writeFile } from "node:fs/promises";
import { basename, extname } from "node:path";

import { SchemaError, parseConvergence, parseGrid, parseMc } from "./csv.js";
import { renderConvergence, renderMcCompare, renderSnapshot } from "./plots.js";

const USAGE = "usage: fellerplot <convergence|snapshot|mc-compare> <inputs...> -o <image> [--title <t>]";

interface Args {
  kind: string;
  inputs: string[];
  out: string;
  title?: string;
}

export function parseArgs(argv: string[]): Args {
  const [kind, ...rest] = argv;
  if (!kind || !["convergence", "snapshot", "mc-compare"].includes(kind)) {
    throw new Error(USAGE);
  }
  const inputs: string[] = [];
  let out = "";
  let title: string | undefined;
  for (let i = 0; i < rest.length; i++) {
    if (rest[i] === "-o" || rest[i] === "--out") {
      out = rest[++i] ?? "";
    } else if (rest[i] === "--title") {
      title = rest[++i];
    } else {
      inputs.push(rest[i]);
    }
  }
  if (!out) throw new Error(`missing -o <image>\n${USAGE}`);
  if (inputs.length === 0) throw new Error(`missing input CSV\n${USAGE}`);
  if (kind === "mc-compare" && inputs.length !== 2) {
    throw new Error("mc-compare takes exactly two inputs: <grid_csv> <mc_csv>");
  }
  if (kind === "convergence" && inputs.length !== 1) {
    throw new Error("convergence takes exactly one input CSV");
  }
  return { kind, inputs, out, title };
}

async function writeImage(svg: string, out: string): Promise<void> {
  const ext = extname(out).toLowerCase();
  if (ext === ".svg" || ext === "") {
    await writeFile(out, svg, "utf-8");
    return;
  }
  if (ext === ".png") {
    let sharp: (input: Buffer) => { png(): { toBuffer(): Promise<Buffer> } };
    try {
      // @ts-ignore -- optional dependency, only needed for .png output
      sharp = (await import("sharp")).default;
    } catch {
      throw new Error('PNG output needs the optional "sharp" package (npm install sharp); use a .svg output instead');
    }
    await writeFile(out, await sharp(Buffer.from(svg)).png().toBuffer());
    return;
  }
  throw new Error(`unsupported output extension "${ext}" (use .svg or .png)`);
}

export async function main(argv: string[]): Promise<number> {
  try {
    const args = parseArgs(argv);
    const texts = await Promise.all(args.inputs.map((p) => readFile(p, "utf-8")));
    let svg: string;
    if (args.kind === "convergence") {
      svg = renderConvergence(parseConvergence(texts[0]), args.title ?? basename(args.inputs[0]));
    } else if (args.kind === "snapshot") {
      const series = texts.map((t, i) => ({ label: basename(args.inputs[i]), points: parseGrid(t) }));
      svg = renderSnapshot(series, args.title ?? "State snapshot");
    } else {
      svg = renderMcCompare(parseGrid(texts[0]), parseMc(texts[1]), args.title ?? "Monte Carlo vs grid");
    }
    await writeImage(svg, args.out);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`fellerplot: schema error in column "${err.column}": ${err.message}\n`);
    } else {
      process.stderr.write(`fellerplot: ${err instanceof Error ? err.message : String(err)}\n`);
    }
    return 1;
  }
}
