export * from "./csv.js";
export * from "./plots.js";
export * from "./svg.js";
export { main, parseArgs } from "./cli.js";
