export { SchemaError, parseCsv, requireColumns } from "./csv.js";
export { renderBarChart, renderChart } from "./chart.js";
export {
  FIGURE_INPUTS,
  FIGURE_KINDS,
  render,
  renderAll,
  type FigureKind,
  type FigureSpec,
} from "./figures.js";
