import type { PlanExpr } from "./api.js";

/** Render a transformation plan as a compact one-line summary. */
export function formatPlan(plan: PlanExpr[]): string {
  const parts = plan.map((expr) => {
    if ("const" in expr) {
      return `'${expr.const}'`;
    }
    const [start, end] = expr.extract;
    return start === end ? `$${start}` : `$${start}..$${end}`;
  });
  return parts.join(" + ");
}

/**
 * Describe how much longer a candidate plan is than the best one,
 * in bits of description length.
 */
export function formatDelta(dl: number, bestDl: number): string {
  const delta = dl - bestDl;
  return `+${delta.toFixed(2)} bits`;
}
