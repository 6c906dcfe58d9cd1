// Composition report: per-serving / per-100 g toggle, completeness and
// model-provenance badges, line-by-line breakdown with weight traces.

import type { CompositionReport } from "../api-types.js";
import { badge, el } from "../dom.js";
import { amount, completenessBadge, nutrientLabel, servingsLabel } from "../format.js";

export type Basis = "per_serving" | "per_100g";

export interface NutrientRow {
  nutrient: string;
  label: string;
  value: string;
  completeness: { label: string; full: boolean };
}

// View model: one row per nutrient of the chosen basis, in the server's
// (sorted) key order; values are the server's strings, reformatted for
// display only.
export function nutrientRows(report: CompositionReport, basis: Basis): NutrientRow[] {
  const amounts = report[basis];
  return Object.keys(amounts).map((nutrient) => ({
    nutrient,
    label: nutrientLabel(nutrient),
    value: amount(amounts[nutrient]),
    completeness: completenessBadge(report.completeness[nutrient]),
  }));
}

export interface LineRow {
  sourceText: string;
  grams: string;
  method: string;
  modelEstimated: boolean; // true iff the payload flags the line LLM
  error: string | null;
}

export function lineRows(report: CompositionReport): LineRow[] {
  return report.line_breakdown.map((line) => ({
    sourceText: line.source_text,
    grams: amount(line.grams ?? null),
    method: line.weight_method ?? line.match_method,
    modelEstimated: line.llm_flagged,
    error: line.error ?? null,
  }));
}

export function renderComposition(
  report: CompositionReport,
  basis: Basis,
  onToggle: (basis: Basis) => void,
): HTMLElement {
  const root = el("section", { class: "composition" });
  root.append(el("h2", {}, [report.title]));

  const meta = el("p", { class: "meta" }, [
    `Total weight ${amount(report.total_weight_g)} g, `,
    `servings ${servingsLabel(report.servings, report.servings_assumed)}.`,
  ]);
  const llmCount = report.provenance_summary["LLM"];
  if (llmCount) {
    meta.append(" ", badge(`${llmCount} model-assisted line(s)`, "llm"));
  }
  if (report.tags) {
    for (const tag of report.tags.tags) {
      meta.append(" ", badge(tag, "tag"));
    }
    if (report.tags.tentative) {
      meta.append(" ", badge("tags tentative", "warn"));
    }
  }
  root.append(meta);

  const toggle = el("div", { class: "basis-toggle", role: "group", "aria-label": "basis" });
  for (const candidate of ["per_serving", "per_100g"] as Basis[]) {
    const label = candidate === "per_serving" ? "Per serving" : "Per 100 g";
    const button = el(
      "button",
      { type: "button", "aria-pressed": String(candidate === basis) },
      [label],
    );
    button.addEventListener("click", () => onToggle(candidate));
    toggle.append(button);
  }
  root.append(toggle);

  const table = el("table", { class: "nutrients" });
  table.append(
    el("thead", {}, [
      el("tr", {}, [
        el("th", { scope: "col" }, ["Nutrient"]),
        el("th", { scope: "col", class: "num" }, ["Amount"]),
        el("th", { scope: "col" }, ["Completeness"]),
      ]),
    ]),
  );
  const body = el("tbody");
  for (const row of nutrientRows(report, basis)) {
    body.append(
      el("tr", {}, [
        el("td", {}, [row.label]),
        el("td", { class: "num" }, [row.value]),
        el("td", {}, [badge(row.completeness.label, row.completeness.full ? "ok" : "warn")]),
      ]),
    );
  }
  table.append(body);
  root.append(table);

  root.append(el("h3", {}, ["Ingredient lines"]));
  const lines = el("ul", { class: "lines" });
  for (const row of lineRows(report)) {
    const item = el("li", {}, [
      el("span", {}, [row.sourceText]),
      " ",
      el("small", { class: "num" }, [`${row.grams} g via ${row.method}`]),
    ]);
    if (row.modelEstimated) {
      item.append(" ", badge("model-estimated", "llm"));
    }
    if (row.error) {
      item.append(" ", badge(row.error, "warn"));
    }
    lines.append(item);
  }
  root.append(lines);

  if (report.unresolved.length > 0) {
    root.append(
      el("p", { class: "warn" }, [
        `${report.unresolved.length} line(s) excluded from totals.`,
      ]),
    );
  }
  return root;
}
