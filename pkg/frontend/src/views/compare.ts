// Variant comparison. Rows render exactly in the order the service sent
// them; clicking (or keyboard-activating) a column header issues a new
// /compare request with that sort, never a client-side re-sort.

import type { ComparisonTable } from "../api-types.js";
import { el } from "../dom.js";
import { amount, nutrientLabel } from "../format.js";

export interface CompareRow {
  recipeId: string;
  title: string;
  cells: string[]; // one display string per column, payload order
}

// View model: strictly payload order, no sorting here.
export function compareRows(payload: ComparisonTable): CompareRow[] {
  return payload.rows.map((row) => ({
    recipeId: row.recipe_id,
    title: row.title,
    cells: payload.columns.map((column) => amount(row.per_serving[column] ?? null)),
  }));
}

export function nextOrder(
  payload: ComparisonTable,
  column: string,
): "asc" | "desc" {
  if (payload.nutrient === column) {
    return payload.order === "desc" ? "asc" : "desc";
  }
  return "desc";
}

export function renderCompare(
  payload: ComparisonTable,
  onSort: (nutrient: string, order: "asc" | "desc") => void,
): HTMLElement {
  const root = el("section", { class: "compare" });
  root.append(
    el("h2", {}, [`Variants of "${payload.dish}"`]),
    el("p", { class: "meta" }, [
      `Sorted by ${nutrientLabel(payload.nutrient)} (${payload.order}), per serving.`,
    ]),
  );
  if (payload.rows.length === 0) {
    root.append(el("p", { class: "empty-state" }, ["No matching recipes."]));
    return root;
  }
  const table = el("table", { class: "compare-table" });
  const headRow = el("tr", {}, [el("th", { scope: "col" }, ["Recipe"])]);
  for (const column of payload.columns) {
    const active = payload.nutrient === column;
    const button = el(
      "button",
      {
        type: "button",
        class: "sort-header",
        "aria-sort": active ? (payload.order === "asc" ? "ascending" : "descending") : "none",
      },
      [nutrientLabel(column), active ? (payload.order === "asc" ? " ↑" : " ↓") : ""],
    );
    button.addEventListener("click", () => onSort(column, nextOrder(payload, column)));
    headRow.append(el("th", { scope: "col", class: "num" }, [button]));
  }
  table.append(el("thead", {}, [headRow]));

  const body = el("tbody");
  for (const row of compareRows(payload)) {
    const tr = el("tr", {}, [
      el("td", {}, [el("a", { href: `#/recipe/${row.recipeId}` }, [row.title])]),
    ]);
    for (const cell of row.cells) {
      tr.append(el("td", { class: "num" }, [cell]));
    }
    body.append(tr);
  }
  table.append(body);
  root.append(table);
  return root;
}
