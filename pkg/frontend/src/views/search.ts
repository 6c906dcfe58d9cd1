// Recipe and ingredient search with an empty-state message.

import type { SearchResponse } from "../api-types.js";
import { badge, el } from "../dom.js";

export interface SearchRow {
  kind: "recipe" | "food";
  id: string;
  label: string;
  score: string;
  href: string | null;
}

// View model: rows exactly in payload order; scores rendered verbatim.
export function searchRows(payload: SearchResponse): SearchRow[] {
  return payload.results.map((result) => ({
    kind: result.kind,
    id: result.id,
    label: result.label,
    score: String(result.score),
    href: result.kind === "recipe" ? `#/recipe/${result.id}` : null,
  }));
}

export function renderSearchResults(payload: SearchResponse): HTMLElement {
  const rows = searchRows(payload);
  if (rows.length === 0) {
    return el("p", { class: "empty-state" }, [
      `Nothing matched "${payload.query}". Try a dish name or an ingredient alias.`,
    ]);
  }
  const list = el("ul", { class: "search-results" });
  for (const row of rows) {
    const label = row.href
      ? el("a", { href: row.href }, [row.label])
      : el("span", {}, [row.label]);
    list.append(
      el("li", {}, [badge(row.kind, row.kind), " ", label, " ", el("small", {}, [`score ${row.score}`])]),
    );
  }
  return list;
}
