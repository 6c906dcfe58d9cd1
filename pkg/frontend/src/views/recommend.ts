// Recommendation cards with rationale, plus the remaining-day budget the
// service computed. Selecting a card adds it to the recall so the next
// request reflects the what-if; all budget numbers come from the server.

import type { RecommendationResponse } from "../api-types.js";
import { badge, el } from "../dom.js";
import { amount, nutrientLabel } from "../format.js";

export interface RecommendCard {
  recipeId: string;
  title: string;
  score: string;
  perServing: Array<{ label: string; value: string }>;
  tags: string[];
  rationale: string[];
}

// View model: cards in payload (rank) order.
export function recommendCards(payload: RecommendationResponse): RecommendCard[] {
  return payload.recommendations.map((rec) => ({
    recipeId: rec.recipe_id,
    title: rec.title,
    score: String(rec.score),
    perServing: Object.entries(rec.per_serving).map(([nutrient, value]) => ({
      label: nutrientLabel(nutrient),
      value: amount(value),
    })),
    tags: rec.tags,
    rationale: rec.rationale,
  }));
}

export function renderRecommendations(
  payload: RecommendationResponse,
  onSelect: (recipeId: string) => void,
): HTMLElement {
  const root = el("section", { class: "recommend" });
  root.append(el("h2", {}, ["Recommendations"]));

  const budget = el("p", { class: "meta" }, ["Remaining today: "]);
  for (const [nutrient, value] of Object.entries(payload.remaining_budget)) {
    budget.append(badge(`${nutrientLabel(nutrient)}: ${amount(value)}`, "budget"), " ");
  }
  root.append(budget);

  const cards = recommendCards(payload);
  if (cards.length === 0) {
    root.append(
      el("p", { class: "empty-state" }, [
        payload.explanation || "No recipes fit the current profile.",
      ]),
    );
    return root;
  }
  const list = el("ol", { class: "cards" });
  for (const card of cards) {
    const add = el("button", { type: "button" }, ["I ate this (add to recall)"]);
    add.addEventListener("click", () => onSelect(card.recipeId));
    const item = el("li", { class: "card" }, [
      el("h3", {}, [el("a", { href: `#/recipe/${card.recipeId}` }, [card.title])]),
      el("p", { class: "meta" }, [`fit score ${card.score} (lower is better)`]),
    ]);
    const facts = el("ul", { class: "facts" });
    for (const fact of card.perServing) {
      facts.append(el("li", {}, [`${fact.label}: `, el("span", { class: "num" }, [fact.value])]));
    }
    item.append(facts);
    const tags = el("p", {});
    for (const tag of card.tags) {
      tags.append(badge(tag, "tag"), " ");
    }
    item.append(tags);
    const why = el("ul", { class: "rationale" });
    for (const reason of card.rationale) {
      why.append(el("li", {}, [reason]));
    }
    item.append(why, add);
    list.append(item);
  }
  root.append(list);
  return root;
}
