// App bootstrap: hash routing, fetch orchestration, error surfaces.
// Views are pure functions of fetched state; this module owns the wiring.

import { ApiClient, ApiError } from "./api.js";
import { clear, el, errorBox } from "./dom.js";
import { ProfileStore, recommendationRequestBody } from "./state.js";
import type { Basis } from "./views/composition.js";
import { renderComposition } from "./views/composition.js";
import { renderCompare } from "./views/compare.js";
import { renderProfile } from "./views/profile.js";
import { renderRecommendations } from "./views/recommend.js";
import { renderSearchResults } from "./views/search.js";

const api = new ApiClient(
  (window as unknown as { FOODCOMP_BASE_URL?: string }).FOODCOMP_BASE_URL ?? "",
);
const profiles = new ProfileStore();
const outlet = document.getElementById("view") as HTMLElement;
const recallTitles: Record<string, string> = {};

function showError(err: unknown, retry: () => void): void {
  clear(outlet);
  if (err instanceof ApiError) {
    outlet.append(errorBox(err.code, err.message, retry));
  } else {
    outlet.append(errorBox("network", String(err), retry));
  }
}

function show(node: HTMLElement): void {
  clear(outlet);
  outlet.append(node);
}

// -- routes --

function searchRoute(): void {
  const box = el("section", {}, [el("h2", {}, ["Search"])]);
  const input = el("input", {
    type: "search",
    placeholder: "dish, ingredient, or alias",
    "aria-label": "search query",
  }) as HTMLInputElement;
  const results = el("div", { class: "results" });
  const run = async () => {
    const query = input.value.trim();
    if (!query) {
      return;
    }
    try {
      const payload = await api.search(query, 20);
      clear(results);
      results.append(renderSearchResults(payload));
    } catch (err) {
      clear(results);
      results.append(
        err instanceof ApiError
          ? errorBox(err.code, err.message, run)
          : errorBox("network", String(err), run),
      );
    }
  };
  input.addEventListener("change", run);
  const button = el("button", { type: "button" }, ["Search"]);
  button.addEventListener("click", run);
  box.append(el("div", { class: "search-bar" }, [input, button]), results);
  show(box);
}

async function recipeRoute(recipeId: string, basis: Basis = "per_serving"): Promise<void> {
  const retry = () => void recipeRoute(recipeId, basis);
  try {
    const report = await api.composition(recipeId);
    recallTitles[recipeId] = report.title;
    show(
      renderComposition(report, basis, (nextBasis) => void recipeRoute(recipeId, nextBasis)),
    );
  } catch (err) {
    showError(err, retry);
  }
}

async function compareRoute(
  dish: string,
  nutrient = "protein_g",
  order: "asc" | "desc" = "desc",
): Promise<void> {
  const retry = () => void compareRoute(dish, nutrient, order);
  try {
    const payload = await api.compare(dish, nutrient, order);
    show(
      renderCompare(payload, (nextNutrient, nextOrder) =>
        void compareRoute(dish, nextNutrient, nextOrder),
      ),
    );
  } catch (err) {
    showError(err, retry);
  }
}

function compareEntryRoute(): void {
  const box = el("section", {}, [el("h2", {}, ["Compare variants"])]);
  const input = el("input", {
    type: "search",
    placeholder: "dish name, e.g. chhole masala",
    "aria-label": "dish",
  }) as HTMLInputElement;
  const go = el("button", { type: "button" }, ["Compare"]);
  go.addEventListener("click", () => {
    if (input.value.trim()) {
      location.hash = `#/compare/${encodeURIComponent(input.value.trim())}`;
    }
  });
  box.append(el("div", { class: "search-bar" }, [input, go]));
  show(box);
}

function profileRoute(): void {
  const profile = profiles.load();
  show(
    renderProfile(
      profile,
      recallTitles,
      (patch) => {
        profiles.update(patch);
        profileRoute();
      },
      (recipeId) => {
        profiles.removeRecall(recipeId);
        profileRoute();
      },
    ),
  );
}

async function recommendRoute(): Promise<void> {
  const retry = () => void recommendRoute();
  try {
    const payload = await api.recommendations(recommendationRequestBody(profiles.load()));
    show(
      renderRecommendations(payload, (recipeId) => {
        profiles.addRecall(recipeId);
        void recommendRoute(); // what-if refresh with the updated recall
      }),
    );
  } catch (err) {
    showError(err, retry);
  }
}

function route(): void {
  const hash = location.hash || "#/search";
  const [, view, ...rest] = hash.split("/");
  switch (view) {
    case "recipe":
      void recipeRoute(decodeURIComponent(rest.join("/")));
      break;
    case "compare":
      if (rest.length > 0 && rest[0]) {
        void compareRoute(decodeURIComponent(rest.join("/")));
      } else {
        compareEntryRoute();
      }
      break;
    case "profile":
      profileRoute();
      break;
    case "recommend":
      void recommendRoute();
      break;
    default:
      searchRoute();
  }
}

window.addEventListener("hashchange", route);
route();
