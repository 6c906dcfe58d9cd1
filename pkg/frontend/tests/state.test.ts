// Profile persistence and the recall what-if contract: adding a recipe
// to the recall puts it in the next /recommendations request body.
import { describe, expect, it } from "vitest";

import { ProfileStore, recommendationRequestBody, type StorageLike } from "../src/state.js";

function memoryStorage(): StorageLike {
  const map = new Map<string, string>();
  return {
    getItem: (key) => map.get(key) ?? null,
    setItem: (key, value) => void map.set(key, value),
  };
}

describe("profile store", () => {
  it("defaults are a valid profile body", () => {
    const store = new ProfileStore(memoryStorage());
    const profile = store.load();
    expect(profile.age_years).toBeGreaterThan(0);
    expect(profile.recall).toEqual([]);
  });

  it("updates persist", () => {
    const storage = memoryStorage();
    new ProfileStore(storage).update({ allergies: ["peanuts"] });
    expect(new ProfileStore(storage).load().allergies).toEqual(["peanuts"]);
  });

  it("selecting a recommendation adds it to the next request body", () => {
    const store = new ProfileStore(memoryStorage());
    store.addRecall("r-abc");
    const body = recommendationRequestBody(store.load());
    expect(body.recall).toEqual([{ recipe_id: "r-abc", portions: 1 }]);
  });

  it("repeat selections bump portions", () => {
    const store = new ProfileStore(memoryStorage());
    store.addRecall("r-abc");
    store.addRecall("r-abc");
    expect(store.load().recall).toEqual([{ recipe_id: "r-abc", portions: 2 }]);
  });

  it("recall entries can be removed", () => {
    const store = new ProfileStore(memoryStorage());
    store.addRecall("r-abc");
    store.addRecall("r-def");
    store.removeRecall("r-abc");
    expect(store.load().recall).toEqual([{ recipe_id: "r-def", portions: 1 }]);
  });
});
