// Profile and 24-hour recall, kept in browser local storage only. The
// shapes mirror the user_profile schema so the saved object is exactly
// the /recommendations request body.

import type { UserProfile } from "./api-types.js";

const STORAGE_KEY = "foodcomp.profile.v1";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export const DEFAULT_PROFILE: UserProfile = {
  age_years: 30,
  sex: "male",
  weight_kg: 70,
  height_cm: 175,
  stage: "adult",
  activity_level: "sedentary",
  dietary_practices: [],
  allergies: [],
  recall: [],
  weight_goal: "maintain",
};

function defaultStorage(): StorageLike {
  if (typeof localStorage !== "undefined") {
    return localStorage;
  }
  const memory = new Map<string, string>();
  return {
    getItem: (key) => memory.get(key) ?? null,
    setItem: (key, value) => void memory.set(key, value),
  };
}

export class ProfileStore {
  private storage: StorageLike;

  constructor(storage?: StorageLike) {
    this.storage = storage ?? defaultStorage();
  }

  load(): UserProfile {
    const raw = this.storage.getItem(STORAGE_KEY);
    if (!raw) {
      return structuredClone(DEFAULT_PROFILE);
    }
    try {
      return { ...structuredClone(DEFAULT_PROFILE), ...JSON.parse(raw) };
    } catch {
      return structuredClone(DEFAULT_PROFILE);
    }
  }

  save(profile: UserProfile): void {
    this.storage.setItem(STORAGE_KEY, JSON.stringify(profile));
  }

  update(patch: Partial<UserProfile>): UserProfile {
    const next = { ...this.load(), ...patch };
    this.save(next);
    return next;
  }

  // Selecting a recommendation card adds one portion of that recipe to
  // the recall, so the next /recommendations body reflects the what-if.
  addRecall(recipeId: string, portions = 1): UserProfile {
    const profile = this.load();
    const recall = [...(profile.recall ?? [])];
    const existing = recall.find((entry) => entry.recipe_id === recipeId);
    if (existing) {
      existing.portions = (existing.portions ?? 1) + portions;
    } else {
      recall.push({ recipe_id: recipeId, portions });
    }
    return this.update({ recall });
  }

  removeRecall(recipeId: string): UserProfile {
    const profile = this.load();
    const recall = (profile.recall ?? []).filter((e) => e.recipe_id !== recipeId);
    return this.update({ recall });
  }
}

// The /recommendations request body IS the stored profile.
export function recommendationRequestBody(profile: UserProfile): UserProfile {
  return profile;
}
