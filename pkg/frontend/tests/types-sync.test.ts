// The committed api-types.ts must match what the generator would emit
// from the current schema files (the UI's contract with the service).
import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

// @ts-expect-error plain mjs module without type declarations
import { generate } from "../scripts/generate-types.mjs";

describe("generated client types", () => {
  it("are in sync with the schema files", () => {
    const committed = readFileSync(join(here, "..", "src", "api-types.ts"), "utf8");
    expect(committed).toBe(generate());
  });

  it("cover the payloads the views consume", () => {
    const committed = readFileSync(join(here, "..", "src", "api-types.ts"), "utf8");
    for (const name of [
      "SearchResponse",
      "CompositionReport",
      "ComparisonTable",
      "UserProfile",
      "RecommendationResponse",
      "ApiError",
    ]) {
      expect(committed).toContain(`export interface ${name}`);
    }
  });
});
