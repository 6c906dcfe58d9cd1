// Composition view model: values pass through verbatim (reformatted for
// display only) and model-provenance badges exist exactly where the
// payload flags a line as LLM-backed.
import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { CompositionReport } from "../src/api-types.js";
import { lineRows, nutrientRows } from "../src/views/composition.js";

const here = dirname(fileURLToPath(import.meta.url));

function fixture(): CompositionReport {
  return JSON.parse(
    readFileSync(join(here, "fixtures", "composition_chhole.json"), "utf8"),
  ) as CompositionReport;
}

describe("composition view model", () => {
  it("keeps one row per server-sent nutrient, in payload order", () => {
    const report = fixture();
    const rows = nutrientRows(report, "per_serving");
    expect(rows.map((r) => r.nutrient)).toEqual(Object.keys(report.per_serving));
  });

  it("per-100g toggle reads the other server map, same pipeline", () => {
    const report = fixture();
    const rows = nutrientRows(report, "per_100g");
    expect(rows.map((r) => r.nutrient)).toEqual(Object.keys(report.per_100g));
  });

  it("display values start from the server strings", () => {
    const report = fixture();
    for (const row of nutrientRows(report, "per_serving")) {
      const raw = report.per_serving[row.nutrient];
      expect(row.value.startsWith(raw.split(".")[0])).toBe(true);
    }
  });

  it("model badges appear exactly where the payload flags LLM provenance", () => {
    const report = fixture();
    const flagged = lineRows(report).map((r) => r.modelEstimated);
    expect(flagged).toEqual(report.line_breakdown.map((l) => l.llm_flagged));
  });

  it("a payload with an LLM-flagged line gets exactly one badge", () => {
    const report = fixture();
    report.line_breakdown[0].llm_flagged = true;
    const rows = lineRows(report);
    expect(rows.filter((r) => r.modelEstimated).length).toBe(1);
    expect(rows[0].modelEstimated).toBe(true);
  });
});
