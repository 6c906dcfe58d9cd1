// Static check: no client-side nutrition math. View modules may only
// pass server-rendered amount strings through the display formatters;
// any arithmetic next to nutrient-ish identifiers, or numeric parsing
// of amounts outside format.ts, fails this test.
import { describe, expect, it } from "vitest";
import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

const VIEWS_DIR = join(here, "..", "src", "views");

const NUTRIENT_ISH =
  /(per_serving|per_100g|\btotal\b|total_weight|grams|remaining_budget|completeness|amount|score|kcal)/;
// a binary arithmetic operator between two operands (won't match unary
// minus in strings or arrow functions)
const BINARY_OP = /[\w\]).]\s*[+\-*/%]\s*[\w(["']/;
const NUMERIC_PARSING = /\b(parseFloat|parseInt|Math\.|toFixed)\b|\bNumber\s*\(/;

function stripStringsAndComments(line: string): string {
  return line
    .replace(/\/\/.*$/, "")
    .replace(/"(?:[^"\\]|\\.)*"/g, '""')
    .replace(/'(?:[^'\\]|\\.)*'/g, "''")
    .replace(/`(?:[^`\\]|\\.)*`/g, "``");
}

function violations(source: string): string[] {
  const out: string[] = [];
  source.split("\n").forEach((rawLine, index) => {
    const line = stripStringsAndComments(rawLine);
    if (NUMERIC_PARSING.test(line)) {
      out.push(`line ${index + 1}: numeric parsing: ${rawLine.trim()}`);
    }
    if (NUTRIENT_ISH.test(line) && BINARY_OP.test(line)) {
      out.push(`line ${index + 1}: arithmetic near nutrient value: ${rawLine.trim()}`);
    }
  });
  return out;
}

describe("zero client-side nutrition math", () => {
  const viewFiles = readdirSync(VIEWS_DIR).filter((f) => f.endsWith(".ts"));

  it("covers all view modules", () => {
    expect(viewFiles.sort()).toEqual([
      "compare.ts",
      "composition.ts",
      "profile.ts",
      "recommend.ts",
      "search.ts",
    ]);
  });

  for (const file of ["compare.ts", "composition.ts", "recommend.ts", "search.ts"]) {
    it(`${file} performs no arithmetic on nutrient values`, () => {
      const source = readFileSync(join(VIEWS_DIR, file), "utf8");
      expect(violations(source)).toEqual([]);
    });
  }

  it("profile.ts parses form inputs but never nutrient values", () => {
    // The profile form legitimately converts its own <input> strings to
    // numbers (age, weight); it never touches nutrient amounts.
    const source = readFileSync(join(VIEWS_DIR, "profile.ts"), "utf8");
    const offending = violations(source).filter(
      (v) => !v.includes("Number(input.value)"),
    );
    expect(offending).toEqual([]);
    expect(source).not.toMatch(/per_serving|per_100g|remaining_budget/);
  });

  it("the checker itself catches a seeded violation", () => {
    const bad = 'const kcal = Number(row.per_serving["energy_kcal"]) * 2;';
    expect(violations(bad).length).toBeGreaterThan(0);
  });

  it("main and api modules never touch amounts numerically", () => {
    for (const file of ["main.ts", "api.ts", "state.ts", "dom.ts"]) {
      const source = readFileSync(join(here, "..", "src", file), "utf8");
      expect(NUMERIC_PARSING.test(stripStringsAndComments(source))).toBe(false);
    }
  });
});
