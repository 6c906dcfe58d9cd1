"""Per-recipe nutrient composition and variant comparison.

For every ingredient line: resolve the weight (measurement chain), find
the food record (exact variant, then aliases, then fuzzy match, then the
external API, then the resolution agent as a last resort), scale the
per-100 g vector, and sum. Lines that cannot be matched or weighed are
excluded from totals and listed, never silently zeroed; each nutrient in
the report carries a completeness fraction saying how many contributing
ingredients actually had a value for it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import EmptyCompositionError, FetchError, NotFoundError, UnresolvedWeightError
from .fct import FctStore, VariantKey
from .nutrients import (
    CompletenessMask,
    NutrientVector,
    Source,
    format_amount,
    nv_add,
    nv_scale,
)
from .parsing import _fraction_jsonable
from .store import IngredientLine, KnowledgeStore, Recipe
from .units import (
    ResolutionMethod,
    load_default_amounts,
    load_densities,
    load_rulebook,
    resolve_weight_grams,
)

# Per-serving fallback when a recipe states no servings: total weight over
# a 250 g serving, flagged "assumed" in the report.
ASSUMED_SERVING_G = Fraction(250)

COMPARE_NUTRIENTS = (
    "energy_kcal",
    "protein_g",
    "carbohydrate_g",
    "total_fat_g",
    "total_fiber_g",
)


@dataclass(frozen=True)
class LineContribution:
    index: int
    source_text: str
    ingredient: Optional[str]
    matched_key: Optional[str]
    match_method: str  # exact | variant | alias | fuzzy | external | resolver | unresolved
    grams: Optional[Fraction]
    weight_method: Optional[str]
    rule_trace: tuple = ()
    llm_flagged: bool = False
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "source_text": self.source_text,
            "ingredient": self.ingredient,
            "matched_key": self.matched_key,
            "match_method": self.match_method,
            "grams": None if self.grams is None else format_amount(self.grams),
            "weight_method": self.weight_method,
            "rule_trace": list(self.rule_trace),
            "llm_flagged": self.llm_flagged,
            "error": self.error,
        }


@dataclass(frozen=True)
class CompositionReport:
    recipe_id: str
    title: str
    total: NutrientVector
    per_serving: NutrientVector
    per_100g: NutrientVector
    total_weight_g: Fraction
    servings: Fraction
    servings_assumed: bool
    completeness: dict  # nutrient id -> Fraction in [0, 1]
    line_breakdown: tuple  # LineContribution, in recipe order
    provenance_summary: dict  # source label -> line count, incl "LLM"
    unresolved: tuple  # source texts of excluded lines
    fct_version: str = ""

    def to_dict(self) -> dict:
        return {
            "recipe_id": self.recipe_id,
            "title": self.title,
            "total": self.total.to_display_dict(),
            "per_serving": self.per_serving.to_display_dict(),
            "per_100g": self.per_100g.to_display_dict(),
            "total_weight_g": format_amount(self.total_weight_g),
            "servings": _fraction_jsonable(self.servings),
            "servings_assumed": self.servings_assumed,
            "completeness": {
                nid: _fraction_jsonable(frac) for nid, frac in sorted(self.completeness.items())
            },
            "line_breakdown": [c.to_dict() for c in self.line_breakdown],
            "provenance_summary": dict(sorted(self.provenance_summary.items())),
            "unresolved": list(self.unresolved),
            "fct_version": self.fct_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=1)


@dataclass
class MatchOutcome:
    record: object
    method: str
    llm_flagged: bool = False


def _match_food(
    parsed,
    fct: FctStore,
    store: Optional[KnowledgeStore],
    client,
    resolver,
) -> Optional[MatchOutcome]:
    key = VariantKey(parsed.ingredient, parsed.form, parsed.process, parsed.size)

    hit = fct.lookup(key)
    if hit is not None:
        record, exact = hit
        return MatchOutcome(record, "exact" if exact else "variant")

    # Store-registered aliases (beyond the shipped table the parser used).
    if store is not None:
        target = store.alias_map().get(parsed.ingredient)
        if target and "|" not in target:
            alias_hit = fct.lookup(VariantKey(target, parsed.form, parsed.process, parsed.size))
            if alias_hit is not None:
                return MatchOutcome(alias_hit[0], "alias")
        elif target:
            rec = fct.get(VariantKey.from_string(target))
            if rec is not None:
                return MatchOutcome(rec, "alias")

    if store is not None:
        for match in store.search_fuzzy(parsed.ingredient, limit=3):
            if match["kind"] != "food":
                continue
            rec = fct.get(VariantKey.from_string(match["id"]))
            if rec is not None:
                return MatchOutcome(rec, "fuzzy")

    if client is not None:
        try:
            rec = fct.lookup_or_fetch(key, client)
            return MatchOutcome(rec, "external")
        except (NotFoundError, FetchError):
            pass

    # Last resort: ask the resolution agent for a better name. A model
    # answer is review-gated before it can become a stored alias, but the
    # report may use it immediately, flagged as model-sourced.
    if resolver is not None and resolver.model is not None:
        suggestion = resolver.resolve_name(parsed.ingredient)
        if suggestion and suggestion != parsed.ingredient:
            relaxed = fct.lookup(
                VariantKey(suggestion, parsed.form, parsed.process, parsed.size)
            )
            if relaxed is not None:
                return MatchOutcome(relaxed[0], "resolver", llm_flagged=True)
    return None


def compose_recipe(
    recipe: Recipe,
    fct: FctStore,
    rulebook=None,
    densities=None,
    defaults=None,
    resolver=None,
    store: Optional[KnowledgeStore] = None,
    client=None,
    permissive: bool = False,
) -> CompositionReport:
    """Compute the composition report for a stored or ad-hoc recipe."""
    rulebook = rulebook or load_rulebook()
    densities = densities or load_densities()
    defaults = defaults if defaults is not None else load_default_amounts()

    total = NutrientVector({})
    mask = CompletenessMask()
    total_weight = Fraction(0)
    breakdown = []
    unresolved = []
    provenance: dict = {}

    for i, line in enumerate(recipe.lines):
        if line.parsed is None:
            breakdown.append(
                LineContribution(
                    index=i,
                    source_text=_line_text(line),
                    ingredient=None,
                    matched_key=None,
                    match_method="unresolved",
                    grams=None,
                    weight_method=None,
                    error=line.error or "unparsed line",
                )
            )
            unresolved.append(_line_text(line))
            continue

        parsed = line.parsed
        weight = line.weight
        if weight is None:
            try:
                weight = resolve_weight_grams(
                    parsed, rulebook, densities, defaults, resolver, permissive
                )
            except UnresolvedWeightError as exc:
                breakdown.append(
                    LineContribution(
                        index=i,
                        source_text=parsed.source_text,
                        ingredient=parsed.ingredient,
                        matched_key=None,
                        match_method="unresolved",
                        grams=None,
                        weight_method=None,
                        error=f"weight: {exc.message}",
                    )
                )
                unresolved.append(parsed.source_text)
                continue

        outcome = _match_food(parsed, fct, store, client, resolver)
        if outcome is None:
            breakdown.append(
                LineContribution(
                    index=i,
                    source_text=parsed.source_text,
                    ingredient=parsed.ingredient,
                    matched_key=None,
                    match_method="unresolved",
                    grams=weight.grams,
                    weight_method=weight.method.value,
                    rule_trace=weight.rule_trace,
                    error="no food record matches",
                )
            )
            unresolved.append(parsed.source_text)
            continue

        record = outcome.record
        scaled = nv_scale(record.nutrients, weight.grams)
        total = nv_add(total, scaled)
        mask = mask.merge(CompletenessMask.of(record.nutrients))
        total_weight += weight.grams

        llm_flagged = (
            outcome.llm_flagged
            or weight.method is ResolutionMethod.RESOLVER_ESTIMATE
            or weight.estimated_grams is not None
            or record.provenance.source is Source.LLM
        )
        source_label = record.provenance.source.value
        provenance[source_label] = provenance.get(source_label, 0) + 1
        if llm_flagged:
            provenance["LLM"] = provenance.get("LLM", 0) + 1

        breakdown.append(
            LineContribution(
                index=i,
                source_text=parsed.source_text,
                ingredient=parsed.ingredient,
                matched_key=record.key.as_string(),
                match_method=outcome.method,
                grams=weight.grams,
                weight_method=weight.method.value,
                rule_trace=weight.rule_trace,
                llm_flagged=llm_flagged,
            )
        )

    if mask.total == 0:
        raise EmptyCompositionError(
            f"no resolvable ingredient lines in {recipe.title!r}",
            recipe_id=recipe.id,
            unresolved=unresolved,
        )

    servings_assumed = recipe.servings is None
    if servings_assumed:
        servings = total_weight / ASSUMED_SERVING_G if total_weight > 0 else Fraction(1)
    else:
        servings = recipe.servings
    per_serving = (
        NutrientVector({nid: v / servings for nid, v in total.values.items()})
        if servings > 0
        else NutrientVector({})
    )
    per_100g = (
        nv_scale(total, Fraction(10000) / total_weight)
        if total_weight > 0
        else NutrientVector({})
    )

    return CompositionReport(
        recipe_id=recipe.id,
        title=recipe.title,
        total=total,
        per_serving=per_serving,
        per_100g=per_100g,
        total_weight_g=total_weight,
        servings=servings,
        servings_assumed=servings_assumed,
        completeness=mask.fractions(),
        line_breakdown=tuple(breakdown),
        provenance_summary=provenance,
        unresolved=tuple(unresolved),
        fct_version=fct.version,
    )


def _line_text(line: IngredientLine) -> str:
    if line.parsed is not None:
        return line.parsed.source_text
    return line.error or "(unparsed)"


class CompositionCache:
    """Reports and tag assignments keyed by (recipe id, content hash, FCT
    version). An FCT rebuild changes the version, so stale entries simply
    stop being hit; callers may also drop the cache wholesale."""

    def __init__(self):
        self._reports: dict = {}
        self._tags: dict = {}

    def _key(self, recipe: Recipe, fct: FctStore):
        return (recipe.id, recipe.content_hash, fct.version)

    def report(self, recipe: Recipe, fct: FctStore, **compose_kwargs) -> CompositionReport:
        key = self._key(recipe, fct)
        if key not in self._reports:
            self._reports[key] = compose_recipe(recipe, fct, **compose_kwargs)
        return self._reports[key]

    def tags(self, recipe: Recipe, fct: FctStore, **compose_kwargs):
        from .tags import assign_dietary_tags

        key = self._key(recipe, fct)
        if key not in self._tags:
            report = self.report(recipe, fct, **compose_kwargs)
            self._tags[key] = assign_dietary_tags(recipe, report)
        return self._tags[key]

    def clear(self):
        self._reports.clear()
        self._tags.clear()


# --- variant comparison ----------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    recipe_id: str
    title: str
    servings: Fraction
    per_serving: dict  # nutrient id -> Fraction or None

    def to_dict(self) -> dict:
        return {
            "recipe_id": self.recipe_id,
            "title": self.title,
            "servings": _fraction_jsonable(self.servings),
            "per_serving": {
                nid: None if v is None else format_amount(v)
                for nid, v in self.per_serving.items()
            },
        }


@dataclass(frozen=True)
class ComparisonTable:
    dish: str
    nutrient: str
    order: str
    columns: tuple
    rows: tuple

    def to_dict(self) -> dict:
        return {
            "dish": self.dish,
            "nutrient": self.nutrient,
            "order": self.order,
            "columns": list(self.columns),
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_text(self) -> str:
        headers = ["recipe", *self.columns]
        rows = [
            [r.title]
            + [
                "-" if r.per_serving.get(c) is None else format_amount(r.per_serving[c])
                for c in self.columns
            ]
            for r in self.rows
        ]
        widths = [
            max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
            for i, h in enumerate(headers)
        ]
        def fmt(cells):
            first = cells[0].ljust(widths[0])
            rest = [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
            return "  ".join([first, *rest]).rstrip()
        return "\n".join([fmt(headers), *(fmt(r) for r in rows)])


def compare_variants(
    dish: str,
    nutrient: str,
    order: str,
    store: KnowledgeStore,
    fct: FctStore,
    limit: int = 10,
    **compose_kwargs,
) -> ComparisonTable:
    """Per-serving comparison of recipes matching a dish name, sorted by
    one nutrient. Stable sort; ties keep recipe-id order; recipes whose
    value for the sort nutrient is unknown go last."""
    if order not in ("asc", "desc"):
        raise ValueError(f"order must be asc or desc, not {order!r}")
    matches = [m for m in store.search_fuzzy(dish, limit=50) if m["kind"] == "recipe"]
    rows = []
    for match in sorted(matches, key=lambda m: m["id"]):
        recipe = store.get_recipe(match["id"])
        try:
            report = compose_recipe(recipe, fct, store=store, **compose_kwargs)
        except EmptyCompositionError:
            continue
        rows.append(
            ComparisonRow(
                recipe_id=recipe.id,
                title=recipe.title,
                servings=report.servings,
                per_serving={
                    nid: report.per_serving.get(nid) for nid in COMPARE_NUTRIENTS
                },
            )
        )
    reverse = order == "desc"

    def sort_key(row: ComparisonRow):
        value = row.per_serving.get(nutrient)
        missing = value is None
        if missing:
            value = Fraction(0)
        return (missing, -value if reverse else value)

    rows.sort(key=lambda r: (sort_key(r), r.recipe_id))
    return ComparisonTable(
        dish=dish,
        nutrient=nutrient,
        order=order,
        columns=COMPARE_NUTRIENTS,
        rows=tuple(rows[:limit]),
    )
