"""User profiles, daily nutrient targets, and recipe recommendations.

The energy target uses the Mifflin-St Jeor basal-metabolism formula with
the standard activity multipliers and a +-500 kcal/day adjustment for
gain/lose goals (the guideline tables this package models publish no
formula, so a published, testable one is used; swap point documented in
the README). Macro targets are fixed percentage bands of energy: protein
10-15%, fat 20-30%, carbohydrate 55-70%.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .composition import CompositionCache
from .errors import EmptyCompositionError, InvalidProfile
from .nutrients import format_amount, to_fraction
from .parsing import _fraction_jsonable

ACTIVITY_FACTORS = {
    "sedentary": Fraction("1.2"),
    "light": Fraction("1.375"),
    "moderate": Fraction("1.55"),
    "active": Fraction("1.725"),
    "very_active": Fraction("1.9"),
}

GOAL_ADJUST_KCAL = {
    "maintain": Fraction(0),
    "lose": Fraction(-500),
    "gain": Fraction(500),
}

STAGES = ("infant", "child", "adolescent", "adult", "elderly", "pregnancy", "lactation")

# Energy fraction bands per macro, and kcal per gram.
MACRO_BANDS = {
    "protein_g": ((Fraction("0.10"), Fraction("0.15")), Fraction(4)),
    "total_fat_g": ((Fraction("0.20"), Fraction("0.30")), Fraction(9)),
    "carbohydrate_g": ((Fraction("0.55"), Fraction("0.70")), Fraction(4)),
}

# Day limits shipped as documented defaults.
DAY_LIMITS = {"sodium_mg": Fraction(2000), "added_sugar_g": Fraction(25)}

ALLERGY_TAGS = {
    "dairy": "contains-dairy",
    "egg": "contains-egg",
    "peanuts": "contains-peanuts",
    "tree-nuts": "contains-tree-nuts",
    "gluten": "contains-gluten",
    "soy": "contains-soy",
    "fish": "contains-fish",
    "shellfish": "contains-shellfish",
}

PRACTICE_TAGS = {
    "vegetarian",
    "vegan",
    "eggetarian",
    "pescatarian",
    "jain-friendly",
    "no-onion-no-garlic",
    "plant-based",
}

SCORED_NUTRIENTS = ("energy_kcal", "protein_g", "total_fat_g", "carbohydrate_g")


@dataclass(frozen=True)
class ActivityEntry:
    type: str
    duration_min: float = 0.0
    frequency_per_week: float = 0.0
    intensity: str = ""
    calories_burned: float = 0.0


@dataclass(frozen=True)
class UserProfile:
    age_years: float
    sex: str  # male | female
    weight_kg: float
    height_cm: float
    stage: str = "adult"
    activity_level: str = "sedentary"
    activities: tuple = ()
    dietary_practices: tuple = ()  # hard filters, e.g. ("vegetarian",)
    allergies: tuple = ()  # e.g. ("peanuts", "dairy")
    recall: tuple = ()  # 24-hour intake: (recipe_id, portions) pairs
    weight_goal: str = "maintain"

    def validate(self):
        if self.weight_kg <= 0 or self.height_cm <= 0 or self.age_years <= 0:
            raise InvalidProfile("anthropometrics must be positive")
        if self.sex not in ("male", "female"):
            raise InvalidProfile(f"unsupported sex {self.sex!r}")
        if self.stage not in STAGES:
            raise InvalidProfile(f"unknown stage {self.stage!r}")
        if self.activity_level not in ACTIVITY_FACTORS:
            raise InvalidProfile(f"unknown activity level {self.activity_level!r}")
        if self.weight_goal not in GOAL_ADJUST_KCAL:
            raise InvalidProfile(f"unknown weight goal {self.weight_goal!r}")
        bands = {
            "infant": (0, 2),
            "child": (1, 13),
            "adolescent": (12, 19),
            "adult": (18, 70),
            "elderly": (60, 130),
            "pregnancy": (13, 60),
            "lactation": (13, 60),
        }
        lo, hi = bands[self.stage]
        if not (lo <= self.age_years < hi):
            raise InvalidProfile(
                f"stage {self.stage!r} is inconsistent with age {self.age_years}"
            )

    @classmethod
    def from_dict(cls, d: dict) -> "UserProfile":
        profile = cls(
            age_years=d["age_years"],
            sex=d["sex"],
            weight_kg=d["weight_kg"],
            height_cm=d["height_cm"],
            stage=d.get("stage", "adult"),
            activity_level=d.get("activity_level", "sedentary"),
            activities=tuple(
                ActivityEntry(**a) for a in d.get("activities", [])
            ),
            dietary_practices=tuple(d.get("dietary_practices", ())),
            allergies=tuple(d.get("allergies", ())),
            recall=tuple((r["recipe_id"], r.get("portions", 1)) for r in d.get("recall", [])),
            weight_goal=d.get("weight_goal", "maintain"),
        )
        profile.validate()
        return profile


@dataclass(frozen=True)
class NutrientTargets:
    energy_kcal: Fraction
    macro_bands: dict  # nutrient -> (lo grams, hi grams)
    limits: dict = field(default_factory=dict)

    def macro_midpoint(self, nutrient: str) -> Fraction:
        lo, hi = self.macro_bands[nutrient]
        return (lo + hi) / 2

    def to_dict(self) -> dict:
        return {
            "energy_kcal": _fraction_jsonable(self.energy_kcal),
            "macro_bands": {
                nid: [_fraction_jsonable(lo), _fraction_jsonable(hi)]
                for nid, (lo, hi) in sorted(self.macro_bands.items())
            },
            "limits": {
                nid: _fraction_jsonable(v) for nid, v in sorted(self.limits.items())
            },
        }


def compute_targets(profile: UserProfile) -> NutrientTargets:
    """Daily energy and macro targets from the documented formula."""
    profile.validate()
    w = to_fraction(profile.weight_kg)
    h = to_fraction(profile.height_cm)
    a = to_fraction(profile.age_years)
    bmr = 10 * w + Fraction("6.25") * h - 5 * a
    bmr += 5 if profile.sex == "male" else -161
    energy = bmr * ACTIVITY_FACTORS[profile.activity_level]
    energy += GOAL_ADJUST_KCAL[profile.weight_goal]
    if energy <= 0:
        raise InvalidProfile("computed energy target is not positive")
    bands = {}
    for nutrient, ((lo, hi), kcal_per_g) in MACRO_BANDS.items():
        bands[nutrient] = (energy * lo / kcal_per_g, energy * hi / kcal_per_g)
    return NutrientTargets(energy_kcal=energy, macro_bands=bands, limits=dict(DAY_LIMITS))


@dataclass(frozen=True)
class Recommendation:
    recipe_id: str
    title: str
    score: float
    per_serving: dict
    tags: tuple
    rationale: tuple

    def to_dict(self) -> dict:
        return {
            "recipe_id": self.recipe_id,
            "title": self.title,
            "score": round(self.score, 6),
            "per_serving": {
                nid: None if v is None else format_amount(v)
                for nid, v in self.per_serving.items()
            },
            "tags": list(self.tags),
            "rationale": list(self.rationale),
        }


@dataclass(frozen=True)
class RecommendationResponse:
    recommendations: tuple
    remaining_budget: dict
    explanation: str = ""

    def to_dict(self) -> dict:
        return {
            "recommendations": [r.to_dict() for r in self.recommendations],
            "remaining_budget": {
                nid: format_amount(v) for nid, v in sorted(self.remaining_budget.items())
            },
            "explanation": self.explanation,
        }


def _recall_intake(profile: UserProfile, store, fct, cache, **compose_kwargs) -> dict:
    intake = {nid: Fraction(0) for nid in SCORED_NUTRIENTS}
    for recipe_id, portions in profile.recall:
        try:
            recipe = store.get_recipe(recipe_id)
            report = cache.report(recipe, fct, store=store, **compose_kwargs)
        except Exception:
            continue  # unknown or uncomputable recall entries contribute nothing
        for nid in SCORED_NUTRIENTS:
            value = report.per_serving.get(nid)
            if value is not None:
                intake[nid] += value * to_fraction(portions)
    return intake


def recommend(
    profile: UserProfile,
    store,
    fct,
    top_k: int = 5,
    cache: Optional[CompositionCache] = None,
    **compose_kwargs,
) -> RecommendationResponse:
    """Rank store recipes by fit to the remaining-day nutrient budget.

    Hard filters first: any recipe carrying an allergen tag the profile
    lists, or missing a requested dietary-practice tag, is excluded
    (tentative tagging excludes conservatively). Scoring is the mean
    normalized absolute deviation between per-serving amounts and the
    remaining budget over energy plus the three core macros; lower is
    better; unknown amounts score as worst-case.
    """
    profile.validate()
    cache = cache or CompositionCache()
    targets = compute_targets(profile)
    intake = _recall_intake(profile, store, fct, cache, **compose_kwargs)

    budget = {"energy_kcal": targets.energy_kcal - intake["energy_kcal"]}
    for nutrient in ("protein_g", "total_fat_g", "carbohydrate_g"):
        budget[nutrient] = targets.macro_midpoint(nutrient) - intake[nutrient]
    budget = {nid: max(v, Fraction(0)) for nid, v in budget.items()}
    scale = {
        "energy_kcal": targets.energy_kcal,
        "protein_g": targets.macro_midpoint("protein_g"),
        "total_fat_g": targets.macro_midpoint("total_fat_g"),
        "carbohydrate_g": targets.macro_midpoint("carbohydrate_g"),
    }

    required_tags = {t for t in profile.dietary_practices if t in PRACTICE_TAGS}
    banned_tags = {
        ALLERGY_TAGS[a] for a in profile.allergies if a in ALLERGY_TAGS
    }

    candidates = []
    for recipe in store.recipes():
        try:
            report = cache.report(recipe, fct, store=store, **compose_kwargs)
            assignment = cache.tags(recipe, fct, store=store, **compose_kwargs)
        except EmptyCompositionError:
            continue
        tags = set(assignment.tags)
        if banned_tags & tags:
            continue
        if assignment.tentative and banned_tags:
            continue  # cannot prove the allergen is absent
        if required_tags and (not required_tags <= tags or assignment.tentative):
            continue

        deviations = {}
        for nid in SCORED_NUTRIENTS:
            value = report.per_serving.get(nid)
            reference = budget[nid]
            denom = max(scale[nid], Fraction(1))
            if value is None:
                deviations[nid] = reference / denom  # worst case: counts as zero
            else:
                deviations[nid] = abs(value - reference) / denom
        score = sum(deviations.values()) / len(deviations)
        rationale = tuple(
            f"{nid}: {'unknown' if report.per_serving.get(nid) is None else format_amount(report.per_serving.get(nid))}"
            f" per serving vs {format_amount(budget[nid])} remaining"
            for nid in sorted(deviations, key=lambda n: deviations[n], reverse=True)[:2]
        )
        candidates.append(
            Recommendation(
                recipe_id=recipe.id,
                title=recipe.title,
                score=float(score),
                per_serving={nid: report.per_serving.get(nid) for nid in SCORED_NUTRIENTS},
                tags=assignment.tags,
                rationale=rationale,
            )
        )

    candidates.sort(key=lambda r: (r.score, r.recipe_id))
    if not candidates:
        return RecommendationResponse(
            recommendations=(),
            remaining_budget=budget,
            explanation="every stored recipe was excluded by the profile's filters",
        )
    return RecommendationResponse(
        recommendations=tuple(candidates[:top_k]), remaining_budget=budget
    )
