"""Rule-based dietary tags.

Tags live on three axes: dietary practice (vegetarian, jain-friendly),
allergen labels (contains-dairy), and health labels (low-sugar). Every
rule is a pure predicate over the ingredients' category paths and the
per-serving composition, loaded from a data file so the catalog extends
without code changes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from .categories import CategoryTree, load_category_tree
from .composition import CompositionReport
from .errors import InvalidArgument
from .fct import VariantKey
from .nutrients import to_fraction
from .resolver import Resolver
from .store import Recipe


@dataclass(frozen=True)
class DietaryTag:
    id: str
    axis: str  # PRACTICE | HEALTH | ALLERGEN
    conditions: tuple

    def __post_init__(self):
        if self.axis not in ("PRACTICE", "HEALTH", "ALLERGEN"):
            raise InvalidArgument(f"bad tag axis {self.axis!r} for {self.id!r}")


@dataclass(frozen=True)
class TagAssignment:
    tags: tuple  # sorted tag ids that hold
    tentative: bool  # unresolved or uncategorized lines were present
    uncategorized: tuple = ()  # ingredient names we could not categorize

    def to_dict(self) -> dict:
        return {
            "tags": list(self.tags),
            "tentative": self.tentative,
            "uncategorized": list(self.uncategorized),
        }


_CATALOG_CACHE = None


def load_tag_catalog(path: Optional[Path] = None) -> tuple:
    global _CATALOG_CACHE
    if path is None and _CATALOG_CACHE is not None:
        return _CATALOG_CACHE
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    else:
        raw = json.loads(
            resources.files("foodcomp.data").joinpath("dietary_tags.json").read_text(
                encoding="utf-8"
            )
        )
    catalog = tuple(
        DietaryTag(id=t["id"], axis=t["axis"], conditions=tuple(_freeze(c) for c in t["all"]))
        for t in raw["tags"]
    )
    ids = [t.id for t in catalog]
    if len(ids) != len(set(ids)):
        raise InvalidArgument("duplicate tag ids in catalog")
    if path is None:
        _CATALOG_CACHE = catalog
    return catalog


def _freeze(condition: dict):
    ((kind, value),) = condition.items()
    if kind in ("category_absent", "category_present_any"):
        return (kind, tuple(value))
    if kind in ("per_serving_max", "per_serving_min"):
        bound = value.get("limit", value.get("threshold"))
        return (kind, (value["nutrient"], to_fraction(bound)))
    raise InvalidArgument(f"unknown tag condition {kind!r}")


def _condition_holds(condition, category_paths, per_serving) -> bool:
    kind, value = condition
    if kind == "category_absent":
        return not any(
            node in path for path in category_paths for node in value
        )
    if kind == "category_present_any":
        return any(node in path for path in category_paths for node in value)
    nutrient, bound = value
    amount = per_serving.get(nutrient)
    if amount is None:
        return False  # unknown is not compliant; missing is never zero
    if kind == "per_serving_max":
        return amount <= bound
    return amount >= bound


def evaluate_tags(category_paths, per_serving, catalog=None) -> tuple:
    """Tag ids whose every condition holds for the given categories and
    per-serving amounts."""
    catalog = catalog or load_tag_catalog()
    held = [
        tag.id
        for tag in catalog
        if all(_condition_holds(c, category_paths, per_serving) for c in tag.conditions)
    ]
    return tuple(sorted(held))


def assign_dietary_tags(
    recipe: Recipe,
    report: CompositionReport,
    tree: Optional[CategoryTree] = None,
    resolver: Optional[Resolver] = None,
    catalog=None,
) -> TagAssignment:
    """Evaluate the catalog against a composed recipe.

    Category paths come from the matched food records where present, else
    from the category rule table via the resolver. Recipes with
    unresolved or uncategorizable lines get their tags marked tentative.
    """
    tree = tree or load_category_tree()
    resolver = resolver or Resolver()
    catalog = catalog or load_tag_catalog()

    paths = []
    uncategorized = []
    fct_keys = {
        c.matched_key: c for c in report.line_breakdown if c.matched_key is not None
    }
    for contribution in report.line_breakdown:
        if contribution.matched_key is None:
            continue
        key = VariantKey.from_string(contribution.matched_key)
        path = resolver.assign_category(key.name, key.form, key.process, key.size)
        if path is None:
            uncategorized.append(key.name)
        else:
            paths.append(tuple(path))

    tags = evaluate_tags(paths, report.per_serving, catalog)
    tentative = bool(report.unresolved) or bool(uncategorized)
    return TagAssignment(
        tags=tags, tentative=tentative, uncategorized=tuple(sorted(set(uncategorized)))
    )
