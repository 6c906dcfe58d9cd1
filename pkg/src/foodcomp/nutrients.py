"""Core nutrient domain types and arithmetic.

All amounts are exact `fractions.Fraction` values on a per-100 g edible
portion basis. Missing is not zero: a NutrientVector only has an entry for
nutrients whose value is actually asserted, and sums over gappy data carry
a separate completeness mask so callers can see how much of a total is
backed by real values.

Rounding to decimals happens only at the presentation boundary
(`format_amount`), with 2 decimal places, round-half-even.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime
from decimal import ROUND_HALF_EVEN, Decimal
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import Iterable, Mapping, Optional, Union

from .errors import InvalidArgument, UnknownNutrientError

Rational = Union[int, float, str, Fraction]

# Required core of 38 canonical nutrient ids (the cross-source common set;
# the exact membership is an implementer choice, see README). The unit is
# encoded in the token suffix.
CORE_NUTRIENTS = (
    "energy_kcal",
    "protein_g",
    "carbohydrate_g",
    "total_fat_g",
    "total_fiber_g",
    "insoluble_fiber_g",
    "soluble_fiber_g",
    "free_sugar_g",
    "added_sugar_g",
    "moisture_g",
    "ash_g",
    "cholesterol_mg",
    "saturated_fat_g",
    "monounsaturated_fat_g",
    "polyunsaturated_fat_g",
    "calcium_mg",
    "phosphorus_mg",
    "magnesium_mg",
    "sodium_mg",
    "potassium_mg",
    "iron_mg",
    "zinc_mg",
    "copper_mg",
    "manganese_mg",
    "selenium_ug",
    "vitamin_a_ug",
    "beta_carotene_ug",
    "thiamine_mg",
    "riboflavin_mg",
    "niacin_mg",
    "pantothenic_acid_mg",
    "vitamin_b6_mg",
    "biotin_ug",
    "folate_ug",
    "vitamin_c_mg",
    "vitamin_d_ug",
    "vitamin_e_mg",
    "vitamin_k_ug",
)

# Optional extended set (nutrients at least one source can report but which
# are not required of every record).
EXTENDED_NUTRIENTS = (
    "iodine_ug",
    "vitamin_b12_ug",
    "omega3_fat_g",
    "omega6_fat_g",
    "trans_fat_g",
    "caffeine_mg",
    "oxalate_mg",
    "phytate_mg",
)

CANONICAL_NUTRIENTS = frozenset(CORE_NUTRIENTS) | frozenset(EXTENDED_NUTRIENTS)


def is_canonical(nutrient_id: str) -> bool:
    return nutrient_id in CANONICAL_NUTRIENTS


def to_fraction(value: Rational) -> Fraction:
    """Coerce to an exact Fraction. Floats go through str() to keep the
    human-visible decimal (0.1 stays 1/10, not the binary expansion)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def format_amount(value: Fraction) -> str:
    """Render a rational at the presentation boundary: 2 decimal places,
    round-half-even, no trailing zeros beyond what the rounding implies."""
    dec = Decimal(value.numerator) / Decimal(value.denominator)
    quantized = dec.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)
    text = format(quantized.normalize(), "f")
    return text


class Source(str, Enum):
    IFCT = "IFCT"
    INDB = "INDB"
    EXTERNAL_API = "EXTERNAL_API"
    LLM = "LLM"
    USER = "USER"


@dataclass(frozen=True)
class Provenance:
    """Origin of a fact. LLM-sourced records stay distinguishable from
    table-sourced ones throughout the pipeline."""

    source: Source
    source_key: str = ""
    retrieved_at: Optional[str] = None  # ISO 8601; None for fixture/file loads

    @property
    def is_model_sourced(self) -> bool:
        return self.source is Source.LLM

    def to_dict(self) -> dict:
        return {
            "source": self.source.value,
            "source_key": self.source_key,
            "retrieved_at": self.retrieved_at,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Provenance":
        return cls(
            source=Source(d["source"]),
            source_key=d.get("source_key", ""),
            retrieved_at=d.get("retrieved_at"),
        )


def now_iso() -> str:
    return datetime.utcnow().replace(microsecond=0).isoformat() + "Z"


@dataclass(frozen=True)
class NutrientVector:
    """Per-100 g amounts keyed by canonical nutrient id.

    An entry exists iff the value is known; the known set is exactly
    values.keys(). Immutable, safe to share across threads.
    """

    values: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for nid, amount in dict(self.values).items():
            if nid not in CANONICAL_NUTRIENTS:
                raise InvalidArgument(f"not a canonical nutrient id: {nid!r}")
            frac = to_fraction(amount)
            if frac < 0:
                raise InvalidArgument(f"negative amount for {nid}: {frac}")
            clean[nid] = frac
        object.__setattr__(self, "values", clean)

    @property
    def known(self) -> frozenset:
        return frozenset(self.values)

    def get(self, nutrient_id: str) -> Optional[Fraction]:
        return self.values.get(nutrient_id)

    def __bool__(self) -> bool:
        return bool(self.values)

    def to_dict(self) -> dict:
        # Exact round-trip representation: "numerator/denominator" strings.
        return {nid: str(v) for nid, v in sorted(self.values.items())}

    def to_display_dict(self) -> dict:
        return {nid: format_amount(v) for nid, v in sorted(self.values.items())}

    @classmethod
    def from_dict(cls, d: Mapping[str, Rational]) -> "NutrientVector":
        return cls({nid: to_fraction(v) for nid, v in d.items()})


def nv_scale(v: NutrientVector, grams: Rational) -> NutrientVector:
    """Scale per-100 g amounts to absolute amounts for `grams` of food.

    The known set never changes; the caller tracks the basis.
    """
    factor = to_fraction(grams)
    if factor < 0:
        raise InvalidArgument(f"grams must be non-negative, got {factor}")
    ratio = factor / 100
    return NutrientVector({nid: amt * ratio for nid, amt in v.values.items()})


def nv_add(a: NutrientVector, b: NutrientVector) -> NutrientVector:
    """Sum two vectors on the same basis.

    The result's known set is the union of the operands' known sets; a
    nutrient missing from one operand simply contributes nothing (missing
    is unknown, not zero). Per-nutrient partiality is the caller's job,
    via CompletenessMask.
    """
    out = dict(a.values)
    for nid, amt in b.values.items():
        out[nid] = out.get(nid, Fraction(0)) + amt
    return NutrientVector(out)


def nv_sum(vectors: Iterable[NutrientVector]) -> NutrientVector:
    total = NutrientVector({})
    for v in vectors:
        total = nv_add(total, v)
    return total


@dataclass(frozen=True)
class CompletenessMask:
    """Per-nutrient completeness of a sum over possibly-gappy operands.

    Tracks, for each nutrient seen, how many contributing operands had a
    known value, plus the total operand count. fraction(n) is the honesty
    metric: known contributions / total contributors.
    """

    known_counts: Mapping[str, int] = field(default_factory=dict)
    total: int = 0

    @classmethod
    def of(cls, v: NutrientVector) -> "CompletenessMask":
        return cls({nid: 1 for nid in v.values}, total=1)

    def merge(self, other: "CompletenessMask") -> "CompletenessMask":
        counts = dict(self.known_counts)
        for nid, n in other.known_counts.items():
            counts[nid] = counts.get(nid, 0) + n
        return CompletenessMask(counts, total=self.total + other.total)

    def fraction(self, nutrient_id: str) -> Fraction:
        if self.total == 0:
            return Fraction(0)
        return Fraction(self.known_counts.get(nutrient_id, 0), self.total)

    def fractions(self) -> dict:
        return {nid: self.fraction(nid) for nid in sorted(self.known_counts)}

    def is_partial(self, nutrient_id: str) -> bool:
        return 0 < self.known_counts.get(nutrient_id, 0) < self.total


# --- canonical nutrient label mapping -----------------------------------

_MAPPING_CACHE: Optional[dict] = None


def _load_mapping_table() -> dict:
    """Mapping (source, source_label) -> (canonical_id, scale_factor),
    from the versioned table shipped as package data."""
    global _MAPPING_CACHE
    if _MAPPING_CACHE is None:
        table = {}
        path = resources.files("foodcomp.data").joinpath("nutrient_map.csv")
        with path.open("r", encoding="utf-8") as fh:
            rows = [line for line in fh if not line.startswith("#")]
        for row in csv.DictReader(rows):
            key = (row["source"], row["source_label"].strip().lower())
            canonical = row["canonical_id"].strip()
            if canonical not in CANONICAL_NUTRIENTS:
                raise InvalidArgument(
                    f"mapping table names unregistered nutrient {canonical!r}"
                )
            table[key] = (canonical, Fraction(row["scale_factor"]))
        _MAPPING_CACHE = table
    return _MAPPING_CACHE


def nutrient_mapping(source: Union[Source, str], source_label: str):
    """Return (canonical_id, scale_factor) for a source's nutrient label."""
    if not source_label:
        raise InvalidArgument("source_label must be non-empty")
    src = source.value if isinstance(source, Source) else str(source)
    key = (src, source_label.strip().lower())
    table = _load_mapping_table()
    if key not in table:
        raise UnknownNutrientError(src, source_label)
    return table[key]


def canonical_nutrient_id(source: Union[Source, str], source_label: str) -> str:
    """Canonical nutrient id for a source label; deterministic, data-driven."""
    return nutrient_mapping(source, source_label)[0]
