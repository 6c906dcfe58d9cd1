"""Measurement rulebook: units to grams.

Three kinds of knowledge live here, mirroring how cooking measures actually
work: standard conversions (1 teaspoon = 5 g, 1 cup = 48 teaspoon),
ingredient-specific units (a clove of garlic weighs 3-7 g), and
variant-specific translations (1 clove of minced garlic = 1 teaspoon).
Rules are either gram-valued (possibly a range) or an equivalence to
another unit; equivalence chains are acyclic and short.

Weight resolution walks a fixed chain: explicit weight, then the rulebook
gram path (ingredient-scoped rules shadow global ones), then volume x
density, then a configured default for measureless staples, then the
resolution agent's estimate as a last resort.
"""
from __future__ import annotations

import csv
import threading
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import (
    CycleError,
    InvalidArgument,
    NoConversionError,
    UnresolvedWeightError,
)
from .nutrients import Provenance, Source, to_fraction

GRAM = "gram"
MILLILITER = "milliliter"
BASE_UNITS = (GRAM, MILLILITER)

# Units whose gram rule is a pure mass definition; the parser captures
# these directly into weight_in_grams.
MASS_UNITS = frozenset({"gram", "kilogram", "milligram"})

GLOBAL_SCOPE = "global"

MAX_CHAIN_HOPS = 5


@dataclass(frozen=True)
class GramRange:
    """Gram value of one unit, possibly a range (clove of garlic: 3-7 g)."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo <= 0 or self.hi < self.lo:
            raise InvalidArgument(f"bad gram range {self.lo}-{self.hi}")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def pick(self, size: Optional[str]) -> Fraction:
        # Size descriptors select range endpoints; medium/absent takes
        # the midpoint, extending the range-averaging convention.
        if size == "small":
            return self.lo
        if size == "large":
            return self.hi
        return self.midpoint()

    def __str__(self) -> str:
        if self.is_point:
            return str(self.lo)
        return f"{self.lo}-{self.hi}"

    @classmethod
    def parse(cls, text: str) -> "GramRange":
        if "-" in text and not text.startswith("-"):
            lo, hi = text.split("-", 1)
            return cls(Fraction(lo.strip()), Fraction(hi.strip()))
        v = Fraction(text.strip())
        return cls(v, v)


@dataclass(frozen=True)
class UnitRule:
    """One enabled conversion. Exactly one of grams / equivalence is set."""

    unit: str
    scope: str  # "global" or a variant pattern: "name" or "name token..."
    grams: Optional[GramRange] = None
    equiv_qty: Optional[Fraction] = None
    equiv_unit: Optional[str] = None
    status: str = "active"  # active | staged
    provenance: Provenance = field(
        default_factory=lambda: Provenance(Source.USER, "rulebook")
    )

    def __post_init__(self):
        if (self.grams is None) == (self.equiv_unit is None):
            raise InvalidArgument(
                f"rule for {self.unit!r} must set exactly one of grams/equivalence"
            )
        if self.equiv_unit is not None and (
            self.equiv_qty is None or self.equiv_qty <= 0
        ):
            raise InvalidArgument(f"equivalence for {self.unit!r} needs a positive quantity")
        if self.status not in ("active", "staged"):
            raise InvalidArgument(f"bad rule status {self.status!r}")

    @property
    def rule_id(self) -> str:
        return f"{self.unit}@{self.scope}"

    def describe(self) -> str:
        scope = "global" if self.scope == GLOBAL_SCOPE else f"scope {self.scope}"
        if self.grams is not None:
            return f"1 {self.unit} = {self.grams} g ({scope})"
        return f"1 {self.unit} = {self.equiv_qty} {self.equiv_unit} ({scope})"


class ResolutionMethod(str, Enum):
    EXPLICIT = "EXPLICIT"
    UNIT_RULE = "UNIT_RULE"
    VOLUME_DENSITY = "VOLUME_DENSITY"
    RESOLVER_ESTIMATE = "RESOLVER_ESTIMATE"


@dataclass(frozen=True)
class WeightResolution:
    """Outcome of the weight-resolution chain for one ingredient line."""

    grams: Fraction
    method: ResolutionMethod
    rule_trace: tuple = ()
    estimated_grams: Optional[Fraction] = None  # model estimate, kept alongside
    estimate_provenance: Optional[Provenance] = None

    def to_dict(self) -> dict:
        return {
            "grams": str(self.grams),
            "method": self.method.value,
            "rule_trace": list(self.rule_trace),
            "estimated_grams": None
            if self.estimated_grams is None
            else str(self.estimated_grams),
            "llm_estimated": self.estimated_grams is not None
            or self.method is ResolutionMethod.RESOLVER_ESTIMATE,
        }


def _scope_matches(scope: str, name: Optional[str], descriptors: Sequence[str]) -> bool:
    if scope == GLOBAL_SCOPE:
        return True
    parts = scope.split()
    if not name or parts[0] != name:
        return False
    return all(tok in descriptors for tok in parts[1:])


def _scope_specificity(scope: str) -> int:
    return 0 if scope == GLOBAL_SCOPE else len(scope.split())


class Rulebook:
    """Copy-on-write rule store.

    Readers always see a consistent snapshot (an immutable tuple swap);
    registration is serialized through a lock.
    """

    def __init__(self, rules: Sequence[UnitRule] = ()):
        self._lock = threading.Lock()
        self._rules: tuple = ()
        for rule in rules:
            self.register(rule, reviewed=rule.status == "active")

    @property
    def rules(self) -> tuple:
        return self._rules

    def units(self) -> set:
        out = set(BASE_UNITS)
        for r in self._rules:
            out.add(r.unit)
            if r.equiv_unit:
                out.add(r.equiv_unit)
        return out

    def register(self, rule: UnitRule, reviewed: bool = False) -> str:
        """Add a rule; unreviewed rules are staged until approved.

        Rejects duplicate (unit, scope) pairs and any equivalence that
        would close a cycle, naming the offending path.
        """
        staged = replace(rule, status="active" if reviewed else "staged")
        with self._lock:
            for existing in self._rules:
                if existing.unit == staged.unit and existing.scope == staged.scope:
                    raise InvalidArgument(
                        f"duplicate rule for ({staged.unit}, {staged.scope})"
                    )
            candidate = self._rules + (staged,)
            cycle = _find_equivalence_cycle(candidate)
            if cycle:
                raise CycleError(
                    "equivalence cycle: " + " -> ".join(cycle), path=cycle
                )
            self._rules = candidate
        return staged.rule_id

    def approve(self, rule_id: str) -> None:
        with self._lock:
            self._rules = tuple(
                replace(r, status="active") if r.rule_id == rule_id else r
                for r in self._rules
            )

    def _applicable(
        self,
        unit: str,
        name: Optional[str],
        descriptors: Sequence[str],
        permissive: bool,
    ) -> Optional[UnitRule]:
        """Most specific matching rule for a unit; scoped shadows global."""
        best = None
        for rule in self._rules:
            if rule.unit != unit:
                continue
            if rule.status == "staged" and not permissive:
                continue
            if not _scope_matches(rule.scope, name, descriptors):
                continue
            if best is None or _scope_specificity(rule.scope) > _scope_specificity(
                best.scope
            ):
                best = rule
        return best

    def resolve_chain(
        self,
        unit: str,
        target: str,
        name: Optional[str] = None,
        descriptors: Sequence[str] = (),
        size: Optional[str] = None,
        permissive: bool = False,
    ):
        """Follow equivalences from `unit` until `target` (gram/milliliter).

        Returns (factor, trace) where factor converts one `unit` into
        `target` units, or None when no chain exists.
        """
        if unit == target:
            return Fraction(1), ()
        factor = Fraction(1)
        trace = []
        current = unit
        for _ in range(MAX_CHAIN_HOPS):
            rule = self._applicable(current, name, descriptors, permissive)
            if rule is None:
                return None
            trace.append(rule.describe())
            if rule.grams is not None:
                if target != GRAM:
                    return None
                return factor * rule.grams.pick(size), tuple(trace)
            factor *= rule.equiv_qty
            current = rule.equiv_unit
            if current == target:
                return factor, tuple(trace)
        return None

    def lint(self) -> list:
        """Duplicate / cycle / unterminated-chain report for `units lint`."""
        problems = []
        seen = {}
        for rule in self._rules:
            key = (rule.unit, rule.scope)
            if key in seen:
                problems.append(f"duplicate rule for {key}")
            seen[key] = rule
        cycle = _find_equivalence_cycle(self._rules)
        if cycle:
            problems.append("equivalence cycle: " + " -> ".join(cycle))
        else:
            for rule in self._rules:
                if rule.equiv_unit is None:
                    continue
                # Evaluate scoped rules in their own scope context.
                if rule.scope == GLOBAL_SCOPE:
                    name, descriptors = None, ()
                else:
                    parts = rule.scope.split()
                    name, descriptors = parts[0], tuple(parts[1:])
                chain_g = self.resolve_chain(
                    rule.unit, GRAM, name=name, descriptors=descriptors, permissive=True
                )
                chain_ml = self.resolve_chain(
                    rule.unit, MILLILITER, name=name, descriptors=descriptors, permissive=True
                )
                if chain_g is None and chain_ml is None:
                    problems.append(
                        f"{rule.rule_id} never reaches grams or milliliters"
                        f" within {MAX_CHAIN_HOPS} hops"
                    )
        return problems


def _find_equivalence_cycle(rules: Sequence[UnitRule]) -> Optional[list]:
    # Equivalences must be acyclic across scopes (a scoped alternative that
    # loops back through a global rule is still a modeling error).
    edges = {}
    for r in rules:
        if r.equiv_unit is not None:
            edges.setdefault(r.unit, []).append(r.equiv_unit)
    state = {}

    def visit(node, path):
        state[node] = "in"
        path.append(node)
        for nxt in edges.get(node, ()):
            if state.get(nxt) == "in":
                return path[path.index(nxt):] + [nxt]
            if state.get(nxt) is None:
                found = visit(nxt, path)
                if found:
                    return found
        path.pop()
        state[node] = "done"
        return None

    for start in sorted(edges):
        if state.get(start) is None:
            found = visit(start, [])
            if found:
                return found
    return None


def convert_unit(
    quantity,
    from_unit: str,
    to_unit: str,
    rulebook: "Rulebook",
    context_name: Optional[str] = None,
    context_descriptors: Sequence[str] = (),
    permissive: bool = False,
) -> Fraction:
    """Convert a quantity between registered units.

    Searches the rule graph breadth-first (equivalences both ways, gram
    rules at their midpoint) in the context's shadowed view; deterministic.
    """
    qty = to_fraction(quantity)
    known = rulebook.units()
    for u in (from_unit, to_unit):
        if u not in known:
            raise NoConversionError(f"unit {u!r} is not registered", unit=u)
    if from_unit == to_unit:
        return qty

    # Applicable rule per unit under this context (scoped shadows global).
    edges = {}

    def add_edge(a, b, factor):
        edges.setdefault(a, {})
        # Keep first (most specific insertion order handled below).
        edges[a].setdefault(b, factor)

    for unit in sorted(known):
        rule = rulebook._applicable(unit, context_name, context_descriptors, permissive)
        if rule is None:
            continue
        if rule.grams is not None:
            g = rule.grams.midpoint()
            add_edge(unit, GRAM, g)
            add_edge(GRAM, unit, 1 / g)
        else:
            add_edge(unit, rule.equiv_unit, rule.equiv_qty)
            add_edge(rule.equiv_unit, unit, 1 / rule.equiv_qty)

    # BFS, bounded hops, lexicographic tie-break for determinism.
    frontier = [(from_unit, Fraction(1))]
    seen = {from_unit}
    for _ in range(2 * MAX_CHAIN_HOPS):
        nxt = []
        for node, factor in frontier:
            for neigh in sorted(edges.get(node, {})):
                if neigh in seen:
                    continue
                f = factor * edges[node][neigh]
                if neigh == to_unit:
                    return qty * f
                seen.add(neigh)
                nxt.append((neigh, f))
        if not nxt:
            break
        frontier = nxt
    raise NoConversionError(
        f"no conversion path from {from_unit!r} to {to_unit!r}"
        + (f" for {context_name!r}" if context_name else ""),
        from_unit=from_unit,
        to_unit=to_unit,
        context=context_name,
    )


# --- densities ------------------------------------------------------------

DEFAULT_DENSITY = Fraction(1)  # the 1 g = 1 ml convention


class DensityTable:
    """grams-per-ml overrides by ingredient name; default is 1.0."""

    def __init__(self, entries: Optional[dict] = None):
        self.entries = {k: to_fraction(v) for k, v in (entries or {}).items()}
        for k, v in self.entries.items():
            if v <= 0:
                raise InvalidArgument(f"density for {k!r} must be positive")

    def grams_per_ml(self, name: Optional[str]) -> Fraction:
        if name and name in self.entries:
            return self.entries[name]
        return DEFAULT_DENSITY

    def has_override(self, name: Optional[str]) -> bool:
        return bool(name) and name in self.entries


# --- shipped data ----------------------------------------------------------


def _read_data_rows(filename: str, path: Optional[Path] = None):
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = resources.files("foodcomp.data").joinpath(filename).read_text(
            encoding="utf-8"
        )
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    return list(csv.DictReader(rows))


def load_rulebook(path: Optional[Path] = None) -> Rulebook:
    """Rulebook from the shipped table or a user-edited file."""
    book = Rulebook()
    for row in _read_data_rows("unit_rules.csv", path):
        unit = row["unit"].strip()
        scope = row["scope"].strip() or GLOBAL_SCOPE
        grams = row.get("grams_per_unit", "").strip()
        equiv = row.get("equivalent", "").strip()
        status = (row.get("status") or "active").strip()
        if grams:
            rule = UnitRule(unit=unit, scope=scope, grams=GramRange.parse(grams), status=status)
        else:
            qty, equiv_unit = equiv.split(None, 1)
            rule = UnitRule(
                unit=unit,
                scope=scope,
                equiv_qty=Fraction(qty),
                equiv_unit=equiv_unit.strip(),
                status=status,
            )
        book.register(rule, reviewed=status == "active")
    return book


def load_densities(path: Optional[Path] = None) -> DensityTable:
    entries = {}
    for row in _read_data_rows("densities.csv", path):
        entries[row["name"].strip()] = Fraction(row["grams_per_ml"])
    return DensityTable(entries)


def load_default_amounts(path: Optional[Path] = None) -> dict:
    """Configured gram defaults for measureless staples ("salt", "jeera
    powder"); fixture values, not asserted ground truth."""
    return {
        row["name"].strip(): Fraction(row["grams"])
        for row in _read_data_rows("default_amounts.csv", path)
    }


# --- the weight-resolution chain -------------------------------------------


def resolve_weight_grams(
    parsed,
    rulebook: Rulebook,
    densities: Optional[DensityTable] = None,
    defaults: Optional[dict] = None,
    resolver=None,
    permissive: bool = False,
) -> WeightResolution:
    """Resolve one parsed ingredient line to grams.

    Chain order: explicit weight; rulebook gram path; volume x density;
    configured default for measureless staples; resolver estimate. When a
    rule-derived weight exists and a model-backed resolver is supplied,
    the model estimate is attached alongside, never in place of it.
    """
    densities = densities if densities is not None else DensityTable()
    defaults = defaults or {}
    name = getattr(parsed, "ingredient", None)
    descriptors = [
        d for d in (getattr(parsed, "form", None), getattr(parsed, "process", None), getattr(parsed, "size", None)) if d
    ]
    size = getattr(parsed, "size", None)
    quantity = getattr(parsed, "quantity", None)
    unit = getattr(parsed, "unit", None)
    qty_value = None if quantity is None else quantity.value

    resolution = None
    if getattr(parsed, "weight_in_grams", None) is not None:
        resolution = WeightResolution(
            grams=to_fraction(parsed.weight_in_grams),
            method=ResolutionMethod.EXPLICIT,
            rule_trace=("explicit weight from source text",),
        )
    elif qty_value is not None and unit is not None:
        chain = rulebook.resolve_chain(
            unit, GRAM, name=name, descriptors=descriptors, size=size, permissive=permissive
        )
        if chain is not None:
            per_unit, trace = chain
            resolution = WeightResolution(
                grams=qty_value * per_unit,
                method=ResolutionMethod.UNIT_RULE,
                rule_trace=trace,
            )
        else:
            ml_chain = rulebook.resolve_chain(
                unit, MILLILITER, name=name, descriptors=descriptors, size=size, permissive=permissive
            )
            if ml_chain is not None:
                ml_per_unit, trace = ml_chain
                gpm = densities.grams_per_ml(name)
                resolution = WeightResolution(
                    grams=qty_value * ml_per_unit * gpm,
                    method=ResolutionMethod.VOLUME_DENSITY,
                    rule_trace=trace + (f"density {name or 'default'}: {gpm} g/ml",),
                )
    elif qty_value is None and unit is None:
        # "jeera powder" style staples match on "name form" then name.
        form = getattr(parsed, "form", None)
        for key in ([f"{name} {form}"] if name and form else []) + ([name] if name else []):
            if key in defaults:
                resolution = WeightResolution(
                    grams=defaults[key],
                    method=ResolutionMethod.UNIT_RULE,
                    rule_trace=(f"defaulted: {key} = {defaults[key]} g (measureless staple)",),
                )
                break

    estimate = None
    if resolver is not None and resolver.can_estimate_weight():
        estimate = resolver.estimate_weight(parsed)

    if resolution is not None:
        if estimate is not None:
            resolution = replace(
                resolution,
                estimated_grams=estimate.grams,
                estimate_provenance=estimate.provenance,
            )
        return resolution

    if estimate is not None:
        return WeightResolution(
            grams=estimate.grams,
            method=ResolutionMethod.RESOLVER_ESTIMATE,
            rule_trace=("model-estimated weight",),
            estimated_grams=estimate.grams,
            estimate_provenance=estimate.provenance,
        )

    raise UnresolvedWeightError(
        f"cannot resolve weight for line {getattr(parsed, 'source_text', '')!r}",
        ingredient=name,
        unit=unit,
    )


@dataclass(frozen=True)
class WeightEstimate:
    """A model-produced gram estimate with its provenance."""

    grams: Fraction
    provenance: Provenance
