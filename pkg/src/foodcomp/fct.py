"""Nutrition data aggregation: source tables in, one merged store out.

Adapters read the two table-style sources (IFCT-style and INDB-style CSV)
plus captured external-API responses, normalize every row to per-100 g
with canonical nutrient ids, and the builder merges records sharing a
variant key by source priority (IFCT beats INDB beats the external API
beats model-sourced rows) with per-nutrient backfill: a nutrient the
winning record lacks is filled from the best lower-priority record that
knows it, and that origin is remembered per nutrient.
"""
from __future__ import annotations

import csv
import hashlib
import json
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    AdapterError,
    ConflictError,
    FetchError,
    InvalidArgument,
    InvalidRecordError,
    NotFoundError,
    UnknownNutrientError,
)
from .nutrients import (
    NutrientVector,
    Provenance,
    Source,
    nutrient_mapping,
    to_fraction,
)
from .parsing import FORM_WORDS, PROCESS_WORDS, SIZE_WORDS, extract_descriptors

SNAPSHOT_SCHEMA_VERSION = 1

# Lower number wins the merge.
SOURCE_PRIORITY = {
    Source.IFCT: 0,
    Source.INDB: 1,
    Source.EXTERNAL_API: 2,
    Source.LLM: 3,
    Source.USER: 4,
}


@dataclass(frozen=True, order=True)
class VariantKey:
    """Identity of one ingredient variant: name plus the form / process /
    size descriptor axes. Equality is exact on normalized tokens; fuzzy
    matching belongs to the knowledge store, not here."""

    name: str
    form: Optional[str] = None
    process: Optional[str] = None
    size: Optional[str] = None

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise InvalidArgument("variant key needs a non-empty name")
        object.__setattr__(self, "name", self.name.strip().lower())
        for axis in ("form", "process", "size"):
            value = getattr(self, axis)
            if value is not None:
                object.__setattr__(self, axis, value.strip().lower() or None)

    def unknown_descriptors(self) -> list:
        """Descriptor tokens outside the controlled vocabularies; kept
        verbatim but reported for review."""
        out = []
        if self.form and self.form not in FORM_WORDS:
            out.append(("form", self.form))
        if self.process and self.process not in PROCESS_WORDS:
            out.append(("process", self.process))
        if self.size and self.size not in SIZE_WORDS:
            out.append(("size", self.size))
        return out

    def as_string(self) -> str:
        return "|".join([self.name, self.form or "", self.process or "", self.size or ""])

    @classmethod
    def from_string(cls, text: str) -> "VariantKey":
        name, form, process, size = text.split("|")
        return cls(name, form or None, process or None, size or None)

    def descriptors(self) -> list:
        return [d for d in (self.form, self.process, self.size) if d]


@dataclass(frozen=True)
class FoodRecord:
    """One canonical FCT entry, always per 100 g."""

    key: VariantKey
    nutrients: NutrientVector
    aliases: frozenset = frozenset()  # of (label, language) pairs
    scientific_name: Optional[str] = None
    food_group: Optional[str] = None
    dietary_flags: frozenset = frozenset()
    category_path: Optional[tuple] = None
    retention_factors: Optional[dict] = None  # stored, deliberately unused
    provenance: Provenance = field(default_factory=lambda: Provenance(Source.USER))
    nutrient_provenance: dict = field(default_factory=dict)  # nid -> Source

    def to_dict(self) -> dict:
        return {
            "key": self.key.as_string(),
            "nutrients": self.nutrients.to_dict(),
            "aliases": sorted(list(a) for a in self.aliases),
            "scientific_name": self.scientific_name,
            "food_group": self.food_group,
            "dietary_flags": sorted(self.dietary_flags),
            "category_path": list(self.category_path) if self.category_path else None,
            "retention_factors": self.retention_factors,
            "provenance": self.provenance.to_dict(),
            "nutrient_provenance": {
                nid: src.value for nid, src in sorted(self.nutrient_provenance.items())
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FoodRecord":
        return cls(
            key=VariantKey.from_string(d["key"]),
            nutrients=NutrientVector.from_dict(d["nutrients"]),
            aliases=frozenset(tuple(a) for a in d.get("aliases", [])),
            scientific_name=d.get("scientific_name"),
            food_group=d.get("food_group"),
            dietary_flags=frozenset(d.get("dietary_flags", [])),
            category_path=tuple(d["category_path"]) if d.get("category_path") else None,
            retention_factors=d.get("retention_factors"),
            provenance=Provenance.from_dict(d["provenance"]),
            nutrient_provenance={
                nid: Source(src)
                for nid, src in d.get("nutrient_provenance", {}).items()
            },
        )


@dataclass(frozen=True)
class Basis:
    """Serving basis of a source row; grams must be positive."""

    kind: str  # per_100g | per_serving | per_unit
    grams: Fraction

    @classmethod
    def parse(cls, text: str) -> "Basis":
        t = (text or "").strip().lower()
        m = re.fullmatch(r"(?:per\s*)?100\s*g", t)
        if m:
            return cls("per_100g", Fraction(100))
        m = re.fullmatch(r"(?:per\s*)?serving\s*(?:of)?\s*:?\s*([\d.]+)\s*g", t)
        if m:
            return cls("per_serving", to_fraction(m.group(1)))
        m = re.fullmatch(r"(?:per\s*)?unit\s*(?:of)?\s*:?\s*([\d.]+)\s*g", t)
        if m:
            return cls("per_unit", to_fraction(m.group(1)))
        raise InvalidRecordError(f"unintelligible serving basis {text!r}")


@dataclass
class SourceRecord:
    """Raw adapter row before canonicalization."""

    source: Source
    source_key: str
    name: str
    form: Optional[str]
    process: Optional[str]
    size: Optional[str]
    basis: Basis
    nutrients_raw: dict  # source label -> Fraction amount on the row basis
    aliases: frozenset = frozenset()
    scientific_name: Optional[str] = None
    food_group: Optional[str] = None
    dietary_flags: frozenset = frozenset()
    retention_factors: Optional[dict] = None
    row: int = 0

    def key(self) -> VariantKey:
        return VariantKey(self.name, self.form, self.process, self.size)


@dataclass
class LoadedSource:
    source: Source
    path: str
    records: list
    rejected: list  # (row number, reason)


@dataclass
class BuildReport:
    """What the aggregation run saw: row counts, conflicts, and anything
    routed toward the review queue."""

    counts_per_source: dict = field(default_factory=dict)
    rejected_rows: dict = field(default_factory=dict)  # source -> [(row, reason)]
    merged_keys: int = 0
    overlapping_keys: list = field(default_factory=list)
    unmapped_labels: list = field(default_factory=list)  # (source, label)
    unknown_descriptors: list = field(default_factory=list)  # (key, axis, token)

    def to_dict(self) -> dict:
        return {
            "counts_per_source": {
                src.value: n for src, n in sorted(self.counts_per_source.items())
            },
            "rejected_rows": {
                src.value: rows for src, rows in sorted(self.rejected_rows.items())
            },
            "merged_keys": self.merged_keys,
            "overlapping_keys": sorted(self.overlapping_keys),
            "unmapped_labels": sorted(set(map(tuple, self.unmapped_labels))),
            "unknown_descriptors": sorted(set(map(tuple, self.unknown_descriptors))),
        }


# --- adapters -------------------------------------------------------------------

IFCT_ADAPTER = "IFCT"
INDB_ADAPTER = "INDB"
API_CAPTURE_ADAPTER = "EXTERNAL_API"

_IFCT_FIXED = [
    "code", "name", "form", "process", "size", "scientific_name",
    "food_group", "dietary_tags", "vernacular_names", "basis",
]
_INDB_FIXED = [
    "food_code", "food_name", "form", "process", "size", "local_names", "basis",
]


def _read_csv(path: Path, required: Sequence[str], adapter: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise AdapterError(f"cannot read {path}: {exc}", adapter=adapter)
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    if not lines:
        raise AdapterError(f"{path} is empty", adapter=adapter, missing=list(required))
    reader = csv.DictReader(lines)
    header = reader.fieldnames or []
    missing = [c for c in required if c not in header]
    if missing:
        raise AdapterError(
            f"{path} does not match the {adapter} schema; missing columns: {missing}",
            adapter=adapter,
            missing=missing,
        )
    return header, list(reader)


def _parse_aliases(raw: str) -> frozenset:
    # "hi:aloo;gu:bateka"
    out = set()
    for part in (raw or "").split(";"):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lang, label = part.split(":", 1)
            out.add((label.strip().lower(), lang.strip()))
        else:
            out.add((part.lower(), "und"))
    return frozenset(out)


def _row_nutrients(row, fixed_columns, header, rownum, rejected):
    nutrients = {}
    for column in header:
        if column in fixed_columns:
            continue
        raw = (row.get(column) or "").strip()
        if raw == "":
            continue  # a gap, not a zero
        try:
            value = to_fraction(raw)
        except (ValueError, ZeroDivisionError):
            rejected.append((rownum, f"malformed numeric {raw!r} in {column!r}"))
            return None
        if value < 0:
            rejected.append((rownum, f"negative amount {raw!r} in {column!r}"))
            return None
        nutrients[column] = value
    return nutrients


def load_source(path, adapter: str) -> LoadedSource:
    """Read one source file into raw records.

    Rows with malformed numerics are rejected individually with their row
    numbers; a missing column or an empty file fails the whole file.
    """
    adapter = adapter.upper()
    if adapter == IFCT_ADAPTER:
        return _load_ifct(Path(path))
    if adapter == INDB_ADAPTER:
        return _load_indb(Path(path))
    if adapter == API_CAPTURE_ADAPTER:
        return _load_api_capture(Path(path))
    raise AdapterError(f"unknown adapter {adapter!r}", adapter=adapter)


def _load_ifct(path: Path) -> LoadedSource:
    header, rows = _read_csv(path, _IFCT_FIXED, IFCT_ADAPTER)
    records, rejected = [], []
    for i, row in enumerate(rows, start=2):  # header is line 1
        nutrients = _row_nutrients(row, _IFCT_FIXED, header, i, rejected)
        if nutrients is None:
            continue
        try:
            basis = Basis.parse(row["basis"])
        except InvalidRecordError as exc:
            rejected.append((i, exc.message))
            continue
        records.append(
            SourceRecord(
                source=Source.IFCT,
                source_key=row["code"].strip(),
                name=row["name"].strip().lower(),
                form=(row.get("form") or "").strip().lower() or None,
                process=(row.get("process") or "").strip().lower() or None,
                size=(row.get("size") or "").strip().lower() or None,
                basis=basis,
                nutrients_raw=nutrients,
                aliases=_parse_aliases(row.get("vernacular_names", "")),
                scientific_name=(row.get("scientific_name") or "").strip() or None,
                food_group=(row.get("food_group") or "").strip() or None,
                dietary_flags=frozenset(
                    t.strip().lower()
                    for t in (row.get("dietary_tags") or "").split(";")
                    if t.strip()
                ),
                row=i,
            )
        )
    return LoadedSource(Source.IFCT, str(path), records, rejected)


def _load_indb(path: Path) -> LoadedSource:
    header, rows = _read_csv(path, _INDB_FIXED, INDB_ADAPTER)
    records, rejected = [], []
    for i, row in enumerate(rows, start=2):
        nutrients = _row_nutrients(row, _INDB_FIXED, header, i, rejected)
        if nutrients is None:
            continue
        try:
            basis = Basis.parse(row["basis"])
        except InvalidRecordError as exc:
            rejected.append((i, exc.message))
            continue
        records.append(
            SourceRecord(
                source=Source.INDB,
                source_key=row["food_code"].strip(),
                name=row["food_name"].strip().lower(),
                form=(row.get("form") or "").strip().lower() or None,
                process=(row.get("process") or "").strip().lower() or None,
                size=(row.get("size") or "").strip().lower() or None,
                basis=basis,
                nutrients_raw=nutrients,
                aliases=_parse_aliases(row.get("local_names", "")),
                row=i,
            )
        )
    return LoadedSource(Source.INDB, str(path), records, rejected)


def _load_api_capture(path: Path) -> LoadedSource:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise AdapterError(f"cannot read capture {path}: {exc}", adapter=API_CAPTURE_ADAPTER)
    items = data.get("items")
    if not isinstance(items, list):
        raise AdapterError(
            f"{path} is not an API capture (no items array)",
            adapter=API_CAPTURE_ADAPTER,
            missing=["items"],
        )
    records, rejected = [], []
    for i, item in enumerate(items):
        try:
            records.append(source_record_from_api_item(item, row=i))
        except (InvalidRecordError, KeyError, ValueError) as exc:
            rejected.append((i, str(exc)))
    return LoadedSource(Source.EXTERNAL_API, str(path), records, rejected)


def source_record_from_api_item(item: dict, row: int = 0) -> SourceRecord:
    """One captured external-API item -> SourceRecord (per-serving basis).

    The API's food_name carries variant words ("boiled potato"); the
    descriptor vocabularies pull those apart.
    """
    food_name = item["food_name"].strip().lower()
    form, process, size, residual = extract_descriptors(food_name.split())
    weight = to_fraction(item["serving_weight_grams"])
    if weight <= 0:
        raise InvalidRecordError(f"non-positive serving weight for {food_name!r}")
    nutrients = {}
    for label, value in item.items():
        if not label.startswith("nf_") or value is None:
            continue
        amount = to_fraction(value)
        if amount < 0:
            raise InvalidRecordError(f"negative {label} for {food_name!r}")
        nutrients[label] = amount
    return SourceRecord(
        source=Source.EXTERNAL_API,
        source_key=item.get("query", food_name),
        name=" ".join(residual) or food_name,
        form=form,
        process=process,
        size=size,
        basis=Basis("per_serving", weight),
        nutrients_raw=nutrients,
        row=row,
    )


# --- normalization ---------------------------------------------------------------


def normalize_basis(rec: SourceRecord, report: Optional[BuildReport] = None) -> FoodRecord:
    """Rescale a raw row to per-100 g and canonicalize nutrient labels.

    Unmapped labels are dropped into the build report, never silently.
    """
    if rec.basis.grams <= 0:
        raise InvalidRecordError(
            f"basis of {rec.basis.grams} g for {rec.name!r}", row=rec.row
        )
    scale = Fraction(100) / rec.basis.grams
    values = {}
    for label, amount in sorted(rec.nutrients_raw.items()):
        try:
            nid, factor = nutrient_mapping(rec.source, label)
        except UnknownNutrientError:
            if report is not None:
                report.unmapped_labels.append((rec.source.value, label))
            continue
        values[nid] = amount * factor * scale
    key = rec.key()
    if report is not None:
        for axis, token in key.unknown_descriptors():
            report.unknown_descriptors.append((key.as_string(), axis, token))
    return FoodRecord(
        key=key,
        nutrients=NutrientVector(values),
        aliases=rec.aliases,
        scientific_name=rec.scientific_name,
        food_group=rec.food_group,
        dietary_flags=rec.dietary_flags,
        retention_factors=rec.retention_factors,
        provenance=Provenance(rec.source, rec.source_key),
        nutrient_provenance={nid: rec.source for nid in values},
    )


def merge_priority(candidates: Sequence) -> FoodRecord:
    """Merge records sharing one variant key by source priority.

    The winner contributes its values and top-level provenance; nutrients
    it does not know are backfilled per nutrient from the next sources
    down, each backfill remembered in nutrient_provenance. Aliases and
    descriptive fields merge as a union / first-non-empty.
    """
    if not candidates:
        raise InvalidArgument("merge_priority needs at least one candidate")
    ranked = sorted(
        candidates, key=lambda sr: (SOURCE_PRIORITY[sr[0]], sr[1].provenance.source_key)
    )
    winner = ranked[0][1]
    values = dict(winner.nutrients.values)
    nutrient_prov = dict(winner.nutrient_provenance)
    aliases = set(winner.aliases)
    flags = set(winner.dietary_flags)
    scientific = winner.scientific_name
    group = winner.food_group
    category = winner.category_path
    retention = winner.retention_factors
    for source, rec in ranked[1:]:
        for nid, amount in rec.nutrients.values.items():
            if nid not in values:
                values[nid] = amount
                nutrient_prov[nid] = source
        aliases |= rec.aliases
        flags |= rec.dietary_flags
        scientific = scientific or rec.scientific_name
        group = group or rec.food_group
        category = category or rec.category_path
        retention = retention or rec.retention_factors
    return FoodRecord(
        key=winner.key,
        nutrients=NutrientVector(values),
        aliases=frozenset(aliases),
        scientific_name=scientific,
        food_group=group,
        dietary_flags=frozenset(flags),
        category_path=category,
        retention_factors=retention,
        provenance=winner.provenance,
        nutrient_provenance=nutrient_prov,
    )


# --- the store ---------------------------------------------------------------------


class FctStore:
    """The aggregated food composition table.

    Built single-writer, then read concurrently; inserts after the build
    (external fetches, approved model facts) go through one lock.
    """

    def __init__(self, records: Optional[dict] = None, report: Optional[BuildReport] = None):
        self._records = dict(records or {})
        self.report = report or BuildReport()
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: VariantKey) -> bool:
        return key in self._records

    def keys(self) -> list:
        return sorted(self._records, key=lambda k: k.as_string())

    def get(self, key: VariantKey) -> Optional[FoodRecord]:
        return self._records.get(key)

    def records(self) -> list:
        return [self._records[k] for k in self.keys()]

    def lookup(self, key: VariantKey):
        """Exact variant first, then progressively fewer descriptors
        (size, then form, then process), tracking whether we relaxed.

        Returns (record, exact) or None.
        """
        relaxations = [
            key,
            VariantKey(key.name, key.form, key.process, None),
            VariantKey(key.name, None, key.process, None),
            VariantKey(key.name, None, None, None),
        ]
        for i, candidate in enumerate(relaxations):
            hit = self._records.get(candidate)
            if hit is not None:
                return hit, i == 0
        return None

    def by_name(self, name: str) -> list:
        name = name.strip().lower()
        return [r for k, r in sorted(self._records.items(), key=lambda kv: kv[0].as_string()) if k.name == name]

    def insert(self, record: FoodRecord, replace: bool = False):
        with self._lock:
            if record.key in self._records and not replace:
                raise ConflictError(
                    f"record already stored for {record.key.as_string()!r}"
                )
            self._records[record.key] = record

    def lookup_or_fetch(self, key: VariantKey, client) -> FoodRecord:
        """Local record if present (including a relaxed variant); else ask
        the external API, normalize, insert with EXTERNAL_API provenance."""
        local = self.lookup(key)
        if local is not None:
            return local[0]
        query = " ".join([*key.descriptors(), key.name]).strip()
        try:
            item = client.fetch(query)
        except NotFoundError:
            raise
        except FetchError:
            raise
        rec = normalize_basis(source_record_from_api_item(item), self.report)
        self.insert(rec, replace=False)
        return rec

    # -- snapshots --

    def to_snapshot(self) -> dict:
        return {
            "schema_version": SNAPSHOT_SCHEMA_VERSION,
            "records": [r.to_dict() for r in self.records()],
            "report": self.report.to_dict(),
        }

    def snapshot_json(self) -> str:
        return json.dumps(self.to_snapshot(), sort_keys=True, ensure_ascii=False, indent=1)

    @property
    def version(self) -> str:
        """Content hash; composition caches key on it."""
        records_only = json.dumps(
            [r.to_dict() for r in self.records()], sort_keys=True, ensure_ascii=False
        )
        return hashlib.sha256(records_only.encode("utf-8")).hexdigest()[:16]

    @classmethod
    def from_snapshot(cls, snapshot: dict) -> "FctStore":
        if snapshot.get("schema_version") != SNAPSHOT_SCHEMA_VERSION:
            raise InvalidArgument(
                f"unsupported snapshot schema {snapshot.get('schema_version')!r}"
            )
        records = {}
        for d in snapshot["records"]:
            rec = FoodRecord.from_dict(d)
            records[rec.key] = rec
        return cls(records)


def build_fct(sources: Sequence[LoadedSource]) -> FctStore:
    """Merge loaded sources into one deterministic store.

    The same inputs in any order produce identical stores; a duplicate
    variant key inside a single source is a hard conflict naming both
    rows.
    """
    if not sources:
        raise InvalidArgument("build_fct needs at least one source")
    report = BuildReport()
    per_key: dict = {}
    for loaded in sorted(sources, key=lambda s: (SOURCE_PRIORITY[s.source], s.path)):
        report.counts_per_source[loaded.source] = report.counts_per_source.get(
            loaded.source, 0
        ) + len(loaded.records)
        if loaded.rejected:
            report.rejected_rows.setdefault(loaded.source, []).extend(loaded.rejected)
        seen_rows: dict = {}
        for rec in loaded.records:
            key = rec.key()
            if (loaded.source, key) in seen_rows:
                raise ConflictError(
                    f"{loaded.source.value} defines {key.as_string()!r} twice"
                    f" (rows {seen_rows[(loaded.source, key)]} and {rec.row})",
                    key=key.as_string(),
                    rows=[seen_rows[(loaded.source, key)], rec.row],
                )
            seen_rows[(loaded.source, key)] = rec.row
            normalized = normalize_basis(rec, report)
            per_key.setdefault(key, []).append((loaded.source, normalized))
    records = {}
    for key in sorted(per_key, key=lambda k: k.as_string()):
        candidates = per_key[key]
        if len(candidates) > 1:
            report.overlapping_keys.append(key.as_string())
        records[key] = merge_priority(candidates)
    report.merged_keys = len(records)
    return FctStore(records, report)


def sniff_adapter(path) -> str:
    """Pick the adapter for a file by its header / shape."""
    p = Path(path)
    if p.suffix.lower() == ".json":
        return API_CAPTURE_ADAPTER
    try:
        first = p.read_text(encoding="utf-8").lstrip().splitlines()
    except OSError as exc:
        raise AdapterError(f"cannot read {path}: {exc}", adapter="?")
    header_line = next((l for l in first if l and not l.startswith("#")), "")
    header = [c.strip() for c in header_line.split(",")]
    if all(c in header for c in _IFCT_FIXED[:2]):
        return IFCT_ADAPTER
    if all(c in header for c in _INDB_FIXED[:2]):
        return INDB_ADAPTER
    raise AdapterError(
        f"{path} matches no known adapter header", adapter="?", header=header
    )
