"""Embedded knowledge store: recipes, aliases, categories, the merged
composition table, and the review queue, in one sqlite file.

Ingestion (the curation step) normalizes a raw recipe document, parses
every ingredient line, resolves weights through the measurement chain, and
stores both the verbatim source text and the structured result; nutrient
composition is computed later, on demand. A fuzzy name index over titles,
food names, and aliases is rebuilt in memory whenever the store opens or
mutates. Writes are funneled through one lock (single-writer); readers
work off immutable snapshots.
"""
from __future__ import annotations

import hashlib
import json
import re
import sqlite3
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import InvalidArgument, NotFoundError
from .fct import FctStore, FoodRecord, VariantKey
from .nutrients import Provenance, Source, to_fraction
from .parsing import ParsedIngredient, _fraction_jsonable
from .resolver import Resolver, ReviewItem, ReviewQueue
from .units import (
    ResolutionMethod,
    WeightResolution,
    load_default_amounts,
    load_densities,
    load_rulebook,
    resolve_weight_grams,
)
from .errors import EmptyInputError, ParseError, UnresolvedWeightError

SCHEMA_VERSION = 1
FUZZY_THRESHOLD = Fraction(85, 100)

LATENT_QUESTIONS = ("RELATED_RECIPES", "RELATED_INGREDIENTS", "SUBSTITUTIONS")


def levenshtein(a: str, b: str) -> int:
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _tokens(text: str) -> frozenset:
    return frozenset(t for t in re.split(r"[^\w]+", text.lower()) if t)


def similarity(query: str, label: str) -> Fraction:
    """max(normalized edit-distance similarity, token-set overlap).

    Token-set overlap is intersection over the query's tokens: a label
    must cover what was typed, so "samosa" matches the subtitled
    "samosa (fried)" while the bare alias "chhole" does not swallow the
    two-word query "chhole masala".
    """
    q = query.strip().lower()
    l = label.strip().lower()
    if not q or not l:
        return Fraction(0)
    edit = Fraction(1) - Fraction(levenshtein(q, l), max(len(q), len(l)))
    qt, lt = _tokens(q), _tokens(l)
    if qt and lt:
        overlap = Fraction(len(qt & lt), len(qt))
    else:
        overlap = Fraction(0)
    return max(edit, overlap)


# --- recipe records -----------------------------------------------------------


@dataclass(frozen=True)
class IngredientLine:
    """One stored line: the parse, its weight resolution, or the error
    marker that kept it out of the totals."""

    parsed: Optional[ParsedIngredient]
    weight: Optional[WeightResolution] = None
    error: Optional[str] = None

    @property
    def resolved(self) -> bool:
        return self.parsed is not None and self.weight is not None and self.error is None

    def to_dict(self) -> dict:
        return {
            "parsed": self.parsed.to_dict() if self.parsed else None,
            "weight": self.weight.to_dict() if self.weight else None,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IngredientLine":
        weight = None
        if d.get("weight"):
            w = d["weight"]
            weight = WeightResolution(
                grams=to_fraction(w["grams"]),
                method=ResolutionMethod(w["method"]),
                rule_trace=tuple(w.get("rule_trace", ())),
                estimated_grams=None
                if w.get("estimated_grams") is None
                else to_fraction(w["estimated_grams"]),
            )
        return cls(
            parsed=ParsedIngredient.from_dict(d["parsed"]) if d.get("parsed") else None,
            weight=weight,
            error=d.get("error"),
        )


@dataclass(frozen=True)
class Recipe:
    id: str
    title: str
    lines: tuple  # of IngredientLine, at least one
    aliases: frozenset = frozenset()  # (label, language)
    cuisine_tags: tuple = ()
    servings: Optional[Fraction] = None
    instructions: tuple = ()
    source: Provenance = field(default_factory=lambda: Provenance(Source.USER))
    dietary_tags: frozenset = frozenset()
    latent_links: tuple = ()
    content_hash: str = ""

    def __post_init__(self):
        if not self.lines:
            raise InvalidArgument("a recipe needs at least one ingredient line")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "aliases": sorted(list(a) for a in self.aliases),
            "cuisine_tags": list(self.cuisine_tags),
            "servings": None if self.servings is None else _fraction_jsonable(self.servings),
            "instructions": list(self.instructions),
            "lines": [l.to_dict() for l in self.lines],
            "source": self.source.to_dict(),
            "dietary_tags": sorted(self.dietary_tags),
            "latent_links": list(self.latent_links),
            "content_hash": self.content_hash,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Recipe":
        return cls(
            id=d["id"],
            title=d["title"],
            aliases=frozenset(tuple(a) for a in d.get("aliases", [])),
            cuisine_tags=tuple(d.get("cuisine_tags", ())),
            servings=None if d.get("servings") is None else to_fraction(d["servings"]),
            instructions=tuple(d.get("instructions", ())),
            lines=tuple(IngredientLine.from_dict(l) for l in d["lines"]),
            source=Provenance.from_dict(d["source"]),
            dietary_tags=frozenset(d.get("dietary_tags", [])),
            latent_links=tuple(d.get("latent_links", ())),
            content_hash=d.get("content_hash", ""),
        )


def recipe_content_hash(normalized: dict) -> str:
    """Hash of the structured recipe content; duplicate detection ignores
    the raw document's formatting."""
    canonical = json.dumps(
        {
            "title": normalized.get("title", "").strip().lower(),
            "servings": normalized.get("servings"),
            "ingredient_lines": [l.strip() for l in normalized.get("ingredient_lines", [])],
            "instructions": [i.strip() for i in normalized.get("instructions", [])],
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# --- the store ------------------------------------------------------------------


class KnowledgeStore:
    """Single-file embedded store with an in-memory fuzzy index."""

    def __init__(self, path=":memory:"):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._write_lock = threading.Lock()
        self._init_schema()
        self.review_queue = ReviewQueue(
            on_approve=self._ingest_approved, persist=self._persist_review
        )
        self._load_reviews()
        self._fct: Optional[FctStore] = None
        self._index: list = []
        self.rebuild_index()

    # -- schema / raw helpers --

    def _init_schema(self):
        with self._conn:
            self._conn.executescript(
                """
                CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT);
                CREATE TABLE IF NOT EXISTS recipes (
                    id TEXT PRIMARY KEY,
                    content_hash TEXT UNIQUE,
                    json TEXT NOT NULL,
                    source_text BLOB NOT NULL
                );
                CREATE TABLE IF NOT EXISTS foods (key TEXT PRIMARY KEY, json TEXT NOT NULL);
                CREATE TABLE IF NOT EXISTS aliases (
                    target TEXT NOT NULL,
                    label TEXT NOT NULL,
                    language TEXT NOT NULL,
                    provenance TEXT NOT NULL,
                    PRIMARY KEY (target, label, language)
                );
                CREATE TABLE IF NOT EXISTS review (id TEXT PRIMARY KEY, json TEXT NOT NULL);
                """
            )
            self._conn.execute(
                "INSERT OR IGNORE INTO meta (key, value) VALUES ('schema_version', ?)",
                (str(SCHEMA_VERSION),),
            )

    def close(self):
        self._conn.close()

    # -- review persistence --

    def _persist_review(self, item: ReviewItem):
        with self._write_lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO review (id, json) VALUES (?, ?)",
                (item.id, json.dumps(item.to_dict(), ensure_ascii=False, sort_keys=True)),
            )

    def _load_reviews(self):
        rows = self._conn.execute("SELECT json FROM review ORDER BY id").fetchall()
        self.review_queue.load([ReviewItem.from_dict(json.loads(r[0])) for r in rows])

    def _ingest_approved(self, item: ReviewItem):
        """Approval callback: the only path by which model-sourced facts
        enter the store."""
        kind = item.request["kind"]
        payload = item.request["payload"]
        result = item.result["payload"]
        if kind == "RESOLVE_NAME":
            self.add_alias(
                target=result["name"],
                label=payload["label"],
                language="und",
                provenance=Provenance(Source.LLM, f"review:{item.id}"),
                approved=True,
            )
        elif kind == "TRANSLATE":
            self.add_alias(
                target=result["text"],
                label=payload["text"],
                language=payload.get("source_script") or "und",
                provenance=Provenance(Source.LLM, f"review:{item.id}"),
                approved=True,
            )
        # Other kinds (weight estimates, categories) live on their
        # requests' outputs; nothing store-resident to write.

    # -- fct --

    def save_fct(self, fct: FctStore):
        with self._write_lock, self._conn:
            self._conn.execute("DELETE FROM foods")
            for rec in fct.records():
                self._conn.execute(
                    "INSERT INTO foods (key, json) VALUES (?, ?)",
                    (
                        rec.key.as_string(),
                        json.dumps(rec.to_dict(), ensure_ascii=False, sort_keys=True),
                    ),
                )
        self._fct = fct
        self.rebuild_index()

    def load_fct(self) -> Optional[FctStore]:
        if self._fct is not None:
            return self._fct
        rows = self._conn.execute("SELECT json FROM foods ORDER BY key").fetchall()
        if not rows:
            return None
        records = {}
        for (raw,) in rows:
            rec = FoodRecord.from_dict(json.loads(raw))
            records[rec.key] = rec
        self._fct = FctStore(records)
        return self._fct

    # -- recipes --

    def ingest_recipe(
        self,
        raw_document: str,
        resolver: Optional[Resolver] = None,
        rulebook=None,
        densities=None,
        defaults=None,
        cuisine_tags=(),
        permissive: bool = False,
    ) -> str:
        """Normalize, parse, and weigh a recipe document; store verbatim
        text plus the structured result. Composition is not computed here.

        A document already ingested (by structured-content hash) returns
        the existing id. Lines that fail to parse or weigh are stored with
        error markers; the recipe is ingested regardless.
        """
        resolver = resolver or Resolver()
        rulebook = rulebook or load_rulebook()
        densities = densities or load_densities()
        defaults = defaults if defaults is not None else load_default_amounts()

        normalized = resolver.normalize_recipe(raw_document)
        content_hash = recipe_content_hash(normalized)
        existing = self._conn.execute(
            "SELECT id FROM recipes WHERE content_hash = ?", (content_hash,)
        ).fetchone()
        if existing:
            return existing[0]

        lines = []
        for raw_line in normalized["ingredient_lines"]:
            try:
                parsed = ParsedIngredient.from_dict(
                    resolver.resolve(
                        _normalize_ingredient_request(raw_line)
                    ).payload
                )
            except (ParseError, EmptyInputError) as exc:
                lines.append(IngredientLine(parsed=None, error=f"parse: {exc.message}"))
                continue
            try:
                weight = resolve_weight_grams(
                    parsed, rulebook, densities, defaults, resolver, permissive
                )
                lines.append(IngredientLine(parsed=parsed, weight=weight))
            except UnresolvedWeightError as exc:
                lines.append(IngredientLine(parsed=parsed, error=f"weight: {exc.message}"))

        latent = []
        for question in LATENT_QUESTIONS:
            latent.extend(
                resolver.infer_latent(normalized["title"], raw_document, question)
            )

        recipe_id = "r-" + content_hash[:12]
        recipe = Recipe(
            id=recipe_id,
            title=normalized["title"],
            lines=tuple(lines),
            cuisine_tags=tuple(normalized.get("tags", ())) + tuple(cuisine_tags),
            servings=None
            if normalized.get("servings") is None
            else to_fraction(normalized["servings"]),
            instructions=tuple(normalized.get("instructions", ())),
            source=Provenance(Source.USER, "ingest"),
            latent_links=tuple(latent),
            content_hash=content_hash,
        )
        with self._write_lock, self._conn:
            self._conn.execute(
                "INSERT INTO recipes (id, content_hash, json, source_text) VALUES (?, ?, ?, ?)",
                (
                    recipe.id,
                    content_hash,
                    json.dumps(recipe.to_dict(), ensure_ascii=False, sort_keys=True),
                    raw_document.encode("utf-8"),
                ),
            )
        self.rebuild_index()
        return recipe.id

    def get_recipe(self, recipe_id: str) -> Recipe:
        row = self._conn.execute(
            "SELECT json FROM recipes WHERE id = ?", (recipe_id,)
        ).fetchone()
        if row is None:
            raise NotFoundError(f"no recipe {recipe_id!r}", id=recipe_id)
        return Recipe.from_dict(json.loads(row[0]))

    def get_source_text(self, recipe_id: str) -> str:
        row = self._conn.execute(
            "SELECT source_text FROM recipes WHERE id = ?", (recipe_id,)
        ).fetchone()
        if row is None:
            raise NotFoundError(f"no recipe {recipe_id!r}", id=recipe_id)
        return row[0].decode("utf-8")

    def recipes(self) -> list:
        rows = self._conn.execute("SELECT json FROM recipes ORDER BY id").fetchall()
        return [Recipe.from_dict(json.loads(r[0])) for r in rows]

    def update_recipe(self, recipe: Recipe):
        with self._write_lock, self._conn:
            self._conn.execute(
                "UPDATE recipes SET json = ? WHERE id = ?",
                (json.dumps(recipe.to_dict(), ensure_ascii=False, sort_keys=True), recipe.id),
            )
        self.rebuild_index()

    # -- aliases --

    def add_alias(
        self,
        target: str,
        label: str,
        language: str = "und",
        provenance: Optional[Provenance] = None,
        approved: bool = False,
    ):
        """Index an alias for a recipe id, food variant key, or canonical
        name. Model-provenance aliases must arrive through an approved
        review item; unapproved ones are queued instead of written.
        """
        provenance = provenance or Provenance(Source.USER, "alias")
        if not self._alias_target_exists(target):
            raise NotFoundError(f"alias target {target!r} not found", target=target)
        if provenance.source is Source.LLM and not approved:
            from .resolver import ResolutionKind, ResolutionRequest, ResolutionResult, Confidence

            req = ResolutionRequest(ResolutionKind.RESOLVE_NAME, {"label": label})
            result = ResolutionResult(
                payload={"name": target},
                confidence=Confidence.MODEL,
                provenance=provenance,
                needs_review=True,
            )
            self.review_queue.enqueue(req, result)
            return
        with self._write_lock, self._conn:
            self._conn.execute(
                "INSERT OR IGNORE INTO aliases (target, label, language, provenance) VALUES (?, ?, ?, ?)",
                (target, label.strip().lower(), language, provenance.source.value),
            )
        self.rebuild_index()

    def _alias_target_exists(self, target: str) -> bool:
        if self._conn.execute("SELECT 1 FROM recipes WHERE id = ?", (target,)).fetchone():
            return True
        fct = self.load_fct()
        if fct is not None:
            if "|" in target and VariantKey.from_string(target) in fct:
                return True
            if any(k.name == target for k in fct.keys()):
                return True
        return False

    def aliases(self) -> list:
        rows = self._conn.execute(
            "SELECT target, label, language, provenance FROM aliases ORDER BY target, label, language"
        ).fetchall()
        return [tuple(r) for r in rows]

    def alias_map(self) -> dict:
        """label -> target for name resolution on top of the shipped table."""
        return {label: target for target, label, _lang, _prov in self.aliases()}

    # -- fuzzy search --

    def rebuild_index(self):
        index = []
        for recipe in self.recipes():
            index.append(("recipe", recipe.id, recipe.title))
            for label, _lang in recipe.aliases:
                index.append(("recipe", recipe.id, label))
        fct = self.load_fct()
        if fct is not None:
            for rec in fct.records():
                index.append(("food", rec.key.as_string(), rec.key.name))
                for label, _lang in rec.aliases:
                    index.append(("food", rec.key.as_string(), label))
        for target, label, _lang, _prov in self.aliases():
            kind = "recipe" if target.startswith("r-") else "food"
            index.append((kind, target, label))
        self._index = index

    def search_fuzzy(self, query: str, limit: int = 10, threshold: Fraction = FUZZY_THRESHOLD) -> list:
        """Ranked matches over titles, food names, and aliases.

        Nothing below the similarity threshold is ever returned; ties are
        broken lexicographically by id.
        """
        if not query or not query.strip():
            raise InvalidArgument("empty query")
        best: dict = {}
        for kind, target, label in self._index:
            score = similarity(query, label)
            if score < threshold:
                continue
            key = (kind, target)
            if key not in best or score > best[key][0]:
                best[key] = (score, label)
        ranked = sorted(
            (
                {"kind": kind, "id": target, "label": label, "score": float(score)}
                for (kind, target), (score, label) in best.items()
            ),
            key=lambda m: (-m["score"], m["id"]),
        )
        return ranked[:limit]

    # -- snapshot export / import --

    def to_snapshot(self) -> dict:
        recipes = []
        for recipe in self.recipes():
            recipes.append(
                {
                    "recipe": recipe.to_dict(),
                    "source_text": self.get_source_text(recipe.id),
                }
            )
        fct = self.load_fct()
        return {
            "schema_version": SCHEMA_VERSION,
            "recipes": recipes,
            "foods": [] if fct is None else [r.to_dict() for r in fct.records()],
            "aliases": [list(a) for a in self.aliases()],
            "review": [i.to_dict() for i in self.review_queue.list()],
        }

    def export_snapshot(self, path, triples: bool = False) -> int:
        """Write the versioned JSON snapshot (or N-Triples-style lines);
        returns the number of entities / triples written."""
        path = Path(path)
        if triples:
            lines = self.to_triples()
            path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
            return len(lines)
        snapshot = self.to_snapshot()
        path.write_text(
            json.dumps(snapshot, sort_keys=True, ensure_ascii=False, indent=1),
            encoding="utf-8",
        )
        return len(snapshot["recipes"]) + len(snapshot["foods"])

    @classmethod
    def import_snapshot(cls, path, store_path=":memory:") -> "KnowledgeStore":
        snapshot = json.loads(Path(path).read_text(encoding="utf-8"))
        if snapshot.get("schema_version") != SCHEMA_VERSION:
            raise InvalidArgument(
                f"unsupported snapshot schema {snapshot.get('schema_version')!r}"
            )
        store = cls(store_path)
        with store._write_lock, store._conn:
            for entry in snapshot["recipes"]:
                recipe = Recipe.from_dict(entry["recipe"])
                store._conn.execute(
                    "INSERT INTO recipes (id, content_hash, json, source_text) VALUES (?, ?, ?, ?)",
                    (
                        recipe.id,
                        recipe.content_hash,
                        json.dumps(recipe.to_dict(), ensure_ascii=False, sort_keys=True),
                        entry["source_text"].encode("utf-8"),
                    ),
                )
            for food in snapshot["foods"]:
                store._conn.execute(
                    "INSERT INTO foods (key, json) VALUES (?, ?)",
                    (food["key"], json.dumps(food, ensure_ascii=False, sort_keys=True)),
                )
            for target, label, language, provenance in snapshot["aliases"]:
                store._conn.execute(
                    "INSERT OR IGNORE INTO aliases (target, label, language, provenance) VALUES (?, ?, ?, ?)",
                    (target, label, language, provenance),
                )
            for item in snapshot["review"]:
                store._conn.execute(
                    "INSERT OR REPLACE INTO review (id, json) VALUES (?, ?)",
                    (item["id"], json.dumps(item, ensure_ascii=False, sort_keys=True)),
                )
        store._load_reviews()
        store._fct = None
        store.rebuild_index()
        return store

    def to_triples(self) -> list:
        """Subject-predicate-object lines for graph tooling."""

        def esc(text) -> str:
            return str(text).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")

        lines = []
        for recipe in self.recipes():
            subj = f"<foodcomp:recipe/{recipe.id}>"
            lines.append(f'{subj} <foodcomp:title> "{esc(recipe.title)}" .')
            if recipe.servings is not None:
                lines.append(f'{subj} <foodcomp:servings> "{esc(recipe.servings)}" .')
            for line in recipe.lines:
                if line.parsed is not None:
                    lines.append(
                        f'{subj} <foodcomp:hasIngredient> "{esc(line.parsed.ingredient)}" .'
                    )
            for label, lang in sorted(recipe.aliases):
                lines.append(f'{subj} <foodcomp:alias> "{esc(label)}"@{lang or "und"} .')
            for link in recipe.latent_links:
                pred = {
                    "RELATED_RECIPES": "relatedRecipe",
                    "RELATED_INGREDIENTS": "relatedIngredient",
                    "SUBSTITUTIONS": "substitution",
                }[link["kind"]]
                lines.append(
                    f'{subj} <foodcomp:{pred}> "{esc(link["subject"])} -> {esc(link["object"])}" .'
                )
        fct = self.load_fct()
        if fct is not None:
            for rec in fct.records():
                subj = f"<foodcomp:food/{rec.key.as_string()}>"
                lines.append(f'{subj} <foodcomp:name> "{esc(rec.key.name)}" .')
                for nid, amount in sorted(rec.nutrients.values.items()):
                    lines.append(f'{subj} <foodcomp:{nid}_per_100g> "{esc(amount)}" .')
        for target, label, language, _prov in self.aliases():
            kind = "recipe" if target.startswith("r-") else "food"
            subj = f"<foodcomp:{kind}/{target}>"
            lines.append(f'{subj} <foodcomp:alias> "{esc(label)}"@{language or "und"} .')
        return lines


def _normalize_ingredient_request(line: str):
    from .resolver import ResolutionKind, ResolutionRequest

    return ResolutionRequest(ResolutionKind.NORMALIZE_INGREDIENT, {"line": line})
