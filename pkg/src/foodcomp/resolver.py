"""Pluggable information resolution: rules first, model fallback.

The resolver answers seven kinds of requests (translation, recipe and
ingredient normalization, name resolution, category assignment, weight
estimation, latent-link inference). A deterministic rule backend built on
the shipped alias tables, vocabularies, and rulebooks is always consulted
first; only on a miss does the request go to a model backend (an HTTP
chat-completion-style endpoint with versioned prompt templates and
JSON-schema-validated outputs). Model answers are cached on disk, marked
with LLM provenance, and routed through the human review queue before any
of them may enter the knowledge store.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

import jsonschema

from .categories import load_category_rules, load_category_tree
from .errors import (
    BackendUnavailable,
    InvalidArgument,
    InvalidModelOutput,
    NotFoundError,
    UnparseableRecipe,
)
from .nutrients import Provenance, Source, now_iso, to_fraction
from .parsing import load_name_aliases, parse_ingredient_line
from .units import WeightEstimate

MODEL_MAX_RETRIES = 3
WEIGHT_CLAMP_MAX_G = 5000

MODEL_URL_ENV = "FOODCOMP_MODEL_URL"
MODEL_KEY_ENV = "FOODCOMP_MODEL_KEY"
MODEL_NAME_ENV = "FOODCOMP_MODEL_NAME"


class ResolutionKind(str, Enum):
    TRANSLATE = "TRANSLATE"
    NORMALIZE_RECIPE = "NORMALIZE_RECIPE"
    NORMALIZE_INGREDIENT = "NORMALIZE_INGREDIENT"
    RESOLVE_NAME = "RESOLVE_NAME"
    ASSIGN_CATEGORY = "ASSIGN_CATEGORY"
    ESTIMATE_WEIGHT = "ESTIMATE_WEIGHT"
    INFER_LATENT = "INFER_LATENT"


class Confidence(str, Enum):
    RULE = "RULE"
    MODEL = "MODEL"


_STR = {"type": "string"}
_OPT_STR = {"type": ["string", "null"]}
_POS_NUM = {"type": "number", "exclusiveMinimum": 0}

RECIPE_SCHEMA = {
    "type": "object",
    "required": ["title", "ingredient_lines"],
    "properties": {
        "title": _STR,
        "servings": {"type": ["number", "null"]},
        "ingredient_lines": {"type": "array", "items": _STR, "minItems": 1},
        "instructions": {"type": "array", "items": _STR},
        "tags": {"type": "array", "items": _STR},
        "notes": _OPT_STR,
    },
    "additionalProperties": False,
}

REQUEST_SCHEMAS = {
    ResolutionKind.TRANSLATE: {
        "type": "object",
        "required": ["text", "target"],
        "properties": {"text": _STR, "source_script": _OPT_STR, "target": _STR},
        "additionalProperties": False,
    },
    ResolutionKind.NORMALIZE_RECIPE: {
        "type": "object",
        "required": ["document"],
        "properties": {"document": _STR},
        "additionalProperties": False,
    },
    ResolutionKind.NORMALIZE_INGREDIENT: {
        "type": "object",
        "required": ["line"],
        "properties": {"line": _STR},
        "additionalProperties": False,
    },
    ResolutionKind.RESOLVE_NAME: {
        "type": "object",
        "required": ["label"],
        "properties": {"label": _STR},
        "additionalProperties": False,
    },
    ResolutionKind.ASSIGN_CATEGORY: {
        "type": "object",
        "required": ["name"],
        "properties": {
            "name": _STR,
            "form": _OPT_STR,
            "process": _OPT_STR,
            "size": _OPT_STR,
        },
        "additionalProperties": False,
    },
    ResolutionKind.ESTIMATE_WEIGHT: {
        "type": "object",
        "required": ["ingredient"],
        "properties": {
            "ingredient": _STR,
            "form": _OPT_STR,
            "process": _OPT_STR,
            "size": _OPT_STR,
            "quantity": {"type": ["number", "string", "null"]},
            "unit": _OPT_STR,
        },
        "additionalProperties": False,
    },
    ResolutionKind.INFER_LATENT: {
        "type": "object",
        "required": ["question"],
        "properties": {
            "question": {
                "enum": ["RELATED_RECIPES", "RELATED_INGREDIENTS", "SUBSTITUTIONS"]
            },
            "title": _OPT_STR,
        },
        "additionalProperties": False,
    },
}

OUTPUT_SCHEMAS = {
    ResolutionKind.TRANSLATE: {
        "type": "object",
        "required": ["text"],
        "properties": {"text": _STR},
        "additionalProperties": False,
    },
    ResolutionKind.NORMALIZE_RECIPE: RECIPE_SCHEMA,
    ResolutionKind.NORMALIZE_INGREDIENT: {
        "type": "object",
        "required": ["ingredient"],
        "properties": {
            "ingredient": _STR,
            "form": _OPT_STR,
            "process": _OPT_STR,
            "size": _OPT_STR,
            "quantity": {"type": ["number", "string", "null"]},
            "unit": _OPT_STR,
            "weight_in_grams": {"type": ["number", "string", "null"]},
        },
        "additionalProperties": True,
    },
    ResolutionKind.RESOLVE_NAME: {
        "type": "object",
        "required": ["name"],
        "properties": {"name": _STR},
        "additionalProperties": False,
    },
    ResolutionKind.ASSIGN_CATEGORY: {
        "type": "object",
        "required": ["path"],
        "properties": {"path": {"type": "array", "items": _STR, "minItems": 2}},
        "additionalProperties": False,
    },
    ResolutionKind.ESTIMATE_WEIGHT: {
        "type": "object",
        "required": ["grams"],
        "properties": {
            "grams": {
                "type": "number",
                "exclusiveMinimum": 0,
                "maximum": WEIGHT_CLAMP_MAX_G,
            }
        },
        "additionalProperties": False,
    },
    ResolutionKind.INFER_LATENT: {
        "type": "object",
        "required": ["assertions"],
        "properties": {
            "assertions": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["kind", "subject", "object"],
                    "properties": {
                        "kind": {
                            "enum": [
                                "RELATED_RECIPES",
                                "RELATED_INGREDIENTS",
                                "SUBSTITUTIONS",
                            ]
                        },
                        "subject": _STR,
                        "object": _STR,
                        "span": {
                            "type": ["array", "null"],
                            "items": {"type": "integer", "minimum": 0},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                },
            }
        },
        "additionalProperties": False,
    },
}


@dataclass(frozen=True)
class ResolutionRequest:
    kind: ResolutionKind
    payload: dict
    context: str = ""  # source text excerpt; grounding is limited to it

    def validate(self):
        try:
            jsonschema.validate(self.payload, REQUEST_SCHEMAS[self.kind])
        except jsonschema.ValidationError as exc:
            raise InvalidArgument(f"bad {self.kind.value} payload: {exc.message}")

    def cache_key(self) -> str:
        canonical = json.dumps(
            {"kind": self.kind.value, "payload": self.payload},
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ResolutionResult:
    payload: dict
    confidence: Confidence
    provenance: Provenance
    needs_review: bool = False

    def to_dict(self) -> dict:
        return {
            "payload": self.payload,
            "confidence": self.confidence.value,
            "provenance": self.provenance.to_dict(),
            "needs_review": self.needs_review,
        }


def _rule_result(payload: dict, kind: ResolutionKind) -> ResolutionResult:
    return ResolutionResult(
        payload=payload,
        confidence=Confidence.RULE,
        provenance=Provenance(Source.USER, f"rule:{kind.value.lower()}"),
        needs_review=False,
    )


# --- rule backend ------------------------------------------------------------


_SUBSTITUTION_PATTERNS = (
    re.compile(r"\breplace\s+(?P<a>[a-z][a-z ]*?)\s+with\s+(?P<b>[a-z][a-z ]*?)\b(?=[\s.,;]|$)"),
    re.compile(r"\bswap\s+(?P<a>[a-z][a-z ]*?)\s+for\s+(?P<b>[a-z][a-z ]*?)\b(?=[\s.,;]|$)"),
    re.compile(r"\bsubstitute\s+(?P<a>[a-z][a-z ]*?)\s+with\s+(?P<b>[a-z][a-z ]*?)\b(?=[\s.,;]|$)"),
)
_RELATED_RECIPE_PATTERNS = (
    re.compile(r"\bsimilar to\s+(?P<b>[a-z][a-z ]*?)(?=[.,;]|$)"),
    re.compile(r"\bvariant of\s+(?P<b>[a-z][a-z ]*?)(?=[.,;]|$)"),
)
_RELATED_INGREDIENT_PATTERNS = (
    re.compile(r"\bgoes well with\s+(?P<b>[a-z][a-z ]*?)(?=[.,;]|$)"),
    re.compile(r"\bpairs well with\s+(?P<b>[a-z][a-z ]*?)(?=[.,;]|$)"),
)


class RuleBackend:
    """Deterministic resolution from alias tables, vocabularies, and the
    category rule table. Misses return None (never an error)."""

    def __init__(self):
        self.aliases = load_name_aliases()
        self.category_rules = load_category_rules()
        self.tree = load_category_tree()

    def try_resolve(self, req: ResolutionRequest) -> Optional[dict]:
        handler = getattr(self, f"_do_{req.kind.value.lower()}")
        return handler(req)

    def _do_translate(self, req):
        text = req.payload["text"].strip()
        if not text:
            return {"text": ""}
        hit = self.aliases.get(text.lower())
        if hit:
            return {"text": hit}
        return None

    def _do_resolve_name(self, req):
        label = req.payload["label"].strip().lower()
        if not label:
            return None
        if label in self.aliases:
            return {"name": self.aliases[label]}
        if label in set(self.aliases.values()) or label in self.category_rules:
            return {"name": label}  # already a preferred label
        return None

    def _do_normalize_ingredient(self, req):
        parsed = parse_ingredient_line(req.payload["line"])
        return parsed.to_dict()

    def _do_assign_category(self, req):
        name = req.payload["name"].strip().lower()
        variant = " ".join(
            t
            for t in (name, req.payload.get("form"), req.payload.get("process"))
            if t
        )
        leaf = self.category_rules.get(variant) or self.category_rules.get(name)
        if leaf is None:
            return None
        return {"path": self.tree.path_to(leaf)}

    def _do_estimate_weight(self, req):
        # Weight estimation is inherently model-side; the rulebook path in
        # the measurement module already covers everything rules can say.
        return None

    def _do_normalize_recipe(self, req):
        return extract_recipe_template(req.payload["document"])

    def _do_infer_latent(self, req):
        source = req.context or ""
        question = req.payload["question"]
        lowered = source.lower()
        assertions = []
        subject = req.payload.get("title") or ""
        if question == "SUBSTITUTIONS":
            for pat in _SUBSTITUTION_PATTERNS:
                for m in pat.finditer(lowered):
                    assertions.append(
                        {
                            "kind": "SUBSTITUTIONS",
                            "subject": m.group("a").strip(),
                            "object": m.group("b").strip(),
                            "span": [m.start(), m.end()],
                        }
                    )
        elif question == "RELATED_RECIPES":
            for pat in _RELATED_RECIPE_PATTERNS:
                for m in pat.finditer(lowered):
                    assertions.append(
                        {
                            "kind": "RELATED_RECIPES",
                            "subject": subject,
                            "object": m.group("b").strip(),
                            "span": [m.start(), m.end()],
                        }
                    )
        else:
            for pat in _RELATED_INGREDIENT_PATTERNS:
                for m in pat.finditer(lowered):
                    assertions.append(
                        {
                            "kind": "RELATED_INGREDIENTS",
                            "subject": subject,
                            "object": m.group("b").strip(),
                            "span": [m.start(), m.end()],
                        }
                    )
        return {"assertions": assertions}


# --- recipe template extraction ---------------------------------------------


def extract_recipe_template(document: str) -> Optional[dict]:
    """Parse the markdown-ish recipe template or pass through canonical
    JSON; returns None when the document matches neither shape."""
    doc = document.strip()
    if not doc:
        return None
    if doc.startswith("{"):
        try:
            data = json.loads(doc)
        except json.JSONDecodeError:
            return None
        try:
            jsonschema.validate(data, RECIPE_SCHEMA)
        except jsonschema.ValidationError:
            return None
        return data

    title = None
    servings = None
    tags: list = []
    notes = None
    section = None
    ingredients: list = []
    instructions: list = []
    for raw in doc.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# ") and title is None:
            title = line[2:].strip()
            continue
        m = re.match(r"(?i)^serves?\s*:\s*(\d+(?:\.\d+)?)", line)
        if m:
            servings = float(m.group(1))
            continue
        m = re.match(r"(?i)^tags?\s*:\s*(.+)", line)
        if m:
            tags = [t.strip() for t in m.group(1).split(",") if t.strip()]
            continue
        m = re.match(r"(?i)^notes?\s*:\s*(.+)", line)
        if m:
            notes = m.group(1).strip()
            continue
        if re.match(r"(?i)^#{2,}\s*ingredients", line):
            section = "ingredients"
            continue
        if re.match(r"(?i)^#{2,}\s*(instructions|method|directions|steps)", line):
            section = "instructions"
            continue
        if section == "ingredients" and re.match(r"^[-*•]\s+", line):
            ingredients.append(re.sub(r"^[-*•]\s+", "", line))
        elif section == "instructions":
            instructions.append(re.sub(r"^\d+[.)]\s*", "", line))

    if title is None or not ingredients:
        return None
    out = {
        "title": title,
        "servings": servings,
        "ingredient_lines": ingredients,
        "instructions": instructions,
        "tags": tags,
    }
    if notes is not None:
        out["notes"] = notes
    return out


# --- model backends -----------------------------------------------------------


def _load_prompt(kind: ResolutionKind) -> str:
    name = kind.value.lower() + ".txt"
    return (
        resources.files("foodcomp.data")
        .joinpath("prompts")
        .joinpath("v1")
        .joinpath(name)
        .read_text(encoding="utf-8")
    )


class HttpModelBackend:
    """Client for a chat-completion-style JSON endpoint.

    Configuration comes from FOODCOMP_MODEL_URL / FOODCOMP_MODEL_KEY /
    FOODCOMP_MODEL_NAME. Prompts are versioned template files; outputs
    must validate against the request kind's schema within three tries.
    """

    def __init__(self, url: str, api_key: str = "", model: str = "", post: Optional[Callable] = None):
        if not url:
            raise BackendUnavailable("model endpoint URL not configured")
        self.url = url
        self.api_key = api_key
        self.model = model or "default"
        self._post = post or self._requests_post

    @classmethod
    def from_env(cls, environ) -> Optional["HttpModelBackend"]:
        url = environ.get(MODEL_URL_ENV, "")
        if not url:
            return None
        return cls(url, environ.get(MODEL_KEY_ENV, ""), environ.get(MODEL_NAME_ENV, ""))

    def _requests_post(self, body: dict) -> dict:
        import requests

        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(self.url, json=body, headers=headers, timeout=60)
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise BackendUnavailable(f"model endpoint unreachable: {exc}")
        return resp.json()

    def complete(self, req: ResolutionRequest) -> dict:
        template = _load_prompt(req.kind)
        prompt = template.format(
            payload=json.dumps(req.payload, ensure_ascii=False, sort_keys=True),
            context=req.context,
        )
        last_error = "no attempts made"
        for _ in range(MODEL_MAX_RETRIES):
            raw = self._post(
                {
                    "model": self.model,
                    "messages": [
                        {"role": "system", "content": prompt},
                        {"role": "user", "content": req.context or ""},
                    ],
                }
            )
            try:
                content = raw["choices"][0]["message"]["content"]
                data = json.loads(content)
                jsonschema.validate(data, OUTPUT_SCHEMAS[req.kind])
                return data
            except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
                last_error = f"malformed response: {exc}"
            except jsonschema.ValidationError as exc:
                last_error = f"schema violation: {exc.message}"
        raise InvalidModelOutput(
            f"model output failed validation after {MODEL_MAX_RETRIES} tries: {last_error}",
            kind=req.kind.value,
        )


class ReplayModelBackend:
    """Record/replay stub used in CI; answers come from a fixture map and
    every call is counted so tests can assert rule-first behavior."""

    def __init__(self, responses: Optional[dict] = None):
        self.responses = dict(responses or {})
        self.calls = 0

    @classmethod
    def from_file(cls, path: Path) -> "ReplayModelBackend":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def record(self, req: ResolutionRequest, payload: dict):
        self.responses[req.cache_key()] = payload

    def complete(self, req: ResolutionRequest) -> dict:
        self.calls += 1
        key = req.cache_key()
        if key not in self.responses:
            raise BackendUnavailable(f"no replay fixture for {req.kind.value} request")
        data = self.responses[key]
        try:
            jsonschema.validate(data, OUTPUT_SCHEMAS[req.kind])
        except jsonschema.ValidationError as exc:
            raise InvalidModelOutput(
                f"replay fixture violates schema: {exc.message}", kind=req.kind.value
            )
        return data


# --- review queue --------------------------------------------------------------


@dataclass
class ReviewItem:
    id: str
    request: dict
    result: dict
    status: str = "pending"  # pending | approved | rejected
    note: str = ""
    created_at: str = field(default_factory=now_iso)
    updated_at: str = field(default_factory=now_iso)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "request": self.request,
            "result": self.result,
            "status": self.status,
            "note": self.note,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReviewItem":
        return cls(**d)


class ReviewQueue:
    """Human-in-the-loop gate for model-sourced facts.

    Only approval fires the ingestion callback; approving twice is a
    no-op, rejection permanently excludes the item. All transitions are
    timestamped and pushed to the persistence hook when one is wired in.
    """

    def __init__(self, on_approve: Optional[Callable] = None, persist: Optional[Callable] = None):
        self._items: dict = {}
        self.on_approve = on_approve
        self.persist = persist

    @staticmethod
    def item_id(request: ResolutionRequest) -> str:
        return "rev-" + request.cache_key()[:12]

    def enqueue(self, request: ResolutionRequest, result: ResolutionResult) -> str:
        rid = self.item_id(request)
        if rid in self._items:
            return rid
        item = ReviewItem(
            id=rid,
            request={
                "kind": request.kind.value,
                "payload": request.payload,
                "context": request.context,
            },
            result=result.to_dict(),
        )
        self._items[rid] = item
        self._persist(item)
        return rid

    def load(self, items):
        for item in items:
            self._items[item.id] = item

    def list(self, status: Optional[str] = None) -> list:
        items = sorted(self._items.values(), key=lambda i: i.id)
        if status:
            items = [i for i in items if i.status == status]
        return items

    def get(self, item_id: str) -> ReviewItem:
        if item_id not in self._items:
            raise NotFoundError(f"no review item {item_id!r}", id=item_id)
        return self._items[item_id]

    def approve(self, item_id: str, note: str = "") -> ReviewItem:
        item = self.get(item_id)
        if item.status == "approved":
            return item  # idempotent
        if item.status == "rejected":
            raise InvalidArgument(f"review item {item_id} was rejected", id=item_id)
        item.status = "approved"
        item.note = note
        item.updated_at = now_iso()
        self._persist(item)
        if self.on_approve is not None:
            self.on_approve(item)
        return item

    def reject(self, item_id: str, note: str = "") -> ReviewItem:
        item = self.get(item_id)
        if item.status == "rejected":
            return item
        item.status = "rejected"
        item.note = note
        item.updated_at = now_iso()
        self._persist(item)
        return item

    def _persist(self, item: ReviewItem):
        if self.persist is not None:
            self.persist(item)


# --- the resolver ----------------------------------------------------------------


class Resolver:
    """Rule-first resolution with optional model fallback.

    Model answers are cached on disk by (kind, normalized payload); a
    missing model backend makes misses come back as None (unresolved).
    """

    def __init__(
        self,
        rule_backend: Optional[RuleBackend] = None,
        model_backend=None,
        cache_dir: Optional[Path] = None,
        review_queue: Optional[ReviewQueue] = None,
    ):
        self.rules = rule_backend or RuleBackend()
        self.model = model_backend
        self.cache_dir = Path(cache_dir) if cache_dir else None
        if self.cache_dir:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.review_queue = review_queue

    def resolve(self, req: ResolutionRequest) -> Optional[ResolutionResult]:
        req.validate()
        answer = self.rules.try_resolve(req)
        if answer is not None:
            return _rule_result(answer, req.kind)
        if self.model is None:
            return None
        payload = self._cached_model_answer(req)
        result = ResolutionResult(
            payload=payload,
            confidence=Confidence.MODEL,
            provenance=Provenance(Source.LLM, f"model:{req.kind.value.lower()}"),
            needs_review=True,
        )
        if self.review_queue is not None:
            self.review_queue.enqueue(req, result)
        return result

    def _cached_model_answer(self, req: ResolutionRequest) -> dict:
        if self.cache_dir is not None:
            path = self.cache_dir / (req.cache_key() + ".json")
            if path.exists():
                return json.loads(path.read_text(encoding="utf-8"))
        payload = self.model.complete(req)
        if self.cache_dir is not None:
            path = self.cache_dir / (req.cache_key() + ".json")
            path.write_text(
                json.dumps(payload, ensure_ascii=False, sort_keys=True), encoding="utf-8"
            )
        return payload

    # -- convenience wrappers used across the pipeline --

    def resolve_name(self, label: str) -> Optional[str]:
        if not label:
            return None
        result = self.resolve(
            ResolutionRequest(ResolutionKind.RESOLVE_NAME, {"label": label})
        )
        return None if result is None else result.payload["name"]

    def translate_text(self, text: str, source_script: str = "", target: str = "en") -> ResolutionResult:
        if text == "":
            return _rule_result({"text": ""}, ResolutionKind.TRANSLATE)
        result = self.resolve(
            ResolutionRequest(
                ResolutionKind.TRANSLATE,
                {"text": text, "source_script": source_script or None, "target": target},
            )
        )
        if result is None:
            raise BackendUnavailable(
                "translation needs a model backend beyond the alias table"
            )
        return result

    def assign_category(self, name: str, form=None, process=None, size=None) -> Optional[list]:
        result = self.resolve(
            ResolutionRequest(
                ResolutionKind.ASSIGN_CATEGORY,
                {"name": name, "form": form, "process": process, "size": size},
            )
        )
        if result is None:
            return None
        path = result.payload["path"]
        # Closed world: a model may only pick existing leaves.
        if not self.rules.tree.is_valid_path(path):
            return None
        return path

    def normalize_recipe(self, document: str) -> dict:
        if not document or not document.strip():
            raise UnparseableRecipe("empty recipe document")
        result = self.resolve(
            ResolutionRequest(ResolutionKind.NORMALIZE_RECIPE, {"document": document})
        )
        if result is None:
            raise UnparseableRecipe(
                "document matches no template and no model backend is configured"
            )
        recipe = result.payload
        if not recipe.get("ingredient_lines"):
            raise UnparseableRecipe("extraction yielded no ingredient lines")
        return recipe

    def can_estimate_weight(self) -> bool:
        return self.model is not None

    def estimate_weight(self, parsed) -> Optional[WeightEstimate]:
        if self.model is None:
            return None
        payload = {
            "ingredient": parsed.ingredient,
            "form": parsed.form,
            "process": parsed.process,
            "size": parsed.size,
            "quantity": None
            if parsed.quantity is None
            else float(parsed.quantity.value),
            "unit": parsed.unit,
        }
        req = ResolutionRequest(
            ResolutionKind.ESTIMATE_WEIGHT, payload, context=parsed.source_text
        )
        try:
            result = self.resolve(req)
        except (BackendUnavailable, InvalidModelOutput):
            return None
        if result is None:
            return None
        return WeightEstimate(
            grams=to_fraction(result.payload["grams"]), provenance=result.provenance
        )

    def infer_latent(self, recipe_title: str, source_text: str, question: str) -> list:
        result = self.resolve(
            ResolutionRequest(
                ResolutionKind.INFER_LATENT,
                {"question": question, "title": recipe_title},
                context=source_text,
            )
        )
        if result is None:
            return []
        kept = []
        for assertion in result.payload["assertions"]:
            span = assertion.get("span")
            # Ungrounded claims are discarded: every assertion must point
            # at the characters in the source that support it.
            if not span or len(span) != 2:
                continue
            start, end = span
            if not (0 <= start < end <= len(source_text)):
                continue
            kept.append(
                {
                    "kind": assertion["kind"],
                    "subject": assertion["subject"],
                    "object": assertion["object"],
                    "span": [start, end],
                    "provenance": result.provenance.to_dict(),
                }
            )
        return kept
