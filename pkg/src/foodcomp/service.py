"""JSON-over-HTTP service for the exploration UI and other clients.

Every request/response body is UTF-8 JSON matching the published schemas
(foodcomp.apischemas, mirrored under schemas/). Errors come back as
ApiError payloads with stable codes: 400 invalid-body, 404 not-found,
422 unresolvable input, 503 backend-unavailable.

Mutations funnel through the store's single-writer contract; /analyze is
strictly read-only; long ingests run as background jobs behind a polling
status endpoint; composition reports are cached per (recipe id, FCT
version) so an FCT rebuild naturally invalidates them.
"""
from __future__ import annotations

import json
import threading
import uuid
from fractions import Fraction
from typing import Optional

import jsonschema
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .apischemas import SCHEMAS
from .composition import CompositionCache, compare_variants, compose_recipe
from .errors import (
    BackendUnavailable,
    EmptyCompositionError,
    FoodcompError,
    InvalidArgument,
    InvalidProfile,
    NotFoundError,
    UnparseableRecipe,
    UnresolvedWeightError,
)
from .fct import FctStore
from .nutrients import Provenance, Source, to_fraction
from .parsing import ParsedIngredient, parse_ingredient_line
from .recommend import UserProfile, recommend
from .resolver import Resolver
from .store import IngredientLine, KnowledgeStore, Recipe
from .units import load_default_amounts, load_densities, load_rulebook, resolve_weight_grams

ERROR_STATUS = {
    "invalid-body": 400,
    "invalid-argument": 400,
    "invalid-profile": 400,
    "parse-error": 400,
    "not-found": 404,
    "empty-composition": 422,
    "unparseable-recipe": 422,
    "unresolved-weight": 422,
    "empty-input": 422,
    "backend-unavailable": 503,
    "fetch-failed": 503,
}


def _error_response(code: str, message: str, details: Optional[dict] = None) -> JSONResponse:
    status = ERROR_STATUS.get(code, 500)
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or {}},
    )


def _validate_body(body, schema_name: str):
    try:
        jsonschema.validate(body, SCHEMAS[schema_name])
    except jsonschema.ValidationError as exc:
        raise InvalidArgument(exc.message, schema=schema_name)


class IngestJobs:
    """Background ingest bookkeeping behind the polling endpoint."""

    def __init__(self):
        self._jobs = {}
        self._lock = threading.Lock()

    def start(self, runner) -> str:
        job_id = "job-" + uuid.uuid4().hex[:12]
        with self._lock:
            self._jobs[job_id] = {"job_id": job_id, "status": "queued", "recipe_id": None, "error": None}

        def work():
            with self._lock:
                self._jobs[job_id]["status"] = "running"
            try:
                recipe_id = runner()
                with self._lock:
                    self._jobs[job_id].update(status="done", recipe_id=recipe_id)
            except Exception as exc:  # surfaced via the job record
                message = getattr(exc, "message", str(exc))
                with self._lock:
                    self._jobs[job_id].update(status="failed", error=message)

        threading.Thread(target=work, daemon=True).start()
        return job_id

    def get(self, job_id: str) -> dict:
        with self._lock:
            if job_id not in self._jobs:
                raise NotFoundError(f"no ingest job {job_id!r}", id=job_id)
            return dict(self._jobs[job_id])


def create_app(
    store: KnowledgeStore,
    fct: Optional[FctStore] = None,
    resolver: Optional[Resolver] = None,
    client=None,
) -> FastAPI:
    app = FastAPI(title="foodcomp", version="0.1.0")
    cache = CompositionCache()
    jobs = IngestJobs()
    rulebook = load_rulebook()
    densities = load_densities()
    defaults = load_default_amounts()

    def current_fct() -> FctStore:
        loaded = fct or store.load_fct()
        if loaded is None:
            raise BackendUnavailable("no composition table loaded; run build-fct first")
        return loaded

    @app.exception_handler(FoodcompError)
    async def on_foodcomp_error(_request: Request, exc: FoodcompError):
        return _error_response(exc.code, exc.message, exc.details)

    @app.exception_handler(json.JSONDecodeError)
    async def on_bad_json(_request: Request, exc: json.JSONDecodeError):
        return _error_response("invalid-body", f"request body is not JSON: {exc}")

    async def read_json(request: Request):
        try:
            return json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"request body is not JSON: {exc}")

    @app.get("/search")
    def search(q: str = "", limit: int = 10):
        if not q.strip():
            raise InvalidArgument("query parameter q is required")
        return {"query": q, "results": store.search_fuzzy(q, limit=limit)}

    @app.get("/recipes/{recipe_id}")
    def get_recipe(recipe_id: str):
        return store.get_recipe(recipe_id).to_dict()

    @app.get("/recipes/{recipe_id}/composition")
    def get_composition(recipe_id: str):
        recipe = store.get_recipe(recipe_id)
        table = current_fct()
        report = cache.report(
            recipe, table, store=store, resolver=resolver, client=client
        )
        assignment = cache.tags(
            recipe, table, store=store, resolver=resolver, client=client
        )
        payload = report.to_dict()
        payload["tags"] = assignment.to_dict()
        return payload

    @app.post("/analyze")
    async def analyze(request: Request):
        body = await read_json(request)
        _validate_body(body, "analyze_request")
        recipe = _adhoc_recipe(body, resolver, rulebook, densities, defaults)
        # Read-only: no store writes, no external fetches that would
        # insert into the composition table.
        report = compose_recipe(
            recipe,
            current_fct(),
            rulebook=rulebook,
            densities=densities,
            defaults=defaults,
            resolver=resolver,
            store=store,
            client=None,
        )
        from .tags import assign_dietary_tags

        payload = report.to_dict()
        payload["tags"] = assign_dietary_tags(recipe, report, resolver=resolver).to_dict()
        return payload

    @app.get("/compare")
    def compare(dish: str = "", nutrient: str = "energy_kcal", order: str = "desc", limit: int = 10):
        if not dish.strip():
            raise InvalidArgument("query parameter dish is required")
        if order not in ("asc", "desc"):
            raise InvalidArgument(f"order must be asc or desc, not {order!r}")
        table = compare_variants(
            dish, nutrient, order, store, current_fct(), limit=limit, resolver=resolver
        )
        return table.to_dict()

    @app.post("/recommendations")
    async def recommendations(request: Request):
        body = await read_json(request)
        _validate_body(body, "user_profile")
        profile = UserProfile.from_dict(body)
        response = recommend(
            profile, store, current_fct(), cache=cache, resolver=resolver
        )
        return response.to_dict()

    @app.get("/review")
    def review_list(status: Optional[str] = None):
        if status is not None and status not in ("pending", "approved", "rejected"):
            raise InvalidArgument(f"unknown review status {status!r}")
        return {"items": [i.to_dict() for i in store.review_queue.list(status)]}

    @app.post("/review/{item_id}/approve")
    async def review_approve(item_id: str, request: Request):
        note = ""
        body = await request.body()
        if body:
            data = json.loads(body)
            note = data.get("note", "")
        return store.review_queue.approve(item_id, note).to_dict()

    @app.post("/review/{item_id}/reject")
    async def review_reject(item_id: str, request: Request):
        note = ""
        body = await request.body()
        if body:
            data = json.loads(body)
            note = data.get("note", "")
        return store.review_queue.reject(item_id, note).to_dict()

    @app.post("/ingest")
    async def ingest(request: Request):
        body = await read_json(request)
        document = body.get("document")
        if not isinstance(document, str) or not document.strip():
            raise InvalidArgument("body must carry a non-empty 'document' string")
        job_id = jobs.start(lambda: store.ingest_recipe(document, resolver=resolver))
        return jobs.get(job_id)

    @app.get("/ingest/jobs/{job_id}")
    def ingest_job(job_id: str):
        return jobs.get(job_id)

    return app


def _adhoc_recipe(body: dict, resolver, rulebook, densities, defaults) -> Recipe:
    """Build an unpersisted Recipe from an /analyze request body."""
    resolver = resolver or Resolver()
    if "text" in body:
        normalized = resolver.normalize_recipe(body["text"])
        raw_lines = normalized["ingredient_lines"]
        title = normalized.get("title", "ad-hoc")
        servings = normalized.get("servings")
    else:
        raw_lines = body["lines"]
        title = body.get("title", "ad-hoc")
        servings = body.get("servings")

    lines = []
    for raw in raw_lines:
        try:
            parsed = parse_ingredient_line(raw, resolver)
        except FoodcompError as exc:
            lines.append(IngredientLine(parsed=None, error=f"parse: {exc.message}"))
            continue
        try:
            weight = resolve_weight_grams(parsed, rulebook, densities, defaults, resolver)
            lines.append(IngredientLine(parsed=parsed, weight=weight))
        except UnresolvedWeightError as exc:
            lines.append(IngredientLine(parsed=parsed, error=f"weight: {exc.message}"))
    return Recipe(
        id="adhoc",
        title=title,
        lines=tuple(lines),
        servings=None if servings is None else to_fraction(servings),
        source=Provenance(Source.USER, "analyze"),
    )


def run(store_path, addr: str = "127.0.0.1:8000", fct_path=None):
    """CLI entry: serve the store over HTTP."""
    import uvicorn

    store = KnowledgeStore(store_path)
    app = create_app(store)
    host, _, port = addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
