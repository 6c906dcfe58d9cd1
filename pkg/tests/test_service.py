"""HTTP surface: endpoint behavior, error codes, schema conformance."""
import json
import time

import jsonschema
import pytest
from fastapi.testclient import TestClient

from foodcomp.apischemas import SCHEMAS
from foodcomp.fct import build_fct, load_source
from foodcomp.resolver import (
    ReplayModelBackend,
    ResolutionKind,
    ResolutionRequest,
    Resolver,
)
from foodcomp.service import create_app
from foodcomp.store import KnowledgeStore

POTATO_LINE = "2 cups boiled aloo (potatoes) (medium-sized), chopped"


@pytest.fixture(scope="module")
def service(fixtures_dir):
    fct = build_fct(
        [
            load_source(fixtures_dir / "sample_ifct.csv", "IFCT"),
            load_source(fixtures_dir / "sample_indb.csv", "INDB"),
            load_source(fixtures_dir / "sample_api_capture.json", "EXTERNAL_API"),
        ]
    )
    store = KnowledgeStore()
    store.save_fct(fct)
    ids = {}
    for name in sorted((fixtures_dir / "recipes").glob("*.json")):
        ids[name.stem] = store.ingest_recipe(name.read_text(encoding="utf-8"))
    resolver = Resolver(model_backend=ReplayModelBackend(), review_queue=store.review_queue)
    app = create_app(store, resolver=resolver)
    return TestClient(app), store, ids


def check(payload, schema_name):
    jsonschema.validate(payload, SCHEMAS[schema_name])
    return payload


class TestSchemasInSync:
    def test_module_matches_committed_files(self, fixtures_dir):
        schemas_dir = fixtures_dir.parents[1] / "schemas"
        for name, schema in SCHEMAS.items():
            on_disk = json.loads((schemas_dir / f"{name}.schema.json").read_text())
            assert on_disk == schema, name


class TestSearch:
    def test_search_returns_schema_valid_matches(self, service):
        client, _, _ = service
        resp = client.get("/search", params={"q": "chole masala"})
        assert resp.status_code == 200
        payload = check(resp.json(), "search_response")
        assert payload["results"][0]["kind"] == "recipe"

    def test_empty_query_400(self, service):
        client, _, _ = service
        resp = client.get("/search")
        assert resp.status_code == 400
        check(resp.json(), "api_error")


class TestRecipes:
    def test_get_recipe(self, service):
        client, _, ids = service
        resp = client.get(f"/recipes/{ids['palak_paneer']}")
        assert resp.status_code == 200
        payload = check(resp.json(), "recipe")
        assert payload["title"] == "Palak Paneer"

    def test_unknown_recipe_404(self, service):
        client, _, _ = service
        resp = client.get("/recipes/r-nope")
        assert resp.status_code == 404
        assert resp.json()["code"] == "not-found"

    def test_unknown_composition_404(self, service):
        client, _, _ = service
        resp = client.get("/recipes/r-nope/composition")
        assert resp.status_code == 404

    def test_composition_schema_and_tags(self, service):
        client, _, ids = service
        resp = client.get(f"/recipes/{ids['palak_paneer']}/composition")
        assert resp.status_code == 200
        payload = check(resp.json(), "composition_report")
        assert "contains-dairy" in payload["tags"]["tags"]
        assert payload["per_serving"]["protein_g"]


class TestAnalyze:
    def test_paper_potato_line_weighs_480(self, service):
        client, _, _ = service
        resp = client.post("/analyze", json={"lines": [POTATO_LINE], "servings": 2})
        assert resp.status_code == 200
        payload = check(resp.json(), "composition_report")
        line = payload["line_breakdown"][0]
        assert line["grams"] == "480"
        assert line["weight_method"] == "UNIT_RULE"

    def test_analyze_never_mutates_store(self, service):
        client, store, _ = service
        before = store.to_snapshot()
        client.post("/analyze", json={"lines": ["100 g paneer", "3 cups rice"]})
        client.post("/analyze", json={"lines": ["1 glass water"]})
        assert store.to_snapshot() == before

    def test_bad_body_400(self, service):
        client, _, _ = service
        resp = client.post("/analyze", json={"nonsense": 1})
        assert resp.status_code == 400
        check(resp.json(), "api_error")

    def test_unresolvable_recipe_422(self, service):
        client, _, _ = service
        resp = client.post("/analyze", json={"lines": ["1 frob of zzz"]})
        assert resp.status_code == 422
        assert resp.json()["code"] == "empty-composition"

    def test_analyze_text_document(self, service, fixtures_dir):
        client, _, _ = service
        page = (fixtures_dir / "recipes" / "aloo_jeera_page.txt").read_text()
        resp = client.post("/analyze", json={"text": page})
        assert resp.status_code == 200
        payload = check(resp.json(), "composition_report")
        assert payload["title"] == "Aloo Jeera"
        assert payload["unresolved"]  # ghee etc. have no fixture rows


class TestCompare:
    def test_compare_protein_desc(self, service):
        client, _, _ = service
        resp = client.get(
            "/compare", params={"dish": "chhole masala", "nutrient": "protein_g", "order": "desc"}
        )
        assert resp.status_code == 200
        payload = check(resp.json(), "comparison_table")
        values = [float(r["per_serving"]["protein_g"]) for r in payload["rows"]]
        assert values == sorted(values, reverse=True)

    def test_bad_order_400(self, service):
        client, _, _ = service
        resp = client.get("/compare", params={"dish": "samosa", "order": "sideways"})
        assert resp.status_code == 400


class TestRecommendations:
    def test_peanut_allergy_filter(self, service):
        client, _, _ = service
        resp = client.post(
            "/recommendations",
            json={
                "age_years": 30,
                "sex": "male",
                "weight_kg": 70,
                "height_cm": 175,
                "allergies": ["peanuts"],
            },
        )
        assert resp.status_code == 200
        payload = check(resp.json(), "recommendation_response")
        for rec in payload["recommendations"]:
            assert "contains-peanuts" not in rec["tags"]

    def test_invalid_profile_400(self, service):
        client, _, _ = service
        resp = client.post(
            "/recommendations",
            json={"age_years": 30, "sex": "male", "weight_kg": -1, "height_cm": 175},
        )
        assert resp.status_code == 400


class TestReview:
    def test_review_flow_over_http(self, service):
        client, store, _ = service
        req = ResolutionRequest(ResolutionKind.RESOLVE_NAME, {"label": "alu bhujia"})
        stub = ReplayModelBackend()
        stub.record(req, {"name": "potato"})
        resolver = Resolver(model_backend=stub, review_queue=store.review_queue)
        resolver.resolve(req)

        resp = client.get("/review", params={"status": "pending"})
        payload = check(resp.json(), "review_items")
        assert payload["items"]
        item_id = payload["items"][0]["id"]

        resp = client.post(f"/review/{item_id}/approve", json={"note": "looks right"})
        assert resp.status_code == 200
        assert resp.json()["status"] == "approved"

        resp = client.post(f"/review/{item_id}/approve")
        assert resp.json()["status"] == "approved"  # idempotent

    def test_unknown_review_404(self, service):
        client, _, _ = service
        resp = client.post("/review/rev-nope/approve")
        assert resp.status_code == 404


class TestIngestJobs:
    def test_background_ingest_and_poll(self, service):
        client, store, _ = service
        doc = json.dumps(
            {
                "title": "Job Curry",
                "servings": 2,
                "ingredient_lines": ["100 g paneer", "salt"],
                "instructions": [],
                "tags": [],
            }
        )
        resp = client.post("/ingest", json={"document": doc})
        assert resp.status_code == 200
        job = check(resp.json(), "ingest_job")
        for _ in range(100):
            job = check(client.get(f"/ingest/jobs/{job['job_id']}").json(), "ingest_job")
            if job["status"] in ("done", "failed"):
                break
            time.sleep(0.02)
        assert job["status"] == "done"
        assert store.get_recipe(job["recipe_id"]).title == "Job Curry"

    def test_unknown_job_404(self, service):
        client, _, _ = service
        assert client.get("/ingest/jobs/job-nope").status_code == 404

    def test_bad_ingest_body_400(self, service):
        client, _, _ = service
        assert client.post("/ingest", json={}).status_code == 400
