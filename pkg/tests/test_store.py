"""Knowledge store: ingestion, fuzzy search, aliases, snapshots."""
import json
from fractions import Fraction

import pytest

from foodcomp.errors import InvalidArgument, NotFoundError, UnparseableRecipe
from foodcomp.fct import VariantKey, build_fct, load_source
from foodcomp.nutrients import Provenance, Source
from foodcomp.store import FUZZY_THRESHOLD, KnowledgeStore, levenshtein, similarity


@pytest.fixture()
def fct(fixtures_dir):
    return build_fct(
        [
            load_source(fixtures_dir / "sample_ifct.csv", "IFCT"),
            load_source(fixtures_dir / "sample_indb.csv", "INDB"),
            load_source(fixtures_dir / "sample_api_capture.json", "EXTERNAL_API"),
        ]
    )


@pytest.fixture()
def store(fct, fixtures_dir):
    ks = KnowledgeStore()
    ks.save_fct(fct)
    for name in sorted((fixtures_dir / "recipes").glob("*.json")):
        ks.ingest_recipe(name.read_text(encoding="utf-8"))
    return ks


class TestSimilarity:
    def test_levenshtein_basics(self):
        assert levenshtein("chole", "chhole") == 1
        assert levenshtein("", "abc") == 3
        assert levenshtein("abc", "abc") == 0

    def test_exact_is_one(self):
        assert similarity("Chhole Masala", "chhole masala") == 1

    def test_subtitle_matches_by_tokens(self):
        assert similarity("samosa", "samosa (fried)") >= FUZZY_THRESHOLD


class TestIngest:
    def test_ingest_fixture_page(self, store, fixtures_dir):
        page = (fixtures_dir / "recipes" / "aloo_jeera_page.txt").read_text()
        rid = store.ingest_recipe(page)
        recipe = store.get_recipe(rid)
        assert recipe.title == "Aloo Jeera"
        assert len(recipe.lines) == 7
        parsed = recipe.lines[0].parsed
        assert parsed.ingredient == "potato"
        assert parsed.form == "chopped"
        assert parsed.process == "boiled"
        assert parsed.size == "medium"
        assert recipe.lines[0].weight.grams == 480

    def test_verbatim_source_preserved(self, store, fixtures_dir):
        page = (fixtures_dir / "recipes" / "aloo_jeera_page.txt").read_text()
        rid = store.ingest_recipe(page)
        assert store.get_source_text(rid) == page

    def test_duplicate_ingest_same_id(self, store, fixtures_dir):
        page = (fixtures_dir / "recipes" / "aloo_jeera_page.txt").read_text()
        assert store.ingest_recipe(page) == store.ingest_recipe(page)

    def test_bad_line_marked_not_fatal(self, store):
        doc = json.dumps(
            {
                "title": "Broken Line Curry",
                "servings": 2,
                "ingredient_lines": ["100 g paneer", "1 frob of zzz"],
                "instructions": [],
                "tags": [],
            }
        )
        rid = store.ingest_recipe(doc)
        recipe = store.get_recipe(rid)
        assert recipe.lines[0].resolved
        assert not recipe.lines[1].resolved
        assert recipe.lines[1].error is not None

    def test_unparseable_document(self, store):
        with pytest.raises(UnparseableRecipe):
            store.ingest_recipe("no structure here at all")

    def test_latent_substitution_from_notes(self, store, fixtures_dir):
        page = (fixtures_dir / "recipes" / "aloo_jeera_page.txt").read_text()
        rid = store.ingest_recipe(page)
        recipe = store.get_recipe(rid)
        subs = [l for l in recipe.latent_links if l["kind"] == "SUBSTITUTIONS"]
        assert len(subs) == 1
        assert subs[0]["subject"] == "paneer"
        assert subs[0]["object"] == "tofu"
        start, end = subs[0]["span"]
        assert "replace paneer with tofu" in page.lower()[start:end]


class TestFuzzySearch:
    def test_typo_finds_chhole_masala_first(self, store):
        got = store.search_fuzzy("chole masala")
        assert got, "expected at least one match"
        top = got[0]
        assert top["kind"] == "recipe"
        assert store.get_recipe(top["id"]).title == "Chhole Masala"

    def test_exact_title_scores_one(self, store):
        got = store.search_fuzzy("Chhole Masala")
        assert got[0]["score"] == 1.0

    def test_no_junk_results(self, store):
        assert store.search_fuzzy("zzzz") == []

    def test_threshold_floor(self, store):
        for match in store.search_fuzzy("masala", limit=50):
            assert match["score"] >= float(FUZZY_THRESHOLD)

    def test_food_names_searchable(self, store):
        got = store.search_fuzzy("bateka")  # Gujarati alias from the IFCT fixture
        assert any(m["kind"] == "food" and m["id"].startswith("potato") for m in got)

    def test_empty_query_rejected(self, store):
        with pytest.raises(InvalidArgument):
            store.search_fuzzy("  ")


class TestAliases:
    def test_add_and_search(self, store):
        store.add_alias("potato", "uralaikilangu", "ta")
        got = store.search_fuzzy("uralaikilangu")
        assert any(m["kind"] == "food" for m in got)

    def test_duplicate_alias_idempotent(self, store):
        store.add_alias("potato", "uralaikilangu", "ta")
        store.add_alias("potato", "uralaikilangu", "ta")
        labels = [a for a in store.aliases() if a[1] == "uralaikilangu"]
        assert len(labels) == 1

    def test_alias_to_missing_target(self, store):
        with pytest.raises(NotFoundError):
            store.add_alias("r-nonexistent", "whatever", "en")

    def test_model_alias_requires_approval(self, store):
        store.add_alias(
            "potato",
            "batata-slang",
            "und",
            provenance=Provenance(Source.LLM, "model:resolve_name"),
        )
        assert all(a[1] != "batata-slang" for a in store.aliases())
        pending = store.review_queue.list("pending")
        assert len(pending) == 1
        store.review_queue.approve(pending[0].id)
        assert any(a[1] == "batata-slang" and a[3] == "LLM" for a in store.aliases())
        assert any(m["kind"] == "food" for m in store.search_fuzzy("batata-slang"))


class TestSnapshots:
    def test_round_trip_identity(self, store, tmp_path):
        path = tmp_path / "snap.json"
        store.export_snapshot(path)
        clone = KnowledgeStore.import_snapshot(path)
        assert clone.to_snapshot() == store.to_snapshot()

    def test_empty_store_snapshot(self, tmp_path):
        empty = KnowledgeStore()
        path = tmp_path / "empty.json"
        empty.export_snapshot(path)
        clone = KnowledgeStore.import_snapshot(path)
        assert clone.to_snapshot() == empty.to_snapshot()

    def test_export_is_deterministic(self, store, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        store.export_snapshot(a)
        store.export_snapshot(b)
        assert a.read_bytes() == b.read_bytes()

    def test_triples_count_hand_checked(self, fct, tmp_path):
        ks = KnowledgeStore()
        doc = json.dumps(
            {
                "title": "Tiny",
                "servings": 2,
                "ingredient_lines": ["100 g paneer", "salt"],
                "instructions": [],
                "tags": [],
            }
        )
        ks.ingest_recipe(doc)
        # title + servings + 2 ingredient lines = 4 triples, no foods/aliases
        lines = ks.to_triples()
        assert len(lines) == 4
        path = tmp_path / "t.nt"
        assert ks.export_snapshot(path, triples=True) == 4
        assert len(path.read_text().strip().splitlines()) == 4

    def test_persistence_on_disk(self, fct, tmp_path, fixtures_dir):
        db = tmp_path / "store.db"
        ks = KnowledgeStore(db)
        ks.save_fct(fct)
        page = (fixtures_dir / "recipes" / "aloo_jeera_page.txt").read_text()
        rid = ks.ingest_recipe(page)
        ks.close()
        reopened = KnowledgeStore(db)
        assert reopened.get_recipe(rid).title == "Aloo Jeera"
        assert reopened.get_source_text(rid) == page
        assert len(reopened.load_fct()) == len(fct)
