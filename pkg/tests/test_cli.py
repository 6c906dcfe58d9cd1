"""CLI commands end to end, including byte-stable repeated runs."""
import json

import pytest
from click.testing import CliRunner

from foodcomp.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def built_store(runner, tmp_path, fixtures_dir):
    store_path = tmp_path / "store.db"
    result = runner.invoke(
        main,
        [
            "build-fct",
            str(fixtures_dir / "sample_ifct.csv"),
            str(fixtures_dir / "sample_indb.csv"),
            str(fixtures_dir / "sample_api_capture.json"),
            "--store",
            str(store_path),
        ],
    )
    assert result.exit_code == 0, result.output
    return store_path


class TestParse:
    def test_single_line_jsonl(self, runner):
        result = runner.invoke(main, ["parse", "2 cups boiled aloo (potatoes) (medium-sized), chopped"])
        assert result.exit_code == 0
        record = json.loads(result.output.strip())
        assert record["ingredient"] == "potato"
        assert record["unit"] == "cup"

    def test_file_of_lines(self, runner, tmp_path):
        f = tmp_path / "lines.txt"
        f.write_text("salt\n1 teaspoon jeera\n")
        result = runner.invoke(main, ["parse", "--file", str(f)])
        assert result.exit_code == 0
        rows = [json.loads(l) for l in result.output.strip().splitlines()]
        assert [r["ingredient"] for r in rows] == ["salt", "cumin"]

    def test_nothing_to_parse_fails(self, runner):
        result = runner.invoke(main, ["parse"])
        assert result.exit_code == 1


class TestBuildExport:
    def test_build_then_export_snapshot_matches_golden(self, runner, built_store, tmp_path):
        snap = tmp_path / "snap.json"
        result = runner.invoke(main, ["export", str(snap), "--store", str(built_store)])
        assert result.exit_code == 0, result.output
        payload = json.loads(snap.read_text())
        assert payload["schema_version"] == 1
        assert len(payload["foods"]) == 26

    def test_triples_export(self, runner, built_store, tmp_path):
        out = tmp_path / "store.nt"
        result = runner.invoke(main, ["export", str(out), "--store", str(built_store), "--triples"])
        assert result.exit_code == 0
        lines = out.read_text().strip().splitlines()
        assert result.output.startswith(f"wrote {len(lines)} triples")

    def test_unknown_file_schema_error(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        result = runner.invoke(main, ["build-fct", str(bad)])
        assert result.exit_code == 1
        assert "adapter" in result.output + (result.stderr or "")


class TestIngestAnalyze:
    def test_ingest_then_analyze_deterministic(self, runner, built_store, fixtures_dir):
        page = fixtures_dir / "recipes" / "chhole_masala_a.json"
        r1 = runner.invoke(main, ["ingest", str(page), "--store", str(built_store), "--json"])
        assert r1.exit_code == 0, r1.output
        recipe_id = json.loads(r1.output)["recipe_id"]
        assert recipe_id.startswith("r-")

        a1 = runner.invoke(main, ["analyze", str(page), "--store", str(built_store), "--json"])
        a2 = runner.invoke(main, ["analyze", str(page), "--store", str(built_store), "--json"])
        assert a1.exit_code == 0, a1.output
        assert a1.output == a2.output  # byte-stable
        payload = json.loads(a1.output)
        assert payload["total_weight_g"] == "790"

    def test_analyze_stdin(self, runner, built_store):
        doc = json.dumps(
            {
                "title": "Stdin Bowl",
                "servings": 1,
                "ingredient_lines": ["100 g rice"],
                "instructions": [],
                "tags": [],
            }
        )
        result = runner.invoke(main, ["analyze", "-", "--store", str(built_store)], input=doc)
        assert result.exit_code == 0, result.output
        assert "Stdin Bowl" in result.output

    def test_analyze_without_fct_fails(self, runner, tmp_path, fixtures_dir):
        result = runner.invoke(
            main,
            ["analyze", str(fixtures_dir / "recipes" / "veg_pulao.json"), "--store", str(tmp_path / "empty.db")],
        )
        assert result.exit_code == 1


class TestCompare:
    def test_compare_table_text(self, runner, built_store, fixtures_dir):
        for name in ("samosa_fried.json", "samosa_baked.json"):
            runner.invoke(
                main, ["ingest", str(fixtures_dir / "recipes" / name), "--store", str(built_store)]
            )
        result = runner.invoke(
            main,
            ["compare", "samosa", "--by", "total_fat_g", "--order", "asc", "--store", str(built_store)],
        )
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        assert lines[0].startswith("recipe")
        assert len(lines) == 3

    def test_compare_json(self, runner, built_store, fixtures_dir):
        runner.invoke(
            main,
            ["ingest", str(fixtures_dir / "recipes" / "veg_pulao.json"), "--store", str(built_store)],
        )
        result = runner.invoke(
            main,
            ["compare", "vegetable pulao", "--by", "protein_g", "--store", str(built_store), "--json"],
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["rows"]


class TestUnits:
    def test_cup_to_teaspoon_is_48(self, runner):
        result = runner.invoke(main, ["units", "convert", "1", "cup", "teaspoon"])
        assert result.exit_code == 0
        assert result.output.strip() == "48"

    def test_scoped_conversion(self, runner):
        result = runner.invoke(
            main, ["units", "convert", "1", "bulb", "clove", "--ingredient", "garlic"]
        )
        assert result.output.strip() == "10"

    def test_no_conversion_fails(self, runner):
        result = runner.invoke(main, ["units", "convert", "1", "cup", "milliliter"])
        assert result.exit_code == 1

    def test_lint_shipped_rulebook(self, runner):
        result = runner.invoke(main, ["units", "lint"])
        assert result.exit_code == 0
        assert "ok" in result.output


class TestReviewCli:
    def test_empty_queue_listing(self, runner, tmp_path):
        result = runner.invoke(main, ["review", "list", "--store", str(tmp_path / "s.db")])
        assert result.exit_code == 0
        assert "queue empty" in result.output

    def test_unknown_item(self, runner, tmp_path):
        result = runner.invoke(main, ["review", "approve", "rev-x", "--store", str(tmp_path / "s.db")])
        assert result.exit_code == 1
