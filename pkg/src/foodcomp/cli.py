"""Command-line surface: ingestion, table building, analysis, review.

Every command is a thin veneer over the library; exit code 0 on success,
nonzero with an ApiError-style message on stderr otherwise. --json turns
on machine output wherever it makes sense.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .composition import compare_variants, compose_recipe
from .errors import FoodcompError
from .fct import build_fct, load_source, sniff_adapter
from .nutrients import format_amount
from .parsing import parse_ingredient_line
from .resolver import Resolver
from .service import _adhoc_recipe
from .store import KnowledgeStore
from .tags import assign_dietary_tags
from .units import convert_unit, load_default_amounts, load_densities, load_rulebook


def _fail(exc: FoodcompError):
    payload = exc.to_payload()
    click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True), err=True)
    sys.exit(1)


def _open_store(path) -> KnowledgeStore:
    return KnowledgeStore(path)


@click.group()
def main():
    """Food composition workflows: aggregate tables, parse ingredient
    lines, analyze recipes, compare variants, review model output."""


@main.command()
@click.argument("lines", nargs=-1)
@click.option("--file", "file_", type=click.Path(exists=True), help="Parse one line per file row.")
def parse(lines, file_):
    """Parse ingredient LINES (or --file) to JSON Lines."""
    inputs = list(lines)
    if file_:
        inputs.extend(
            l for l in Path(file_).read_text(encoding="utf-8").splitlines() if l.strip()
        )
    if not inputs:
        _fail(FoodcompError("nothing to parse: pass lines or --file"))
    try:
        for line in inputs:
            click.echo(parse_ingredient_line(line).to_json())
    except FoodcompError as exc:
        _fail(exc)


@main.command("build-fct")
@click.argument("sources", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--store", "store_path", default=":memory:", help="Knowledge store file to write into.")
@click.option("--snapshot", type=click.Path(), help="Also write the merged table as JSON.")
@click.option("--json", "as_json", is_flag=True, help="Print the build report as JSON.")
def build_fct_cmd(sources, store_path, snapshot, as_json):
    """Aggregate SOURCES (adapter sniffed per file) into the store."""
    try:
        loaded = [load_source(p, sniff_adapter(p)) for p in sources]
        fct = build_fct(loaded)
        store = _open_store(store_path)
        store.save_fct(fct)
        if snapshot:
            Path(snapshot).write_text(fct.snapshot_json() + "\n", encoding="utf-8")
        report = fct.report.to_dict()
        if as_json:
            click.echo(json.dumps(report, ensure_ascii=False, sort_keys=True))
        else:
            click.echo(
                f"merged {report['merged_keys']} variants from {len(sources)} sources"
                f" ({sum(report['counts_per_source'].values())} rows,"
                f" {len(report['overlapping_keys'])} overlapping keys)"
            )
    except FoodcompError as exc:
        _fail(exc)


@main.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--store", "store_path", default=":memory:", help="Knowledge store file.")
@click.option("--json", "as_json", is_flag=True)
def ingest(path, store_path, as_json):
    """Ingest a recipe document into the store."""
    try:
        store = _open_store(store_path)
        recipe_id = store.ingest_recipe(Path(path).read_text(encoding="utf-8"))
        if as_json:
            click.echo(json.dumps({"recipe_id": recipe_id}))
        else:
            click.echo(recipe_id)
    except FoodcompError as exc:
        _fail(exc)


@main.command()
@click.argument("source", type=str)
@click.option("--store", "store_path", default=":memory:", help="Store holding the built table.")
@click.option("--json", "as_json", is_flag=True, help="Emit the full report as JSON.")
def analyze(source, store_path, as_json):
    """Analyze a recipe document (path or '-' for stdin) without persisting."""
    try:
        document = (
            sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
        )
        store = _open_store(store_path)
        fct = store.load_fct()
        if fct is None:
            _fail(FoodcompError("store has no composition table; run build-fct first"))
        rulebook, densities, defaults = (
            load_rulebook(),
            load_densities(),
            load_default_amounts(),
        )
        recipe = _adhoc_recipe(
            {"text": document}, Resolver(), rulebook, densities, defaults
        )
        report = compose_recipe(
            recipe, fct, rulebook=rulebook, densities=densities, defaults=defaults, store=store
        )
        payload = report.to_dict()
        payload["tags"] = assign_dietary_tags(recipe, report).to_dict()
        if as_json:
            click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1))
        else:
            click.echo(f"{report.title}: {format_amount(report.total_weight_g)} g total")
            for nid in ("energy_kcal", "protein_g", "carbohydrate_g", "total_fat_g"):
                value = report.per_serving.get(nid)
                shown = "unknown" if value is None else format_amount(value)
                click.echo(f"  {nid} per serving: {shown}")
            if report.unresolved:
                click.echo(f"  unresolved lines: {len(report.unresolved)}")
    except FoodcompError as exc:
        _fail(exc)


@main.command()
@click.argument("dish")
@click.option("--by", "nutrient", default="energy_kcal", help="Nutrient to sort by.")
@click.option("--order", type=click.Choice(["asc", "desc"]), default="desc")
@click.option("--limit", default=10)
@click.option("--store", "store_path", default=":memory:")
@click.option("--json", "as_json", is_flag=True)
def compare(dish, nutrient, order, limit, store_path, as_json):
    """Compare variants of DISH by one nutrient per serving."""
    try:
        store = _open_store(store_path)
        fct = store.load_fct()
        if fct is None:
            _fail(FoodcompError("store has no composition table; run build-fct first"))
        table = compare_variants(dish, nutrient, order, store, fct, limit=limit)
        if as_json:
            click.echo(json.dumps(table.to_dict(), ensure_ascii=False, sort_keys=True))
        else:
            click.echo(table.to_text())
    except FoodcompError as exc:
        _fail(exc)


@main.group()
def units():
    """Measurement rulebook helpers."""


@units.command()
@click.argument("quantity")
@click.argument("from_unit")
@click.argument("to_unit")
@click.option("--ingredient", default=None, help="Ingredient context for scoped rules.")
@click.option("--json", "as_json", is_flag=True)
def convert(quantity, from_unit, to_unit, ingredient, as_json):
    """Convert QUANTITY FROM_UNIT TO_UNIT, e.g. `units convert 1 cup teaspoon`."""
    try:
        book = load_rulebook()
        result = convert_unit(quantity, from_unit, to_unit, book, context_name=ingredient)
        if as_json:
            click.echo(
                json.dumps(
                    {
                        "quantity": str(quantity),
                        "from": from_unit,
                        "to": to_unit,
                        "result": format_amount(result),
                    }
                )
            )
        else:
            click.echo(format_amount(result))
    except FoodcompError as exc:
        _fail(exc)


@units.command()
@click.option("--rulebook", "rulebook_path", type=click.Path(exists=True), default=None)
def lint(rulebook_path):
    """Check a rulebook for duplicates, cycles, and dead-end chains."""
    try:
        book = load_rulebook(rulebook_path)
        problems = book.lint()
        for problem in problems:
            click.echo(problem, err=True)
        if problems:
            sys.exit(1)
        click.echo("rulebook ok")
    except FoodcompError as exc:
        _fail(exc)


@main.group()
def review():
    """Human-in-the-loop queue for model-sourced facts."""


@review.command("list")
@click.option("--status", type=click.Choice(["pending", "approved", "rejected"]), default=None)
@click.option("--store", "store_path", default=":memory:")
@click.option("--json", "as_json", is_flag=True)
def review_list(status, store_path, as_json):
    try:
        store = _open_store(store_path)
        items = store.review_queue.list(status)
        if as_json:
            click.echo(json.dumps({"items": [i.to_dict() for i in items]}, ensure_ascii=False, sort_keys=True))
        else:
            for item in items:
                click.echo(f"{item.id}  {item.status:9}  {item.request['kind']}")
            if not items:
                click.echo("queue empty")
    except FoodcompError as exc:
        _fail(exc)


@review.command()
@click.argument("item_id")
@click.option("--note", default="")
@click.option("--store", "store_path", default=":memory:")
def approve(item_id, note, store_path):
    try:
        item = _open_store(store_path).review_queue.approve(item_id, note)
        click.echo(f"{item.id} approved")
    except FoodcompError as exc:
        _fail(exc)


@review.command()
@click.argument("item_id")
@click.option("--note", default="")
@click.option("--store", "store_path", default=":memory:")
def reject(item_id, note, store_path):
    try:
        item = _open_store(store_path).review_queue.reject(item_id, note)
        click.echo(f"{item.id} rejected")
    except FoodcompError as exc:
        _fail(exc)


@main.command()
@click.argument("out", type=click.Path())
@click.option("--store", "store_path", default=":memory:")
@click.option("--triples", is_flag=True, help="Write N-Triples-style lines instead of JSON.")
def export(out, store_path, triples):
    """Export the full store snapshot."""
    try:
        count = _open_store(store_path).export_snapshot(out, triples=triples)
        click.echo(f"wrote {count} {'triples' if triples else 'entities'} to {out}")
    except FoodcompError as exc:
        _fail(exc)


@main.command()
@click.option("--addr", default="127.0.0.1:8000", help="host:port to bind.")
@click.option("--store", "store_path", required=True)
def serve(addr, store_path):
    """Serve the HTTP API over a store file."""
    from .service import run

    run(store_path, addr)


if __name__ == "__main__":
    main()
