#!/usr/bin/env python3
"""Independent brute-force recipe composition over the shipped fixtures.

This script deliberately re-implements, from scratch, everything the
composition path does: reading the three source files, canonicalizing
labels, priority merging, parsing the fixture recipes' restricted line
shapes, unit-to-gram resolution, and summation. It shares no code with
the package; only the fixture files are common. Tests compare the
package's reports against these sums exactly, in rational arithmetic.

Run standalone:  python3 tests/oracle_composition.py
"""
import csv
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"

# Label maps per source, written out independently of the package data.
IFCT_LABELS = {
    "Energy": "energy_kcal",
    "Protein": "protein_g",
    "Carbohydrate": "carbohydrate_g",
    "Total Fat": "total_fat_g",
    "Dietary Fiber": "total_fiber_g",
    "Calcium": "calcium_mg",
    "Iron": "iron_mg",
    "Vitamin C": "vitamin_c_mg",
    "Sodium": "sodium_mg",
    "Potassium": "potassium_mg",
}
INDB_LABELS = {
    "energy_kcal": "energy_kcal",
    "protein_g": "protein_g",
    "carb_g": "carbohydrate_g",
    "fat_g": "total_fat_g",
    "fibre_g": "total_fiber_g",
    "sat_fat_g": "saturated_fat_g",
    "calcium_mg": "calcium_mg",
    "iron_mg": "iron_mg",
    "sodium_mg": "sodium_mg",
    "potassium_mg": "potassium_mg",
    "folate_ug": "folate_ug",
}
API_LABELS = {
    "nf_calories": "energy_kcal",
    "nf_protein": "protein_g",
    "nf_total_carbohydrate": "carbohydrate_g",
    "nf_total_fat": "total_fat_g",
    "nf_dietary_fiber": "total_fiber_g",
    "nf_sugars": "free_sugar_g",
    "nf_sodium": "sodium_mg",
    "nf_cholesterol": "cholesterol_mg",
    "nf_potassium": "potassium_mg",
    "nf_calcium": "calcium_mg",
    "nf_iron": "iron_mg",
    "nf_vitamin_c": "vitamin_c_mg",
}

FORMS = {"chopped", "minced", "cubed", "sliced", "grated", "pureed", "whisked"}
PROCESSES = {"boiled", "steamed", "soaked", "roasted", "cooked"}
SINGULARS = {
    "chickpeas": "chickpea",
    "potatoes": "potato",
    "noodles": "noodle",
    "onions": "onion",
    "tomatoes": "tomato",
    "cloves": "clove",
    "cups": "cup",
    "tablespoons": "tablespoon",
    "teaspoons": "teaspoon",
}
ALIASES = {
    "chhole": "chickpea",
    "aloo": "potato",
    "atta": "wheat flour",
    "besan": "bengal gram flour",
}
UNIT_GRAMS = {
    "g": Fraction(1),
    "kg": Fraction(1000),
    "cup": Fraction(240),
    "tablespoon": Fraction(15),
    "teaspoon": Fraction(5),
    "clove": Fraction(5),  # garlic clove midpoint of 3-7 g
}
MEASURELESS_DEFAULTS = {"salt": Fraction(5)}

ORACLE_RECIPES = [
    "chhole_masala_a.json",
    "chhole_masala_b.json",
    "chholey_masala_c.json",
    "samosa_fried.json",
    "samosa_baked.json",
    "palak_paneer.json",
    "veg_pulao.json",
    "tofu_stir_fry.json",
    "besan_chilla.json",
    "cheese_noodles.json",
]


def frac(text):
    return Fraction(str(text))


def read_table():
    """(name, form, process, size) -> {nutrient: Fraction per 100 g},
    merged IFCT first, then INDB, then the API capture."""
    per_source = []  # list of dicts in priority order

    ifct = {}
    with open(FIXTURES / "sample_ifct.csv", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (
                row["name"].strip(),
                row["form"].strip(),
                row["process"].strip(),
                row["size"].strip(),
            )
            vec = {}
            for label, nid in IFCT_LABELS.items():
                raw = (row.get(label) or "").strip()
                if raw:
                    vec[nid] = frac(raw)
            ifct[key] = vec
    per_source.append(ifct)

    indb = {}
    with open(FIXTURES / "sample_indb.csv", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (
                row["food_name"].strip(),
                row["form"].strip(),
                row["process"].strip(),
                row["size"].strip(),
            )
            vec = {}
            for label, nid in INDB_LABELS.items():
                raw = (row.get(label) or "").strip()
                if raw:
                    vec[nid] = frac(raw)
            indb[key] = vec
    per_source.append(indb)

    api = {}
    capture = json.loads((FIXTURES / "sample_api_capture.json").read_text(encoding="utf-8"))
    for item in capture["items"]:
        words = item["food_name"].split()
        form = next((w for w in words if w in FORMS), "")
        process = next((w for w in words if w in PROCESSES), "")
        name = " ".join(w for w in words if w not in FORMS and w not in PROCESSES)
        weight = frac(item["serving_weight_grams"])
        vec = {}
        for label, nid in API_LABELS.items():
            if label in item and item[label] is not None:
                vec[nid] = frac(item[label]) * 100 / weight
        api[(name, form, process, "")] = vec
    per_source.append(api)

    merged = {}
    for table in per_source:
        for key, vec in table.items():
            slot = merged.setdefault(key, {})
            for nid, value in vec.items():
                if nid not in slot:  # first (highest-priority) source wins
                    slot[nid] = value
    return merged


def lookup(table, name, form, process, size):
    for candidate in (
        (name, form, process, size),
        (name, form, process, ""),
        (name, "", process, ""),
        (name, "", "", ""),
    ):
        if candidate in table:
            return table[candidate]
    return None


LINE = re.compile(
    r"^(?P<qty>\d+(?:\.\d+)?(?:-\d+(?:\.\d+)?)?|½)?\s*"
    r"(?P<unit>cups?|tablespoons?|teaspoons?|cloves?|g|kg)?\s*"
    r"(?:of\s+)?(?P<rest>.*)$"
)


def parse_line(text):
    """Quantity, unit, (name, form, process) for the fixture line shapes."""
    main = text.split(",")[0].strip()
    glosses = re.findall(r"\(([^)]*)\)", main)
    main = re.sub(r"\([^)]*\)", " ", main)
    tail_words = [w.strip() for part in text.split(",")[1:] for w in part.split()]

    m = LINE.match(re.sub(r"\s+", " ", main).strip())
    qty_text = m.group("qty")
    qty = None
    if qty_text == "½":
        qty = Fraction(1, 2)
    elif qty_text:
        if "-" in qty_text:
            lo, hi = qty_text.split("-")
            qty = (frac(lo) + frac(hi)) / 2
        else:
            qty = frac(qty_text)
    unit = m.group("unit")
    if unit:
        unit = SINGULARS.get(unit, unit)

    words = [w.lower() for w in m.group("rest").split()] + tail_words
    form = next((w for w in words if w in FORMS), "")
    process = next((w for w in words if w in PROCESSES), "")
    name_words = [
        SINGULARS.get(w, w) for w in words if w not in FORMS and w not in PROCESSES
    ]
    name = " ".join(name_words).strip()
    name = ALIASES.get(name, name)
    if not name and glosses:
        name = glosses[0]
    if name not in ("salt",) and glosses:
        gloss = " ".join(SINGULARS.get(w, w) for w in glosses[0].split())
        if name in ALIASES.values():
            pass
        elif name not in TABLE_NAMES:
            name = gloss
    return qty, unit, name, form, process


def grams_for(qty, unit, name):
    if qty is None and unit is None:
        return MEASURELESS_DEFAULTS.get(name)
    if unit is None:
        return None
    per_unit = UNIT_GRAMS.get(unit)
    if per_unit is None:
        return None
    return qty * per_unit


TABLE = read_table()
TABLE_NAMES = {key[0] for key in TABLE}


def compose(recipe_doc):
    total = {}
    total_weight = Fraction(0)
    skipped = []
    for line in recipe_doc["ingredient_lines"]:
        qty, unit, name, form, process = parse_line(line)
        grams = grams_for(qty, unit, name)
        vec = lookup(TABLE, name, form, process, "")
        if grams is None or vec is None:
            skipped.append(line)
            continue
        total_weight += grams
        for nid, per100 in vec.items():
            total[nid] = total.get(nid, Fraction(0)) + per100 * grams / 100
    return {
        "total": {nid: str(v) for nid, v in sorted(total.items())},
        "total_weight_g": str(total_weight),
        "skipped": skipped,
    }


def oracle_reports():
    out = {}
    for filename in ORACLE_RECIPES:
        doc = json.loads((FIXTURES / "recipes" / filename).read_text(encoding="utf-8"))
        out[filename] = compose(doc)
    return out


if __name__ == "__main__":
    json.dump(oracle_reports(), sys.stdout, indent=2, sort_keys=True)
    print()
