"""Deterministic ingredient-line parser.

Turns a raw line like "2 cups boiled aloo (potatoes) (medium-sized),
chopped" into a structured record: canonical name, form/process/size
descriptors, quantity, unit, and explicit gram weight when the line
carries one. Everything is rule- and vocabulary-driven; the resolution
agent is consulted only for name resolution when the alias table misses.

Grammar handled: quantity [unit] descriptors name [parenthetical gloss]
[, descriptors], with commas and parentheses as soft separators. Lines
outside this shape still parse (the leftover tokens become the name) and
can be retried through the resolver's ingredient-normalization path.
"""
from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .errors import EmptyInputError, ParseError
from .nutrients import to_fraction
from .units import MASS_UNITS

# --- vocabularies -----------------------------------------------------------

# Processing steps (how the ingredient was treated with heat/water/time).
PROCESS_WORDS = {
    "boiled", "roasted", "steamed", "fried", "soaked", "baked", "grilled",
    "blanched", "toasted", "parboiled", "fermented", "sprouted", "cooked",
    "raw", "sauteed", "dried",
}
# Inflections that recipes use for the same processing step.
PROCESS_INFLECTIONS = {
    "boil": "boiled", "boiling": "boiled",
    "roast": "roasted", "roasting": "roasted",
    "steam": "steamed", "steaming": "steamed",
    "fry": "fried", "frying": "fried", "deep-fried": "fried",
    "soak": "soaked", "soaking": "soaked",
    "bake": "baked", "baking": "baked",
    "grill": "grilled", "toast": "toasted",
    "sprouting": "sprouted", "fermenting": "fermented",
}

# Physical form / state of the ingredient.
FORM_WORDS = {
    "chopped", "minced", "grated", "powder", "paste", "whole", "sliced",
    "diced", "crushed", "shredded", "cubed", "ground", "mashed", "julienned",
    "peeled", "halved", "flaked", "slit", "whisked", "beaten", "melted",
    "pureed",
}
FORM_INFLECTIONS = {
    "powdered": "powder", "cubes": "cubed", "slices": "sliced",
    "flakes": "flaked", "julienne": "julienned",
}

SIZE_WORDS = {"small", "medium", "large"}
SIZE_INFLECTIONS = {"big": "large", "medium-sized": "medium", "medium-size": "medium"}

# Words that carry no structure for composition purposes.
STOPWORDS = {
    "a", "an", "the", "of", "to", "be", "is", "are", "was", "taken", "them",
    "it", "for", "and", "or", "with", "as", "needed", "taste", "required",
    "per", "approx", "approximately", "about", "finely", "freshly",
    "roughly", "thinly", "lightly", "very", "fresh", "optional", "garnish",
    "garnishing", "serving", "preferably", "washed", "cut", "into",
    "pieces", "piece", "after", "before", "if", "more", "some", "few",
    "each", "plus", "extra", "other", "any", "little", "sized", "size",
    "deep", "overnight", "boneless", "deveined", "floret", "florets",
}

_IRREGULAR_SINGULARS = {
    "leaves": "leaf",
    "loaves": "loaf",
    "halves": "half",
    "chillies": "chilli",
    "chilies": "chili",
}

VULGAR_FRACTIONS = {
    "¼": "1/4", "½": "1/2", "¾": "3/4", "⅐": "1/7", "⅑": "1/9", "⅒": "1/10",
    "⅓": "1/3", "⅔": "2/3", "⅕": "1/5", "⅖": "2/5", "⅗": "3/5", "⅘": "4/5",
    "⅙": "1/6", "⅚": "5/6", "⅛": "1/8", "⅜": "3/8", "⅝": "5/8", "⅞": "7/8",
}


def singularize(word: str) -> str:
    """Lightweight English singularizer tuned for ingredient nouns."""
    w = word.lower()
    if w in _IRREGULAR_SINGULARS:
        return _IRREGULAR_SINGULARS[w]
    if len(w) > 3 and w.endswith("ies"):
        return w[:-3] + "y"
    if len(w) > 3 and w.endswith("oes"):
        return w[:-2]
    if len(w) > 3 and w.endswith(("ches", "shes", "sses", "xes", "zes")):
        return w[:-2]
    if len(w) > 2 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


# --- unit token normalization ------------------------------------------------


@dataclass(frozen=True)
class UnknownUnit:
    """A token that did not normalize to any registered unit."""

    text: str


_ALIAS_CACHE: Optional[dict] = None


def _unit_aliases() -> dict:
    global _ALIAS_CACHE
    if _ALIAS_CACHE is None:
        text = resources.files("foodcomp.data").joinpath("unit_aliases.csv").read_text(
            encoding="utf-8"
        )
        rows = [line for line in text.splitlines() if line and not line.startswith("#")]
        _ALIAS_CACHE = {r["alias"]: r["unit"] for r in csv.DictReader(rows)}
    return _ALIAS_CACHE


def unit_vocabulary() -> set:
    """All canonical unit ids the ontology knows about."""
    from .units import load_rulebook

    vocab = set(_unit_aliases().values())
    vocab |= load_rulebook().units()
    return vocab


_VOCAB_CACHE: Optional[set] = None


def _vocab() -> set:
    global _VOCAB_CACHE
    if _VOCAB_CACHE is None:
        _VOCAB_CACHE = unit_vocabulary()
    return _VOCAB_CACHE


def normalize_unit_token(text: str) -> Union[str, UnknownUnit]:
    """Casefold, strip punctuation/articles, singularize, alias-map.

    Unknown tokens come back as UnknownUnit carrying the verbatim text;
    unknown is a value here, not an error.
    """
    raw = text
    tok = text.strip().lower()
    tok = re.sub(r"\s+", " ", tok)
    for article in ("a ", "an ", "the "):
        if tok.startswith(article):
            tok = tok[len(article):]
    tok = tok.rstrip(".")
    aliases = _unit_aliases()
    if tok in aliases:
        return aliases[tok]
    singular = " ".join(singularize(part) for part in tok.split(" "))
    if singular in aliases:
        return aliases[singular]
    if singular in _vocab():
        return singular
    return UnknownUnit(raw)


# --- quantities ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Quantity:
    """A parsed amount. Ranges are averaged to their midpoint; equality is
    on the numeric value (the surface text is kept for display only)."""

    value: Fraction
    original_text: str
    was_range: bool = False

    def __eq__(self, other):
        if not isinstance(other, Quantity):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)


# Mixed numbers must be tried before plain ones ("1 1/2" is not "1").
_NUMBER = r"\d+\s+\d+\s*/\s*\d+|\d+(?:\.\d+)?(?:\s*/\s*\d+)?"
_RANGE_SEP = r"(?:\s*(?:-|–|—)\s*|\s+to\s+)"


def _expand_vulgar(text: str) -> str:
    out = text
    for ch, frac in VULGAR_FRACTIONS.items():
        out = out.replace(ch, " " + frac + " ")
    return re.sub(r"\s+", " ", out)


def _parse_simple_number(text: str, offset: int) -> Fraction:
    t = text.strip()
    mixed = re.fullmatch(r"(\d+)\s+(\d+)\s*/\s*(\d+)", t)
    if mixed:
        whole, num, den = (int(g) for g in mixed.groups())
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}", offset=offset)
        return Fraction(whole) + Fraction(num, den)
    frac = re.fullmatch(r"(\d+)\s*/\s*(\d+)", t)
    if frac:
        num, den = int(frac.group(1)), int(frac.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}", offset=offset)
        return Fraction(num, den)
    if re.fullmatch(r"\d+(?:\.\d+)?", t):
        return to_fraction(t)
    raise ParseError(f"malformed numeric {text!r}", offset=offset)


def parse_quantity(text: str) -> Optional[Quantity]:
    """Parse an amount expression; absent numerals return None.

    Handles integers, decimals, ASCII and unicode fractions, mixed
    numbers, and ranges (averaged): "2-4" -> 3, "1 1/2" -> 1.5.
    """
    if text is None:
        return None
    original = text.strip()
    if not original:
        return None
    expanded = _expand_vulgar(original).strip()
    if not re.match(r"^\d", expanded):
        return None
    parts = re.split(_RANGE_SEP, expanded)
    if len(parts) == 1:
        value = _parse_simple_number(expanded, offset=0)
        return Quantity(value, original, was_range=False)
    if len(parts) != 2 or not parts[1].strip():
        raise ParseError(f"malformed range {original!r}", offset=len(parts[0]))
    lo = _parse_simple_number(parts[0], offset=0)
    hi = _parse_simple_number(parts[1], offset=len(parts[0]) + 1)
    return Quantity((lo + hi) / 2, original, was_range=True)


# --- structured ingredient ----------------------------------------------------


def _fraction_jsonable(value: Fraction):
    if value.denominator == 1:
        return value.numerator
    # Short exact decimals stay numbers; anything else keeps the exact
    # fraction as a string so serialization round-trips without drift.
    scaled = value * 10**6
    if scaled.denominator == 1:
        return float(value)
    return str(value)


@dataclass(frozen=True)
class ParsedIngredient:
    """Structured ingredient line; serializes to the unified JSON layout
    ("ingredient", "form", "process", "size", "quantity", "unit",
    "weight_in_grams", "llm_estimated_weight_in_grams")."""

    ingredient: str
    form: Optional[str] = None
    process: Optional[str] = None
    size: Optional[str] = None
    quantity: Optional[Quantity] = None
    unit: Optional[str] = None
    weight_in_grams: Optional[Fraction] = None
    estimated_weight_in_grams: Optional[Fraction] = None
    source_text: str = ""

    def to_dict(self) -> dict:
        out = {"ingredient": self.ingredient}
        if self.form is not None:
            out["form"] = self.form
        if self.process is not None:
            out["process"] = self.process
        if self.size is not None:
            out["size"] = self.size
        if self.quantity is not None:
            out["quantity"] = _fraction_jsonable(self.quantity.value)
        if self.unit is not None:
            out["unit"] = self.unit
        if self.weight_in_grams is not None:
            out["weight_in_grams"] = _fraction_jsonable(self.weight_in_grams)
        if self.estimated_weight_in_grams is not None:
            out["llm_estimated_weight_in_grams"] = _fraction_jsonable(
                self.estimated_weight_in_grams
            )
        out["source_text"] = self.source_text
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> "ParsedIngredient":
        qty = d.get("quantity")
        return cls(
            ingredient=d["ingredient"],
            form=d.get("form"),
            process=d.get("process"),
            size=d.get("size"),
            quantity=None if qty is None else Quantity(to_fraction(qty), str(qty)),
            unit=d.get("unit"),
            weight_in_grams=None
            if d.get("weight_in_grams") is None
            else to_fraction(d["weight_in_grams"]),
            estimated_weight_in_grams=None
            if d.get("llm_estimated_weight_in_grams") is None
            else to_fraction(d["llm_estimated_weight_in_grams"]),
            source_text=d.get("source_text", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "ParsedIngredient":
        return cls.from_dict(json.loads(text))


# --- descriptor extraction -----------------------------------------------------


def _classify_token(token: str):
    """(kind, normalized) for one token; kind in process/form/size/None.

    Tokens valid in more than one vocabulary classify process > form,
    matching how cooking verbs dominate in recipe text.
    """
    t = token.lower()
    if t in PROCESS_WORDS:
        return "process", t
    if t in PROCESS_INFLECTIONS:
        return "process", PROCESS_INFLECTIONS[t]
    if t in FORM_WORDS:
        return "form", t
    if t in FORM_INFLECTIONS:
        return "form", FORM_INFLECTIONS[t]
    if t in SIZE_WORDS:
        return "size", t
    if t in SIZE_INFLECTIONS:
        return "size", SIZE_INFLECTIONS[t]
    return None, t


def extract_descriptors(tokens):
    """Split tokens into (form, process, size, residual-name tokens).

    Order-insensitive; the first hit per descriptor class wins, stopwords
    and numerals drop out, everything else stays name material.
    """
    form = process = size = None
    residual = []
    for token in tokens:
        t = token.lower()
        if t in STOPWORDS or re.fullmatch(r"[\d/.]+", t):
            continue
        kind, norm = _classify_token(t)
        if kind == "process":
            process = process or norm
        elif kind == "form":
            form = form or norm
        elif kind == "size":
            size = size or norm
        else:
            residual.append(t)
    return form, process, size, residual


# --- name aliases ----------------------------------------------------------------


_NAME_ALIAS_CACHE: Optional[dict] = None


def load_name_aliases(path: Optional[Path] = None) -> dict:
    """label -> canonical ingredient name, from the shipped alias table."""
    global _NAME_ALIAS_CACHE
    if path is None and _NAME_ALIAS_CACHE is not None:
        return _NAME_ALIAS_CACHE
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = resources.files("foodcomp.data").joinpath("name_aliases.csv").read_text(
            encoding="utf-8"
        )
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    table = {r["label"].strip().lower(): r["canonical"].strip() for r in csv.DictReader(rows)}
    if path is None:
        _NAME_ALIAS_CACHE = table
    return table


class _AliasOnlyResolver:
    """Fallback name resolution when no agent is wired in."""

    def resolve_name(self, label: str) -> Optional[str]:
        return load_name_aliases().get(label.lower())


# --- the line parser ---------------------------------------------------------------


_PAREN = re.compile(r"\(([^()]*)\)")
_QTY_AT_START = re.compile(
    rf"^\s*(?P<qty>(?:{_NUMBER}){_RANGE_SEP}(?:{_NUMBER})|{_NUMBER})\s*"
)


def _normalize_line(text: str) -> str:
    out = _expand_vulgar(text)
    out = re.sub(r"(?<=[a-zA-Z])-(?=[a-zA-Z])", " ", out)  # ginger-garlic, medium-sized
    out = re.sub(r"(\d)([a-zA-Z])", r"\1 \2", out)  # "500g" -> "500 g"
    return out.strip()


def _split_outside_parens(text: str, sep: str):
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def parse_ingredient_line(text: str, resolver=None) -> ParsedIngredient:
    """Parse one raw ingredient line deterministically.

    The resolver (rule-based first) is consulted only for name
    resolution; with the default alias table the function is a pure
    function of its input.
    """
    if text is None or not text.strip():
        raise EmptyInputError("empty ingredient line")
    source_text = text
    resolver = resolver or _AliasOnlyResolver()

    work = _normalize_line(text)

    # Pull out parentheticals; descriptor glosses apply directly, the rest
    # are alias glosses for the name.
    glosses = []
    def _stash(match):
        glosses.append(match.group(1).strip())
        return " "
    work = _PAREN.sub(_stash, work)

    segments = [s.strip() for s in _split_outside_parens(work, ",") if s.strip()]
    head = segments[0] if segments else ""
    tail_segments = segments[1:]

    # Leading quantity ("2", "½", "2-4", "1 1/2").
    quantity = None
    m = _QTY_AT_START.match(head)
    if m:
        quantity = parse_quantity(m.group("qty"))
        head = head[m.end():]

    tokens = [t for t in re.split(r"[\s]+", head) if t]

    # "a pinch", "an inch": article plus unit means quantity one.
    if quantity is None and tokens and tokens[0].lower() in ("a", "an") and len(tokens) > 1:
        nxt = normalize_unit_token(tokens[1])
        if isinstance(nxt, str):
            quantity = Quantity(Fraction(1), tokens[0])
            tokens = tokens[1:]

    # Unit: longest alias match (handles "large spoon") at the first
    # non-descriptor position, so "1 small katori dal" still finds its
    # unit. Tried only while a quantity makes a unit plausible.
    unit = None
    if quantity is not None:
        i = 0
        while i < len(tokens):
            # Multiword aliases ("large spoon") may start with words that
            # would otherwise classify as descriptors, so try them first.
            matched = False
            for span in (3, 2):
                candidate = " ".join(tokens[i : i + span])
                if i + span <= len(tokens) and isinstance(
                    normalize_unit_token(candidate), str
                ):
                    unit = normalize_unit_token(candidate)
                    tokens = tokens[:i] + tokens[i + span :]
                    matched = True
                    break
            if matched:
                break
            tok = tokens[i].lower()
            kind, _ = _classify_token(tok)
            if kind is not None or tok in ("a", "an", "the"):
                i += 1
                continue
            norm = normalize_unit_token(tokens[i])
            if isinstance(norm, str):
                unit = norm
                tokens = tokens[:i] + tokens[i + 1 :]
            break
    if unit and tokens and tokens[0].lower() == "of":
        tokens = tokens[1:]

    # Descriptor extraction over the head and any trailing ", chopped"
    # style segments.
    for seg in tail_segments:
        tokens.extend(t for t in re.split(r"[\s]+", seg) if t)
    form, process, size, residual = extract_descriptors(tokens)

    # "2 garlic cloves": a trailing token that normalizes to a known unit
    # when none was found up front.
    if unit is None and quantity is not None and len(residual) >= 2:
        norm = normalize_unit_token(residual[-1])
        if isinstance(norm, str):
            unit = norm
            residual = residual[:-1]

    # Descriptor-only glosses refine the record; others are name aliases.
    alias_glosses = []
    for gloss in glosses:
        gtokens = [t for t in re.split(r"[\s]+", gloss) if t]
        gform, gprocess, gsize, gresidual = extract_descriptors(gtokens)
        if gresidual:
            alias_glosses.append(" ".join(gresidual))
        form = form or gform
        process = process or gprocess
        size = size or gsize

    # Explicit mass units resolve to grams right here.
    weight_in_grams = None
    if unit in MASS_UNITS and quantity is not None:
        per_unit = {"gram": Fraction(1), "kilogram": Fraction(1000), "milligram": Fraction(1, 1000)}[unit]
        weight_in_grams = quantity.value * per_unit

    raw_name = " ".join(residual)
    name = _resolve_name(raw_name, alias_glosses, resolver)

    return ParsedIngredient(
        ingredient=name,
        form=form,
        process=process,
        size=size,
        quantity=quantity,
        unit=unit,
        weight_in_grams=weight_in_grams,
        source_text=source_text,
    )


def _singular_name(name: str) -> str:
    parts = name.lower().split()
    if not parts:
        return ""
    parts[-1] = singularize(parts[-1])
    return " ".join(parts)


def _resolve_name(raw_name: str, alias_glosses, resolver) -> str:
    """Head name wins when it resolves; otherwise a resolving (or plainly
    canonical-looking) gloss takes over, making the head its alias."""
    head = _singular_name(raw_name)
    resolved = resolver.resolve_name(head) if head else None
    if resolved:
        return resolved
    for gloss in alias_glosses:
        g = _singular_name(gloss)
        resolved = resolver.resolve_name(g)
        if resolved:
            return resolved
    if alias_glosses:
        return _singular_name(alias_glosses[0])
    return head
