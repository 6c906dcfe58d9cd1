"""foodcomp: aggregated food composition tables, ingredient-line parsing,
unit-to-gram resolution, and per-recipe nutrition analysis.

The package is organized around the workflow stages:

- nutrients:   canonical nutrient ids, exact-rational vectors, arithmetic
- units:       the measurement rulebook and the weight-resolution chain
- parsing:     deterministic ingredient-line parser
- resolver:    pluggable rule-first/model-fallback information resolution
- fct:         source adapters and the priority-merged composition table
- store:       embedded knowledge store (recipes, aliases, categories)
- composition: per-recipe nutrient totals, dietary tags, comparisons
- recommend:   user profiles, daily targets, recipe recommendations
- service:     JSON-over-HTTP API
- cli:         command-line entry points
"""

__version__ = "0.1.0"
