"""Ingredient category hierarchy.

A single rooted tree ("Ingredient" at the top) with leaf categories like
RootOrTuberousVegetable or ProcessedMushroom. Dietary tag rules and the
category-assignment path both work in terms of subtree membership.
"""
from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import InvalidArgument

ROOT = "Ingredient"


class CategoryTree:
    """Rooted category tree with path lookups by node name.

    Node names are unique in the shipped tree, so a leaf name identifies
    its full root-to-leaf path.
    """

    def __init__(self, spec: dict):
        self._parent: dict = {}
        self._children: dict = {}
        self.root = spec["name"]

        def walk(node, parent):
            name = node["name"]
            if name in self._parent or (parent is None and name in self._children):
                raise InvalidArgument(f"duplicate category name {name!r}")
            if parent is not None:
                self._parent[name] = parent
            self._children[name] = [c["name"] for c in node.get("children", [])]
            for child in node.get("children", []):
                walk(child, name)

        walk(spec, None)
        if self.root != ROOT:
            raise InvalidArgument(f"category tree must be rooted at {ROOT!r}")

    def __contains__(self, name: str) -> bool:
        return name in self._children

    def path_to(self, name: str) -> list:
        """Full root-to-node path, root first."""
        if name not in self._children:
            raise InvalidArgument(f"unknown category {name!r}")
        path = [name]
        while path[-1] in self._parent:
            path.append(self._parent[path[-1]])
        return list(reversed(path))

    def leaves(self) -> list:
        return sorted(n for n, kids in self._children.items() if not kids)

    def is_valid_path(self, path: list) -> bool:
        if not path or path[0] != self.root:
            return False
        for parent, child in zip(path, path[1:]):
            if child not in self._children.get(parent, []):
                return False
        return not self._children.get(path[-1], [])

    def path_under(self, path: list, ancestor: str) -> bool:
        return ancestor in path


_TREE_CACHE: Optional[CategoryTree] = None
_RULES_CACHE: Optional[dict] = None


def load_category_tree(path: Optional[Path] = None) -> CategoryTree:
    global _TREE_CACHE
    if path is None and _TREE_CACHE is not None:
        return _TREE_CACHE
    if path is not None:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
    else:
        spec = json.loads(
            resources.files("foodcomp.data").joinpath("category_tree.json").read_text(
                encoding="utf-8"
            )
        )
    spec.pop("version", None)
    tree = CategoryTree(spec)
    if path is None:
        _TREE_CACHE = tree
    return tree


def load_category_rules(path: Optional[Path] = None) -> dict:
    """Canonical ingredient name -> leaf category name."""
    global _RULES_CACHE
    if path is None and _RULES_CACHE is not None:
        return _RULES_CACHE
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = resources.files("foodcomp.data").joinpath("category_rules.csv").read_text(
            encoding="utf-8"
        )
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    table = {r["name"].strip(): r["leaf"].strip() for r in csv.DictReader(rows)}
    tree = load_category_tree()
    for name, leaf in table.items():
        if leaf not in tree:
            raise InvalidArgument(f"rule for {name!r} names unknown category {leaf!r}")
    if path is None:
        _RULES_CACHE = table
    return table
