#!/usr/bin/env python3
"""Regenerate the committed schemas/ files from foodcomp.apischemas."""
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parents[1] / "src"))

from foodcomp.apischemas import SCHEMAS  # noqa: E402

out_dir = Path(__file__).parents[1] / "schemas"
out_dir.mkdir(exist_ok=True)
for name, schema in SCHEMAS.items():
    path = out_dir / f"{name}.schema.json"
    path.write_text(json.dumps(schema, indent=2) + "\n", encoding="utf-8")
    print("wrote", path)
