"""External nutrition API client.

A thin client for a natural-language nutrient-lookup endpoint.
Every successful fetch is cached on disk keyed by the normalized query, and
the test suite replays captured responses through StubTransport so CI never
touches the network. Credentials come from environment variables
(FOODCOMP_NUTRITION_APP_ID / FOODCOMP_NUTRITION_APP_KEY), the endpoint from
FOODCOMP_NUTRITION_URL.
"""
from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path
from typing import Callable, Optional

from .errors import FetchError, NotFoundError

NUTRITION_URL_ENV = "FOODCOMP_NUTRITION_URL"
NUTRITION_APP_ID_ENV = "FOODCOMP_NUTRITION_APP_ID"
NUTRITION_APP_KEY_ENV = "FOODCOMP_NUTRITION_APP_KEY"


def normalize_query(query: str) -> str:
    return re.sub(r"\s+", " ", query.strip().lower())


class StubTransport:
    """Replays captured API items; the standard transport for tests."""

    def __init__(self, items=None):
        self.items = {normalize_query(i["query"]): i for i in (items or [])}
        self.calls = 0

    @classmethod
    def from_capture(cls, path) -> "StubTransport":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(data["items"])

    def __call__(self, query: str) -> dict:
        self.calls += 1
        key = normalize_query(query)
        if key not in self.items:
            raise NotFoundError(f"no item for query {query!r}", query=query)
        return self.items[key]


class HttpTransport:
    """POSTs the query to the configured endpoint."""

    def __init__(self, url: str, app_id: str = "", app_key: str = ""):
        if not url:
            raise FetchError("nutrition API URL not configured")
        self.url = url
        self.app_id = app_id
        self.app_key = app_key

    def __call__(self, query: str) -> dict:
        import requests

        headers = {"Content-Type": "application/json"}
        if self.app_id:
            headers["x-app-id"] = self.app_id
        if self.app_key:
            headers["x-app-key"] = self.app_key
        try:
            resp = requests.post(self.url, json={"query": query}, headers=headers, timeout=30)
        except requests.RequestException as exc:
            raise FetchError(f"nutrition API unreachable: {exc}")
        if resp.status_code == 404:
            raise NotFoundError(f"no item for query {query!r}", query=query)
        if resp.status_code in (401, 403):
            raise FetchError(f"nutrition API credentials rejected ({resp.status_code})")
        if resp.status_code != 200:
            raise FetchError(f"nutrition API error {resp.status_code}")
        data = resp.json()
        foods = data.get("foods") or []
        if not foods:
            raise NotFoundError(f"no item for query {query!r}", query=query)
        item = dict(foods[0])
        item.setdefault("query", query)
        return item


class ExternalNutritionClient:
    """Fetch-with-cache wrapper around a transport."""

    def __init__(self, transport: Callable, cache_dir: Optional[Path] = None):
        self.transport = transport
        self.cache_dir = Path(cache_dir) if cache_dir else None
        if self.cache_dir:
            self.cache_dir.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_env(cls, environ, cache_dir: Optional[Path] = None) -> Optional["ExternalNutritionClient"]:
        url = environ.get(NUTRITION_URL_ENV, "")
        if not url:
            return None
        transport = HttpTransport(
            url,
            environ.get(NUTRITION_APP_ID_ENV, ""),
            environ.get(NUTRITION_APP_KEY_ENV, ""),
        )
        return cls(transport, cache_dir)

    def _cache_path(self, query: str) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        digest = hashlib.sha256(normalize_query(query).encode("utf-8")).hexdigest()
        return self.cache_dir / f"{digest}.json"

    def fetch(self, query: str) -> dict:
        path = self._cache_path(query)
        if path is not None and path.exists():
            return json.loads(path.read_text(encoding="utf-8"))
        item = self.transport(query)
        if path is not None:
            path.write_text(
                json.dumps(item, sort_keys=True, ensure_ascii=False), encoding="utf-8"
            )
        return item
