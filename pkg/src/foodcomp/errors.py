"""Error hierarchy shared across the package.

Every exception carries a stable string code so the HTTP service and CLI
can map failures to documented error payloads without string matching.
"""
from __future__ import annotations

from typing import Any


class FoodcompError(Exception):
    """Base class; `code` is stable and documented, `details` is free-form."""

    code = "internal"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_payload(self) -> dict:
        return {"code": self.code, "message": self.message, "details": self.details}


class InvalidArgument(FoodcompError):
    code = "invalid-argument"


class UnknownNutrientError(FoodcompError):
    """Raised for nutrient labels absent from the canonical mapping table.

    Carries the offending label so callers can route it to the review queue.
    """

    code = "unknown-nutrient"

    def __init__(self, source: str, label: str):
        super().__init__(
            f"no canonical nutrient mapping for {label!r} (source {source})",
            source=source,
            label=label,
        )
        self.source = source
        self.label = label


class AdapterError(FoodcompError):
    code = "adapter-schema"


class InvalidRecordError(FoodcompError):
    code = "invalid-record"


class ConflictError(FoodcompError):
    code = "duplicate-key"


class FetchError(FoodcompError):
    code = "fetch-failed"


class NotFoundError(FoodcompError):
    code = "not-found"


class ParseError(FoodcompError):
    """Malformed numeric or token; `offset` is the character position."""

    code = "parse-error"

    def __init__(self, message: str, offset: int = 0, **details: Any):
        super().__init__(message, offset=offset, **details)
        self.offset = offset


class EmptyInputError(FoodcompError):
    code = "empty-input"


class NoConversionError(FoodcompError):
    code = "no-conversion"


class CycleError(FoodcompError):
    code = "rule-cycle"


class UnresolvedWeightError(FoodcompError):
    code = "unresolved-weight"


class BackendUnavailable(FoodcompError):
    code = "backend-unavailable"


class InvalidModelOutput(FoodcompError):
    code = "invalid-model-output"


class UnparseableRecipe(FoodcompError):
    code = "unparseable-recipe"


class EmptyCompositionError(FoodcompError):
    code = "empty-composition"


class InvalidProfile(FoodcompError):
    code = "invalid-profile"
