"""Wire-format schemas for the HTTP service.

These dicts are the single source of truth; the committed files under
schemas/ are generated from them (scripts/dump_schemas.py) and consumed by
the exploration UI for client-type generation. A test keeps module and
files identical.
"""
SCHEMAS = {
    'analyze_request': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/analyze_request",
    "type": "object",
    "properties": {
        "text": {
            "type": "string"
        },
        "title": {
            "type": "string"
        },
        "servings": {
            "type": "number"
        },
        "lines": {
            "type": "array",
            "items": {
                "type": "string"
            },
            "minItems": 1
        }
    },
    "anyOf": [
        {
            "required": [
                "text"
            ]
        },
        {
            "required": [
                "lines"
            ]
        }
    ],
    "additionalProperties": False
},
    'api_error': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/api_error",
    "type": "object",
    "required": [
        "code",
        "message"
    ],
    "properties": {
        "code": {
            "type": "string"
        },
        "message": {
            "type": "string"
        },
        "details": {
            "type": "object"
        }
    },
    "additionalProperties": False
},
    'comparison_table': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/comparison_table",
    "type": "object",
    "required": [
        "dish",
        "nutrient",
        "order",
        "columns",
        "rows"
    ],
    "properties": {
        "dish": {
            "type": "string"
        },
        "nutrient": {
            "type": "string"
        },
        "order": {
            "enum": [
                "asc",
                "desc"
            ]
        },
        "columns": {
            "type": "array",
            "items": {
                "type": "string"
            }
        },
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "recipe_id",
                    "title",
                    "servings",
                    "per_serving"
                ],
                "properties": {
                    "recipe_id": {
                        "type": "string"
                    },
                    "title": {
                        "type": "string"
                    },
                    "servings": {
                        "type": [
                            "number",
                            "string"
                        ],
                        "description": "number, or exact fraction as 'p/q'"
                    },
                    "per_serving": {
                        "type": "object",
                        "additionalProperties": {
                            "type": [
                                "string",
                                "null"
                            ]
                        }
                    }
                },
                "additionalProperties": False
            }
        }
    },
    "additionalProperties": False
},
    'composition_report': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/composition_report",
    "type": "object",
    "required": [
        "recipe_id",
        "title",
        "total",
        "per_serving",
        "per_100g",
        "total_weight_g",
        "servings",
        "servings_assumed",
        "completeness",
        "line_breakdown",
        "provenance_summary",
        "unresolved"
    ],
    "properties": {
        "recipe_id": {
            "type": "string"
        },
        "title": {
            "type": "string"
        },
        "total": {
            "type": "object",
            "additionalProperties": {
                "type": "string",
                "description": "decimal amount rendered server-side"
            }
        },
        "per_serving": {
            "type": "object",
            "additionalProperties": {
                "type": "string",
                "description": "decimal amount rendered server-side"
            }
        },
        "per_100g": {
            "type": "object",
            "additionalProperties": {
                "type": "string",
                "description": "decimal amount rendered server-side"
            }
        },
        "total_weight_g": {
            "type": "string",
            "description": "decimal amount rendered server-side"
        },
        "servings": {
            "type": [
                "number",
                "string"
            ],
            "description": "number, or exact fraction as 'p/q'"
        },
        "servings_assumed": {
            "type": "boolean"
        },
        "completeness": {
            "type": "object",
            "additionalProperties": {
                "type": [
                    "number",
                    "string"
                ],
                "description": "number, or exact fraction as 'p/q'"
            }
        },
        "line_breakdown": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "index",
                    "source_text",
                    "match_method",
                    "llm_flagged"
                ],
                "properties": {
                    "index": {
                        "type": "integer"
                    },
                    "source_text": {
                        "type": "string"
                    },
                    "ingredient": {
                        "type": [
                            "string",
                            "null"
                        ]
                    },
                    "matched_key": {
                        "type": [
                            "string",
                            "null"
                        ]
                    },
                    "match_method": {
                        "enum": [
                            "exact",
                            "variant",
                            "alias",
                            "fuzzy",
                            "external",
                            "resolver",
                            "unresolved"
                        ]
                    },
                    "grams": {
                        "type": [
                            "string",
                            "null"
                        ]
                    },
                    "weight_method": {
                        "type": [
                            "string",
                            "null"
                        ]
                    },
                    "rule_trace": {
                        "type": "array",
                        "items": {
                            "type": "string"
                        }
                    },
                    "llm_flagged": {
                        "type": "boolean"
                    },
                    "error": {
                        "type": [
                            "string",
                            "null"
                        ]
                    }
                },
                "additionalProperties": False
            }
        },
        "provenance_summary": {
            "type": "object",
            "additionalProperties": {
                "type": "integer"
            }
        },
        "unresolved": {
            "type": "array",
            "items": {
                "type": "string"
            }
        },
        "fct_version": {
            "type": "string"
        },
        "tags": {
            "type": "object",
            "required": [
                "tags",
                "tentative"
            ],
            "properties": {
                "tags": {
                    "type": "array",
                    "items": {
                        "type": "string"
                    }
                },
                "tentative": {
                    "type": "boolean"
                },
                "uncategorized": {
                    "type": "array",
                    "items": {
                        "type": "string"
                    }
                }
            },
            "additionalProperties": False
        }
    },
    "additionalProperties": False
},
    'ingest_job': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/ingest_job",
    "type": "object",
    "required": [
        "job_id",
        "status"
    ],
    "properties": {
        "job_id": {
            "type": "string"
        },
        "status": {
            "enum": [
                "queued",
                "running",
                "done",
                "failed"
            ]
        },
        "recipe_id": {
            "type": [
                "string",
                "null"
            ]
        },
        "error": {
            "type": [
                "string",
                "null"
            ]
        }
    },
    "additionalProperties": False
},
    'recipe': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/recipe",
    "type": "object",
    "required": [
        "id",
        "title",
        "lines"
    ],
    "properties": {
        "id": {
            "type": "string"
        },
        "title": {
            "type": "string"
        },
        "aliases": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {
                    "type": "string"
                },
                "minItems": 2,
                "maxItems": 2
            }
        },
        "cuisine_tags": {
            "type": "array",
            "items": {
                "type": "string"
            }
        },
        "servings": {
            "type": [
                "number",
                "string",
                "null"
            ]
        },
        "instructions": {
            "type": "array",
            "items": {
                "type": "string"
            }
        },
        "lines": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": [
                    "parsed",
                    "weight",
                    "error"
                ],
                "properties": {
                    "parsed": {
                        "oneOf": [
                            {
                                "type": "object",
                                "required": [
                                    "ingredient"
                                ],
                                "properties": {
                                    "ingredient": {
                                        "type": "string"
                                    },
                                    "form": {
                                        "type": [
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "process": {
                                        "type": [
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "size": {
                                        "type": [
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "quantity": {
                                        "type": [
                                            "number",
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "unit": {
                                        "type": [
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "weight_in_grams": {
                                        "type": [
                                            "number",
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "llm_estimated_weight_in_grams": {
                                        "type": [
                                            "number",
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "source_text": {
                                        "type": "string"
                                    }
                                },
                                "additionalProperties": False
                            },
                            {
                                "type": "null"
                            }
                        ]
                    },
                    "weight": {
                        "oneOf": [
                            {
                                "type": "object",
                                "required": [
                                    "grams",
                                    "method"
                                ],
                                "properties": {
                                    "grams": {
                                        "type": "string"
                                    },
                                    "method": {
                                        "enum": [
                                            "EXPLICIT",
                                            "UNIT_RULE",
                                            "VOLUME_DENSITY",
                                            "RESOLVER_ESTIMATE"
                                        ]
                                    },
                                    "rule_trace": {
                                        "type": "array",
                                        "items": {
                                            "type": "string"
                                        }
                                    },
                                    "estimated_grams": {
                                        "type": [
                                            "string",
                                            "null"
                                        ]
                                    },
                                    "llm_estimated": {
                                        "type": "boolean"
                                    }
                                },
                                "additionalProperties": False
                            },
                            {
                                "type": "null"
                            }
                        ]
                    },
                    "error": {
                        "type": [
                            "string",
                            "null"
                        ]
                    }
                },
                "additionalProperties": False
            }
        },
        "source": {
            "type": "object"
        },
        "dietary_tags": {
            "type": "array",
            "items": {
                "type": "string"
            }
        },
        "latent_links": {
            "type": "array",
            "items": {
                "type": "object"
            }
        },
        "content_hash": {
            "type": "string"
        }
    },
    "additionalProperties": False
},
    'recommendation_response': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/recommendation_response",
    "type": "object",
    "required": [
        "recommendations",
        "remaining_budget"
    ],
    "properties": {
        "recommendations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "recipe_id",
                    "title",
                    "score",
                    "per_serving",
                    "tags",
                    "rationale"
                ],
                "properties": {
                    "recipe_id": {
                        "type": "string"
                    },
                    "title": {
                        "type": "string"
                    },
                    "score": {
                        "type": "number"
                    },
                    "per_serving": {
                        "type": "object",
                        "additionalProperties": {
                            "type": [
                                "string",
                                "null"
                            ]
                        }
                    },
                    "tags": {
                        "type": "array",
                        "items": {
                            "type": "string"
                        }
                    },
                    "rationale": {
                        "type": "array",
                        "items": {
                            "type": "string"
                        }
                    }
                },
                "additionalProperties": False
            }
        },
        "remaining_budget": {
            "type": "object",
            "additionalProperties": {
                "type": "string",
                "description": "decimal amount rendered server-side"
            }
        },
        "explanation": {
            "type": "string"
        }
    },
    "additionalProperties": False
},
    'review_items': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/review_items",
    "type": "object",
    "required": [
        "items"
    ],
    "properties": {
        "items": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "id",
                    "status",
                    "request",
                    "result"
                ],
                "properties": {
                    "id": {
                        "type": "string"
                    },
                    "status": {
                        "enum": [
                            "pending",
                            "approved",
                            "rejected"
                        ]
                    },
                    "request": {
                        "type": "object"
                    },
                    "result": {
                        "type": "object"
                    },
                    "note": {
                        "type": "string"
                    },
                    "created_at": {
                        "type": "string"
                    },
                    "updated_at": {
                        "type": "string"
                    }
                },
                "additionalProperties": False
            }
        }
    },
    "additionalProperties": False
},
    'search_response': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/search_response",
    "type": "object",
    "required": [
        "query",
        "results"
    ],
    "properties": {
        "query": {
            "type": "string"
        },
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "kind",
                    "id",
                    "label",
                    "score"
                ],
                "properties": {
                    "kind": {
                        "enum": [
                            "recipe",
                            "food"
                        ]
                    },
                    "id": {
                        "type": "string"
                    },
                    "label": {
                        "type": "string"
                    },
                    "score": {
                        "type": "number"
                    }
                },
                "additionalProperties": False
            }
        }
    },
    "additionalProperties": False
},
    'user_profile': {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "foodcomp/user_profile",
    "type": "object",
    "required": [
        "age_years",
        "sex",
        "weight_kg",
        "height_cm"
    ],
    "properties": {
        "age_years": {
            "type": "number"
        },
        "sex": {
            "enum": [
                "male",
                "female"
            ]
        },
        "weight_kg": {
            "type": "number"
        },
        "height_cm": {
            "type": "number"
        },
        "stage": {
            "enum": [
                "infant",
                "child",
                "adolescent",
                "adult",
                "elderly",
                "pregnancy",
                "lactation"
            ]
        },
        "activity_level": {
            "enum": [
                "sedentary",
                "light",
                "moderate",
                "active",
                "very_active"
            ]
        },
        "activities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "type"
                ],
                "properties": {
                    "type": {
                        "type": "string"
                    },
                    "duration_min": {
                        "type": "number"
                    },
                    "frequency_per_week": {
                        "type": "number"
                    },
                    "intensity": {
                        "type": "string"
                    },
                    "calories_burned": {
                        "type": "number"
                    }
                },
                "additionalProperties": False
            }
        },
        "dietary_practices": {
            "type": "array",
            "items": {
                "type": "string"
            }
        },
        "allergies": {
            "type": "array",
            "items": {
                "type": "string"
            }
        },
        "recall": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "recipe_id"
                ],
                "properties": {
                    "recipe_id": {
                        "type": "string"
                    },
                    "portions": {
                        "type": "number"
                    }
                },
                "additionalProperties": False
            }
        },
        "weight_goal": {
            "enum": [
                "maintain",
                "lose",
                "gain"
            ]
        }
    },
    "additionalProperties": False
},
}
