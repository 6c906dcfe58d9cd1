// Generated from ../schemas/*.schema.json by scripts/generate-types.mjs.
// Do not edit by hand; run `npm run generate-types`.

export interface AnalyzeRequest {
  "text"?: string;
  "title"?: string;
  "servings"?: number;
  "lines"?: Array<string>;
}

export interface ApiError {
  "code": string;
  "message": string;
  "details"?: Record<string, unknown>;
}

export interface ComparisonTable {
  "dish": string;
  "nutrient": string;
  "order": "asc" | "desc";
  "columns": Array<string>;
  "rows": Array<{
    "recipe_id": string;
    "title": string;
    "servings": number | string;
    "per_serving": Record<string, string | null>;
  }>;
}

export interface CompositionReport {
  "recipe_id": string;
  "title": string;
  "total": Record<string, string>;
  "per_serving": Record<string, string>;
  "per_100g": Record<string, string>;
  "total_weight_g": string;
  "servings": number | string;
  "servings_assumed": boolean;
  "completeness": Record<string, number | string>;
  "line_breakdown": Array<{
    "index": number;
    "source_text": string;
    "ingredient"?: string | null;
    "matched_key"?: string | null;
    "match_method": "exact" | "variant" | "alias" | "fuzzy" | "external" | "resolver" | "unresolved";
    "grams"?: string | null;
    "weight_method"?: string | null;
    "rule_trace"?: Array<string>;
    "llm_flagged": boolean;
    "error"?: string | null;
  }>;
  "provenance_summary": Record<string, number>;
  "unresolved": Array<string>;
  "fct_version"?: string;
  "tags"?: {
    "tags": Array<string>;
    "tentative": boolean;
    "uncategorized"?: Array<string>;
  };
}

export interface IngestJob {
  "job_id": string;
  "status": "queued" | "running" | "done" | "failed";
  "recipe_id"?: string | null;
  "error"?: string | null;
}

export interface Recipe {
  "id": string;
  "title": string;
  "aliases"?: Array<Array<string>>;
  "cuisine_tags"?: Array<string>;
  "servings"?: number | string | null;
  "instructions"?: Array<string>;
  "lines": Array<{
    "parsed": {
      "ingredient": string;
      "form"?: string | null;
      "process"?: string | null;
      "size"?: string | null;
      "quantity"?: number | string | null;
      "unit"?: string | null;
      "weight_in_grams"?: number | string | null;
      "llm_estimated_weight_in_grams"?: number | string | null;
      "source_text"?: string;
    } | null;
    "weight": {
      "grams": string;
      "method": "EXPLICIT" | "UNIT_RULE" | "VOLUME_DENSITY" | "RESOLVER_ESTIMATE";
      "rule_trace"?: Array<string>;
      "estimated_grams"?: string | null;
      "llm_estimated"?: boolean;
    } | null;
    "error": string | null;
  }>;
  "source"?: Record<string, unknown>;
  "dietary_tags"?: Array<string>;
  "latent_links"?: Array<Record<string, unknown>>;
  "content_hash"?: string;
}

export interface RecommendationResponse {
  "recommendations": Array<{
    "recipe_id": string;
    "title": string;
    "score": number;
    "per_serving": Record<string, string | null>;
    "tags": Array<string>;
    "rationale": Array<string>;
  }>;
  "remaining_budget": Record<string, string>;
  "explanation"?: string;
}

export interface ReviewItems {
  "items": Array<{
    "id": string;
    "status": "pending" | "approved" | "rejected";
    "request": Record<string, unknown>;
    "result": Record<string, unknown>;
    "note"?: string;
    "created_at"?: string;
    "updated_at"?: string;
  }>;
}

export interface SearchResponse {
  "query": string;
  "results": Array<{
    "kind": "recipe" | "food";
    "id": string;
    "label": string;
    "score": number;
  }>;
}

export interface UserProfile {
  "age_years": number;
  "sex": "male" | "female";
  "weight_kg": number;
  "height_cm": number;
  "stage"?: "infant" | "child" | "adolescent" | "adult" | "elderly" | "pregnancy" | "lactation";
  "activity_level"?: "sedentary" | "light" | "moderate" | "active" | "very_active";
  "activities"?: Array<{
    "type": string;
    "duration_min"?: number;
    "frequency_per_week"?: number;
    "intensity"?: string;
    "calories_burned"?: number;
  }>;
  "dietary_practices"?: Array<string>;
  "allergies"?: Array<string>;
  "recall"?: Array<{
    "recipe_id": string;
    "portions"?: number;
  }>;
  "weight_goal"?: "maintain" | "lose" | "gain";
}
