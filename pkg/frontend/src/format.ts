// Display formatting only. Amounts arrive from the service as decimal
// strings; everything here is string shaping (padding, labels) so the
// client never computes on nutrient values.

const NUTRIENT_LABELS: Record<string, string> = {
  energy_kcal: "Energy (kcal)",
  protein_g: "Protein (g)",
  carbohydrate_g: "Carbohydrate (g)",
  total_fat_g: "Total fat (g)",
  total_fiber_g: "Fiber (g)",
  free_sugar_g: "Free sugar (g)",
  added_sugar_g: "Added sugar (g)",
  sodium_mg: "Sodium (mg)",
  potassium_mg: "Potassium (mg)",
  calcium_mg: "Calcium (mg)",
  iron_mg: "Iron (mg)",
  cholesterol_mg: "Cholesterol (mg)",
  saturated_fat_g: "Saturated fat (g)",
  vitamin_c_mg: "Vitamin C (mg)",
  folate_ug: "Folate (µg)",
  total_weight_g: "Total weight (g)",
};

export function nutrientLabel(id: string): string {
  return NUTRIENT_LABELS[id] ?? id;
}

// Fixed two decimals for numeric cells, by string manipulation.
export function amount(value: string | number | null | undefined): string {
  if (value === null || value === undefined || value === "") {
    return "–";
  }
  const text = String(value);
  if (!/^-?\d+(\.\d+)?$/.test(text)) {
    return text; // exact fractions like "1/3" render verbatim
  }
  const [whole, decimals = ""] = text.split(".");
  return `${whole}.${(decimals + "00").slice(0, 2)}`;
}

export function completenessBadge(value: string | number | undefined): {
  label: string;
  full: boolean;
} {
  if (value === undefined) {
    return { label: "no data", full: false };
  }
  const text = String(value);
  if (text === "1") {
    return { label: "complete", full: true };
  }
  return { label: `${text} of ingredients known`, full: false };
}

export function servingsLabel(servings: string | number, assumed: boolean): string {
  return assumed ? `${servings} (assumed)` : String(servings);
}
