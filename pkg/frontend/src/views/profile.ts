// Profile entry: anthropometrics, activity, practices, allergies, and
// the 24-hour recall list. Lives in local storage only.

import type { UserProfile } from "../api-types.js";
import { el } from "../dom.js";

const PRACTICES = [
  "vegetarian",
  "vegan",
  "eggetarian",
  "pescatarian",
  "jain-friendly",
  "no-onion-no-garlic",
  "plant-based",
];
const ALLERGIES = [
  "dairy",
  "egg",
  "peanuts",
  "tree-nuts",
  "gluten",
  "soy",
  "fish",
  "shellfish",
];
const STAGES = ["adult", "adolescent", "elderly", "pregnancy", "lactation", "child", "infant"];
const ACTIVITY = ["sedentary", "light", "moderate", "active", "very_active"];
const GOALS = ["maintain", "lose", "gain"];

function numberField(
  label: string,
  name: string,
  value: number,
  onChange: (value: number) => void,
): HTMLElement {
  const input = el("input", {
    type: "number",
    id: `profile-${name}`,
    name,
    value: String(value),
    min: "1",
    step: "any",
  }) as HTMLInputElement;
  input.addEventListener("change", () => onChange(Number(input.value)));
  return el("label", { for: `profile-${name}` }, [label, input]);
}

function selectField(
  label: string,
  name: string,
  options: string[],
  value: string,
  onChange: (value: string) => void,
): HTMLElement {
  const select = el("select", { id: `profile-${name}`, name }) as HTMLSelectElement;
  for (const option of options) {
    const node = el("option", { value: option }, [option]) as HTMLOptionElement;
    node.selected = option === value;
    select.append(node);
  }
  select.addEventListener("change", () => onChange(select.value));
  return el("label", { for: `profile-${name}` }, [label, select]);
}

function checkboxGroup(
  legend: string,
  options: string[],
  selected: string[],
  onChange: (selected: string[]) => void,
): HTMLElement {
  const group = el("fieldset", {}, [el("legend", {}, [legend])]);
  for (const option of options) {
    const box = el("input", { type: "checkbox", value: option }) as HTMLInputElement;
    box.checked = selected.includes(option);
    box.addEventListener("change", () => {
      const next = options.filter((candidate) =>
        candidate === option ? box.checked : selected.includes(candidate),
      );
      onChange(next);
    });
    group.append(el("label", { class: "inline" }, [box, option]));
  }
  return group;
}

export function renderProfile(
  profile: UserProfile,
  recallTitles: Record<string, string>,
  onUpdate: (patch: Partial<UserProfile>) => void,
  onRemoveRecall: (recipeId: string) => void,
): HTMLElement {
  const root = el("section", { class: "profile" });
  root.append(el("h2", {}, ["Profile"]));
  const form = el("form", { class: "profile-form" });
  form.addEventListener("submit", (event) => event.preventDefault());
  form.append(
    numberField("Age (years)", "age", profile.age_years, (v) => onUpdate({ age_years: v })),
    selectField("Sex", "sex", ["male", "female"], profile.sex, (v) =>
      onUpdate({ sex: v as UserProfile["sex"] }),
    ),
    numberField("Weight (kg)", "weight", profile.weight_kg, (v) => onUpdate({ weight_kg: v })),
    numberField("Height (cm)", "height", profile.height_cm, (v) => onUpdate({ height_cm: v })),
    selectField("Stage", "stage", STAGES, profile.stage ?? "adult", (v) =>
      onUpdate({ stage: v as UserProfile["stage"] }),
    ),
    selectField(
      "Activity",
      "activity",
      ACTIVITY,
      profile.activity_level ?? "sedentary",
      (v) => onUpdate({ activity_level: v as UserProfile["activity_level"] }),
    ),
    selectField("Weight goal", "goal", GOALS, profile.weight_goal ?? "maintain", (v) =>
      onUpdate({ weight_goal: v as UserProfile["weight_goal"] }),
    ),
    checkboxGroup("Dietary practices", PRACTICES, profile.dietary_practices ?? [], (v) =>
      onUpdate({ dietary_practices: v }),
    ),
    checkboxGroup("Allergies", ALLERGIES, profile.allergies ?? [], (v) =>
      onUpdate({ allergies: v }),
    ),
  );
  root.append(form);

  root.append(el("h3", {}, ["24-hour recall"]));
  const recall = profile.recall ?? [];
  if (recall.length === 0) {
    root.append(el("p", { class: "empty-state" }, ["Nothing recorded yet; add recipes from the recommendations view."]));
  } else {
    const list = el("ul", { class: "recall" });
    for (const entry of recall) {
      const remove = el("button", { type: "button" }, ["remove"]);
      remove.addEventListener("click", () => onRemoveRecall(entry.recipe_id));
      list.append(
        el("li", {}, [
          `${recallTitles[entry.recipe_id] ?? entry.recipe_id} × ${entry.portions ?? 1} `,
          remove,
        ]),
      );
    }
    root.append(list);
  }
  return root;
}
