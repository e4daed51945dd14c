/** DOM construction for the review page. */

import { formatPercent } from "./correctness.js";
import type { ReviewSession } from "./session.js";
import type { ProgressLine, RecipeSummary, Score } from "./types.js";

export const SCORE_LABELS: Record<Score, string> = {
  0: "0 · wrong",
  1: "1 · partial",
  2: "2 · correct",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

/** Sidebar listing every reviewable recipe, marking the active one. */
export function renderRecipeList(
  recipes: RecipeSummary[],
  activeId: string | null,
  onSelect: (recipeId: string) => void,
): HTMLElement {
  const list = el("ul", "recipe-list");
  for (const recipe of recipes) {
    const item = el("li");
    const button = el("button", "recipe-link", recipe.id);
    button.type = "button";
    if (recipe.id === activeId) {
      button.classList.add("active");
    }
    button.addEventListener("click", () => onSelect(recipe.id));
    item.appendChild(button);
    if (recipe.annotated) {
      item.appendChild(el("span", "badge badge-done", "reviewed"));
    }
    list.appendChild(item);
  }
  if (recipes.length === 0) {
    const empty = el("li", "empty", "no recipes found in the results directory");
    list.appendChild(empty);
  }
  return list;
}

/** One scoring block: the ingredient's steps plus its 0/1/2 buttons. */
function renderLine(
  line: ProgressLine,
  session: ReviewSession,
  onScore: (ingredient: string, value: Score) => void,
): HTMLElement {
  const block = el("section", "ingredient");

  const heading = el("h3");
  heading.appendChild(el("span", "ingredient-name", line.ingredient));
  heading.appendChild(el("span", "initial-state", `[${line.initial_state}]`));
  if (line.substituted) {
    const note =
      line.confidence !== undefined
        ? `substituted · ${line.confidence.toFixed(1)}%`
        : "substituted";
    heading.appendChild(el("span", "badge badge-sub", note));
  }
  block.appendChild(heading);

  // Color code matching the rest of the tooling: motions red, states
  // green, objects (ingredient names, locations) in the default ink.
  const steps = el("ol", "steps");
  for (const step of line.steps) {
    const item = el("li", "step");
    item.appendChild(el("span", "motion", step.motion));
    item.appendChild(document.createTextNode(" -> "));
    item.appendChild(el("span", "states", step.states.length > 0 ? step.states.join(", ") : "-"));
    if (step.location) {
      item.appendChild(document.createTextNode(" @ "));
      item.appendChild(el("span", "where", step.location));
    }
    steps.appendChild(item);
  }
  block.appendChild(steps);

  const controls = el("div", "score-buttons");
  const current = session.getScore(line.ingredient);
  for (const value of [0, 1, 2] as const) {
    const button = el("button", "score", SCORE_LABELS[value]);
    button.type = "button";
    button.dataset.ingredient = line.ingredient;
    button.dataset.value = String(value);
    button.setAttribute("aria-pressed", String(current === value));
    if (current === value) {
      button.classList.add("selected");
    }
    button.addEventListener("click", () => onScore(line.ingredient, value));
    controls.appendChild(button);
  }
  block.appendChild(controls);
  return block;
}

/** The main panel: every ingredient block for the selected recipe. */
export function renderProgress(
  lines: ProgressLine[],
  session: ReviewSession,
  onScore: (ingredient: string, value: Score) => void,
): HTMLElement {
  const panel = el("div", "progress-panel");
  for (const line of lines) {
    panel.appendChild(renderLine(line, session, onScore));
  }
  return panel;
}

/** Status strip: completion count, live correctness, unsaved marker. */
export function renderStatus(session: ReviewSession, saving: boolean): HTMLElement {
  const bar = el("div", "status");
  const percent = session.percent();
  if (percent !== null) {
    bar.appendChild(el("span", "percent", `correctness ${formatPercent(percent)}%`));
  } else {
    bar.appendChild(
      el("span", "progress-count", `${session.scoredCount}/${session.ingredients.length} scored`),
    );
  }
  if (saving) {
    bar.appendChild(el("span", "badge", "saving…"));
  } else if (session.isDirty) {
    bar.appendChild(el("span", "badge badge-dirty", "unsaved changes"));
  }
  return bar;
}

/** Banner for transport or validation errors, empty when message is null. */
export function renderError(message: string | null): HTMLElement {
  const banner = el("div", "error-banner");
  if (message) {
    banner.textContent = message;
  } else {
    banner.classList.add("hidden");
  }
  return banner;
}
