/** Page bootstrap: load recipes, wire scoring, save annotations. */

import { ApiError, ReviewApi } from "./api.js";
import { renderError, renderProgress, renderRecipeList, renderStatus } from "./render.js";
import { ReviewSession } from "./session.js";
import type { ProgressDoc, RecipeSummary, Score } from "./types.js";

interface PageState {
  recipes: RecipeSummary[];
  activeId: string | null;
  progress: ProgressDoc | null;
  session: ReviewSession | null;
  saving: boolean;
  error: string | null;
}

const api = new ReviewApi();
const state: PageState = {
  recipes: [],
  activeId: null,
  progress: null,
  session: null,
  saving: false,
  error: null,
};

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing page element #${id}`);
  }
  return node;
}

function redraw(): void {
  const sidebar = byId("sidebar");
  sidebar.replaceChildren(renderRecipeList(state.recipes, state.activeId, selectRecipe));

  const banner = byId("errors");
  banner.replaceChildren(renderError(state.error));

  const main = byId("review");
  if (!state.session || !state.progress) {
    main.replaceChildren();
    return;
  }
  const title = document.createElement("h2");
  title.textContent = state.activeId ?? "";
  const save = document.createElement("button");
  save.type = "button";
  save.id = "save";
  save.textContent = "Save scores";
  save.disabled = state.saving || !state.session.isDirty || !state.session.isComplete;
  save.title = state.session.isComplete ? "" : "score every ingredient first";
  save.addEventListener("click", () => void saveScores());
  main.replaceChildren(
    title,
    renderStatus(state.session, state.saving),
    renderProgress(state.progress.lines, state.session, setScore),
    save,
  );
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `server rejected the request: ${error.message}`;
  }
  return error instanceof Error ? error.message : String(error);
}

async function loadRecipes(): Promise<void> {
  state.recipes = await api.listRecipes();
  if (state.activeId === null && state.recipes.length > 0) {
    await selectRecipe(state.recipes[0].id);
    return;
  }
  redraw();
}

async function selectRecipe(recipeId: string): Promise<void> {
  if (
    state.session &&
    state.session.recipeId !== recipeId &&
    state.session.isDirty &&
    !window.confirm("Discard unsaved scores?")
  ) {
    return;
  }
  try {
    const [progress, annotations] = await Promise.all([
      api.getProgress(recipeId),
      api.getAnnotations(recipeId),
    ]);
    state.activeId = recipeId;
    state.progress = progress;
    state.session = new ReviewSession(recipeId, progress, annotations);
    state.error = null;
  } catch (error) {
    state.error = describe(error);
  }
  redraw();
}

function setScore(ingredient: string, value: Score): void {
  if (!state.session) {
    return;
  }
  state.session.setScore(ingredient, value);
  state.error = null;
  redraw();
}

async function saveScores(): Promise<void> {
  if (!state.session || state.saving) {
    return;
  }
  state.saving = true;
  redraw();
  try {
    const saved = await api.putAnnotations(state.session.recipeId, state.session.payload());
    state.session.markSaved(saved);
    state.error = null;
    state.recipes = await api.listRecipes();
  } catch (error) {
    state.error = describe(error);
  } finally {
    state.saving = false;
    redraw();
  }
}

window.addEventListener("beforeunload", (event) => {
  if (state.session?.isDirty) {
    event.preventDefault();
  }
});

void loadRecipes().catch((error) => {
  state.error = describe(error);
  redraw();
});
