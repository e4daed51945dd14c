/** Shapes of the JSON documents exchanged with the review server. */

/** One entry in the recipe listing at `GET /api/recipes`. */
export interface RecipeSummary {
  id: string;
  ingredients: string[];
  annotated: boolean;
}

/** A single action applied to an ingredient on its way to the goal. */
export interface ProgressStep {
  motion: string;
  states: string[];
  location?: string;
}

/** Everything that happens to one ingredient, in order. */
export interface ProgressLine {
  ingredient: string;
  initial_state: string;
  steps: ProgressStep[];
  substituted?: boolean;
  confidence?: number;
}

/** The document behind `GET /api/recipes/{id}/progress`. */
export interface ProgressDoc {
  lines: ProgressLine[];
}

/** A reviewer's verdict for one ingredient: wrong, partial, or correct. */
export type Score = 0 | 1 | 2;

/** Stored reviewer scores for one recipe. */
export interface AnnotationDoc {
  recipe_id: string;
  scores: Record<string, Score>;
}

export function isScore(value: unknown): value is Score {
  return value === 0 || value === 1 || value === 2;
}
