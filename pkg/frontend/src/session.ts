/** Mutable scoring state for the recipe currently under review. */

import { correctnessPercent } from "./correctness.js";
import { isScore } from "./types.js";
import type { AnnotationDoc, ProgressDoc, Score } from "./types.js";

export class ReviewSession {
  readonly recipeId: string;
  /** Ingredient names in progress order — the scoring checklist. */
  readonly ingredients: readonly string[];
  private readonly scores = new Map<string, Score>();
  private saved = new Map<string, Score>();

  constructor(recipeId: string, progress: ProgressDoc, annotations?: AnnotationDoc) {
    this.recipeId = recipeId;
    if (!progress || !Array.isArray(progress.lines)) {
      throw new Error(`progress document for '${recipeId}': expected a 'lines' field`);
    }
    this.ingredients = progress.lines.map((line) => line.ingredient);
    if (annotations) {
      for (const [name, value] of Object.entries(annotations.scores)) {
        if (this.ingredients.includes(name) && isScore(value)) {
          this.scores.set(name, value);
          this.saved.set(name, value);
        }
      }
    }
  }

  setScore(ingredient: string, value: Score): void {
    if (!this.ingredients.includes(ingredient)) {
      throw new RangeError(`unknown ingredient '${ingredient}'`);
    }
    if (!isScore(value)) {
      throw new RangeError(`scores must be 0, 1 or 2, got ${value}`);
    }
    this.scores.set(ingredient, value);
  }

  clearScore(ingredient: string): void {
    this.scores.delete(ingredient);
  }

  getScore(ingredient: string): Score | undefined {
    return this.scores.get(ingredient);
  }

  get scoredCount(): number {
    return this.scores.size;
  }

  get isComplete(): boolean {
    return this.ingredients.every((name) => this.scores.has(name));
  }

  /** True when the working scores differ from what the server has stored. */
  get isDirty(): boolean {
    if (this.scores.size !== this.saved.size) {
      return true;
    }
    for (const [name, value] of this.scores) {
      if (this.saved.get(name) !== value) {
        return true;
      }
    }
    return false;
  }

  /**
   * Correctness percentage for the current scores, or null until every
   * ingredient has one.  Matches the server-side report figure exactly.
   */
  percent(): number | null {
    if (!this.isComplete || this.ingredients.length === 0) {
      return null;
    }
    const values = this.ingredients.map((name) => this.scores.get(name) as Score);
    return correctnessPercent(values, this.ingredients.length);
  }

  /** Scores in the shape `PUT /api/recipes/{id}/annotations` expects. */
  payload(): Record<string, Score> {
    const body: Record<string, Score> = {};
    for (const name of this.ingredients) {
      const value = this.scores.get(name);
      if (value !== undefined) {
        body[name] = value;
      }
    }
    return body;
  }

  /** Adopt the server's saved document as the new clean state. */
  markSaved(doc: AnnotationDoc): void {
    this.saved = new Map();
    for (const [name, value] of Object.entries(doc.scores)) {
      if (isScore(value)) {
        this.saved.set(name, value);
      }
    }
  }
}
