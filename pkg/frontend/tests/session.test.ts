import { describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { correctnessPercent } from "../src/correctness.js";
import { ReviewSession } from "../src/session.js";
import type { ProgressDoc } from "../src/types.js";
import { makeFakeServer } from "./fakeServer.js";

const DEMO_PROGRESS: ProgressDoc = {
  lines: [
    {
      ingredient: "onion",
      initial_state: "whole",
      steps: [
        { motion: "slice", states: ["sliced"], location: "cutting board" },
        { motion: "mix", states: ["mixed"], location: "bowl" },
      ],
    },
    {
      ingredient: "cucumber",
      initial_state: "whole",
      steps: [{ motion: "mix", states: ["mixed"], location: "bowl" }],
    },
    {
      ingredient: "prunes",
      initial_state: "whole",
      steps: [{ motion: "mix", states: ["mixed"], location: "bowl" }],
      substituted: true,
      confidence: 94.0,
    },
  ],
};

describe("ReviewSession", () => {
  it("starts empty when the recipe has no stored annotations", () => {
    const session = new ReviewSession("demo-salad", DEMO_PROGRESS);
    expect(session.ingredients).toEqual(["onion", "cucumber", "prunes"]);
    expect(session.scoredCount).toBe(0);
    expect(session.isComplete).toBe(false);
    expect(session.percent()).toBeNull();
    expect(session.isDirty).toBe(false);
    expect(session.payload()).toEqual({});
  });

  it("adopts stored annotations as clean state", () => {
    const session = new ReviewSession("demo-salad", DEMO_PROGRESS, {
      recipe_id: "demo-salad",
      scores: { onion: 2, prunes: 1 },
    });
    expect(session.getScore("onion")).toBe(2);
    expect(session.getScore("cucumber")).toBeUndefined();
    expect(session.scoredCount).toBe(2);
    expect(session.isDirty).toBe(false);
  });

  it("ignores stored scores for ingredients the recipe no longer has", () => {
    const session = new ReviewSession("demo-salad", DEMO_PROGRESS, {
      recipe_id: "demo-salad",
      scores: { onion: 2, lettuce: 1 } as never,
    });
    expect(session.scoredCount).toBe(1);
    expect(session.payload()).toEqual({ onion: 2 });
  });

  it("rejects scores for unknown ingredients", () => {
    const session = new ReviewSession("demo-salad", DEMO_PROGRESS);
    expect(() => session.setScore("lettuce", 2)).toThrow(/unknown ingredient 'lettuce'/);
  });

  it("rejects a malformed progress document with a readable message", () => {
    expect(() => new ReviewSession("demo-salad", {} as never)).toThrow(
      /progress document for 'demo-salad': expected a 'lines' field/,
    );
    expect(() => new ReviewSession("demo-salad", null as never)).toThrow(/'lines' field/);
  });

  it("tracks dirtiness through edits, clears, and saves", () => {
    const session = new ReviewSession("demo-salad", DEMO_PROGRESS, {
      recipe_id: "demo-salad",
      scores: { onion: 2 },
    });
    expect(session.isDirty).toBe(false);
    session.setScore("onion", 1);
    expect(session.isDirty).toBe(true);
    session.setScore("onion", 2);
    expect(session.isDirty).toBe(false);
    session.clearScore("onion");
    expect(session.isDirty).toBe(true);
  });

  it("reports the live percentage only once every ingredient is scored", () => {
    const session = new ReviewSession("demo-salad", DEMO_PROGRESS);
    session.setScore("onion", 2);
    session.setScore("cucumber", 2);
    expect(session.percent()).toBeNull();
    session.setScore("prunes", 1);
    expect(session.percent()).toBe(correctnessPercent([2, 2, 1], 3));
    expect(session.percent()).toBe(83.33);
  });
});

describe("scoring round trip against the API", () => {
  it("saves scores and reproduces them exactly on reload", async () => {
    const { fetchImpl } = makeFakeServer({ "demo-salad": DEMO_PROGRESS });
    const api = new ReviewApi("", fetchImpl);

    const before = await api.listRecipes();
    expect(before).toEqual([
      { id: "demo-salad", ingredients: ["onion", "cucumber", "prunes"], annotated: false },
    ]);

    // First visit: score everything and save.
    const progress = await api.getProgress("demo-salad");
    const stored = await api.getAnnotations("demo-salad");
    const session = new ReviewSession("demo-salad", progress, stored);
    session.setScore("onion", 2);
    session.setScore("cucumber", 2);
    session.setScore("prunes", 1);
    expect(session.percent()).toBe(83.33);

    const saved = await api.putAnnotations(session.recipeId, session.payload());
    expect(saved).toEqual({
      recipe_id: "demo-salad",
      scores: { cucumber: 2, onion: 2, prunes: 1 },
    });
    session.markSaved(saved);
    expect(session.isDirty).toBe(false);

    // Fresh page load: the listing flips to annotated and the scores,
    // percentage, and clean state all come back identical.
    const after = await api.listRecipes();
    expect(after[0].annotated).toBe(true);

    const reloaded = new ReviewSession(
      "demo-salad",
      await api.getProgress("demo-salad"),
      await api.getAnnotations("demo-salad"),
    );
    expect(reloaded.getScore("onion")).toBe(2);
    expect(reloaded.getScore("cucumber")).toBe(2);
    expect(reloaded.getScore("prunes")).toBe(1);
    expect(reloaded.isDirty).toBe(false);
    expect(reloaded.percent()).toBe(83.33);
    expect(reloaded.payload()).toEqual(session.payload());
  });

  it("keeps partial reviews partial across reloads", async () => {
    const { fetchImpl } = makeFakeServer({ "demo-salad": DEMO_PROGRESS });
    const api = new ReviewApi("", fetchImpl);

    const session = new ReviewSession("demo-salad", await api.getProgress("demo-salad"));
    session.setScore("onion", 1);
    session.markSaved(await api.putAnnotations("demo-salad", session.payload()));

    const reloaded = new ReviewSession(
      "demo-salad",
      await api.getProgress("demo-salad"),
      await api.getAnnotations("demo-salad"),
    );
    expect(reloaded.scoredCount).toBe(1);
    expect(reloaded.getScore("onion")).toBe(1);
    expect(reloaded.percent()).toBeNull();
  });

  it("propagates the server's rejection of out-of-recipe scores", async () => {
    const { fetchImpl, store } = makeFakeServer({ "demo-salad": DEMO_PROGRESS });
    const api = new ReviewApi("", fetchImpl);

    await expect(api.putAnnotations("demo-salad", { lettuce: 2 } as never)).rejects.toMatchObject({
      status: 400,
      message: "scores reference ingredients outside this recipe: lettuce",
    });
    expect(store.has("demo-salad")).toBe(false);
  });
});
