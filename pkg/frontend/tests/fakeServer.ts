// In-memory stand-in for the review server, matching its routes, status
// codes, and error texts closely enough to exercise the client end to end.
import type { FetchLike } from "../src/api.js";
import type { ProgressDoc } from "../src/types.js";

export interface FakeServer {
  fetchImpl: FetchLike;
  /** Saved annotation scores by recipe id, as the server would store them. */
  store: Map<string, Record<string, number>>;
}

export function makeFakeServer(recipes: Record<string, ProgressDoc>): FakeServer {
  const store = new Map<string, Record<string, number>>();

  const json = (payload: unknown, status = 200): Response =>
    new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  const fetchImpl: FetchLike = (input, init) => {
    const method = init?.method ?? "GET";
    const respond = (): Response => {
      if (method === "GET" && input === "/api/recipes") {
        const listing = Object.keys(recipes)
          .sort()
          .map((id) => ({
            id,
            ingredients: recipes[id].lines.map((line) => line.ingredient),
            annotated: store.has(id),
          }));
        return json(listing);
      }
      const match = /^\/api\/recipes\/([^/]+)\/(progress|annotations)$/.exec(input);
      if (!match) {
        return json({ error: `no such endpoint: ${input}` }, 404);
      }
      const id = decodeURIComponent(match[1]);
      const resource = match[2];
      const progress = recipes[id];
      if (!progress) {
        return json({ error: `not found: ${id}` }, 404);
      }
      if (method === "GET" && resource === "progress") {
        return json(progress);
      }
      if (method === "GET" && resource === "annotations") {
        return json({ recipe_id: id, scores: store.get(id) ?? {} });
      }
      if (method === "PUT" && resource === "annotations") {
        const body: unknown = JSON.parse((init?.body as string) ?? "null");
        const scores =
          body !== null && typeof body === "object" && "scores" in body
            ? (body as { scores: unknown }).scores
            : undefined;
        if (scores === null || typeof scores !== "object") {
          return json({ error: "$.scores: expected an object" }, 400);
        }
        const allowed = new Set(progress.lines.map((line) => line.ingredient));
        const clean: Record<string, number> = {};
        for (const [name, value] of Object.entries(scores as Record<string, unknown>)) {
          if (value !== 0 && value !== 1 && value !== 2) {
            return json(
              { error: `$.scores.${name}: score must be 0, 1, or 2, got ${JSON.stringify(value)}` },
              400,
            );
          }
          if (!allowed.has(name)) {
            return json(
              { error: `scores reference ingredients outside this recipe: ${name}` },
              400,
            );
          }
          clean[name] = value;
        }
        const sorted: Record<string, number> = {};
        for (const name of Object.keys(clean).sort()) {
          sorted[name] = clean[name];
        }
        store.set(id, sorted);
        return json({ recipe_id: id, scores: sorted });
      }
      return json({ error: `no such endpoint: ${input}` }, 404);
    };
    return Promise.resolve(respond());
  };

  return { fetchImpl, store };
}
