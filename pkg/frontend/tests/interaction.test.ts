import { describe, expect, it, vi } from "vitest";

import { serialize, startStroke, emptyState } from "../src/annotation.js";
import { ApiError, createClient } from "../src/api.js";
import { decodeRle } from "../src/rle.js";
import { beginSubmit, createMachine, endSubmit } from "../src/state.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("interactive loop", () => {
  it("upload -> scribble -> submit -> overlay data", async () => {
    const fetcher = vi.fn(async (url: RequestInfo | URL) => {
      const path = String(url);
      if (path.includes("/sessions/") && path.endsWith("/segment")) {
        return jsonResponse({
          mask_rle: [[0, 4]],
          width: 2,
          height: 2,
          diagnostics: { clusters: [], output_meaning: "foreground", timing_ms: 1 },
        });
      }
      return jsonResponse({ id: "s1", width: 2, height: 2, superpixel_count: 4, boundaries: [] });
    });
    const api = createClient("", fetcher as unknown as typeof fetch);

    const session = await api.createSession(new Blob([new Uint8Array([1])]));
    expect(session.id).toBe("s1");

    const doc = serialize(startStroke(emptyState(), 1, 1));
    expect(doc).not.toBeNull();
    const response = await api.segment(session.id, doc!, { sigma_mode: "single", sigma: 0.15 });
    const mask = decodeRle(response.mask_rle, response.width, response.height);
    expect(Array.from(mask)).toEqual([1, 1, 1, 1]);
  });

  it("second submit while one is in flight is blocked client-side", () => {
    const machine = createMachine();
    expect(beginSubmit(machine)).toBe(true);
    expect(beginSubmit(machine)).toBe(false); // no concurrent submits
    endSubmit(machine);
    expect(beginSubmit(machine)).toBe(true);
  });

  it("a 409 from the server surfaces as an ApiError and loses no state", async () => {
    const fetcher = vi.fn(async () =>
      jsonResponse({ detail: "a segmentation is already running for this session" }, 409)
    );
    const api = createClient("", fetcher as unknown as typeof fetch);
    const machine = createMachine();
    const state = startStroke(emptyState(), 3, 3);
    const doc = serialize(state)!;

    expect(beginSubmit(machine)).toBe(true);
    let caught: ApiError | null = null;
    try {
      await api.segment("s1", doc, { sigma_mode: "single", sigma: 0.15 });
    } catch (err) {
      caught = err as ApiError;
    } finally {
      endSubmit(machine);
    }
    expect(caught).toBeInstanceOf(ApiError);
    expect(caught!.status).toBe(409);
    // the annotation state is untouched and resubmittable
    expect(serialize(state)).toEqual(doc);
    expect(beginSubmit(machine)).toBe(true);
  });

  it("a 422 carries the server detail", async () => {
    const fetcher = vi.fn(async () => jsonResponse({ detail: "annotation touches no superpixels" }, 422));
    const api = createClient("", fetcher as unknown as typeof fetch);
    await expect(
      api.segment("s1", serialize(startStroke(emptyState(), 1, 1))!, { sigma_mode: "single" })
    ).rejects.toMatchObject({ status: 422, message: "annotation touches no superpixels" });
  });
});
