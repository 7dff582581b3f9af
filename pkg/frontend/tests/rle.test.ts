import { describe, expect, it } from "vitest";

import { decodeRle, maskToOverlay } from "../src/rle.js";

describe("rle decoding", () => {
  it("expands runs over row-major order", () => {
    const mask = decodeRle([[0, 2], [5, 1]], 3, 2);
    expect(Array.from(mask)).toEqual([1, 1, 0, 0, 0, 1]);
  });

  it("handles empty and full masks", () => {
    expect(Array.from(decodeRle([], 2, 2))).toEqual([0, 0, 0, 0]);
    expect(Array.from(decodeRle([[0, 4]], 2, 2))).toEqual([1, 1, 1, 1]);
  });

  it("rejects runs leaving the image", () => {
    expect(() => decodeRle([[3, 5]], 2, 2)).toThrow(/leaves/);
  });

  it("paints only foreground pixels into the overlay", () => {
    const overlay = maskToOverlay(Uint8Array.from([0, 1]), [10, 20, 30, 40]);
    expect(Array.from(overlay)).toEqual([0, 0, 0, 0, 10, 20, 30, 40]);
  });
});
