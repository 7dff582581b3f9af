/**
 * Emit the golden annotation fixtures: 20 documents produced by the UI
 * serializer, exercising every tool. The segmentation service must map
 * each one to the same constraint set as a hand-written equivalent.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import {
  AnnotationState,
  emptyState,
  extendStroke,
  serialize,
  setBox,
  setLooseness,
  startStroke,
} from "../src/annotation.js";

const here = dirname(fileURLToPath(import.meta.url));
const out = join(here, "..", "..", "golden");

function scribble(points: Array<[number, number]>, tool: "fg-scribble" | "bg-scribble", base?: AnnotationState): AnnotationState {
  let state: AnnotationState = { ...(base ?? emptyState()), tool };
  state = startStroke(state, ...points[0]);
  for (const p of points.slice(1)) state = extendStroke(state, ...p);
  return state;
}

// deterministic pseudo-random points within a 128x128 canvas
function lattice(seed: number, count: number): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  let value = seed;
  for (let i = 0; i < count; i++) {
    value = (value * 48271) % 2147483647;
    const x = 8 + (value % 112);
    value = (value * 48271) % 2147483647;
    const y = 8 + (value % 112);
    pts.push([x, y]);
  }
  return pts;
}

const states: AnnotationState[] = [];

// single-point and polyline foreground scribbles
for (let i = 0; i < 6; i++) {
  states.push(scribble(lattice(11 + i, 1 + i), "fg-scribble"));
}
// multi-stroke foreground scribbles
for (let i = 0; i < 4; i++) {
  let state = scribble(lattice(31 + i, 3), "fg-scribble");
  state = scribble(lattice(41 + i, 2), "fg-scribble", state);
  states.push(state);
}
// error-tolerant scribbles: foreground plus background strokes
for (let i = 0; i < 4; i++) {
  let state = scribble(lattice(51 + i, 4), "fg-scribble");
  state = scribble(lattice(61 + i, 3), "bg-scribble", state);
  states.push(state);
}
// tight boxes, including clamped drags
states.push(setBox(emptyState(), 20, 24, 84, 92, 128, 128));
states.push(setBox(emptyState(), 100, 90, 12, 10, 128, 128)); // inverted drag
states.push(setBox(emptyState(), -30, -10, 70, 60, 128, 128)); // clamped
// loose boxes with slider values
states.push(setLooseness(setBox(emptyState(), 30, 30, 80, 80, 128, 128), 120));
states.push(setLooseness(setBox(emptyState(), 40, 28, 96, 88, 128, 128), 240));
states.push(setLooseness(setBox(emptyState(), 16, 16, 112, 112, 128, 128), 600));

mkdirSync(out, { recursive: true });
states.forEach((state, index) => {
  const doc = serialize(state);
  if (doc === null) throw new Error(`state ${index} did not serialize`);
  const name = `annotation_${String(index).padStart(2, "0")}.json`;
  writeFileSync(join(out, name), JSON.stringify(doc, null, 2) + "\n");
});
console.log(`${states.length} golden annotations written to ${out}`);
