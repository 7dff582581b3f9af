/**
 * Annotation state and its serialization to the server's JSON schema.
 * Stroke points live in image coordinates regardless of the canvas zoom.
 */

export type Tool = "fg-scribble" | "bg-scribble" | "box";
export type Kind =
  | "scribble-foreground"
  | "scribble-with-errors"
  | "bounding-box"
  | "loose-box";

export interface Stroke {
  tag: "fg" | "bg";
  points: Array<[number, number]>;
}

export interface Box {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface AnnotationState {
  tool: Tool;
  strokes: Stroke[];
  box: Box | null;
  looseness: number;
}

export function emptyState(): AnnotationState {
  return { tool: "fg-scribble", strokes: [], box: null, looseness: 0 };
}

export function startStroke(state: AnnotationState, x: number, y: number): AnnotationState {
  if (state.tool === "box") return state;
  const tag = state.tool === "fg-scribble" ? "fg" : "bg";
  const stroke: Stroke = { tag, points: [[Math.round(x), Math.round(y)]] };
  return { ...state, strokes: [...state.strokes, stroke] };
}

export function extendStroke(state: AnnotationState, x: number, y: number): AnnotationState {
  if (state.strokes.length === 0) return state;
  const strokes = state.strokes.slice();
  const last = strokes[strokes.length - 1];
  strokes[strokes.length - 1] = {
    ...last,
    points: [...last.points, [Math.round(x), Math.round(y)]],
  };
  return { ...state, strokes };
}

export function eraseLastStroke(state: AnnotationState): AnnotationState {
  if (state.strokes.length === 0) return state;
  return { ...state, strokes: state.strokes.slice(0, -1) };
}

/** Clamp a dragged rectangle to the image and normalize its corners. */
export function setBox(
  state: AnnotationState,
  x0: number,
  y0: number,
  x1: number,
  y1: number,
  width: number,
  height: number
): AnnotationState {
  const left = Math.max(0, Math.min(Math.round(Math.min(x0, x1)), width - 1));
  const top = Math.max(0, Math.min(Math.round(Math.min(y0, y1)), height - 1));
  const right = Math.max(0, Math.min(Math.round(Math.max(x0, x1)), width));
  const bottom = Math.max(0, Math.min(Math.round(Math.max(y0, y1)), height));
  const w = Math.max(1, right - left);
  const h = Math.max(1, bottom - top);
  return { ...state, box: { x: left, y: top, w, h } };
}

export function setLooseness(state: AnnotationState, value: number): AnnotationState {
  return { ...state, looseness: Math.max(0, value) };
}

/** The annotation kind implied by the current state. */
export function impliedKind(state: AnnotationState): Kind | null {
  if (state.box !== null) {
    return state.looseness > 0 ? "loose-box" : "bounding-box";
  }
  const tags = new Set(state.strokes.map((s) => s.tag));
  if (tags.size === 0) return null;
  if (tags.has("bg")) {
    return tags.has("fg") ? "scribble-with-errors" : null;
  }
  return "scribble-foreground";
}

export interface AnnotationDocument {
  kind: Kind;
  strokes: Array<{ tag: "fg" | "bg"; points: Array<[number, number]> }>;
  box: [number, number, number, number] | null;
  looseness: number;
}

/**
 * Serialize to the exact schema the segmentation service parses; returns
 * null when the state is not submittable (no strokes and no box, or
 * background strokes without foreground ones).
 */
export function serialize(state: AnnotationState): AnnotationDocument | null {
  const kind = impliedKind(state);
  if (kind === null) return null;
  if (kind === "bounding-box" || kind === "loose-box") {
    const b = state.box as Box;
    return {
      kind,
      strokes: [],
      box: [b.x, b.y, b.w, b.h],
      looseness: kind === "loose-box" ? state.looseness : 0,
    };
  }
  return {
    kind,
    strokes: state.strokes.map((s) => ({
      tag: s.tag,
      points: s.points.map(([x, y]) => [x, y] as [number, number]),
    })),
    box: null,
    looseness: 0,
  };
}
