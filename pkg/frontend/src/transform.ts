/**
 * View transform between canvas (screen) and image coordinates. Strokes
 * are stored in image pixels, so drawing at any zoom level must map back
 * exactly.
 */

export interface View {
  zoom: number; // canvas pixels per image pixel
  panX: number; // image-space offset of the canvas origin
  panY: number;
}

export function screenToImage(view: View, sx: number, sy: number): [number, number] {
  return [sx / view.zoom + view.panX, sy / view.zoom + view.panY];
}

export function imageToScreen(view: View, ix: number, iy: number): [number, number] {
  return [(ix - view.panX) * view.zoom, (iy - view.panY) * view.zoom];
}

/** Zoom about a screen anchor so the image point under it stays put. */
export function zoomAt(view: View, sx: number, sy: number, factor: number): View {
  const [ix, iy] = screenToImage(view, sx, sy);
  const zoom = Math.min(16, Math.max(0.25, view.zoom * factor));
  return { zoom, panX: ix - sx / zoom, panY: iy - sy / zoom };
}
