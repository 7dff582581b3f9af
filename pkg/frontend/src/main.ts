/** Annotator page: canvas drawing, submission loop, overlay rendering. */

import {
  AnnotationState,
  emptyState,
  eraseLastStroke,
  extendStroke,
  serialize,
  setBox,
  setLooseness,
  startStroke,
  Tool,
} from "./annotation.js";
import { ApiError, createClient, SegmentSettings, SessionInfo } from "./api.js";
import { decodeRle, maskToOverlay } from "./rle.js";
import { beginSubmit, createMachine, endSubmit } from "./state.js";
import { showToast } from "./toast.js";
import { screenToImage, View, zoomAt } from "./transform.js";

const api = createClient("");
const machine = createMachine();

let session: SessionInfo | null = null;
let image: HTMLImageElement | null = null;
let annotation: AnnotationState = emptyState();
let view: View = { zoom: 1, panX: 0, panY: 0 };
let overlay: ImageData | null = null;
let showBoundaries = false;
let drawing = false;
let dragStart: [number, number] | null = null;

const canvas = document.getElementById("canvas") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const diagnosticsPanel = document.getElementById("diagnostics")!;

function render(): void {
  ctx.fillStyle = "#222";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  if (!image || !session) return;
  ctx.save();
  ctx.imageSmoothingEnabled = view.zoom < 2;
  ctx.setTransform(view.zoom, 0, 0, view.zoom, -view.panX * view.zoom, -view.panY * view.zoom);
  ctx.drawImage(image, 0, 0);

  if (overlay) {
    const off = document.createElement("canvas");
    off.width = overlay.width;
    off.height = overlay.height;
    off.getContext("2d")!.putImageData(overlay, 0, 0);
    ctx.drawImage(off, 0, 0);
  }

  if (showBoundaries) {
    ctx.strokeStyle = "rgba(255,255,0,0.5)";
    ctx.lineWidth = 1 / view.zoom;
    for (const path of session.boundaries) {
      if (path.length < 2) continue;
      ctx.beginPath();
      ctx.moveTo(path[0][0], path[0][1]);
      for (const [x, y] of path.slice(1)) ctx.lineTo(x, y);
      ctx.closePath();
      ctx.stroke();
    }
  }

  for (const stroke of annotation.strokes) {
    ctx.strokeStyle = stroke.tag === "fg" ? "rgba(40,220,60,0.9)" : "rgba(230,60,60,0.9)";
    ctx.lineWidth = 2 / view.zoom;
    ctx.beginPath();
    const [x0, y0] = stroke.points[0];
    ctx.moveTo(x0, y0);
    for (const [x, y] of stroke.points) ctx.lineTo(x, y);
    ctx.stroke();
  }
  if (annotation.box) {
    const b = annotation.box;
    ctx.strokeStyle = "rgba(255,160,40,0.9)";
    ctx.lineWidth = 2 / view.zoom;
    ctx.strokeRect(b.x, b.y, b.w, b.h);
  }
  ctx.restore();
}

function setAnnotation(next: AnnotationState): void {
  annotation = next;
  render();
}

function currentTool(): Tool {
  const checked = document.querySelector<HTMLInputElement>("input[name=tool]:checked");
  return (checked?.value as Tool) ?? "fg-scribble";
}

function currentSettings(): SegmentSettings {
  const mode = (document.getElementById("sigma-mode") as HTMLSelectElement).value;
  if (mode === "self-tuning") return { sigma_mode: "self-tuning", knn_k: 7 };
  const sigma = parseFloat((document.getElementById("sigma") as HTMLInputElement).value);
  return { sigma_mode: "single", sigma };
}

async function upload(file: File): Promise<void> {
  try {
    session = await api.createSession(file);
  } catch (err) {
    showToast(err instanceof Error ? err.message : String(err), "error");
    return;
  }
  image = new Image();
  image.onload = () => {
    view = { zoom: Math.min(canvas.width / session!.width, canvas.height / session!.height), panX: 0, panY: 0 };
    overlay = null;
    setAnnotation(emptyState());
  };
  image.src = URL.createObjectURL(file);
  showToast(`session ready: ${session.superpixel_count} superpixels`);
}

async function submit(): Promise<void> {
  if (!session) {
    showToast("upload an image first", "error");
    return;
  }
  const doc = serialize(annotation);
  if (!doc) {
    showToast("draw a foreground scribble or a box first", "error");
    return;
  }
  if (!beginSubmit(machine)) {
    showToast("a segmentation is already running", "error");
    return;
  }
  try {
    const response = await api.segment(session.id, doc, currentSettings());
    const mask = decodeRle(response.mask_rle, response.width, response.height);
    overlay = new ImageData(maskToOverlay(mask), response.width, response.height);
    const d = response.diagnostics;
    const clusters = d.clusters.filter((c) => !c.discarded);
    diagnosticsPanel.textContent =
      `${d.output_meaning} mask from ${clusters.length} cluster(s) ` +
      `(of ${d.clusters.length}) in ${d.timing_ms.toFixed(0)} ms; ` +
      `alpha = ${d.clusters.map((c) => c.alpha.toFixed(1)).join(", ")}; ` +
      `cache ${d.affinity_cache_hit ? "hit" : "miss"}` +
      (d.warnings.length ? `; ${d.warnings.join("; ")}` : "");
    render();
  } catch (err) {
    // 409/422 arrive here: keep every bit of client state, just notify
    if (err instanceof ApiError) {
      showToast(`${err.status}: ${err.message}`, "error");
    } else {
      showToast(err instanceof Error ? err.message : String(err), "error");
    }
  } finally {
    endSubmit(machine);
  }
}

canvas.addEventListener("mousedown", (event) => {
  if (!session) return;
  const rect = canvas.getBoundingClientRect();
  const [ix, iy] = screenToImage(view, event.clientX - rect.left, event.clientY - rect.top);
  annotation = { ...annotation, tool: currentTool() };
  if (annotation.tool === "box") {
    dragStart = [ix, iy];
  } else {
    drawing = true;
    setAnnotation(startStroke(annotation, ix, iy));
  }
});

canvas.addEventListener("mousemove", (event) => {
  if (!session) return;
  const rect = canvas.getBoundingClientRect();
  const [ix, iy] = screenToImage(view, event.clientX - rect.left, event.clientY - rect.top);
  if (drawing) {
    setAnnotation(extendStroke(annotation, ix, iy));
  } else if (dragStart) {
    setAnnotation(setBox(annotation, dragStart[0], dragStart[1], ix, iy, session.width, session.height));
  }
});

window.addEventListener("mouseup", () => {
  drawing = false;
  dragStart = null;
});

canvas.addEventListener("wheel", (event) => {
  event.preventDefault();
  const rect = canvas.getBoundingClientRect();
  view = zoomAt(view, event.clientX - rect.left, event.clientY - rect.top, event.deltaY < 0 ? 1.2 : 1 / 1.2);
  render();
});

document.getElementById("file")!.addEventListener("change", (event) => {
  const input = event.target as HTMLInputElement;
  if (input.files && input.files[0]) void upload(input.files[0]);
});
document.getElementById("submit")!.addEventListener("click", () => void submit());
document.getElementById("erase")!.addEventListener("click", () => setAnnotation(eraseLastStroke(annotation)));
document.getElementById("clear")!.addEventListener("click", () => {
  overlay = null;
  setAnnotation(emptyState());
});
document.getElementById("boundaries")!.addEventListener("change", (event) => {
  showBoundaries = (event.target as HTMLInputElement).checked;
  render();
});
document.getElementById("looseness")!.addEventListener("input", (event) => {
  const value = parseFloat((event.target as HTMLInputElement).value);
  document.getElementById("looseness-value")!.textContent = `${value}%`;
  setAnnotation(setLooseness(annotation, value));
});
document.getElementById("sigma-mode")!.addEventListener("change", (event) => {
  const single = (event.target as HTMLSelectElement).value === "single";
  (document.getElementById("sigma") as HTMLInputElement).disabled = !single;
});

render();
