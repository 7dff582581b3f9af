/** Thin client for the segmentation service. */

import type { AnnotationDocument } from "./annotation.js";

export interface SessionInfo {
  id: string;
  width: number;
  height: number;
  superpixel_count: number;
  boundaries: Array<Array<[number, number]>>;
}

export interface SegmentSettings {
  sigma_mode: "single" | "self-tuning";
  sigma?: number;
  knn_k?: number;
  margin?: number;
  dynamics?: "pairwise" | "replicator";
}

export interface ClusterDiagnostics {
  support: number[];
  alpha: number;
  kkt_residual: number;
  converged: boolean;
  discarded: boolean;
}

export interface SegmentResponse {
  mask_rle: Array<[number, number]>;
  width: number;
  height: number;
  diagnostics: {
    superpixel_count: number;
    clusters: ClusterDiagnostics[];
    output_meaning: string;
    timing_ms: number;
    affinity_cache_hit: boolean;
    warnings: string[];
  };
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(response.status, detail);
}

export function createClient(base: string, fetcher: typeof fetch = fetch) {
  return {
    async createSession(image: Blob, superpixels = 256): Promise<SessionInfo> {
      const response = await fetcher(`${base}/sessions?superpixels=${superpixels}`, {
        method: "POST",
        body: image,
        headers: { "content-type": "application/octet-stream" },
      });
      await raiseForStatus(response);
      return (await response.json()) as SessionInfo;
    },

    async segment(
      sessionId: string,
      annotation: AnnotationDocument,
      settings: SegmentSettings
    ): Promise<SegmentResponse> {
      const response = await fetcher(`${base}/sessions/${sessionId}/segment`, {
        method: "POST",
        body: JSON.stringify({ annotation, settings }),
        headers: { "content-type": "application/json" },
      });
      await raiseForStatus(response);
      return (await response.json()) as SegmentResponse;
    },

    maskUrl(sessionId: string): string {
      return `${base}/sessions/${sessionId}/mask.png`;
    },

    async deleteSession(sessionId: string): Promise<void> {
      const response = await fetcher(`${base}/sessions/${sessionId}`, { method: "DELETE" });
      if (response.status !== 404) await raiseForStatus(response);
    },
  };
}
