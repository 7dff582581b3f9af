/** Run-length mask decoding: [start, length] runs over row-major pixels. */

export function decodeRle(runs: Array<[number, number]>, width: number, height: number): Uint8Array {
  const mask = new Uint8Array(width * height);
  for (const [start, length] of runs) {
    if (start < 0 || length < 0 || start + length > mask.length) {
      throw new Error(`run [${start}, ${length}] leaves the ${width}x${height} image`);
    }
    mask.fill(1, start, start + length);
  }
  return mask;
}

/** Paint the mask into RGBA bytes for a canvas overlay. */
export function maskToOverlay(
  mask: Uint8Array,
  rgba: [number, number, number, number] = [80, 180, 255, 110]
) {
  const out = new Uint8ClampedArray(new ArrayBuffer(mask.length * 4));
  for (let i = 0; i < mask.length; i++) {
    if (mask[i]) {
      out[4 * i] = rgba[0];
      out[4 * i + 1] = rgba[1];
      out[4 * i + 2] = rgba[2];
      out[4 * i + 3] = rgba[3];
    }
  }
  return out;
}
