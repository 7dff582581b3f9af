"""Image and mask IO: PNG and binary PPM in, single-channel PNG masks out,
plus the run-length encoding used by the HTTP API.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image as PILImage


class ImageFormatError(ValueError):
    pass


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG or binary PPM bytes into an (h, w, 3) uint8 array."""
    try:
        with PILImage.open(io.BytesIO(data)) as img:
            if img.format not in ("PNG", "PPM"):
                raise ImageFormatError(f"unsupported image format {img.format!r}")
            rgb = img.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except ImageFormatError:
        raise
    except Exception as exc:
        raise ImageFormatError(f"could not decode image: {exc}") from exc
    if arr.shape[0] < 16 or arr.shape[1] < 16:
        raise ImageFormatError("image sides must be at least 16 pixels")
    return arr


def load_image(path) -> np.ndarray:
    return decode_image(Path(path).read_bytes())


def save_image(path, image: np.ndarray) -> None:
    PILImage.fromarray(np.asarray(image, dtype=np.uint8)).save(path, format="PNG")


def encode_mask_png(mask: np.ndarray) -> bytes:
    """Serialize a boolean mask as a single-channel PNG with values 0/255."""
    data = (np.asarray(mask, dtype=bool).astype(np.uint8)) * 255
    buf = io.BytesIO()
    PILImage.fromarray(data, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def save_mask_png(path, mask: np.ndarray) -> None:
    Path(path).write_bytes(encode_mask_png(mask))


def load_mask_png(path) -> np.ndarray:
    with PILImage.open(path) as img:
        arr = np.asarray(img.convert("L"))
    return arr >= 128


def mask_to_rle(mask: np.ndarray) -> list[list[int]]:
    """Row-major [start, length] runs of the foreground."""
    flat = np.asarray(mask, dtype=bool).ravel()
    if not flat.any():
        return []
    padded = np.concatenate([[False], flat, [False]])
    changes = np.nonzero(padded[1:] != padded[:-1])[0]
    starts, ends = changes[0::2], changes[1::2]
    return [[int(s), int(e - s)] for s, e in zip(starts, ends)]


def rle_to_mask(runs, shape: tuple[int, int]) -> np.ndarray:
    flat = np.zeros(shape[0] * shape[1], dtype=bool)
    for start, length in runs:
        if start < 0 or length < 0 or start + length > flat.size:
            raise ValueError(f"run [{start}, {length}] leaves the image")
        flat[start : start + length] = True
    return flat.reshape(shape)
