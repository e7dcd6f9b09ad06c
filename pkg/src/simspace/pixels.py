"""Image loading and block-aggregation downscaling.

A k-by-k block of pixels collapses to a single value per channel via
min, mean, median or max.  Output spatial size is ceil(h/k) by
ceil(w/k); blocks on the right and bottom edge aggregate only the
pixels actually present.  Channels are processed independently and the
flat feature vector is channel-major: all of channel 0, then 1, then 2,
each in row-major spatial order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .data import FeatureMatrix
from .errors import (
    DecodeError,
    DimensionMismatch,
    InvalidBlockSize,
    UnsupportedFormat,
    ValidationError,
)

AGGREGATORS = {"min": np.min, "mean": np.mean, "median": np.median, "max": np.max}
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass(frozen=True)
class RasterImage:
    """Decoded image: (height, width, channels) values in [0, 1]."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim == 2:
            data = data[:, :, None]
        data = data.copy()
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        if data.ndim != 3 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValidationError(f"bad image shape {data.shape}")
        if data.shape[2] not in (1, 3):
            raise ValidationError("images must have 1 or 3 channels")
        if data.min() < 0.0 or data.max() > 1.0:
            raise ValidationError("pixel values must lie in [0, 1]")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]


def load_image(path) -> RasterImage:
    """Decode a PNG or JPEG file into a [0, 1] raster."""
    try:
        img = Image.open(path)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path}: not a recognized image") from exc
    except OSError as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    if img.format not in ("PNG", "JPEG"):
        raise UnsupportedFormat(f"{path}: {img.format} is not PNG or JPEG")
    try:
        if img.mode in ("L", "I;16", "I"):
            img = img.convert("L")
        elif img.mode != "RGB":
            img = img.convert("RGB")
        arr = np.asarray(img, dtype=float)
    except OSError as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    return RasterImage(data=arr / 255.0)


def save_png(image: RasterImage, path) -> None:
    """Write a raster as an 8-bit PNG (values rounded from [0, 1])."""
    arr = np.round(image.data * 255.0).astype(np.uint8)
    if arr.shape[2] == 1:
        pil = Image.fromarray(arr[:, :, 0], mode="L")
    else:
        pil = Image.fromarray(arr, mode="RGB")
    pil.save(path, format="PNG")


def _aggregate_plane(plane: np.ndarray, block: int, fn) -> np.ndarray:
    h, w = plane.shape
    nh = -(-h // block)
    nw = -(-w // block)
    fh, fw = h // block, w // block
    out = np.empty((nh, nw))
    if fh and fw:
        core = plane[: fh * block, : fw * block]
        out[:fh, :fw] = fn(
            core.reshape(fh, block, fw, block), axis=(1, 3)
        )
    if fw < nw:  # partial rightmost column, including the corner
        strip = plane[:, fw * block :]
        for bi in range(nh):
            out[bi, fw] = fn(strip[bi * block : (bi + 1) * block, :])
    if fh < nh:  # partial bottom row, corner already covered
        strip = plane[fh * block :, : fw * block]
        for bj in range(fw):
            out[fh, bj] = fn(strip[:, bj * block : (bj + 1) * block])
    return out


def block_downscale(image: RasterImage, block: int, aggregator: str) -> np.ndarray:
    """Downscale by k-by-k block aggregation; returns the flat feature row.

    The output has exactly ``channels * ceil(h/k) * ceil(w/k)`` entries.
    """
    if aggregator not in AGGREGATORS:
        raise ValidationError(
            f"aggregator must be one of {tuple(AGGREGATORS)}, got {aggregator!r}"
        )
    if block < 1 or block > max(image.width, image.height):
        raise InvalidBlockSize(
            f"block {block} out of range [1, {max(image.width, image.height)}]"
        )
    fn = AGGREGATORS[aggregator]
    planes = [
        _aggregate_plane(image.data[:, :, c], block, fn).ravel()
        for c in range(image.channels)
    ]
    return np.concatenate(planes)


def list_images(directory) -> list[Path]:
    """PNG/JPEG files in a directory, sorted by name."""
    root = Path(directory)
    return sorted(
        p for p in root.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES
    )


def pixel_features(
    images_dir, block: int, aggregator: str, group_of: dict[str, str] | None = None
) -> FeatureMatrix:
    """Downscale every image in a directory into one feature row each.

    Sample ids are the file stems.  Group ids are the stems too unless
    ``group_of`` maps them back to original stimuli (for augmented
    directories, pass the augmentation manifest's mapping).  All images
    must share one shape so the rows line up.
    """
    paths = list_images(images_dir)
    if not paths:
        raise ValidationError(f"no PNG/JPEG images in {images_dir}")
    rows, ids = [], []
    for path in paths:
        rows.append(block_downscale(load_image(path), block, aggregator))
        ids.append(path.stem)
    lengths = {row.shape[0] for row in rows}
    if len(lengths) > 1:
        raise DimensionMismatch(
            "images produce feature rows of different lengths; "
            "sizes must match across the directory"
        )
    groups = tuple(group_of.get(i, i) for i in ids) if group_of else tuple(ids)
    return FeatureMatrix(
        values=np.vstack(rows), sample_ids=tuple(ids), group_ids=groups
    )
