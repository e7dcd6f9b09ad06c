"""Seeded stochastic image augmentation.

Each original image is expanded into ``per_image`` variants.  Every
variant draws from its own random stream keyed by (seed, image label,
replicate index): a uniformly random order of the enabled steps, then
each step's parameters as the steps are applied.  Replicates are
therefore independent and can be produced in any order, or in
parallel, without changing a single output byte.

The step inventory is crop, blur, noise, affine (rotation, shear,
translation, scaling), contrast and brightness; all parameter ranges
are configurable and default to mild settings that keep the stimulus
recognizable.  Crops are rescaled back to the original frame
so every output has the input's dimensions, and final values are
clamped to [0, 1].
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from ._parallel import ordered_map
from ._rng import derive_rng
from .errors import IoError, ValidationError
from .pixels import RasterImage, list_images, load_image, save_png

STEPS = ("crop", "blur", "noise", "affine", "contrast", "brightness")

_RANGE_BOUNDS = {
    "crop_fraction": (0.05, 1.0),
    "blur_sigma": (0.0, 25.0),
    "noise_sigma": (0.0, 1.0),
    "rotation_deg": (-180.0, 180.0),
    "shear_deg": (-45.0, 45.0),
    "translate_frac": (-0.5, 0.5),
    "scale": (0.25, 4.0),
    "contrast": (0.0, 4.0),
    "brightness": (-1.0, 1.0),
}


@dataclass(frozen=True)
class AugmentationPlan:
    """Replicate count, seed, enabled steps and parameter ranges."""

    seed: int
    per_image: int = 1000
    steps: tuple[str, ...] = STEPS
    crop_fraction: tuple[float, float] = (0.9, 1.0)
    blur_sigma: tuple[float, float] = (0.0, 2.0)
    noise_sigma: tuple[float, float] = (0.0, 0.05)
    rotation_deg: tuple[float, float] = (-15.0, 15.0)
    shear_deg: tuple[float, float] = (-10.0, 10.0)
    translate_frac: tuple[float, float] = (-0.1, 0.1)
    scale: tuple[float, float] = (0.9, 1.1)
    contrast: tuple[float, float] = (0.8, 1.2)
    brightness: tuple[float, float] = (-0.1, 0.1)

    def __post_init__(self):
        if self.per_image < 1:
            raise ValidationError("per_image must be >= 1")
        unknown = set(self.steps) - set(STEPS)
        if unknown or not self.steps:
            raise ValidationError(f"steps must be a nonempty subset of {STEPS}")
        object.__setattr__(self, "steps", tuple(self.steps))
        for name, (lo_ok, hi_ok) in _RANGE_BOUNDS.items():
            lo, hi = getattr(self, name)
            if not (lo_ok <= lo <= hi <= hi_ok):
                raise ValidationError(
                    f"{name} range ({lo}, {hi}) outside [{lo_ok}, {hi_ok}]"
                )


@dataclass(frozen=True)
class ManifestRow:
    sample_id: str
    group_id: str
    step_order: tuple[str, ...]
    params: dict


@dataclass(frozen=True)
class AugmentationManifest:
    """One row per augmented image, mapping it back to its original."""

    rows: tuple[ManifestRow, ...] = field(default_factory=tuple)

    def group_of(self) -> dict[str, str]:
        return {row.sample_id: row.group_id for row in self.rows}


def _apply_crop(data, params, rng, plan):
    h, w = data.shape[:2]
    fy = rng.uniform(*plan.crop_fraction)
    fx = rng.uniform(*plan.crop_fraction)
    oy = rng.uniform()
    ox = rng.uniform()
    params.update(fy=fy, fx=fx, oy=oy, ox=ox)
    ch = max(1, round(fy * h))
    cw = max(1, round(fx * w))
    if ch == h and cw == w:
        return data
    y0 = round(oy * (h - ch))
    x0 = round(ox * (w - cw))
    crop = data[y0 : y0 + ch, x0 : x0 + cw]
    return ndimage.zoom(crop, (h / ch, w / cw, 1.0), order=1, mode="nearest")


def _apply_blur(data, params, rng, plan):
    sigma = rng.uniform(*plan.blur_sigma)
    params.update(sigma=sigma)
    if sigma == 0.0:
        return data
    return ndimage.gaussian_filter(data, sigma=(sigma, sigma, 0.0), mode="nearest")


def _apply_noise(data, params, rng, plan):
    sigma = rng.uniform(*plan.noise_sigma)
    params.update(sigma=sigma)
    if sigma == 0.0:
        return data
    return data + rng.normal(0.0, sigma, size=data.shape)


def _apply_affine(data, params, rng, plan):
    rotation = rng.uniform(*plan.rotation_deg)
    shear = rng.uniform(*plan.shear_deg)
    ty = rng.uniform(*plan.translate_frac)
    tx = rng.uniform(*plan.translate_frac)
    scale = rng.uniform(*plan.scale)
    params.update(rotation=rotation, shear=shear, ty=ty, tx=tx, scale=scale)
    if rotation == 0.0 and shear == 0.0 and ty == 0.0 and tx == 0.0 and scale == 1.0:
        return data

    # Forward map in (x, y): rotate(shear_x(scale(p))) about the center,
    # then translate.  ndimage wants the inverse map in (row, col).
    theta = math.radians(rotation)
    rot = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    )
    sh = np.array([[1.0, math.tan(math.radians(shear))], [0.0, 1.0]])
    fwd_xy = rot @ sh * scale
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    fwd_rc = swap @ fwd_xy @ swap
    h, w = data.shape[:2]
    center = np.array([(h - 1) / 2.0, (w - 1) / 2.0])
    shift = np.array([ty * h, tx * w])
    inv = np.linalg.inv(fwd_rc)
    offset = center - inv @ (center + shift)
    out = np.empty_like(data)
    for c in range(data.shape[2]):
        out[:, :, c] = ndimage.affine_transform(
            data[:, :, c], inv, offset=offset, order=1, mode="nearest"
        )
    return out


def _apply_contrast(data, params, rng, plan):
    factor = rng.uniform(*plan.contrast)
    params.update(factor=factor)
    if factor == 1.0:
        return data
    return 0.5 + (data - 0.5) * factor


def _apply_brightness(data, params, rng, plan):
    delta = rng.uniform(*plan.brightness)
    params.update(delta=delta)
    if delta == 0.0:
        return data
    return data + delta


_APPLY = {
    "crop": _apply_crop,
    "blur": _apply_blur,
    "noise": _apply_noise,
    "affine": _apply_affine,
    "contrast": _apply_contrast,
    "brightness": _apply_brightness,
}


def augment_image(
    image: RasterImage, label: str, replicate: int, plan: AugmentationPlan
) -> tuple[RasterImage, ManifestRow]:
    """Produce one augmented variant of ``image`` deterministically."""
    rng = derive_rng(plan.seed, label, replicate)
    order = tuple(plan.steps[i] for i in rng.permutation(len(plan.steps)))
    data = image.data
    params: dict[str, dict] = {}
    for step in order:
        step_params: dict[str, float] = {}
        data = _APPLY[step](data, step_params, rng, plan)
        params[step] = step_params
    data = np.clip(data, 0.0, 1.0)
    row = ManifestRow(
        sample_id=f"{label}_aug{replicate:04d}",
        group_id=label,
        step_order=order,
        params=params,
    )
    return RasterImage(data=data), row


def augment_dataset(images_dir, plan: AugmentationPlan, out_dir) -> AugmentationManifest:
    """Augment every image in a directory, writing PNGs and a manifest.

    Output count is ``originals * plan.per_image``; each augmented file
    is named ``<label>_augNNNN.png`` and its manifest row records the
    sampled step order and parameters.  The manifest CSV lands in
    ``out_dir/manifest.csv``.
    """
    paths = list_images(images_dir)
    if not paths:
        raise ValidationError(f"no PNG/JPEG images in {images_dir}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def process(path: Path) -> list[ManifestRow]:
        image = load_image(path)
        rows = []
        for j in range(plan.per_image):
            variant, row = augment_image(image, path.stem, j, plan)
            save_png(variant, out / f"{row.sample_id}.png")
            rows.append(row)
        return rows

    manifest = AugmentationManifest(
        rows=tuple(row for rows in ordered_map(process, paths) for row in rows)
    )
    save_manifest_csv(manifest, out / "manifest.csv")
    return manifest


def save_manifest_csv(manifest: AugmentationManifest, path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sample_id", "group_id", "step_order", "params"])
            for row in manifest.rows:
                writer.writerow(
                    [
                        row.sample_id,
                        row.group_id,
                        ">".join(row.step_order),
                        json.dumps(row.params),
                    ]
                )
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_manifest_csv(path) -> AugmentationManifest:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or header[:3] != ["sample_id", "group_id", "step_order"]:
                raise ValidationError(f"{path} is not an augmentation manifest")
            rows = tuple(
                ManifestRow(
                    sample_id=r[0],
                    group_id=r[1],
                    step_order=tuple(r[2].split(">")) if r[2] else (),
                    params=json.loads(r[3]) if len(r) > 3 and r[3] else {},
                )
                for r in reader
            )
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return AugmentationManifest(rows=rows)
