#!/usr/bin/env python3
"""Export Inception-v3 penultimate-layer activations as a feature CSV.

Runs a pretrained Inception-v3 image classifier over a directory of
images and writes one 2048-dimensional activation row per image, in the
feature CSV format the simspace package consumes
(``sample_id,group_id,x_1,...,x_2048``).  A ``# weights: ...`` comment
above the header records which checkpoint produced the rows.

Weights resolution (``--weights``):

* ``pretrained`` (default): the published torchvision ImageNet
  checkpoint; needs either network access or a warm download cache,
  otherwise the run aborts with a MissingWeights error.
* a path to a local ``.pth`` state dict.
* ``random:SEED``: a seeded, randomly initialized network.  Inference
  is still deterministic, so this exercises the full pipeline (shapes,
  grouping, determinism, CSV compatibility) without any download; the
  activations are meaningless as image descriptors.

Rows are ordered by sample id regardless of batch size, group ids come
from an augmentation manifest when one is given (file stem otherwise),
and inference runs in eval mode so repeated runs agree.

Usage:
    extract_features.py --images DIR [--manifest manifest.csv]
                        --out features.csv [--batch-size N]
                        [--weights pretrained|PATH|random:SEED]
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np
import torch
from PIL import Image, UnidentifiedImageError
from torch import nn
from torchvision.models import inception_v3

FEATURE_DIM = 2048
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")

# Canonical Inception-v3 evaluation preprocessing: resize the short side
# to 342, center-crop 299, scale to [0, 1], normalize with the ImageNet
# channel statistics.
RESIZE_TO = 342
CROP_TO = 299
CHANNEL_MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
CHANNEL_STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)


class MissingWeights(RuntimeError):
    """The requested network checkpoint could not be obtained."""


class DecodeError(ValueError):
    """An input image could not be decoded."""


def load_network(weights: str) -> tuple[nn.Module, str]:
    """Build the backbone with its classification head removed."""
    if weights == "pretrained":
        try:
            from torchvision.models import Inception_V3_Weights

            checkpoint = Inception_V3_Weights.IMAGENET1K_V1
            model = inception_v3(weights=checkpoint)
            description = f"torchvision {checkpoint}"
        except Exception as exc:
            raise MissingWeights(
                "could not obtain the pretrained Inception-v3 checkpoint "
                f"({exc}); pass --weights PATH for a local state dict or "
                "--weights random:SEED for a pipeline test run"
            ) from exc
    elif weights.startswith("random:"):
        try:
            seed = int(weights.split(":", 1)[1])
        except ValueError:
            raise MissingWeights(f"bad random weights spec {weights!r}")
        torch.manual_seed(seed)
        model = inception_v3(weights=None, init_weights=True)
        description = f"random init (seed {seed}); activations are not image descriptors"
    else:
        path = Path(weights)
        if not path.exists():
            raise MissingWeights(f"weights file {path} does not exist")
        model = inception_v3(weights=None, init_weights=False)
        state = torch.load(path, map_location="cpu", weights_only=True)
        model.load_state_dict(state)
        description = f"local state dict {path.name}"
    model.fc = nn.Identity()  # expose the 2048-d penultimate activations
    model.aux_logits = False
    model.AuxLogits = None
    model.eval()
    return model, description


def preprocess(path: Path) -> torch.Tensor:
    """Decode and normalize one image to a (3, 299, 299) tensor."""
    try:
        with Image.open(path) as img:
            img = img.convert("RGB")
            w, h = img.size
            scale = RESIZE_TO / min(w, h)
            img = img.resize(
                (max(1, round(w * scale)), max(1, round(h * scale))),
                Image.Resampling.BILINEAR,
            )
            left = (img.width - CROP_TO) // 2
            top = (img.height - CROP_TO) // 2
            img = img.crop((left, top, left + CROP_TO, top + CROP_TO))
            arr = np.asarray(img, dtype=np.float32) / 255.0
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    arr = (arr - CHANNEL_MEAN) / CHANNEL_STD
    return torch.from_numpy(arr.transpose(2, 0, 1))


def read_manifest_groups(path: Path) -> dict[str, str]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["sample_id", "group_id"]:
            raise ValueError(f"{path} is not an augmentation manifest")
        return {row[0]: row[1] for row in reader}


def extract(
    images_dir: Path,
    out_path: Path,
    manifest_path: Path | None = None,
    batch_size: int = 16,
    weights: str = "pretrained",
) -> int:
    """Write one activation row per image; returns the row count."""
    paths = sorted(
        (p for p in images_dir.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.stem,
    )
    if not paths:
        raise ValueError(f"no PNG/JPEG images in {images_dir}")
    group_of = read_manifest_groups(manifest_path) if manifest_path else {}

    model, description = load_network(weights)
    rows = 0
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        fh.write(f"# weights: {description}\n")
        writer.writerow(
            ["sample_id", "group_id", *(f"x_{i + 1}" for i in range(FEATURE_DIM))]
        )
        with torch.no_grad():
            for start in range(0, len(paths), batch_size):
                chunk = paths[start : start + batch_size]
                batch = torch.stack([preprocess(p) for p in chunk])
                activations = model(batch).numpy()
                if activations.shape[1] != FEATURE_DIM:
                    raise RuntimeError(
                        f"expected {FEATURE_DIM} activations, got "
                        f"{activations.shape[1]}"
                    )
                if not np.isfinite(activations).all():
                    raise RuntimeError("non-finite activations")
                for path, row in zip(chunk, activations):
                    writer.writerow(
                        [
                            path.stem,
                            group_of.get(path.stem, path.stem),
                            *(repr(float(v)) for v in row),
                        ]
                    )
                    rows += 1
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[1])
    parser.add_argument("--images", required=True, type=Path)
    parser.add_argument("--manifest", type=Path)
    parser.add_argument("--out", required=True, type=Path)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument(
        "--weights",
        default="pretrained",
        help="pretrained | path to a .pth state dict | random:SEED",
    )
    args = parser.parse_args(argv)
    try:
        count = extract(
            args.images,
            args.out,
            manifest_path=args.manifest,
            batch_size=args.batch_size,
            weights=args.weights,
        )
    except (ValueError, DecodeError) as exc:
        print(f"extract_features: {exc}", file=sys.stderr)
        return 1
    except (MissingWeights, RuntimeError, OSError) as exc:
        print(f"extract_features: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {count} rows x {FEATURE_DIM} activations to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
