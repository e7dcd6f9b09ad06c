import numpy as np
import pytest
from PIL import Image

from simspace import RasterImage, block_downscale, load_image, pixel_features, save_png
from simspace.errors import (
    DecodeError,
    InvalidBlockSize,
    UnsupportedFormat,
    ValidationError,
)


def raster(values):
    return RasterImage(data=np.asarray(values, dtype=float))


class TestBlockDownscale:
    def test_single_block_aggregators(self):
        image = raster([[0.1, 0.2], [0.3, 0.4]])
        assert block_downscale(image, 2, "min") == pytest.approx([0.1])
        assert block_downscale(image, 2, "max") == pytest.approx([0.4])
        assert block_downscale(image, 2, "mean") == pytest.approx([0.25])
        # Median of an even count is the mean of the two middle values.
        assert block_downscale(image, 2, "median") == pytest.approx([0.25])

    def test_noun_scale_feature_lengths(self):
        rng = np.random.default_rng(50)
        image = RasterImage(data=rng.uniform(size=(300, 300, 3)))
        assert block_downscale(image, 24, "min").shape == (3 * 13 * 13,)
        assert block_downscale(image, 12, "min").shape == (1875,)

    def test_identity_flatten_at_block_one(self):
        rng = np.random.default_rng(51)
        data = rng.uniform(size=(4, 5, 3))
        image = RasterImage(data=data)
        out = block_downscale(image, 1, "max")
        expected = np.concatenate([data[:, :, c].ravel() for c in range(3)])
        assert np.array_equal(out, expected)

    def test_one_cell_per_channel_for_huge_blocks(self):
        rng = np.random.default_rng(52)
        image = RasterImage(data=rng.uniform(size=(6, 9, 3)))
        out = block_downscale(image, 9, "mean")
        assert out.shape == (3,)

    def test_constant_image_stays_constant(self):
        image = RasterImage(data=np.full((7, 5, 1), 0.37))
        for agg in ("min", "mean", "median", "max"):
            out = block_downscale(image, 3, agg)
            assert np.allclose(out, 0.37, atol=1e-15)

    def test_partial_edge_blocks_use_present_pixels(self):
        rng = np.random.default_rng(53)
        data = rng.uniform(size=(7, 5, 1))
        image = RasterImage(data=data)
        k = 3
        for agg, fn in (("min", np.min), ("max", np.max), ("mean", np.mean), ("median", np.median)):
            out = block_downscale(image, k, agg).reshape(3, 2)
            for bi in range(3):
                for bj in range(2):
                    block = data[bi * k : (bi + 1) * k, bj * k : (bj + 1) * k, 0]
                    assert out[bi, bj] == pytest.approx(fn(block), abs=1e-15)

    def test_block_extremes_bound_mean_and_median(self):
        rng = np.random.default_rng(54)
        image = RasterImage(data=rng.uniform(size=(10, 7, 1)))
        lo = block_downscale(image, 4, "min")
        hi = block_downscale(image, 4, "max")
        for agg in ("mean", "median"):
            mid = block_downscale(image, 4, agg)
            assert (lo <= mid + 1e-15).all()
            assert (mid <= hi + 1e-15).all()

    def test_block_size_validation(self):
        image = raster([[0.0, 0.5], [0.5, 1.0]])
        with pytest.raises(InvalidBlockSize):
            block_downscale(image, 0, "min")
        with pytest.raises(InvalidBlockSize):
            block_downscale(image, 3, "min")
        with pytest.raises(ValidationError):
            block_downscale(image, 2, "mode")


class TestLoadImage:
    def test_black_png(self, tmp_path):
        Image.new("L", (2, 2), color=0).save(tmp_path / "black.png")
        image = load_image(tmp_path / "black.png")
        assert image.channels == 1
        assert np.array_equal(image.data, np.zeros((2, 2, 1)))

    def test_rgb_jpeg_dimensions(self, tmp_path):
        Image.new("RGB", (300, 300), color=(10, 20, 30)).save(
            tmp_path / "img.jpg", format="JPEG"
        )
        image = load_image(tmp_path / "img.jpg")
        assert (image.width, image.height, image.channels) == (300, 300, 3)
        assert image.data.min() >= 0.0 and image.data.max() <= 1.0

    def test_truncated_file(self, tmp_path):
        Image.new("RGB", (64, 64), color=(200, 0, 0)).save(tmp_path / "ok.png")
        blob = (tmp_path / "ok.png").read_bytes()
        (tmp_path / "broken.png").write_bytes(blob[: len(blob) // 2])
        with pytest.raises(DecodeError):
            load_image(tmp_path / "broken.png")

    def test_non_image(self, tmp_path):
        (tmp_path / "note.png").write_text("not an image")
        with pytest.raises(UnsupportedFormat):
            load_image(tmp_path / "note.png")

    def test_unsupported_format(self, tmp_path):
        Image.new("RGB", (4, 4)).save(tmp_path / "img.bmp", format="BMP")
        with pytest.raises(UnsupportedFormat):
            load_image(tmp_path / "img.bmp")

    def test_png_round_trip(self, tmp_path):
        rng = np.random.default_rng(55)
        data = rng.integers(0, 256, size=(5, 4, 3)).astype(float) / 255.0
        save_png(RasterImage(data=data), tmp_path / "rt.png")
        back = load_image(tmp_path / "rt.png")
        assert np.array_equal(back.data, data)


class TestPixelFeatures:
    def test_directory_to_feature_matrix(self, tmp_path):
        rng = np.random.default_rng(56)
        for name in ("b_img", "a_img"):
            arr = rng.integers(0, 256, size=(6, 6, 3)).astype(np.uint8)
            Image.fromarray(arr).save(tmp_path / f"{name}.png")
        features = pixel_features(tmp_path, 3, "min")
        assert features.sample_ids == ("a_img", "b_img")  # sorted by name
        assert features.group_ids == features.sample_ids
        assert features.k == 3 * 2 * 2

    def test_empty_directory(self, tmp_path):
        with pytest.raises(ValidationError):
            pixel_features(tmp_path, 2, "min")

    def test_raster_validation(self):
        with pytest.raises(ValidationError):
            RasterImage(data=np.full((2, 2, 1), 1.5))
        with pytest.raises(ValidationError):
            RasterImage(data=np.zeros((2, 2, 4)))
