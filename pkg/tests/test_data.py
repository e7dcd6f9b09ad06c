import numpy as np
import pytest

from simspace import (
    Configuration,
    DissimilarityMatrix,
    FeatureMatrix,
    TargetAssignment,
    load_configuration_csv,
    load_dissimilarity_csv,
    load_feature_csv,
    normalize_configuration,
    save_configuration_csv,
    save_dissimilarity_csv,
    save_feature_csv,
)
from simspace.errors import (
    AsymmetricMatrix,
    DegenerateConfiguration,
    IoError,
    LabelMismatch,
    MalformedCsv,
    NegativeEntry,
    NonzeroDiagonal,
)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestDissimilarityCsv:
    def test_minimal_grid(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,0,3\nb,3,0\n")
        delta = load_dissimilarity_csv(p)
        assert delta.n == 2
        assert delta.labels == ("a", "b")
        assert delta.values[0, 1] == 3.0

    def test_tiny_asymmetry_is_averaged(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,0,3\nb,3.000000000001,0\n")
        delta = load_dissimilarity_csv(p)
        assert delta.values[0, 1] == delta.values[1, 0]
        assert delta.values[0, 1] == pytest.approx(3.0, abs=1e-11)

    def test_large_asymmetry_rejected(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,0,3\nb,3.1,0\n")
        with pytest.raises(AsymmetricMatrix):
            load_dissimilarity_csv(p)

    def test_nonzero_diagonal(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,1,3\nb,3,0\n")
        with pytest.raises(NonzeroDiagonal):
            load_dissimilarity_csv(p)

    def test_negative_entry(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,0,-3\nb,-3,0\n")
        with pytest.raises(NegativeEntry):
            load_dissimilarity_csv(p)

    def test_non_numeric_cell(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,0,x\nb,x,0\n")
        with pytest.raises(MalformedCsv):
            load_dissimilarity_csv(p)

    def test_ragged_row(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,0,3\nb,3\n")
        with pytest.raises(MalformedCsv):
            load_dissimilarity_csv(p)

    def test_nan_rejected(self, tmp_path):
        p = write(tmp_path / "d.csv", "label,a,b\na,0,nan\nb,nan,0\n")
        with pytest.raises(MalformedCsv):
            load_dissimilarity_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            load_dissimilarity_csv(tmp_path / "absent.csv")

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        v = rng.uniform(0, 5, (4, 4))
        v = (v + v.T) / 2
        np.fill_diagonal(v, 0.0)
        delta = DissimilarityMatrix(values=v, labels=("a", "b", "c", "d"))
        save_dissimilarity_csv(delta, tmp_path / "d.csv")
        back = load_dissimilarity_csv(tmp_path / "d.csv")
        assert np.array_equal(back.values, delta.values)
        assert back.labels == delta.labels


class TestConfigurationCsv:
    def test_single_point(self, tmp_path):
        config = Configuration(coords=[[0.0, 0.0]], labels=("s1",))
        save_configuration_csv(config, tmp_path / "c.csv")
        lines = (tmp_path / "c.csv").read_text().splitlines()
        assert lines[0] == "label,dim_1,dim_2"
        assert lines[1].split(",")[0] == "s1"
        back = load_configuration_csv(tmp_path / "c.csv")
        assert np.array_equal(back.coords, config.coords)

    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(1)
        config = Configuration(
            coords=rng.normal(size=(7, 3)) * 1e-3,
            labels=tuple(f"s{i}" for i in range(7)),
        )
        save_configuration_csv(config, tmp_path / "c.csv")
        back = load_configuration_csv(tmp_path / "c.csv")
        assert np.array_equal(back.coords, config.coords)
        assert back.labels == config.labels

    def test_unwritable_path(self, tmp_path):
        config = Configuration(coords=[[0.0]], labels=("s1",))
        with pytest.raises(IoError):
            save_configuration_csv(config, tmp_path / "nodir" / "c.csv")

    def test_duplicate_labels_rejected(self):
        with pytest.raises(MalformedCsv):
            Configuration(coords=[[0.0], [1.0]], labels=("a", "a"))


class TestFeatureCsv:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        features = FeatureMatrix(
            values=rng.normal(size=(5, 4)),
            sample_ids=tuple(f"r{i}" for i in range(5)),
            group_ids=("g0", "g0", "g1", "g1", "g2"),
        )
        save_feature_csv(features, tmp_path / "f.csv")
        back = load_feature_csv(tmp_path / "f.csv")
        assert np.array_equal(back.values, features.values)
        assert back.sample_ids == features.sample_ids
        assert back.group_ids == features.group_ids
        assert back.groups == ("g0", "g1", "g2")


class TestNormalize:
    def test_fixed_point(self):
        config = Configuration(coords=[[1.0], [-1.0]], labels=("a", "b"))
        out = normalize_configuration(config)
        assert np.array_equal(out.coords, config.coords)

    def test_centering_and_scaling(self):
        config = Configuration(coords=[[0.0], [2.0]], labels=("a", "b"))
        out = normalize_configuration(config)
        assert np.allclose(out.coords, [[-1.0], [1.0]], atol=1e-15)

    def test_degenerate(self):
        config = Configuration(coords=[[0.0, 0.0], [0.0, 0.0]], labels=("a", "b"))
        with pytest.raises(DegenerateConfiguration):
            normalize_configuration(config)

    def test_invariants_on_random_configs(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            n, t = rng.integers(2, 12), rng.integers(1, 5)
            config = Configuration(
                coords=rng.normal(2.0, 3.0, size=(n, t)),
                labels=tuple(f"s{i}" for i in range(n)),
            )
            out = normalize_configuration(config)
            assert np.abs(out.coords.mean(axis=0)).max() < 1e-12
            assert abs(np.mean(np.sum(out.coords**2, axis=1)) - 1.0) < 1e-12
            again = normalize_configuration(out)
            assert np.abs(again.coords - out.coords).max() < 1e-12

    def test_distance_ratios_preserved(self):
        rng = np.random.default_rng(5)
        coords = rng.normal(5.0, 2.0, size=(8, 3))
        config = Configuration(coords=coords, labels=tuple(f"s{i}" for i in range(8)))
        out = normalize_configuration(config)

        def pdists(x):
            iu = np.triu_indices(x.shape[0], k=1)
            d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
            return d[iu]

        before, after = pdists(config.coords), pdists(out.coords)
        ratios = after / before
        assert ratios.max() - ratios.min() < 1e-9


class TestTargetAssignment:
    def test_targets_align_rows(self):
        config = Configuration(
            coords=[[1.0, 0.0], [0.0, 1.0]], labels=("g0", "g1")
        )
        assignment = TargetAssignment.from_configuration(config)
        targets = assignment.targets_for(("g1", "g0", "g1"))
        assert np.array_equal(targets, [[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])

    def test_missing_group(self):
        config = Configuration(coords=[[1.0]], labels=("g0",))
        assignment = TargetAssignment.from_configuration(config)
        with pytest.raises(LabelMismatch):
            assignment.targets_for(("g0", "g9"))
