import csv
import hashlib

import numpy as np
import pytest

from simspace import (
    Configuration,
    FeatureMatrix,
    save_configuration_csv,
    save_dissimilarity_csv,
    save_feature_csv,
)
from simspace.cli import main
from simspace.errors import ValidationError
from simspace.experiment import load_experiment_config, run_experiment

from conftest import euclidean_delta


def build_inputs(tmp_path, groups=8, replicates=3, k=6, t=2, seed=95):
    """Tiny self-consistent data set: targets linear in two features."""
    rng = np.random.default_rng(seed)
    labels = tuple(f"g{i:02d}" for i in range(groups))
    readout = rng.normal(size=(2, t))
    values, sample_ids, group_ids, points = [], [], [], []
    for g in labels:
        signal = rng.normal(size=2)
        points.append(signal @ readout)
        for j in range(replicates):
            row = np.concatenate(
                [signal + 0.05 * rng.normal(size=2), rng.normal(size=k - 2)]
            )
            values.append(row)
            sample_ids.append(f"{g}_r{j}")
            group_ids.append(g)
    features_path = tmp_path / "features_ann.csv"
    save_feature_csv(
        FeatureMatrix(
            values=np.asarray(values),
            sample_ids=tuple(sample_ids),
            group_ids=tuple(group_ids),
        ),
        features_path,
    )
    space_path = tmp_path / "space4d.csv"
    save_configuration_csv(
        Configuration(coords=np.asarray(points), labels=labels), space_path
    )
    delta_path = tmp_path / "delta.csv"
    save_dissimilarity_csv(
        euclidean_delta(np.asarray(points), labels), delta_path
    )
    return features_path, space_path, delta_path


def write_config(tmp_path, text):
    path = tmp_path / "experiment.cfg"
    path.write_text(text, encoding="utf-8")
    return path


def read_report(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    return [dict(zip(header, row)) for row in rows[1:]]


def test_exp1_crossing(tmp_path):
    features_path, space_path, _ = build_inputs(tmp_path)
    config_path = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp1
seed = 11
output_dir = out

[data]
features_ann = {features_path.name}
target_space = {space_path.name}

[regression]
folds = 4
shuffle_seed = 3
beta_grid = 0.0,0.1
""",
    )
    assert main(["experiment", "--config", str(config_path)]) == 0
    records = read_report(tmp_path / "out" / "report.csv")
    kinds = {(r["regressor"], r["shuffled"], r["beta"]) for r in records}
    assert ("zero_baseline", "false", "") in kinds
    assert ("linear", "false", "") in kinds
    assert ("linear", "true", "") in kinds
    assert ("lasso", "false", "0.1") in kinds
    assert ("lasso", "true", "0.1") in kinds
    baseline = [r for r in records if r["regressor"] == "zero_baseline"][0]
    assert float(baseline["mse_test"]) == pytest.approx(1.0, abs=1e-12)
    # correct targets are learnable, shuffled ones are not
    linear = {
        r["shuffled"]: float(r["r2_test"])
        for r in records
        if r["regressor"] == "linear"
    }
    assert linear["false"] > 0.8
    assert linear["true"] < 0.2


def test_exp2_compares_target_spaces(tmp_path):
    features_path, space_path, delta_path = build_inputs(tmp_path)
    config_path = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp2
seed = 12
output_dir = out2

[data]
features_ann = {features_path.name}
target_space = {space_path.name}
dissimilarities = {delta_path.name}

[mds]
restarts = 4
max_iterations = 120
dims = 2

[regression]
folds = 4
beta_grid = 0.0,0.1
""",
    )
    assert main(["experiment", "--config", str(config_path)]) == 0
    records = read_report(tmp_path / "out2" / "report.csv")
    spaces = {r["target_space"] for r in records}
    assert spaces == {"space4d", "metric_smacof", "nonmetric_smacof"}
    assert (tmp_path / "out2" / "space_metric.csv").exists()
    assert (tmp_path / "out2" / "space_nonmetric.csv").exists()
    baselines = [r for r in records if r["regressor"] == "zero_baseline"]
    assert len(baselines) == 3
    for r in baselines:
        assert float(r["mse_test"]) == pytest.approx(1.0, abs=1e-12)
        assert float(r["overfit_r2"]) == 1.0


def test_exp3_dimension_sweep(tmp_path):
    features_path, _, delta_path = build_inputs(tmp_path)
    config_path = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp3
seed = 13
output_dir = out3

[data]
features_ann = {features_path.name}
dissimilarities = {delta_path.name}

[mds]
restarts = 3
max_iterations = 100
dims_range = 1:2

[regression]
folds = 4
beta_grid = 0.1
""",
    )
    assert main(["experiment", "--config", str(config_path)]) == 0
    records = read_report(tmp_path / "out3" / "report.csv")
    assert {r["target_space"] for r in records} == {"nonmetric_t1", "nonmetric_t2"}
    assert (tmp_path / "out3" / "space_nonmetric_t1.csv").exists()
    assert (tmp_path / "out3" / "space_nonmetric_t2.csv").exists()


def test_byte_identical_reruns_and_untouched_inputs(tmp_path):
    features_path, space_path, delta_path = build_inputs(tmp_path)
    digests = {
        p: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in (features_path, space_path, delta_path)
    }
    config_path = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp1
seed = 14
output_dir = outA

[data]
features_ann = {features_path.name}
target_space = {space_path.name}

[regression]
folds = 4
shuffle_seed = 2
beta_grid = 0.0
""",
    )
    assert main(["experiment", "--config", str(config_path)]) == 0
    first = (tmp_path / "outA" / "report.csv").read_bytes()
    assert main(["experiment", "--config", str(config_path)]) == 0
    assert (tmp_path / "outA" / "report.csv").read_bytes() == first
    for p, digest in digests.items():
        assert hashlib.sha256(p.read_bytes()).hexdigest() == digest


def test_config_validation(tmp_path):
    features_path, space_path, delta_path = build_inputs(tmp_path)
    # missing seed
    bad = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp1
output_dir = out

[data]
features_ann = {features_path.name}
target_space = {space_path.name}
""",
    )
    with pytest.raises(ValidationError):
        load_experiment_config(bad)
    # exp3 without dissimilarities
    bad = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp3
seed = 1
output_dir = out

[data]
features_ann = {features_path.name}
""",
    )
    with pytest.raises(ValidationError):
        load_experiment_config(bad)
    # nonexistent feature file
    bad = write_config(
        tmp_path,
        """
[experiment]
preset = exp1
seed = 1
output_dir = out

[data]
features_ann = missing.csv
target_space = also_missing.csv
""",
    )
    with pytest.raises(ValidationError):
        load_experiment_config(bad)
    # unknown preset via CLI exits 1
    bad = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp9
seed = 1
output_dir = out

[data]
features_ann = {features_path.name}
""",
    )
    assert main(["experiment", "--config", str(bad)]) == 1


def test_exp1_multiple_feature_spaces(tmp_path):
    features_path, space_path, _ = build_inputs(tmp_path)
    # second, uninformative feature space
    rng = np.random.default_rng(96)
    import simspace

    base = simspace.load_feature_csv(features_path)
    pixel_path = tmp_path / "features_pixel.csv"
    save_feature_csv(
        FeatureMatrix(
            values=rng.uniform(size=(base.rows, 4)),
            sample_ids=base.sample_ids,
            group_ids=base.group_ids,
        ),
        pixel_path,
    )
    config_path = write_config(
        tmp_path,
        f"""
[experiment]
preset = exp1
seed = 15
output_dir = outM

[data]
features_ann = {features_path.name}
features_pixel = {pixel_path.name}
target_space = {space_path.name}

[regression]
folds = 4
shuffle_seed = 4
beta_grid = 0.0
""",
    )
    assert main(["experiment", "--config", str(config_path)]) == 0
    records = read_report(tmp_path / "outM" / "report.csv")
    spaces = {r["feature_space"] for r in records}
    assert {"ann", "pixel", "any"} == spaces
    assert sum(r["regressor"] == "zero_baseline" for r in records) == 1
