import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boostrp.data import Dataset, Task, derive_seed, load_csv, save_csv, split_dataset, standardize_targets
from boostrp.errors import DegenerateOutputError, ParseError, ShapeError, SizingError, ValidationError


@pytest.fixture
def tiny_csv(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("1,2,0\n3,4,1\n5,6,1\n")
    return path


class TestLoadCsv:
    def test_multilabel_maps_to_signs(self, tiny_csv):
        ds = load_csv(tiny_csv, 1, "multilabel")
        assert (ds.n, ds.p, ds.d) == (3, 2, 1)
        np.testing.assert_array_equal(ds.targets[:, 0], [-1, 1, 1])

    def test_regression_passthrough(self, tiny_csv):
        ds = load_csv(tiny_csv, 1, "regression")
        np.testing.assert_array_equal(ds.targets[:, 0], [0, 1, 1])
        np.testing.assert_array_equal(ds.features, [[1, 2], [3, 4], [5, 6]])

    def test_too_few_columns(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("1,2\n")
        with pytest.raises(ShapeError):
            load_csv(path, 2)

    def test_ragged_row_reports_line(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1,2,3\n4,5\n")
        with pytest.raises(ParseError) as err:
            load_csv(path, 1)
        assert err.value.row == 2

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2,3\n4,x,6\n")
        with pytest.raises(ParseError, match="row 2"):
            load_csv(path, 1)

    def test_bad_label(self, tmp_path):
        path = tmp_path / "lab.csv"
        path.write_text("1,2\n3,2\n")
        with pytest.raises(ValidationError):
            load_csv(path, 1, "multilabel")

    def test_header_detected(self, tmp_path):
        path = tmp_path / "hdr.csv"
        path.write_text("a,b,y1,y2\n1,2,3,4\n")
        ds = load_csv(path, 2)
        assert ds.feature_names == ("a", "b")
        assert ds.target_names == ("y1", "y2")
        assert ds.n == 1

    @pytest.mark.parametrize("task", [Task.REGRESSION, Task.MULTILABEL])
    def test_round_trip(self, tmp_path, rng, task):
        X = rng.standard_normal((7, 3)) * 1e3
        Y = rng.standard_normal((7, 2)) if task is Task.REGRESSION else np.where(rng.random((7, 2)) < .5, -1., 1.)
        ds = Dataset(X, Y, task)
        path = tmp_path / "rt.csv"
        save_csv(ds, path)
        back = load_csv(path, 2, task)
        np.testing.assert_allclose(back.features, ds.features, rtol=0, atol=1e-12)
        np.testing.assert_allclose(back.targets, ds.targets, rtol=0, atol=1e-12)


class TestDataset:
    def test_rejects_nan(self):
        with pytest.raises(ValidationError):
            Dataset([[np.nan]], [[1.0]])

    def test_rejects_row_mismatch(self):
        with pytest.raises(ShapeError):
            Dataset(np.zeros((3, 1)), np.zeros((2, 1)))

    def test_multilabel_encoding_enforced(self):
        with pytest.raises(ValidationError):
            Dataset([[0.0]], [[0.0]], "multilabel")

    def test_immutable(self):
        ds = Dataset([[1.0]], [[2.0]])
        with pytest.raises(ValueError):
            ds.features[0, 0] = 3.0


class TestSplit:
    def test_forty_ten_fifty_proportions(self):
        ds = Dataset(np.arange(10.0).reshape(-1, 1), np.arange(10.0).reshape(-1, 1))
        sp = split_dataset(ds, (0.4, 0.1, 0.5), seed=3)
        assert (sp.train.n, sp.validation.n, sp.test.n) == (4, 1, 5)

    def test_all_train(self):
        ds = Dataset(np.arange(10.0).reshape(-1, 1), np.zeros((10, 1)))
        sp = split_dataset(ds, (1, 0, 0), seed=3)
        assert sp.train.n == 10 and sp.validation.n == 0 and sp.test.n == 0
        assert sorted(sp.train.features[:, 0]) == list(range(10))

    def test_deterministic(self):
        ds = Dataset(np.arange(20.0).reshape(-1, 1), np.zeros((20, 1)))
        a = split_dataset(ds, (0.5, 0.25, 0.25), seed=11)
        b = split_dataset(ds, (0.5, 0.25, 0.25), seed=11)
        np.testing.assert_array_equal(a.test.features, b.test.features)

    def test_too_small(self):
        ds = Dataset(np.zeros((2, 1)), np.zeros((2, 1)))
        with pytest.raises(SizingError):
            split_dataset(ds, (0.8, 0.1, 0.1), seed=0)

    def test_fractions_must_sum_to_one(self):
        ds = Dataset(np.zeros((10, 1)), np.zeros((10, 1)))
        with pytest.raises(SizingError):
            split_dataset(ds, (0.5, 0.2, 0.2), seed=0)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(3, 60), a=st.integers(1, 8), b=st.integers(0, 8), c=st.integers(0, 8),
           seed=st.integers(0, 2**63))
    def test_partition(self, n, a, b, c, seed):
        total = a + b + c
        fr = (a / total, b / total, 1 - a / total - b / total)
        ds = Dataset(np.arange(float(n)).reshape(-1, 1), np.zeros((n, 1)))
        try:
            sp = split_dataset(ds, fr, seed)
        except SizingError:
            return
        ids = np.concatenate([sp.train.features[:, 0], sp.validation.features[:, 0], sp.test.features[:, 0]])
        assert sorted(ids) == list(range(n))
        assert abs(sp.validation.n - fr[1] * n) < 1 + 1e-9
        assert abs(sp.test.n - fr[2] * n) < 1 + 1e-9


class TestStandardize:
    def test_two_points(self):
        ds = Dataset([[0.0], [0.0]], [[1.0], [3.0]])
        out, scaler = standardize_targets(ds)
        np.testing.assert_allclose(out.targets, [[-1], [1]])
        # independent reference: numpy population statistics
        np.testing.assert_allclose(scaler.mean, np.mean([1.0, 3.0]))
        np.testing.assert_allclose(scaler.std, np.std([1.0, 3.0], ddof=0))

    def test_moments_and_inverse(self, rng):
        Y = rng.standard_normal((50, 3)) * [1, 10, 100] + [5, -2, 0]
        ds = Dataset(rng.standard_normal((50, 2)), Y)
        out, scaler = standardize_targets(ds)
        assert np.all(np.abs(out.targets.mean(axis=0)) < 1e-10)
        assert np.all(np.abs(out.targets.var(axis=0) - 1) < 1e-8)
        np.testing.assert_allclose(scaler.inverse(out.targets), Y, atol=1e-10)

    def test_idempotent(self, rng):
        ds = Dataset(rng.standard_normal((30, 1)), rng.standard_normal((30, 2)))
        once, _ = standardize_targets(ds)
        twice, _ = standardize_targets(once)
        np.testing.assert_allclose(twice.targets, once.targets, atol=1e-10)

    def test_constant_column(self):
        ds = Dataset(np.zeros((3, 1)), [[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
        with pytest.raises(DegenerateOutputError) as err:
            standardize_targets(ds)
        assert err.value.output == 1


def test_derive_seed_is_stable():
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)
    assert derive_seed(7, 1, 2) != derive_seed(7, 2, 1)
    assert 0 <= derive_seed(2**64 - 1, 5) < 2**64
