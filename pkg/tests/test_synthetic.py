import numpy as np
import pytest

from boostrp.errors import ConfigError
from boostrp.synthetic import SyntheticSpec, friedman_base, generate, outputs_from_inputs


class TestFriedmanBase:
    @pytest.mark.parametrize("x,expected", [
        ((0, 0, 0, 0, 0), 5.0),
        ((0.5, 1, 0.5, 1, 1), 25.0),
        ((0, 0, 0.5, 0, 0), 0.0),
    ])
    def test_examples(self, x, expected):
        assert friedman_base(x) == pytest.approx(expected, abs=1e-12)

    def test_rowwise(self):
        X = np.array([[0, 0, 0, 0, 0], [0, 0, 0.5, 0, 0]], dtype=float)
        np.testing.assert_allclose(friedman_base(X), [5.0, 0.0], atol=1e-12)


class TestGenerate:
    def test_shapes(self):
        ds = generate(SyntheticSpec("ind", n=7, d=3))
        assert (ds.n, ds.p, ds.d) == (7, 15, 3)
        ds = generate(SyntheticSpec("group", n=7, d=3, add_permuted_noise_outputs=True))
        assert (ds.p, ds.d) == (5, 6)

    def test_chain_without_noise_collapses(self):
        ds = generate(SyntheticSpec("chain", n=50, d=4, noise_sigma=0.0, seed=3))
        f = friedman_base(ds.features)
        np.testing.assert_array_equal(ds.targets, np.tile(f[:, None], (1, 4)))

    def test_ind_feature_support(self):
        ds = generate(SyntheticSpec("ind", n=40, d=2, noise_sigma=0.0, seed=8))
        X = ds.features.copy()
        rng = np.random.default_rng(0)
        # scrambling features 6-10 must leave output 1 unchanged, and vice versa
        X1 = X.copy()
        X1[:, 5:] = rng.permutation(X1[:, 5:])
        Y1 = outputs_from_inputs("ind", X1, 2)
        np.testing.assert_array_equal(Y1[:, 0], ds.targets[:, 0])
        assert not np.allclose(Y1[:, 1], ds.targets[:, 1])
        X2 = X.copy()
        X2[:, :5] = rng.permutation(X2[:, :5])
        Y2 = outputs_from_inputs("ind", X2, 2)
        np.testing.assert_array_equal(Y2[:, 1], ds.targets[:, 1])

    def test_group_noise_variance(self):
        ds = generate(SyntheticSpec("group", n=4000, d=16, seed=1))
        resid = ds.targets - friedman_base(ds.features)[:, None]
        assert np.all(np.abs(resid.var(axis=0) - 1.0) < 0.1)

    def test_chain_covariance(self):
        ds = generate(SyntheticSpec("chain", n=100_000, d=8, seed=2))
        f = friedman_base(ds.features)
        cov = np.cov(ds.targets[:, 0], ds.targets[:, -1])[0, 1]
        assert cov == pytest.approx(f.var(), rel=0.1)

    def test_ind_outputs_uncorrelated(self):
        ds = generate(SyntheticSpec("ind", n=100_000, d=4, seed=3))
        corr = np.corrcoef(ds.targets.T)
        assert np.max(np.abs(corr[~np.eye(4, dtype=bool)])) < 0.05

    def test_permuted_outputs_are_row_permutations(self):
        ds = generate(SyntheticSpec("group", n=30, d=3, seed=4, add_permuted_noise_outputs=True))
        for j in range(3):
            np.testing.assert_array_equal(np.sort(ds.targets[:, 3 + j]), np.sort(ds.targets[:, j]))
            assert not np.array_equal(ds.targets[:, 3 + j], ds.targets[:, j])

    def test_uniform_inputs(self):
        ds = generate(SyntheticSpec("group", n=500, d=2, inputs="uniform"))
        assert ds.features.min() >= 0.0 and ds.features.max() < 1.0

    def test_deterministic(self):
        a = generate(SyntheticSpec("chain", n=20, d=3, seed=9))
        b = generate(SyntheticSpec("chain", n=20, d=3, seed=9))
        np.testing.assert_array_equal(a.targets, b.targets)
        np.testing.assert_array_equal(a.features, b.features)

    def test_bad_spec(self):
        with pytest.raises(ConfigError):
            SyntheticSpec("group", n=5, d=2, inputs="beta")
        with pytest.raises(ConfigError):
            generate(SyntheticSpec("group", n=0, d=2))
