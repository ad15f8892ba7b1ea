import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from boostrp.errors import DegenerateOutputError, ShapeError, UndefinedMetricError
from boostrp.metrics import lrap, lrap_report, macro_r2, macro_r2_report


def naive_lrap(y, s):
    """Direct enumeration of the ranking definition with >= ties."""
    vals = []
    for yi, si in zip(y, s):
        pos = [j for j in range(len(yi)) if yi[j] > 0]
        if not pos:
            continue
        acc = 0.0
        for j in pos:
            above = [k for k in range(len(si)) if si[k] >= si[j]]
            acc += sum(1 for k in above if yi[k] > 0) / len(above)
        vals.append(acc / len(pos))
    return sum(vals) / len(vals)


def naive_macro_r2(y, f):
    n, d = len(y), len(y[0])
    total = 0.0
    for j in range(d):
        mean = sum(y[i][j] for i in range(n)) / n
        sse = sum((y[i][j] - f[i][j]) ** 2 for i in range(n))
        sst = sum((y[i][j] - mean) ** 2 for i in range(n))
        total += sse / sst
    return 1 - total / d


class TestLrap:
    def test_perfect_ranking(self):
        assert lrap([[1, 0, 1]], [[0.9, 0.2, 0.5]]) == 1.0

    def test_inverted_pair(self):
        assert lrap([[1, 0]], [[0.2, 0.9]]) == 0.5

    def test_all_ties_give_positive_fraction(self):
        assert lrap([[1, 0, 0, 1, 0]], [[0.3] * 5]) == pytest.approx(2 / 5)

    def test_sign_encoding(self):
        assert lrap([[1, -1, 1]], [[0.9, 0.2, 0.5]]) == 1.0

    def test_rows_without_positives_skipped(self):
        rep = lrap_report([[0, 0], [1, 0]], [[0.1, 0.2], [0.2, 0.9]])
        assert rep.value == 0.5 and rep.skipped_rows == 1

    def test_no_positives_anywhere(self):
        with pytest.raises(UndefinedMetricError):
            lrap([[0, 0]], [[1.0, 2.0]])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            lrap([[1, 0]], [[1.0, 2.0, 3.0]])

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n, d = rng.integers(1, 8), rng.integers(1, 7)
            y = (rng.random((n, d)) < 0.4).astype(float)
            y[0, rng.integers(d)] = 1.0
            # coarse scores make ties common
            s = rng.integers(0, 4, size=(n, d)).astype(float)
            assert abs(lrap(y, s) - naive_lrap(y.tolist(), s.tolist())) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(hnp.arrays(np.float64, (4, 5), elements=st.floats(-5, 5)),
           hnp.arrays(np.bool_, (4, 5)))
    def test_monotone_transform_invariance(self, s, y):
        y = y.astype(float)
        y[:, 0] = 1.0
        # integer ranks keep the transform strictly increasing in floating point
        ranks = np.unique(s, return_inverse=True)[1].reshape(s.shape).astype(float)
        assert lrap(y, ranks**3 + 2 * ranks - 7) == pytest.approx(lrap(y, s), abs=1e-12)
        assert 0.0 <= lrap(y, s) <= 1.0

    @settings(max_examples=60, deadline=None)
    @given(hnp.arrays(np.bool_, (3, 6)))
    def test_labels_as_scores(self, y):
        y = y.astype(float)
        y[:, 0] = 1.0
        assert lrap(y, y) == 1.0


class TestMacroR2:
    def test_perfect(self, rng):
        y = rng.standard_normal((10, 3))
        assert macro_r2(y, y) == 1.0

    def test_mean_prediction(self, rng):
        y = rng.standard_normal((10, 3))
        assert macro_r2(y, np.tile(y.mean(axis=0), (10, 1))) == pytest.approx(0.0, abs=1e-12)

    def test_hand_example(self):
        assert macro_r2([[0.0], [2.0]], [[1.0], [1.0]]) == 0.0

    def test_can_be_negative(self):
        assert macro_r2([[0.0], [2.0]], [[2.0], [0.0]]) == -3.0

    def test_constant_column(self):
        with pytest.raises(DegenerateOutputError) as err:
            macro_r2([[0.0, 1.0], [2.0, 1.0]], [[0.0, 1.0], [2.0, 1.0]])
        assert err.value.output == 1

    def test_single_row(self):
        with pytest.raises(UndefinedMetricError):
            macro_r2([[1.0]], [[1.0]])

    def test_per_output(self):
        rep = macro_r2_report([[0.0, 0.0], [2.0, 2.0]], [[0.0, 1.0], [2.0, 1.0]])
        np.testing.assert_allclose(rep.per_output, [1.0, 0.0])
        assert rep.value == 0.5

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            n, d = rng.integers(2, 10), rng.integers(1, 5)
            y, f = rng.standard_normal((n, d)), rng.standard_normal((n, d))
            assert abs(macro_r2(y, f) - naive_macro_r2(y.tolist(), f.tolist())) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(hnp.arrays(np.float64, (6, 2), elements=st.floats(-10, 10)),
           hnp.arrays(np.float64, (6, 2), elements=st.floats(-10, 10)),
           st.floats(0.1, 10) | st.floats(-10, -0.1))
    def test_per_output_scale_invariance(self, y, f, c):
        if np.any(np.ptp(y, axis=0) < 1e-3):
            return
        a = macro_r2_report(y, f).per_output
        y2, f2 = y.copy(), f.copy()
        y2[:, 1] *= c
        f2[:, 1] *= c
        b = macro_r2_report(y2, f2).per_output
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9)
        assert np.all(a <= 1.0)
