"""Label ranking average precision and macro-averaged r2."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateOutputError, ShapeError, UndefinedMetricError


@dataclass(frozen=True)
class MetricReport:
    name: str
    value: float
    per_output: Optional[np.ndarray] = None
    skipped_rows: int = 0


def _pair(y_true, y_pred):
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.ndim == 1:
        y_true = y_true.reshape(1, -1) if y_pred.ndim == 1 else y_true.reshape(-1, 1)
    if y_pred.ndim == 1:
        y_pred = y_pred.reshape(y_true.shape)
    if y_true.shape != y_pred.shape:
        raise ShapeError(f"y_true shape {y_true.shape} does not match scores shape {y_pred.shape}")
    return y_true, y_pred


def lrap_report(y_true, scores) -> MetricReport:
    """LRAP with ties counted on both sides (``>=``); rows without positives are skipped.

    Labels are positive when ``y_true > 0``, so both {0, 1} and {-1, +1}
    encodings work.
    """
    y_true, scores = _pair(y_true, scores)
    positive = y_true > 0
    total = 0.0
    used = 0
    for pos, s in zip(positive, scores):
        if not pos.any():
            continue
        s_all = np.sort(s)
        s_pos = np.sort(s[pos])
        s_j = s[pos]
        n_all = s_all.size - np.searchsorted(s_all, s_j, side="left")
        n_pos = s_pos.size - np.searchsorted(s_pos, s_j, side="left")
        total += float(np.mean(n_pos / n_all))
        used += 1
    if used == 0:
        raise UndefinedMetricError("no row has a positive label")
    return MetricReport("lrap", total / used, skipped_rows=y_true.shape[0] - used)


def lrap(y_true, scores) -> float:
    return lrap_report(y_true, scores).value


def macro_r2_report(y_true, y_pred) -> MetricReport:
    """``1 - mean_j SSE_j / SST_j`` with SST around the evaluation-set mean."""
    y_true, y_pred = _pair(y_true, y_pred)
    if y_true.shape[0] < 2:
        raise UndefinedMetricError("macro-r2 needs at least two samples")
    sst = np.sum((y_true - y_true.mean(axis=0)) ** 2, axis=0)
    if np.any(sst <= 0):
        j = int(np.argmax(sst <= 0))
        raise DegenerateOutputError(f"output {j} is constant", output=j)
    sse = np.sum((y_true - y_pred) ** 2, axis=0)
    per_output = 1.0 - sse / sst
    return MetricReport("macro_r2", float(per_output.mean()), per_output)


def macro_r2(y_true, y_pred) -> float:
    return macro_r2_report(y_true, y_pred).value


METRICS = {"lrap": lrap, "macro_r2": macro_r2}
REPORTS = {"lrap": lrap_report, "macro_r2": macro_r2_report}
