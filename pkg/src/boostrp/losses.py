"""Multi-output losses: values, negative gradients, intercepts and step weights.

All losses are sums of per-output terms, so every operation works column by
column. Arrays are (n, d) or (d,); scalars broadcast as numpy does.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.special import expit

from .brent import brent_minimize
from .errors import ConvergenceError, DegenerateOutputError, LineSearchError, ShapeError, ValidationError

RHO_MAX = 1e3
BRENT_TOL = 1e-8
BRENT_MAX_ITER = 100


class Loss(str, enum.Enum):
    L2 = "l2"
    L1 = "l1"
    LOGISTIC = "logistic"


def _pair(y, y_pred):
    y = np.asarray(y, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y.shape != y_pred.shape:
        raise ShapeError(f"target shape {y.shape} does not match prediction shape {y_pred.shape}")
    return y, y_pred


def _check_signs(y):
    if not np.isin(y, (-1.0, 1.0)).all():
        raise ValidationError("logistic loss needs targets in {-1, +1}")


def elementwise_loss(loss, y, y_pred):
    """Per-entry loss terms; summing them gives :func:`loss_value`."""
    loss = Loss(loss)
    if loss is Loss.L2:
        return 0.5 * (y - y_pred) ** 2
    if loss is Loss.L1:
        return np.abs(y - y_pred)
    return np.logaddexp(0.0, -2.0 * y * y_pred)


def loss_value(loss, y, y_pred) -> float:
    """Total loss summed over every entry of ``y``."""
    y, y_pred = _pair(y, y_pred)
    if Loss(loss) is Loss.LOGISTIC:
        _check_signs(y)
    return float(np.sum(elementwise_loss(loss, y, y_pred)))


def mean_loss(loss, Y, F) -> float:
    """Training loss averaged over samples (sum over outputs)."""
    Y, F = _pair(Y, F)
    return float(np.sum(elementwise_loss(loss, Y, F)) / max(Y.shape[0], 1))


def negative_gradient(loss, y, y_pred):
    """Negative gradient of the loss with respect to the prediction."""
    loss = Loss(loss)
    y, y_pred = _pair(y, y_pred)
    if loss is Loss.L2:
        return y - y_pred
    if loss is Loss.L1:
        return np.sign(y - y_pred)
    _check_signs(y)
    # 2y / (1 + exp(2 y y')) written to avoid overflow
    return 2.0 * y * expit(-2.0 * y * y_pred)


def constant_minimizer(loss, targets):
    """Per-output constant prediction ``rho0`` that starts the ensemble.

    l2: column mean. l1: lower median. logistic: ``log(n_pos / n_neg)``.
    """
    loss = Loss(loss)
    Y = np.asarray(targets, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y.reshape(-1, 1)
    n = Y.shape[0]
    if n < 1:
        raise ShapeError("need at least one sample")
    if loss is Loss.L2:
        return Y.mean(axis=0)
    if loss is Loss.L1:
        return np.sort(Y, axis=0)[(n - 1) // 2].copy()
    _check_signs(Y)
    n_pos = (Y > 0).sum(axis=0)
    n_neg = n - n_pos
    for j in range(Y.shape[1]):
        if n_pos[j] == 0 or n_neg[j] == 0:
            raise DegenerateOutputError(f"output {j} has a single class", output=j)
    return np.log(n_pos / n_neg)


def _line_search(loss, y, f, h, j):
    def objective(rho):
        return float(np.sum(elementwise_loss(loss, y, f + rho * h)))

    try:
        rho = brent_minimize(objective, (-RHO_MAX, RHO_MAX), tol=BRENT_TOL, max_iter=BRENT_MAX_ITER)
    except ConvergenceError as exc:
        raise LineSearchError(f"step search failed for output {j}: {exc}", output=j) from None
    # never accept a step worse than standing still
    if objective(rho) > objective(0.0):
        return 0.0
    return rho


def _fit_rho(loss, Y, F, H):
    loss = Loss(loss)
    d = Y.shape[1]
    rho = np.zeros(d)
    if loss is Loss.L2:
        R = Y - F
        num = np.einsum("ij,ij->j", R, H)
        den = np.einsum("ij,ij->j", H, H)
        nz = den > 0
        rho[nz] = num[nz] / den[nz]
        return rho
    if loss is Loss.LOGISTIC:
        _check_signs(Y)
    for j in range(d):
        h = H[:, j]
        if not np.any(h):
            continue
        rho[j] = _line_search(loss, Y[:, j], F[:, j], h, j)
    return rho


def _as_2d(a, name):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be a matrix")
    return a


def fit_rho_per_output_scalar_tree(loss, targets, current_pred, tree_out):
    """Step weights for a single-output weak model shared by all outputs.

    Returns ``rho`` (length d) minimizing, output by output,
    ``sum_i loss(y_ij, f_ij + rho_j * h_i)``.
    """
    Y = _as_2d(targets, "targets")
    F = _as_2d(current_pred, "current_pred")
    h = np.asarray(tree_out, dtype=np.float64).reshape(-1)
    if Y.shape != F.shape or h.shape[0] != Y.shape[0]:
        raise ShapeError("targets, predictions and tree output disagree on shape")
    return _fit_rho(loss, Y, F, np.broadcast_to(h[:, None], Y.shape))


def fit_rho_per_output_vector_tree(loss, targets, current_pred, tree_out):
    """Step weights for a d-output weak model (Hadamard update)."""
    Y = _as_2d(targets, "targets")
    F = _as_2d(current_pred, "current_pred")
    H = _as_2d(tree_out, "tree_out")
    if Y.shape != F.shape or H.shape != Y.shape:
        raise ShapeError("targets, predictions and tree output disagree on shape")
    return _fit_rho(loss, Y, F, H)
