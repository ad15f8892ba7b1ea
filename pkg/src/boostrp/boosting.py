"""Gradient tree boosting drivers for multi-output problems.

Four variants share one stagewise loop and differ only in what the weak
learner is fit on and how its output is spread over the d outputs:

* ``single_target``: one scalar tree per stage on output ``m mod d`` (round robin).
* ``gbmo``: a d-output tree on the full negative gradient, Hadamard step weights.
* ``gb_rpo``: a scalar tree on a fresh 1 x d projection of the negative
  gradient; a d-vector of step weights shares it across outputs.
* ``gb_relabel_rpo``: a tree on a q x d projection, relabelled with the
  unprojected gradient, then Hadamard step weights.

Stored step weights already include the learning rate, so prediction is
``rho0 + sum_m rho_m * g_m(x)``.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.special import expit

from .data import Dataset, Task, derive_seed
from .errors import ConfigError, ModeError, ShapeError
from .losses import (
    Loss,
    constant_minimizer,
    fit_rho_per_output_scalar_tree,
    fit_rho_per_output_vector_tree,
    mean_loss,
    negative_gradient,
)
from .projections import ProjectionMatrix, Scheme, draw_projection, project
from .tree import RegressionTree, TreeConfig, fit_tree, presort, relabel_leaves

# sub-seed streams
_TREE_STREAM = 0
_PROJECTION_STREAM = 1

ZERO_STAGE_PATIENCE = 3


class Variant(str, enum.Enum):
    SINGLE_TARGET = "single_target"
    GBMO = "gbmo"
    GB_RPO = "gb_rpo"
    GB_RELABEL_RPO = "gb_relabel_rpo"

    @property
    def scalar_leaves(self) -> bool:
        return self in (Variant.SINGLE_TARGET, Variant.GB_RPO)

    @property
    def projected(self) -> bool:
        return self in (Variant.GB_RPO, Variant.GB_RELABEL_RPO)


@dataclass(frozen=True)
class BoostConfig:
    variant: Variant = Variant.GBMO
    loss: Loss = Loss.L2
    n_stages: int = 100
    learning_rate: float = 0.1
    scheme: Scheme = Scheme.SUBSAMPLE
    q: int = 1
    tree: TreeConfig = TreeConfig()
    seed: int = 0
    time_budget: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "loss", Loss(self.loss))
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not 0.0 < self.learning_rate <= 1.0:
            raise ConfigError(f"learning rate must be in (0, 1], got {self.learning_rate}")
        if self.n_stages < 0:
            raise ConfigError("n_stages must be nonnegative")
        if self.q < 1:
            raise ConfigError("q must be at least 1")
        if self.variant is Variant.GB_RPO:
            object.__setattr__(self, "q", 1)
        if self.time_budget is not None and self.time_budget < 0:
            raise ConfigError("time_budget must be nonnegative")


@dataclass(frozen=True)
class Stage:
    tree: RegressionTree
    rho: np.ndarray
    projection: Optional[ProjectionMatrix] = None
    output: Optional[int] = None


@dataclass
class FitTrace:
    """Per-stage training loss and cumulative wall time; entry 0 is the intercept model."""

    train_loss: List[float] = field(default_factory=list)
    seconds: List[float] = field(default_factory=list)


@dataclass
class BoostedEnsemble:
    variant: Variant
    loss: Loss
    task: Task
    rho0: np.ndarray
    learning_rate: float
    n_features: int
    stages: List[Stage] = field(default_factory=list)
    trace: Optional[FitTrace] = field(default=None, compare=False, repr=False)

    @property
    def n_outputs(self) -> int:
        return self.rho0.shape[0]

    def _check(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeError(f"model expects {self.n_features} features, got input of shape {X.shape}")
        return X

    def _iter_scores(self, X):
        F = np.tile(self.rho0, (X.shape[0], 1))
        yield F
        for stage in self.stages:
            _accumulate(F, stage, stage.tree.predict(X), self.variant)
            yield F

    def predict(self, X) -> np.ndarray:
        """Raw scores (regression values or logits in the +-1 parameterization)."""
        X = self._check(X)
        for F in self._iter_scores(X):
            pass
        return F

    def staged_predict(self, X):
        X = self._check(X)
        for F in self._iter_scores(X):
            yield F.copy()

    def predict_proba(self, X) -> np.ndarray:
        if self.loss is not Loss.LOGISTIC:
            raise ModeError("probabilities are only defined for logistic-loss models")
        return expit(2.0 * self.predict(X))


def _accumulate(F, stage, h, variant):
    """F += rho * h, in place, with h the raw tree output on the rows of F."""
    if variant is Variant.SINGLE_TARGET:
        j = stage.output
        F[:, j] += stage.rho[j] * h[:, 0]
    elif variant.scalar_leaves:
        F += h[:, :1] * stage.rho
    else:
        F += h * stage.rho


def fit(train: Dataset, config: BoostConfig, callback=None) -> BoostedEnsemble:
    """Train an ensemble; the returned model carries a :class:`FitTrace`.

    ``callback(stage_index, model)`` is called after every stage when given.
    """
    loss, variant = config.loss, config.variant
    if loss is Loss.LOGISTIC and train.task is not Task.MULTILABEL:
        raise ConfigError("logistic loss needs a multilabel dataset")
    if train.n < 1:
        raise ConfigError("cannot train on an empty dataset")
    X, Y = train.features, train.targets
    n, d = Y.shape
    if variant.projected and config.scheme is Scheme.SUBSAMPLE and config.q > d:
        raise ConfigError(f"cannot subsample {config.q} of {d} outputs")

    start = time.perf_counter()
    rho0 = constant_minimizer(loss, Y)
    model = BoostedEnsemble(variant, loss, train.task, rho0, config.learning_rate, train.p)
    F = np.tile(rho0, (n, 1))
    trace = FitTrace([mean_loss(loss, Y, F)], [time.perf_counter() - start])
    model.trace = trace

    sorted_rows = presort(X)
    zero_run = 0
    for m in range(config.n_stages):
        if config.time_budget is not None and trace.seconds[-1] >= config.time_budget:
            break
        tree_cfg = TreeConfig(config.tree.max_leaves, config.tree.k_features,
                              config.tree.min_samples_leaf, derive_seed(config.seed, _TREE_STREAM, m))
        G = negative_gradient(loss, Y, F)
        phi = None
        output = None
        if variant is Variant.SINGLE_TARGET:
            output = m % d
            tree = fit_tree(X, G[:, output], tree_cfg, sorted_rows)
            h = tree.predict(X)
            rho = np.zeros(d)
            rho[output] = fit_rho_per_output_scalar_tree(loss, Y[:, [output]], F[:, [output]], h[:, 0])[0]
        elif variant is Variant.GBMO:
            tree = fit_tree(X, G, tree_cfg, sorted_rows)
            h = tree.predict(X)
            rho = fit_rho_per_output_vector_tree(loss, Y, F, h)
        else:
            phi = draw_projection(config.scheme, config.q, d,
                                  derive_seed(config.seed, _PROJECTION_STREAM, m))
            tree = fit_tree(X, project(phi, G), tree_cfg, sorted_rows)
            if variant is Variant.GB_RPO:
                h = tree.predict(X)
                rho = fit_rho_per_output_scalar_tree(loss, Y, F, h[:, 0])
            else:
                tree = relabel_leaves(tree, X, G)
                h = tree.predict(X)
                rho = fit_rho_per_output_vector_tree(loss, Y, F, h)
        rho = config.learning_rate * rho
        stage = Stage(tree, rho, phi, output)
        model.stages.append(stage)
        _accumulate(F, stage, h, variant)
        trace.train_loss.append(mean_loss(loss, Y, F))
        trace.seconds.append(time.perf_counter() - start)
        if callback is not None:
            callback(m, model)
        zero_run = zero_run + 1 if not np.any(rho) else 0
        if zero_run >= ZERO_STAGE_PATIENCE:
            break
    return model


def predict(model: BoostedEnsemble, X) -> np.ndarray:
    return model.predict(X)


def predict_proba(model: BoostedEnsemble, X) -> np.ndarray:
    return model.predict_proba(X)


def staged_scores(model: BoostedEnsemble, X, y_true, metric) -> List[float]:
    """``metric(y_true, scores)`` after each prefix of stages (length = stages + 1)."""
    X = model._check(X)
    return [float(metric(y_true, F)) for F in model._iter_scores(X)]
