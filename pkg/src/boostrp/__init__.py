"""Multi-output gradient tree boosting with random output projections."""

__version__ = "0.1.0"

from .boosting import BoostConfig, BoostedEnsemble, Variant, fit, predict, predict_proba, staged_scores
from .brent import brent_minimize
from .data import Dataset, Split, Task, load_csv, save_csv, split_dataset, standardize_targets
from .losses import Loss, constant_minimizer, loss_value, negative_gradient
from .metrics import lrap, macro_r2
from .modelio import load_model, save_model
from .projections import ProjectionMatrix, Scheme, draw_projection, project
from .synthetic import Family, SyntheticSpec, friedman_base, generate
from .tree import RegressionTree, TreeConfig, fit_tree, predict_tree, relabel_leaves

scalar_brent_minimize = brent_minimize

__all__ = [
    "BoostConfig", "BoostedEnsemble", "Dataset", "Family", "Loss", "ProjectionMatrix",
    "RegressionTree", "Scheme", "Split", "SyntheticSpec", "Task", "TreeConfig", "Variant",
    "brent_minimize", "constant_minimizer", "draw_projection", "fit", "fit_tree",
    "friedman_base", "generate", "load_csv", "load_model", "loss_value", "lrap", "macro_r2",
    "negative_gradient", "predict", "predict_proba", "predict_tree", "project",
    "relabel_leaves", "save_csv", "save_model", "scalar_brent_minimize", "split_dataset",
    "staged_scores", "standardize_targets",
]
