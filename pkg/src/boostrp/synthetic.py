"""Friedman1 generators with chained, grouped or independent outputs."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .data import Dataset, Task, derive_seed, make_rng
from .errors import ConfigError


INPUT_DISTRIBUTIONS = ("normal", "uniform")


class Family(str, enum.Enum):
    CHAIN = "chain"
    GROUP = "group"
    IND = "ind"


@dataclass(frozen=True)
class SyntheticSpec:
    family: Family
    n: int
    d: int
    noise_sigma: float = 1.0
    seed: int = 0
    add_permuted_noise_outputs: bool = False
    inputs: str = "normal"

    def __post_init__(self):
        if self.inputs not in INPUT_DISTRIBUTIONS:
            raise ConfigError(f"inputs must be one of {INPUT_DISTRIBUTIONS}, got {self.inputs!r}")

    @property
    def p(self) -> int:
        return 5 * self.d if Family(self.family) is Family.IND else 5


def friedman_base(x) -> np.ndarray:
    """10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5, row-wise on the last axis."""
    x = np.asarray(x, dtype=np.float64)
    return (10.0 * np.sin(np.pi * x[..., 0] * x[..., 1]) + 20.0 * (x[..., 2] - 0.5) ** 2
            + 10.0 * x[..., 3] + 5.0 * x[..., 4])


def outputs_from_inputs(family, X, d: int, noise=None) -> np.ndarray:
    """Outputs for given inputs and per-output noise draws (zero noise if omitted)."""
    family = Family(family)
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    eps = np.zeros((n, d)) if noise is None else np.asarray(noise, dtype=np.float64)
    if family is Family.IND:
        return friedman_base(X.reshape(n, d, 5)) + eps
    f = friedman_base(X)[:, None]
    if family is Family.GROUP:
        return f + eps
    return f + np.cumsum(eps, axis=1)


def generate(spec: SyntheticSpec) -> Dataset:
    """Draw a dataset with unit Gaussian output noise scaled by ``noise_sigma``.

    Inputs are N(0, I) by default; ``inputs="uniform"`` draws them from
    U[0, 1] like the classical friedman1 benchmark.

    Output j of the ``ind`` family (0-based) depends on features 5j .. 5j+4 only.
    """
    family = Family(spec.family)
    n, d = int(spec.n), int(spec.d)
    if n < 1 or d < 1:
        raise ConfigError("n and d must be positive")
    # inputs and noise use separate streams so sigma=0 keeps the same inputs
    input_rng = make_rng(derive_seed(spec.seed, 0))
    if spec.inputs == "uniform":
        X = input_rng.random((n, spec.p))
    else:
        X = input_rng.standard_normal((n, spec.p))
    eps = spec.noise_sigma * make_rng(derive_seed(spec.seed, 1)).standard_normal((n, d))
    Y = outputs_from_inputs(family, X, d, eps)
    if spec.add_permuted_noise_outputs:
        rng = make_rng(derive_seed(spec.seed, 2))
        noise = np.column_stack([Y[rng.permutation(n), j] for j in range(d)])
        Y = np.hstack([Y, noise])
    return Dataset(X, Y, Task.REGRESSION)
