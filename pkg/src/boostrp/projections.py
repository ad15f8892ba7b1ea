"""Random projection matrices for the output space."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .data import make_rng
from .errors import ConfigError, ShapeError


class Scheme(str, enum.Enum):
    GAUSSIAN = "gaussian"
    ACHLIOPTAS = "achlioptas"
    SPARSE_RADEMACHER = "sparse_rademacher"
    SUBSAMPLE = "subsample"


@dataclass(frozen=True)
class ProjectionMatrix:
    scheme: Scheme
    q: int
    d: int
    seed: int
    entries: np.ndarray


def _rademacher(rng, q, d, s):
    """Entries in {-sqrt(s/q), 0, +sqrt(s/q)} w.p. {1/2s, 1-1/s, 1/2s}."""
    u = rng.random((q, d))
    scale = math.sqrt(s / q)
    out = np.zeros((q, d))
    out[u < 0.5 / s] = -scale
    out[(u >= 0.5 / s) & (u < 1.0 / s)] = scale
    return out


def draw_projection(scheme, q: int, d: int, seed: int) -> ProjectionMatrix:
    """Draw a ``q x d`` projection matrix; identical arguments give identical matrices."""
    scheme = Scheme(scheme)
    q, d = int(q), int(d)
    if q < 1 or d < 1:
        raise ConfigError("projection needs q >= 1 and d >= 1")
    rng = make_rng(seed)
    if scheme is Scheme.GAUSSIAN:
        entries = rng.normal(0.0, 1.0 / math.sqrt(q), size=(q, d))
    elif scheme is Scheme.ACHLIOPTAS:
        entries = _rademacher(rng, q, d, 3.0)
    elif scheme is Scheme.SPARSE_RADEMACHER:
        entries = _rademacher(rng, q, d, math.sqrt(d))
    else:
        if q > d:
            raise ConfigError(f"cannot subsample {q} distinct outputs out of {d}")
        picks = rng.choice(d, size=q, replace=False)
        entries = np.zeros((q, d))
        entries[np.arange(q), picks] = 1.0
    entries.setflags(write=False)
    return ProjectionMatrix(scheme, q, d, int(seed), entries)


def project(phi, vectors):
    """Map each row ``y`` of ``vectors`` (n x d) to ``phi @ y`` (n x q)."""
    entries = phi.entries if isinstance(phi, ProjectionMatrix) else np.asarray(phi, dtype=np.float64)
    V = np.asarray(vectors, dtype=np.float64)
    if V.ndim != 2 or V.shape[1] != entries.shape[1]:
        raise ShapeError(f"vectors of shape {V.shape} cannot be projected by a {entries.shape} matrix")
    return V @ entries.T
