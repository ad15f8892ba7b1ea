"""Versioned plain-text model files.

Layout (one record per line, whitespace separated)::

    boostrp-model 1
    variant gb_rpo
    loss l2
    task regression
    d 3
    p 5
    mu 0.1
    stages 2
    rho0 <d floats>
    stage 0
    output -1
    projection subsample <seed> <q> <d>
    rho <d floats>
    tree <n_nodes> <c>
    <feature> <threshold> <left> <right> <n_samples> <c floats>   # preorder, one per node
    ...
    end

Floats are written with ``repr`` so they round-trip exactly. A projection
line may be followed by ``matrix <q*d floats>``; otherwise the matrix is
regenerated from its seed on load.
"""

from __future__ import annotations

import numpy as np

from .boosting import BoostedEnsemble, Stage, Variant
from .data import Task
from .errors import ModelFormatError
from .losses import Loss
from .projections import ProjectionMatrix, Scheme, draw_projection
from .tree import RegressionTree

MAGIC = "boostrp-model"
FORMAT_VERSION = 1


def _floats(values) -> str:
    return " ".join(repr(float(v)) for v in np.ravel(values))


def dumps(model: BoostedEnsemble, explicit_projections: bool = False) -> str:
    lines = [
        f"{MAGIC} {FORMAT_VERSION}",
        f"variant {model.variant.value}",
        f"loss {model.loss.value}",
        f"task {model.task.value}",
        f"d {model.n_outputs}",
        f"p {model.n_features}",
        f"mu {float(model.learning_rate)!r}",
        f"stages {len(model.stages)}",
        f"rho0 {_floats(model.rho0)}",
    ]
    for i, st in enumerate(model.stages):
        lines.append(f"stage {i}")
        lines.append(f"output {-1 if st.output is None else st.output}")
        phi = st.projection
        if phi is None:
            lines.append("projection none")
        else:
            lines.append(f"projection {phi.scheme.value} {phi.seed} {phi.q} {phi.d}")
            if explicit_projections:
                lines.append(f"matrix {_floats(phi.entries)}")
        lines.append(f"rho {_floats(st.rho)}")
        t = st.tree
        lines.append(f"tree {t.n_nodes} {t.n_outputs}")
        for k in range(t.n_nodes):
            lines.append(f"{t.feature[k]} {float(t.threshold[k])!r} {t.left[k]} {t.right[k]} "
                         f"{t.n_samples[k]} {_floats(t.value[k])}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def save_model(model: BoostedEnsemble, path, explicit_projections: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model, explicit_projections))


class _Reader:
    def __init__(self, text):
        self.lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        self.pos = 0

    def next(self, key=None):
        if self.pos >= len(self.lines):
            raise ModelFormatError("unexpected end of model file")
        parts = self.lines[self.pos]
        self.pos += 1
        if key is not None:
            if parts[0] != key:
                raise ModelFormatError(f"line {self.pos}: expected '{key}', found '{parts[0]}'")
            return parts[1:]
        return parts

    def peek(self):
        return self.lines[self.pos][0] if self.pos < len(self.lines) else None


def loads(text: str) -> BoostedEnsemble:
    r = _Reader(text)
    try:
        head = r.next()
        if len(head) != 2 or head[0] != MAGIC:
            raise ModelFormatError("not a boostrp model file")
        if int(head[1]) != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format version {head[1]}")
        variant = Variant(r.next("variant")[0])
        loss = Loss(r.next("loss")[0])
        task = Task(r.next("task")[0])
        d = int(r.next("d")[0])
        p = int(r.next("p")[0])
        mu = float(r.next("mu")[0])
        n_stages = int(r.next("stages")[0])
        rho0 = np.array(r.next("rho0"), dtype=np.float64)
        if rho0.shape != (d,):
            raise ModelFormatError("rho0 length does not match d")
        model = BoostedEnsemble(variant, loss, task, rho0, mu, p)
        for i in range(n_stages):
            if int(r.next("stage")[0]) != i:
                raise ModelFormatError(f"stage {i} out of order")
            out = int(r.next("output")[0])
            proj = r.next("projection")
            phi = None
            if proj[0] != "none":
                scheme, seed, q, pd = Scheme(proj[0]), int(proj[1]), int(proj[2]), int(proj[3])
                if r.peek() == "matrix":
                    entries = np.array(r.next("matrix"), dtype=np.float64).reshape(q, pd)
                    phi = ProjectionMatrix(scheme, q, pd, seed, entries)
                else:
                    phi = draw_projection(scheme, q, pd, seed)
            rho = np.array(r.next("rho"), dtype=np.float64)
            n_nodes, c = (int(v) for v in r.next("tree"))
            rows = [r.next() for _ in range(n_nodes)]
            if any(len(row) != 5 + c for row in rows):
                raise ModelFormatError(f"stage {i}: malformed tree node")
            tree = RegressionTree(
                feature=np.array([int(row[0]) for row in rows], dtype=np.intp),
                threshold=np.array([float(row[1]) for row in rows]),
                left=np.array([int(row[2]) for row in rows], dtype=np.intp),
                right=np.array([int(row[3]) for row in rows], dtype=np.intp),
                n_samples=np.array([int(row[4]) for row in rows], dtype=np.int64),
                value=np.array([row[5:] for row in rows], dtype=np.float64).reshape(n_nodes, c),
                n_features=p,
            )
            model.stages.append(Stage(tree, rho, phi, None if out < 0 else out))
        r.next("end")
    except (ValueError, IndexError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model file: {exc}") from None
    return model


def load_model(path) -> BoostedEnsemble:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
