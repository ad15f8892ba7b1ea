"""Synthetic-data comparison runner behind ``boostrp benchmark``.

Each cell trains one variant on one friedman1 family and records, per
stage, wall time, training loss and test macro-r2. Hyper-parameters are
chosen by a small grid on a held-out validation block.
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .boosting import BoostConfig, Variant, fit, staged_scores
from .data import derive_seed, split_dataset
from .metrics import macro_r2
from .projections import Scheme
from .synthetic import Family, SyntheticSpec, generate
from .tree import TreeConfig

log = logging.getLogger(__name__)

VARIANTS = (Variant.SINGLE_TARGET, Variant.GBMO, Variant.GB_RPO, Variant.GB_RELABEL_RPO)
FAMILIES = (Family.CHAIN, Family.GROUP, Family.IND)


@dataclass
class CellResult:
    family: Family
    variant: Variant
    learning_rate: float = float("nan")
    max_leaves: int = 2
    best_stage: int = 0
    test_score: float = float("nan")
    final_score: float = float("nan")
    seconds: List[float] = field(default_factory=list)
    train_loss: List[float] = field(default_factory=list)
    test_trace: List[float] = field(default_factory=list)
    error: Optional[str] = None


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("BOOSTRP_THREADS", "1")))
    except ValueError:
        return 1


def run_cell(family, variant, n_stages, seed, *, n_train=300, n_test=4000, d=16,
             noisy_outputs=False, inputs="normal", learning_rates=(0.1,), max_leaves=(2,),
             time_budget=None, validation_fraction=0.2) -> CellResult:
    """Train one (family, variant) cell; never raises, failures land in ``error``."""
    family, variant = Family(family), Variant(variant)
    res = CellResult(family, variant)
    try:
        train = generate(SyntheticSpec(family, n_train, d, seed=derive_seed(seed, 0),
                                       add_permuted_noise_outputs=noisy_outputs, inputs=inputs))
        test = generate(SyntheticSpec(family, n_test, d, seed=derive_seed(seed, 1),
                                      add_permuted_noise_outputs=noisy_outputs, inputs=inputs))
        grid = list(itertools.product(learning_rates, max_leaves))
        if len(grid) > 1 and validation_fraction > 0:
            split = split_dataset(train, (1.0 - validation_fraction, validation_fraction, 0.0),
                                  derive_seed(seed, 2))
            best = None
            for mu, leaves in grid:
                cfg = BoostConfig(variant, "l2", n_stages, mu, Scheme.SUBSAMPLE, 1,
                                  TreeConfig(leaves), derive_seed(seed, 3), time_budget)
                model = fit(split.train, cfg)
                val = staged_scores(model, split.validation.features, split.validation.targets, macro_r2)
                m = int(np.argmax(val))
                if best is None or val[m] > best[0]:
                    best = (val[m], mu, leaves)
            _, mu, leaves = best
        else:
            mu, leaves = grid[0]
        cfg = BoostConfig(variant, "l2", n_stages, mu, Scheme.SUBSAMPLE, 1,
                          TreeConfig(leaves), derive_seed(seed, 3), time_budget)
        model = fit(train, cfg)
        res.learning_rate, res.max_leaves = mu, leaves
        res.seconds = list(model.trace.seconds)
        res.train_loss = list(model.trace.train_loss)
        res.test_trace = staged_scores(model, test.features, test.targets, macro_r2)
        res.best_stage = int(np.argmax(res.test_trace))
        res.test_score = res.test_trace[res.best_stage]
        res.final_score = res.test_trace[-1]
    except Exception as exc:  # a failed cell must not abort the table
        log.exception("cell %s/%s failed", family.value, variant.value)
        res.error = f"{type(exc).__name__}: {exc}"
    return res


def run_benchmark(n_stages, seed=0, *, suite="friedman", families: Sequence = FAMILIES,
                  variants: Sequence = VARIANTS, **cell_kwargs) -> List[CellResult]:
    noisy = suite == "friedman-noisy"
    jobs = [(Family(f), Variant(v)) for f in families for v in variants]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        futures = [pool.submit(run_cell, f, v, n_stages, derive_seed(seed, i),
                               noisy_outputs=noisy, **cell_kwargs)
                   for i, (f, v) in enumerate(jobs)]
        return [fut.result() for fut in futures]


def rank_cells(results: Sequence[CellResult]) -> Dict[tuple, int]:
    """Rank (1 = best test score) of each variant within its family."""
    ranks = {}
    for fam in {r.family for r in results}:
        cells = sorted((r for r in results if r.family is fam and r.error is None),
                       key=lambda r: -r.test_score)
        for k, r in enumerate(cells, start=1):
            ranks[(fam, r.variant)] = k
    return ranks


def write_outputs(results: Sequence[CellResult], out_dir) -> List[str]:
    """Write per-cell trace CSVs and ``summary.csv``; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for r in results:
        if r.error is not None:
            continue
        path = os.path.join(out_dir, f"trace_{r.family.value}_{r.variant.value}.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("stage,seconds,train_loss,test_macro_r2\n")
            for m, (s, tl, sc) in enumerate(zip(r.seconds, r.train_loss, r.test_trace)):
                fh.write(f"{m},{s:.6f},{tl!r},{sc!r}\n")
        written.append(path)
    ranks = rank_cells(results)
    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("family,variant,learning_rate,max_leaves,best_stage,test_macro_r2,"
                 "final_macro_r2,seconds,rank,status\n")
        for r in results:
            status = "ok" if r.error is None else r.error.replace(",", ";")
            secs = r.seconds[-1] if r.seconds else float("nan")
            fh.write(f"{r.family.value},{r.variant.value},{r.learning_rate},{r.max_leaves},"
                     f"{r.best_stage},{r.test_score:.6f},{r.final_score:.6f},{secs:.3f},"
                     f"{ranks.get((r.family, r.variant), '')},{status}\n")
    written.append(path)
    return written


def time_to_reach(seconds, trace, level) -> float:
    """First wall time at which ``trace`` reaches ``level``; ``inf`` if never."""
    for s, v in zip(seconds, trace):
        if v >= level:
            return s
    return float("inf")
