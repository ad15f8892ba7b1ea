"""Learning-curve figures for benchmark runs."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "single_target": dict(color="#1b9e77", label="st-gbrt"),
    "gbmo": dict(color="#d95f02", label="gbmort"),
    "gb_rpo": dict(color="#7570b3", label="gbrt-rpo-subsampled"),
    "gb_relabel_rpo": dict(color="#e7298a", label="gbrt-relabel-rpo-subsampled", linestyle="--"),
}


def plot_learning_curves(results, out_dir, fmt="png"):
    """One figure per family: test macro-r2 against training time (log scale)."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for fam in sorted({r.family.value for r in results}):
        cells = [r for r in results if r.family.value == fam and r.error is None]
        if not cells:
            continue
        fig, ax = plt.subplots(figsize=(6, 3.7))
        for r in cells:
            # the intercept-only point sits at t ~ 0, which a log axis cannot show
            secs, trace = r.seconds[1:], r.test_trace[1:]
            if not secs:
                secs, trace = r.seconds, r.test_trace
            ax.plot(secs, trace, lw=1.2, **STYLE.get(r.variant.value, dict(label=r.variant.value)))
        ax.set_xscale("log")
        ax.set_xlabel("training time [s]")
        ax.set_ylabel("test macro-$r^2$")
        ax.set_title(f"friedman1-{fam}")
        lo = min(min(r.test_trace) for r in cells)
        ax.set_ylim(max(lo, -0.1), 1.0)
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8, loc="lower right")
        fig.tight_layout()
        path = os.path.join(out_dir, f"curve_{fam}.{fmt}")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths
