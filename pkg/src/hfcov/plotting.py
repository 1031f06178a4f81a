"""Figures written next to the tabular output of the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_mc", "plot_lan_convergence"]

_STYLE = {
    "figure.figsize": (7.0, 3.4),
    "figure.dpi": 100,
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
}
# no version string in the PNG, so identical runs give identical bytes
_META = {"Software": None}

_LABELS = {"hy": "HY", "sub": "subsample", "multi": "multi-scale"}


def plot_mc(result, path) -> None:
    """Boxplot of the noise-robust estimates plus RMSE bars for every estimator.

    The HY estimate is left out of the boxplot since its spread under noise
    swamps the other two.
    """
    names = list(result.estimators)
    boxed = [n for n in names if n != "hy"] or names
    with plt.rc_context(_STYLE):
        fig, (ax0, ax1) = plt.subplots(1, 2, gridspec_kw={"width_ratios": [3, 2]})
        data = [result.estimates[:, result.column(n)] for n in boxed]
        ax0.boxplot(data, widths=0.5)
        ax0.set_xticks(range(1, len(boxed) + 1), [_LABELS[n] for n in boxed])
        ax0.axhline(result.true_cov, color="0.4", ls="--", lw=0.8)
        ax0.set_ylabel("estimate")
        ax0.set_title(f"R = {result.estimates.shape[0]}", fontsize=9)

        rmse = [result.rmse(n) for n in names]
        ax1.bar(range(len(names)), rmse, color="0.55", width=0.6)
        ax1.set_xticks(range(len(names)), [_LABELS[n] for n in names])
        if max(rmse) > 20 * min(rmse):
            ax1.set_yscale("log")
        ax1.set_ylabel("RMSE")
        fig.tight_layout()
        fig.savefig(path, metadata=_META)
        plt.close(fig)


def plot_lan_convergence(rows, path) -> None:
    """Relative error of the squared-gamma sum against its limit, log-log in N."""
    n = np.array([r["N"] for r in rows], dtype=float)
    if "rel_error" in rows[0]:
        series = {"exact": [r["rel_error"] for r in rows]}
    else:
        series = {
            "lower bracket": [r["rel_error_lower"] for r in rows],
            "upper bracket": [r["rel_error_upper"] for r in rows],
        }
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.4))
        for label, err in series.items():
            err = np.asarray(err, dtype=float)
            ok = err > 0
            ax.loglog(n[ok], err[ok], marker="o", ms=3, label=label)
        ax.set_xlabel("N")
        ax.set_ylabel("relative error")
        if len(series) > 1:
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata=_META)
        plt.close(fig)
