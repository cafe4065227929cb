"""Render experiment results to PNG figures.

matplotlib is imported lazily with the Agg backend so nothing here touches a
display server, and importing the rest of the package never pays the cost.
Figures are a convenience view; the JSON and CSV outputs stay canonical.
"""

from __future__ import annotations

from .harness import ExperimentResult


def _pyplot():
    import matplotlib
    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt
    return plt


def render_rate_figure(result: ExperimentResult, path: str) -> None:
    """Success rate against sample size for pac / uniform-convergence runs."""
    plt = _pyplot()
    sizes = [row.m for row in result.rows]
    rates = [row.successes / row.trials for row in result.rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(sizes, rates, marker="o")
    if result.config.n:
        target = 1 - 1 / result.config.n
        ax.axhline(target, linestyle="--", linewidth=1,
                   label=f"1 - 1/{result.config.n}")
        ax.legend(loc="lower right")
    ax.set_xlabel("sample size m")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title(f"{result.config.kind} ({result.config.trials} trials per point)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_curve_figure(result: ExperimentResult, path: str) -> None:
    """Estimated sample complexity against the accuracy index n."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if result.estimates:
        known = [(est.n, est.m) for est in result.estimates if est.m is not None]
        missing = [est.n for est in result.estimates if est.m is None]
        if known:
            ax.plot([n for n, _ in known], [m for _, m in known], marker="o")
        top = max(result.config.m_grid)
        for n in missing:
            # no grid size reached the 1 - 1/n bar; mark it above the grid
            ax.scatter([n], [top], marker="x", color="tab:red")
    ax.set_xlabel("accuracy index n")
    ax.set_ylabel("estimated sample size")
    ax.set_title(f"sample complexity ({result.config.trials} trials per point)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(result: ExperimentResult, out_dir: str) -> list[str]:
    """Write the figures appropriate for the result's kind; return the paths."""
    import os
    paths = []
    if result.config.kind in ("pac", "uniform-convergence"):
        target = os.path.join(out_dir, "rate.png")
        render_rate_figure(result, target)
        paths.append(target)
    else:
        target = os.path.join(out_dir, "curve.png")
        render_curve_figure(result, target)
        paths.append(target)
    return paths
