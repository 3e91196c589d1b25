"""Figures for the CLI report path. The numerical core never imports this."""

from __future__ import annotations

from matplotlib.figure import Figure


def plot_gap_ratios(reports, path):
    """Certified gap ratio against p, with the ``(p/2)^(1/8)`` floor."""
    ps = [r.p for r in reports]
    fig = Figure(figsize=(6, 4), tight_layout=True)
    ax = fig.add_subplot()
    ax.plot(ps, [r.gap_ratio for r in reports], "o-", label="certified sym/jcb ratio")
    ax.plot(ps, [r.paper_floor for r in reports], "s--", label=r"$(p/2)^{1/8}$")
    ax.set_xlabel("p")
    ax.set_ylabel("lower bound on sym / jcb")
    ax.legend(frameon=False)
    fig.savefig(path)
    return path


def plot_survey(table, path):
    """Median and range of U^k over random sign functions, log-log in |G|."""
    sizes = [r.size for r in table.rows]
    med = [r.median for r in table.rows]
    fig = Figure(figsize=(6, 4), tight_layout=True)
    ax = fig.add_subplot()
    ax.fill_between(sizes, [r.min for r in table.rows], [r.max for r in table.rows],
                    alpha=0.25, label="min/max")
    ax.plot(sizes, med, "o-", label="median")
    rate = 1.0 / 2**table.k
    ref = [med[0] * (s / sizes[0]) ** -rate for s in sizes]
    ax.plot(sizes, ref, "k:", label=rf"$|G|^{{-1/{2**table.k}}}$ (scaled)")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("|G|")
    ax.set_ylabel(f"U^{table.k} norm")
    ax.legend(frameon=False)
    fig.savefig(path)
    return path
