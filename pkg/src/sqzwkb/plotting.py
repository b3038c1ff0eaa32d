"""Matplotlib rendering of distributions as self-contained SVG bar charts."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .distribution import FLAG_NONE

golden_mean = (np.sqrt(5) - 1.0) / 2.0
fig_width = 6.4
fig_size = [fig_width, fig_width * golden_mean]

params = {
    "axes.labelsize": 11,
    "font.family": "serif",
    "font.size": 10,
    "mathtext.fontset": "stix",
    "legend.fontsize": 9,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "figure.figsize": fig_size,
    "figure.subplot.left": 0.13,
    "figure.subplot.bottom": 0.14,
    "figure.subplot.right": 0.97,
    "figure.subplot.top": 0.90,
    # stable element ids so repeated renders are byte-identical
    "svg.hashsalt": "sqzwkb",
    "svg.fonttype": "path",
}

LABELS = {
    "exact_quadrature": "Exact (quadrature)",
    "exact_recurrence": "Exact (recurrence)",
    "wkb": "WKB interference",
    "cohen_closed_form": "Wigner-Cohen closed form",
    "wigner_ring": "Wigner ring integral",
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _mark_flags(ax, dist, top):
    bad = [m for m, f in enumerate(dist.flags) if f != FLAG_NONE]
    if bad:
        ax.plot(bad, np.full(len(bad), top), "v", color="tab:red", ms=5,
                label="breakdown (" + ", ".join(sorted(set(dist.flags[m] for m in bad))) + ")")


def plot_distribution(dist, path, title=None):
    """Bar chart of P_m against m; flagged entries get a red marker at the top."""
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        vals = np.where(np.isfinite(dist.values), dist.values, 0.0)
        ax.bar(dist.m, vals, width=1.0, color="0.25", linewidth=0)
        top = vals.max() * 1.05 if vals.size and vals.max() > 0 else 1.0
        _mark_flags(ax, dist, top)
        ax.set_xlim(-0.5, dist.m_max + 0.5)
        ax.set_ylim(0, top * 1.08)
        ax.set_xlabel("photon number $m$")
        ax.set_ylabel("$P_{m n}$")
        ax.set_title(title or f"{LABELS.get(dist.method.value, dist.method.value)}: "
                     f"$n={dist.n}$, $r={dist.r:g}$")
        if any(f != FLAG_NONE for f in dist.flags):
            ax.legend(loc="upper right", frameon=False)
        _save(fig, path)


def plot_overlay(a, b, path, title=None):
    """Reference ``a`` as bars with ``b`` overlaid as markers."""
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        va = np.where(np.isfinite(a.values), a.values, 0.0)
        vb = np.where(np.isfinite(b.values), b.values, np.nan)
        ax.bar(a.m, va, width=1.0, color="0.7", linewidth=0, label=LABELS.get(a.method.value, a.method.value))
        shown = vb > 0
        ax.plot(b.m[shown], vb[shown], ".", color="tab:blue", ms=2.5,
                label=LABELS.get(b.method.value, b.method.value))
        finite = np.concatenate([va, vb[np.isfinite(vb)]])
        top = finite.max() * 1.05 if finite.size and finite.max() > 0 else 1.0
        _mark_flags(ax, b, top)
        ax.set_xlim(-0.5, max(a.m_max, b.m_max) + 0.5)
        ax.set_ylim(0, top * 1.08)
        ax.set_xlabel("photon number $m$")
        ax.set_ylabel("$P_{m n}$")
        ax.set_title(title or f"$n={a.n}$, $r={a.r:g}$")
        ax.legend(loc="upper right", frameon=False)
        _save(fig, path)
