"""Figures written next to the JSON reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.ticker import MaxNLocator

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    # fixed metadata keeps repeated runs byte-identical
    "svg.hashsalt": "ternlab",
}


def _save(fig, path):
    path = str(path)
    meta = {"Software": None} if path.endswith(".png") else None
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    return path


def plot_state_sum(element, path, title=None):
    """Bar chart of the multiplicity of each ``t^k``."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3))
        ks = list(range(element.modulus))
        ax.bar(ks, element.multiplicities, color="0.35", width=0.6)
        ax.set_xticks(ks, [f"$t^{{{k}}}$" for k in ks])
        ax.set_ylabel("colorings")
        ax.yaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_title(title or f"state sum  {element}")
        for k, n in zip(ks, element.multiplicities):
            if n:
                ax.annotate(str(n), (k, n), ha="center", va="bottom", fontsize=8)
        return _save(fig, path)


def plot_homology(groups, path, title=None):
    """Free rank and number of torsion summands per degree."""
    degrees = sorted(groups)
    ranks = [groups[n].rank for n in degrees]
    tors = [len(groups[n].torsion) for n in degrees]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3))
        w = 0.38
        ax.bar([n - w / 2 for n in degrees], ranks, w, label="free rank", color="0.3")
        ax.bar([n + w / 2 for n in degrees], tors, w, label="torsion summands", color="0.7")
        for n in degrees:
            if groups[n].torsion:
                label = ",".join(str(d) for d in groups[n].torsion[:4])
                if len(groups[n].torsion) > 4:
                    label += ",..."
                ax.annotate(label, (n + w / 2, len(groups[n].torsion)), ha="center", va="bottom", fontsize=7)
        ax.set_xticks(degrees)
        ax.set_xlabel("degree n")
        ax.yaxis.set_major_locator(MaxNLocator(integer=True))
        ax.legend(frameon=False, fontsize=8)
        ax.set_title(title or "homology")
        return _save(fig, path)
