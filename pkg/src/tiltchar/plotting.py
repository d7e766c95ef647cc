"""Figures for comparison reports and characters (written to files, never shown)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .rootdata import format_weight  # noqa: E402

_STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "svg.hashsalt": "tiltchar",
}


def _save(fig, path: Path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated runs byte-identical
    meta = {"Software": None} if path.suffix == ".png" else {"Date": None}
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    return path


def plot_report(report, path) -> Path:
    """Grouped bars of the two multiplicity columns, one group per orbit in the down-set."""
    labels = [format_weight(mu) for mu, _, _ in report.rows]
    t_vals = [t for _, t, _ in report.rows]
    m_vals = [m for _, _, m in report.rows]
    xs = range(len(labels))
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(max(6.0, 0.22 * len(labels) + 2), 3.6))
        ax.bar([x - 0.2 for x in xs], t_vals, width=0.4, label="t_zeta", color="#4c72b0")
        ax.bar([x + 0.2 for x in xs], m_vals, width=0.4, label="M_p", color="#dd8452")
        for x, (_, t, m) in zip(xs, report.rows):
            if t != m:
                ax.annotate("*", (x, max(t, m)), ha="center", va="bottom", color="crimson")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(labels, rotation=90, fontsize=6)
        ax.set_ylabel("multiplicity")
        ax.yaxis.set_major_locator(MaxNLocator(integer=True))
        verdict = "agree" if report.agrees else f"{len(report.differences())} rows differ"
        ax.set_title(f"{report.type_label}, p={report.p}, weight ({format_weight(report.lam)}): {verdict}")
        ax.legend(frameon=False)
        fig.tight_layout()
    return _save(fig, path)


def plot_character(eta, path, title: str = "") -> Path:
    """Orbit coefficients against height below the highest weight."""
    rs = eta.rs
    items = eta.sorted_items()
    top = max(rs.scaled_height(mu) for mu, _ in items)
    det = rs.inverse_cartan_scaled[0]
    xs = [(top - rs.scaled_height(mu)) / det for mu, _ in items]
    ys = [c for _, c in items]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3.4))
        ax.scatter(xs, ys, s=12, color="#4c72b0")
        ax.set_xlabel("depth below highest weight (root height)")
        ax.set_ylabel("orbit coefficient")
        if min(ys) > 0 and max(ys) > 50 * min(ys):
            ax.set_yscale("log")
        ax.set_title(title or f"{rs.name}: {len(items)} orbits")
        fig.tight_layout()
    return _save(fig, path)
