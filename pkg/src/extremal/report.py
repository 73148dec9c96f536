"""Figure rendering for sweep and trace CSV files."""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _read_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def render_sweep_figure(csv_path: str, out_path: str) -> None:
    """Extremal value vs n, one line per (l, k); mismatched rows marked red."""
    rows = _read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    groups: dict[tuple[int, int], list[dict]] = {}
    for row in rows:
        groups.setdefault((int(row["l"]), int(row["k"])), []).append(row)
    for (ell, k), grp in sorted(groups.items()):
        ns = [int(r["n"]) for r in grp]
        vals = [max(int(r["formula"]), 1) for r in grp]
        ax.plot(ns, vals, lw=0.8, label=f"l={ell}, k={k}")
    bad = [r for r in rows if r.get("equal") == "false"]
    if bad:
        ax.scatter(
            [int(r["n"]) for r in bad],
            [max(int(r["formula"]), 1) for r in bad],
            color="red",
            zorder=3,
            label="formula != two-term max",
        )
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("extremal family size")
    ax.set_title("Matching-free extremal values")
    if len(groups) <= 12:
        ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_trace_figure(csv_path: str, out_path: str) -> None:
    """Smoothed count, penalty and step deviation along the optimizer trace."""
    rows = _read_csv(csv_path)
    its = [int(r["iter"]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.plot(its, [float(r["Y"]) for r in rows], label="smoothed count Y")
    ax1.plot(its, [float(r["penalty"]) for r in rows], label="witness excess")
    ax1.set_ylabel("value")
    ax1.legend(fontsize=8)
    ax2.semilogy(its, [float(r["sigma"]) for r in rows], label="sigma")
    dev = [max(float(r["max_step_deviation"]), 1e-16) for r in rows]
    ax2.semilogy(its, dev, label="distance to nearest step vector")
    ax2.set_xlabel("iteration")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
