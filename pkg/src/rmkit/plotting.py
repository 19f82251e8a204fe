"""Figures rendered next to verification reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 120,
    "savefig.bbox": "tight",
}


def _save(fig, path: Path) -> Path:
    # fixed metadata keeps reruns byte-stable
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_minimal_powers(points: list[dict], path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for key, label, marker in (("minimal_power", "$k$", "o"),
                                   ("minimal_power_up_to_sign", "$k$ up to sign", "x")):
            xs = [p["data"]["level"] for p in points if p["recorded"][key] is not None]
            ys = [p["recorded"][key] for p in points if p["recorded"][key] is not None]
            ax.scatter(xs, ys, marker=marker, label=label, alpha=0.8)
        ax.set_xlabel("level $fD$")
        ax.set_ylabel("least power in $\\Gamma_1(fD)$")
        ax.set_yscale("log", base=2)
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_norm_minima(points: list[dict], path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ok = [p for p in points if "minimum_below_f2D" not in p["discrepancies"]]
        bad = [p for p in points if "minimum_below_f2D" in p["discrepancies"]]
        for group, label, marker in ((ok, "matches $f^2D$", "o"), (bad, "below $f^2D$", "s")):
            xs = [p["data"]["expected_minimum_norm"] for p in group]
            ys = [p["data"]["minimum_norm"] for p in group]
            if xs:
                ax.scatter(xs, ys, marker=marker, label=label, alpha=0.8)
        top = max((p["data"]["expected_minimum_norm"] for p in points), default=1)
        ax.plot([0, top], [0, top], color="0.5", lw=0.8)
        ax.set_xlabel("$f^2 D$")
        ax.set_ylabel("minimal integral norm")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_indices(points: list[dict], path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
        ns = [p["N"] for p in points]
        ax1.bar(ns, [p["data"]["index"] for p in points], color="C0")
        ax1.plot(ns, ns, "k_", markersize=12)
        ax1.set_xlabel("$N$")
        ax1.set_ylabel("$[\\Gamma_1(N):\\Gamma(N)]$")
        ax2.plot(ns, [p["data"]["sl2_order"] for p in points], "o", label="enumerated")
        ax2.plot(ns, [p["data"]["sl2_order_formula"] for p in points], "-", label="formula")
        ax2.set_xlabel("$N$")
        ax2.set_ylabel("$|SL_2(\\mathbb{Z}/N)|$")
        ax2.legend(frameon=False)
        return _save(fig, path)


def render_figures(report: dict, outdir: Path) -> list[Path]:
    """Write the PNG figures for ``report`` into ``outdir``; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    target, points = report["target"], report["points"]
    written = []
    if target == "lemma1":
        written.append(plot_minimal_powers(points, outdir / "lemma1_minimal_powers.png"))
    elif target == "lemma3":
        written.append(plot_norm_minima(points, outdir / "lemma3_norm_minima.png"))
    elif target == "lemma4":
        written.append(plot_indices(points, outdir / "lemma4_indices.png"))
    elif target == "theorem1":
        l1 = [{"data": p["data"]["lemma1"],
               "recorded": {k.split(".", 1)[1]: v for k, v in p["recorded"].items() if k.startswith("lemma1.")}}
              for p in points]
        l3 = [{"data": p["data"]["lemma3"],
               "discrepancies": [d.split(".", 1)[1] for d in p["discrepancies"]]}
              for p in points]
        written.append(plot_minimal_powers(l1, outdir / "theorem1_minimal_powers.png"))
        written.append(plot_norm_minima(l3, outdir / "theorem1_norm_minima.png"))
    return written
