"""Deterministic file output: delimited tables, JSON, and rendered figures.

All floating-point values are written with 12 significant digits via the
single format below, so repeated runs with identical inputs produce
byte-identical files.  Figures are rendered with the Agg backend straight to
PNG; no display is ever required.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "FLOAT_FMT",
    "format_value",
    "write_csv",
    "write_json",
    "write_dat",
    "fig_spectrum",
    "fig_delta",
    "fig_asymptotics",
    "fig_series",
    "fig_expand",
    "fig_greens",
]

FLOAT_FMT = "%.11e"


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return FLOAT_FMT % float(v)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonify(obj), indent=2, sort_keys=True) + "\n")
    return path


def write_dat(path, x, *columns, header: str | None = None) -> Path:
    """Whitespace-delimited columns (x first), one sample per line."""
    path = Path(path)
    cols = [np.asarray(x, dtype=float)] + [np.asarray(c, dtype=float) for c in columns]
    lines = [] if header is None else [f"# {header}"]
    for values in zip(*cols):
        lines.append(" ".join(FLOAT_FMT % v for v in values))
    path.write_text("\n".join(lines) + "\n")
    return path


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def fig_spectrum(path, table) -> Path:
    ns = [p.n for p in table]
    lams = [p.lam for p in table]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.plot(ns, lams, "o", ms=3)
    ax1.set_xlabel("n")
    ax1.set_ylabel(r"$\lambda_n$")
    ax1.set_title("square roots of eigenvalues")
    ax2.semilogy(ns, np.abs([p.a for p in table]), "o", ms=3, label=r"$a_n$")
    ax2.semilogy(ns, np.abs([p.b for p in table]), "s", ms=3, label=r"$b_n$")
    ax2.set_xlabel("n")
    ax2.set_title("norming constants")
    ax2.legend()
    return _save(fig, path)


def fig_delta(path, records, alpha, beta, asymptote=None) -> Path:
    ns = [r.n for r in records]
    fig, ax = plt.subplots(figsize=(5.4, 3.6))
    ax.plot(ns, [r.delta for r in records], "o", ms=3, label=r"$\delta_n$")
    if asymptote is not None:
        ax.plot(ns, asymptote, "-", lw=1, label="large-n law")
    ax.set_xlabel("n")
    ax.set_ylabel(r"$\delta_n$")
    ax.set_title(rf"index shift, $\alpha$={alpha:.4f}, $\beta$={beta:.4f}")
    ax.legend()
    return _save(fig, path)


def fig_asymptotics(path, report) -> Path:
    ns = np.array([r.n for r in report.rows])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for ax, resid, slope, label in (
            (ax1, [abs(r.residual) for r in report.rows],
             report.slope_lambda, r"$|\lambda_n - \lambda_n^{pred}|$"),
            (ax2, [abs(r.a_residual) for r in report.rows],
             report.slope_a, "norming residual (scaled)")):
        resid = np.asarray(resid)
        keep = resid > 0
        ax.loglog(ns[keep], resid[keep], "o", ms=3)
        ax.set_xlabel("n")
        ax.set_title(f"{label}, slope {slope:.2f}")
    return _save(fig, path)


def fig_series(path, x, curves: dict) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 3.8))
    for label, y in curves.items():
        ax.plot(x, y, lw=1, label=label)
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    ax.set_title("trigonometric series built from the correction terms")
    return _save(fig, path)


def fig_expand(path, xs, fvals, sums: dict, n_list, err_restricted) -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.plot(xs, fvals, "k-", lw=1.4, label="target")
    for N, S in sums.items():
        ax1.plot(xs, S, lw=0.9, label=f"N={N}")
    ax1.set_xlabel("x")
    ax1.legend(fontsize=8)
    ax1.set_title("partial sums")
    ax2.loglog(n_list, err_restricted, "o-")
    ax2.set_xlabel("N")
    ax2.set_title("sup error away from obstructed ends")
    return _save(fig, path)


def fig_greens(path, decay) -> Path:
    fig, ax = plt.subplots(figsize=(5.4, 3.6))
    ax.loglog(decay.lams, decay.sup_abs, "o-", label="sup |y|")
    ref = decay.sup_abs[0] * decay.lams[0] / decay.lams
    ax.loglog(decay.lams, ref, "--", lw=1, label=r"$\propto 1/\lambda$")
    ax.set_xlabel(r"$\lambda$")
    ax.set_title(f"resolvent decay, slope {decay.slope:.2f}")
    ax.legend()
    return _save(fig, path)
