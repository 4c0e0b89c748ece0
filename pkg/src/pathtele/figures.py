"""Plot renderers for the CLI's delimited outputs.

Each function takes the row dicts a command emits and writes one PNG next
to the data file. Rendering is headless and deterministic; the data files
stay the source of truth.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_META = {"Software": "pathtele"}


def _grid_from_rows(rows, xkey, ykey, vkey):
    xs = sorted({r[xkey] for r in rows})
    ys = sorted({r[ykey] for r in rows})
    lookup = {(r[xkey], r[ykey]): r[vkey] for r in rows}
    grid = np.array([[lookup[(x, y)] for x in xs] for y in ys], dtype=float)
    return np.array(xs), np.array(ys), grid


def render_sweep_xy(rows, path, channel, branches=("plus", "minus")):
    fig, axes = plt.subplots(
        1, len(branches), figsize=(5.0 * len(branches), 4.0), constrained_layout=True
    )
    for ax, branch in zip(np.atleast_1d(axes), branches):
        xs, ys, grid = _grid_from_rows(rows, "x", "y", f"sim_{branch}")
        mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", vmin=0.0, vmax=1.0)
        ax.contour(xs, ys, grid, levels=[2.0 / 3.0], colors="white", linewidths=1.2)
        ax.set_xlabel("X")
        ax.set_ylabel("y")
        ax.set_title(f"{channel} {branch} branch average")
        fig.colorbar(mesh, ax=ax)
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)


def render_regions(rows, path):
    codes = {"none": 0, "K": 1, "L": 2}
    coded = [dict(r, code=codes[r["protocol"]]) for r in rows]
    xs, ys, grid = _grid_from_rows(coded, "x", "y", "code")
    fig, ax = plt.subplots(figsize=(6.0, 4.5), constrained_layout=True)
    cmap = matplotlib.colors.ListedColormap(["#dddddd", "#3a6ea5", "#4c9a4c"])
    ax.pcolormesh(xs, ys, grid, shading="nearest", cmap=cmap, vmin=-0.5, vmax=2.5)
    ax.set_xlabel("X")
    ax.set_ylabel("y")
    ax.set_title("advantage regions (grey none, blue K, green L)")
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)


def render_werner(rows, path, branches):
    fig, ax = plt.subplots(figsize=(6.5, 4.5), constrained_layout=True)
    xs = sorted({r["x"] for r in rows})
    styles = {"plus": "-", "minus": "--"}
    for x in xs:
        sub = sorted((r for r in rows if r["x"] == x), key=lambda r: r["p"])
        ps = [r["p"] for r in sub]
        for branch in branches:
            ax.plot(ps, [r[f"sim_{branch}"] for r in sub],
                    styles[branch], label=f"X={x:g} {branch}")
    ax.axhline(2.0 / 3.0, color="black", linewidth=0.8)
    for marker_p, label in ((0.2, "p=1/5"), (1.0 / 3.0, "p=1/3")):
        ax.axvline(marker_p, color="grey", linewidth=0.8, linestyle=":")
        ax.text(marker_p, 0.34, label, rotation=90, fontsize=8, va="bottom")
    ax.set_xlabel("p")
    ax.set_ylabel("average fidelity")
    ax.set_title("isotropic-noise resource, branch averages")
    ax.legend(fontsize=7, ncol=2)
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)


def render_coherence(rows, path, unitary):
    fig, ax = plt.subplots(figsize=(6.5, 4.5), constrained_layout=True)
    phis = sorted({r["phi_c"] for r in rows})
    if unitary == "hadamard" and len(phis) > 1:
        xs, ys, grid = _grid_from_rows(rows, "phi_c", "coherence", "f_adv_sim")
        mesh = ax.pcolormesh(xs, ys, grid, shading="nearest")
        ax.set_xlabel("control azimuth")
        ax.set_ylabel("coherence")
        ax.set_title("advantage with fixed readout")
        fig.colorbar(mesh, ax=ax)
    else:
        sub = sorted(rows, key=lambda r: r["coherence"])
        cs = [r["coherence"] for r in sub]
        ax.plot(cs, [r["f_max_sim"] for r in sub], "-", label="simulated")
        ax.plot(cs, [r["f_max_closed"] for r in sub], "--", label="closed form")
        ax.axhline(2.0 / 3.0, color="black", linewidth=0.8)
        ax.set_xlabel("coherence")
        ax.set_ylabel("best branch average")
        ax.set_title(f"readout: {unitary}")
        ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)
