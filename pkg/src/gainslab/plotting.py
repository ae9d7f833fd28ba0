"""Figure rendering for CLI reports.

Imported lazily by the CLI so headless data runs never touch matplotlib.
Each renderer takes the rows a command produced and writes a PNG next to
the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import ConfigError


def render_figure(cfg, result) -> str:
    """Render the report of ``cfg.command`` to ``cfg.plot`` and return the path."""
    renderer = _RENDERERS.get(cfg.command)
    if renderer is None:
        raise ConfigError(f"command {cfg.command!r} has no figure representation")
    fig = renderer(cfg, result.rows)
    fig.savefig(cfg.plot, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return cfg.plot


def _gain_vs_decay(cfg, rows):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    nu = [r["nu"] for r in rows]
    ax.plot(nu, [r["g_star_double_cm"] for r in rows], "b-", label="double pumping")
    ax.plot(nu, [r["g_star_single_cm"] for r in rows], "r--", label="single pumping")
    ax.axhline(cfg.medium.alpha0, color="gray", ls=":", label=r"$\alpha_0$ ceiling")
    ax.set_xlabel(r"decay constant $\nu$")
    ax.set_ylabel(r"required entry gain $g_\star$ (cm$^{-1}$)")
    ax.set_ylim(0, 2.2 * cfg.medium.alpha0)
    ax.legend(frameon=False)
    return fig


def _singularity_plane(cfg, rows):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot([r["g_star_cm"] for r in rows], [r["lambda_nm"] for r in rows],
            "o", ms=4, color="tab:blue")
    ax.axhline(cfg.medium.lambda0, color="gray", ls="--", lw=0.8)
    ax.set_xlabel(r"entry gain $g_\star$ (cm$^{-1}$)")
    ax.set_ylabel(r"wavelength $\lambda$ (nm)")
    ax.set_title(rf"lasing thresholds at $\nu = {cfg.medium.nu:g}$")
    return fig


def _gain_scan(cfg, rows):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot([r["nu"] for r in rows], [r["g_star_cm"] for r in rows], "o-", ms=4)
    ax.axhline(cfg.medium.alpha0, color="gray", ls=":", lw=0.8)
    ax.set_xlabel(r"decay constant $\nu$")
    ax.set_ylabel(r"entry gain $g_\star$ (cm$^{-1}$)")
    if rows:
        ax.set_title(f"mode m = {rows[0]['m']}")
    return fig


_RENDERERS = {
    "fig2-data": _gain_vs_decay,
    "fig3-data": _singularity_plane,
    "enumerate": _singularity_plane,
    "scan-nu": _gain_scan,
    "table1": _singularity_plane,
}
