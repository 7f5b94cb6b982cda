"""Figures written next to the CSV outputs."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 120,
}

# PNG metadata would otherwise stamp the matplotlib version into every file.
_SAVE = {"metadata": {"Software": None}, "bbox_inches": "tight"}


def figsize(width=6.0, ratio=0.62):
    return (width, width * ratio)


def plot_cycle(trace, path):
    with plt.rc_context(STYLE):
        fig, (ax_w, ax_f) = plt.subplots(1, 2, figsize=figsize(8.0, 0.4))
        t = [e.time for e in trace.wind_events]
        ax_w.step(t, [e.tension * 1e3 for e in trace.wind_events], where="post", color="C0")
        ax_w.set_xlabel("time [s]")
        ax_w.set_ylabel("string tension [mN]")
        if trace.stall_event is not None:
            ax_w.set_title(f"stall at {trace.stall_event.deflection * 1e3:.3f} mm")
        else:
            ax_w.set_title("winding to release")
        if trace.flight:
            ax_f.plot([s.time * 1e3 for s in trace.flight],
                      [s.height * 1e3 for s in trace.flight], color="C1")
            ax_f.axhline(trace.apex_height * 1e3, ls=":", color="0.5")
            ax_f.set_title(f"apex {trace.apex_height * 1e3:.2f} mm")
        else:
            ax_f.text(0.5, 0.5, "no flight", ha="center", va="center", transform=ax_f.transAxes)
        ax_f.set_xlabel("time after release [ms]")
        ax_f.set_ylabel("height [mm]")
        fig.savefig(path, **_SAVE)
        plt.close(fig)


def plot_sweep(rows, name, path):
    """``rows`` are sweep records with value, apex_m, jump_rate_per_min, feasible."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        x = [r["value"] for r in rows]
        ax.plot(x, [r["apex_m"] * 1e3 for r in rows], "o-", color="C0", label="apex")
        bad = [r for r in rows if not r["feasible"]]
        if bad:
            ax.plot([r["value"] for r in bad], [r["apex_m"] * 1e3 for r in bad], "x",
                    color="C3", label="infeasible")
        ax.set_xlabel(name)
        ax.set_ylabel("apex [mm]")
        rate_ax = ax.twinx()
        rate_ax.plot(x, [r["jump_rate_per_min"] for r in rows], "s--", color="C2", ms=3)
        rate_ax.set_ylabel("jumps / min", color="C2")
        ax.legend(loc="best")
        fig.savefig(path, **_SAVE)
        plt.close(fig)


def plot_history(result, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        best = float("-inf")
        trail = []
        for entry in result.history:
            if entry.feasible:
                best = max(best, entry.objective)
            trail.append(best if best > float("-inf") else float("nan"))
        ax.plot(range(1, len(trail) + 1), trail, color="C0")
        feas = [(i + 1, e.objective) for i, e in enumerate(result.history) if e.feasible]
        if feas:
            ax.plot(*zip(*feas), ".", color="0.6", ms=3)
        ax.set_xlabel("evaluation")
        ax.set_ylabel("objective (best so far)")
        fig.savefig(path, **_SAVE)
        plt.close(fig)
