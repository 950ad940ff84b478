"""Figure construction from persisted run artifacts.

Input schemas are fixed by the simulator's writers:

* decay.csv:        t, value
* resonance.csv:    xi1, xi2, xi3, eta1, eta2, eta3, a, mu, nu,
                    phase, grad_norm, transverse_ratio
* volume.csv:       l, measure, predicted, ratio, ci_halfwidth, hits
* diagnostics.csv:  t, energy_HN, z1, z2, linfxi1, linfxi2,
                    linf_phys1, linf_phys2, dhdt_linfxi
* normal_surface:   any JSON carrying the two transverse speeds, either
                    at the top level ({"c1": ..., "c2": ...}), under a
                    "speeds" key, or nested as config.speeds (the run
                    manifest layout)

Schema violations raise SchemaError before the output file is touched,
so a failed job never leaves a partial image behind.  Rendering is a
pure function of the inputs and the style options; repeated runs of the
same job produce byte-identical files (date metadata is stripped).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg", force=True)
matplotlib.rcParams["svg.hashsalt"] = "aniwave-plots"

from matplotlib.figure import Figure  # noqa: E402  (backend must be pinned first)

Array = np.ndarray

KINDS = ("decay", "resonance", "volume", "normal_surface", "diagnostics")
FORMATS = (".png", ".svg", ".pdf")

DECAY_COLUMNS = ("t", "value")
RESONANCE_COLUMNS = (
    "xi1", "xi2", "xi3", "eta1", "eta2", "eta3",
    "a", "mu", "nu", "phase", "grad_norm", "transverse_ratio",
)
VOLUME_COLUMNS = ("l", "measure", "predicted", "ratio", "ci_halfwidth", "hits")
DIAGNOSTICS_COLUMNS = (
    "t", "energy_HN", "z1", "z2", "linfxi1", "linfxi2",
    "linf_phys1", "linf_phys2", "dhdt_linfxi",
)

__all__ = [
    "SchemaError",
    "StyleOptions",
    "FigureJob",
    "KINDS",
    "fit_loglog",
    "normal_sections",
    "build_figure",
    "render",
]


class SchemaError(Exception):
    """An input file is missing or does not match its documented schema."""


@dataclass(frozen=True)
class StyleOptions:
    dpi: int = 150
    title: str | None = None
    annotate: bool = True

    def __post_init__(self) -> None:
        if self.dpi <= 0:
            raise SchemaError("dpi must be positive")


@dataclass(frozen=True)
class FigureJob:
    """One figure: a kind, its input artifacts, and the output path."""

    kind: str
    inputs: tuple[Path, ...]
    output: Path
    style: StyleOptions = field(default_factory=StyleOptions)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))
        if not self.inputs:
            raise SchemaError("a figure job needs at least one input file")
        for p in self.inputs:
            if not p.is_file():
                raise SchemaError(f"input does not exist: {p}")
        if self.output.suffix not in FORMATS:
            raise SchemaError(
                f"unsupported output format {self.output.suffix!r}; expected one of {FORMATS}"
            )


# ---------------------------------------------------------------------------
# input readers
# ---------------------------------------------------------------------------


def _read_csv(path: Path, expected: tuple[str, ...]) -> Array:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty CSV") from None
        if tuple(header) != expected:
            raise SchemaError(f"{path}: columns {header} do not match {list(expected)}")
        rows = []
        for line in reader:
            if len(line) != len(header):
                raise SchemaError(f"{path}: ragged row {line!r}")
            try:
                rows.append([float(v) for v in line])
            except ValueError:
                raise SchemaError(f"{path}: non-numeric row {line!r}") from None
    if not rows:
        return np.empty((0, len(expected)))
    return np.asarray(rows, dtype=float)


def _read_speeds(path: Path) -> tuple[float, float]:
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    # accepted layouts: flat {c1, c2}, a speeds object, or a run manifest
    # whose config carries either form
    candidates = [doc, doc.get("speeds"), doc.get("config")]
    if isinstance(doc.get("config"), dict):
        candidates.append(doc["config"].get("speeds"))
    node: dict = {}
    for cand in candidates:
        if isinstance(cand, dict) and "c1" in cand and "c2" in cand:
            node = cand
            break
    try:
        c1, c2 = float(node["c1"]), float(node["c2"])
    except (KeyError, TypeError, ValueError):
        raise SchemaError(f"{path}: no speeds found (need c1 and c2)") from None
    if c1 <= 0 or c2 <= 0:
        raise SchemaError(f"{path}: speeds must be positive, got ({c1}, {c2})")
    return c1, c2


def fit_loglog(ts: Array, values: Array) -> tuple[float, float]:
    """Least-squares slope and intercept of log(value) against log(t)."""
    return tuple(np.polyfit(np.log(ts), np.log(values), 1))  # type: ignore[return-value]


def normal_sections(c1: float, c2: float, n: int = 721) -> dict[str, tuple[Array, Array]]:
    """Coordinate-plane sections of the two unit-frequency surfaces.

    The first branch's surface is the unit sphere; the second's is the
    ellipsoid with semi-axes (1, 1/c1, 1/c2).  Both sections contain
    (+-1, 0), where the surfaces touch.
    """
    theta = np.linspace(0.0, 2.0 * np.pi, n)
    x, y = np.cos(theta), np.sin(theta)
    return {
        "circle": (x, y),
        "ellipse_12": (x, y / c1),
        "ellipse_13": (x, y / c2),
    }


# ---------------------------------------------------------------------------
# per-kind figure builders
# ---------------------------------------------------------------------------


def _fig_decay(job: FigureJob) -> Figure:
    rows = _read_csv(job.inputs[0], DECAY_COLUMNS)
    if rows.shape[0] < 2:
        raise SchemaError(f"{job.inputs[0]}: need at least two rows to fit a decay rate")
    ts, values = rows[:, 0], rows[:, 1]
    if np.any(ts <= 0) or np.any(values <= 0):
        raise SchemaError(f"{job.inputs[0]}: log-log fit needs positive times and values")
    slope, intercept = fit_loglog(ts, values)

    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.subplots()
    ax.loglog(ts, values, "o", label="measured")
    tt = np.geomspace(ts.min(), ts.max(), 64)
    ax.loglog(tt, np.exp(intercept) * tt**slope, "-", label=f"fit: slope {slope:.2f}")
    ax.loglog(tt, values[0] * ts[0] / tt, "--", label="reference $t^{-1}$")
    if job.style.annotate:
        ax.text(0.04, 0.06, f"slope = {slope:.2f}", transform=ax.transAxes)
    ax.set_xlabel("t")
    ax.set_ylabel("sup norm")
    ax.set_title(job.style.title or "sup-norm decay")
    ax.legend()
    return fig


def _fig_resonance(job: FigureJob) -> Figure:
    rows = _read_csv(job.inputs[0], RESONANCE_COLUMNS)
    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.subplots()
    ax.axhline(0.0, color="black", lw=0.9, label="first frequency axis")
    if rows.shape[0]:
        xi_t = np.hypot(rows[:, 1], rows[:, 2])
        eta_t = np.hypot(rows[:, 4], rows[:, 5])
        ax.scatter(rows[:, 0], xi_t, marker="o", s=24, label=r"$\xi$ (output)")
        ax.scatter(rows[:, 3], eta_t, marker="^", s=24, label=r"$\eta$ (input)")
        worst = float(rows[:, 11].max())
    else:
        worst = 0.0
    if job.style.annotate:
        ax.text(
            0.04, 0.92,
            f"{rows.shape[0]} points, max transverse ratio {worst:.2e}",
            transform=ax.transAxes,
        )
    ax.set_xlabel(r"$\xi_1$ component")
    ax.set_ylabel("transverse magnitude")
    ax.set_title(job.style.title or "stationary interaction pairs")
    ax.legend(loc="upper right")
    return fig


def _fig_volume(job: FigureJob) -> Figure:
    rows = _read_csv(job.inputs[0], VOLUME_COLUMNS)
    if rows.shape[0] == 0:
        raise SchemaError(f"{job.inputs[0]}: no rows to plot")
    ls = rows[:, 0]
    fig = Figure(figsize=(6.4, 6.4))
    ax_m, ax_r = fig.subplots(2, 1, sharex=True)

    pos = rows[:, 1] > 0
    ax_m.errorbar(
        ls[pos], rows[pos, 1], yerr=rows[pos, 4], fmt="o-", capsize=3, label="measured"
    )
    ax_m.plot(ls, rows[:, 2], "s--", label="predicted")
    ax_m.set_yscale("log", base=2)
    ax_m.set_ylabel("measure")
    ax_m.legend()
    ax_m.set_title(job.style.title or "resonant-set measure sweep")

    ax_r.plot(ls, rows[:, 3], "o-", label="measured / predicted")
    ax_r.axhline(20.0, color="black", ls="--", lw=0.9, label="ratio bound")
    ax_r.set_xlabel("thickness exponent l")
    ax_r.set_ylabel("ratio")
    ax_r.legend()
    if job.style.annotate:
        ax_r.text(
            0.04, 0.85,
            f"max ratio {rows[:, 3].max():.3g}",
            transform=ax_r.transAxes,
        )
    return fig


def _fig_normal_surface(job: FigureJob) -> Figure:
    c1, c2 = _read_speeds(job.inputs[0])
    sections = normal_sections(c1, c2)
    fig = Figure(figsize=(8.0, 4.2))
    axes = fig.subplots(1, 2)
    panels = (
        (axes[0], "ellipse_12", r"$(\xi_1, \xi_2)$ section", c1),
        (axes[1], "ellipse_13", r"$(\xi_1, \xi_3)$ section", c2),
    )
    for ax, key, label, c in panels:
        cx, cy = sections["circle"]
        ex, ey = sections[key]
        ax.plot(cx, cy, "-", label="branch 1 (sphere)")
        ax.plot(ex, ey, "-", label=f"branch 2 (c = {c:g})")
        ax.plot([1.0, -1.0], [0.0, 0.0], "kx", ms=8, label="tangency")
        ax.set_aspect("equal")
        ax.set_title(label)
        ax.set_xlabel(r"$\xi_1$")
    axes[0].set_ylabel("transverse component")
    axes[0].legend(loc="lower right", fontsize=8)
    if job.style.title:
        fig.suptitle(job.style.title)
    return fig


def _fig_diagnostics(job: FigureJob) -> Figure:
    rows = _read_csv(job.inputs[0], DIAGNOSTICS_COLUMNS)
    if rows.shape[0] < 2:
        raise SchemaError(f"{job.inputs[0]}: need at least two frames")
    ts = rows[:, 0]
    late = ts > 0  # log axes cannot show the t = 0 frame
    if late.sum() < 2:
        raise SchemaError(f"{job.inputs[0]}: need at least two frames with t > 0")
    tl = ts[late]

    fig = Figure(figsize=(9.0, 6.4))
    axes = fig.subplots(2, 2)

    ax = axes[0, 0]
    ax.loglog(tl, rows[late, 1], "-")
    ax.set_title("Sobolev energy")
    ax.set_ylabel("energy")

    ax = axes[0, 1]
    ax.semilogx(tl, rows[late, 4], "-", label="wave 1")
    ax.semilogx(tl, rows[late, 5], "-", label="wave 2")
    ax.set_title("weighted profile sup")
    ax.legend()

    ax = axes[1, 0]
    ax.loglog(tl, rows[late, 6], "-", label="wave 1")
    ax.loglog(tl, rows[late, 7], "-", label="wave 2")
    anchor = rows[late, 6][0] * tl[0]
    ax.loglog(tl, anchor / tl, "k--", lw=0.9, label="reference $t^{-1}$")
    ax.set_title("physical sup norm")
    ax.set_xlabel("t")
    ax.legend()

    ax = axes[1, 1]
    ax.semilogx(tl, rows[late, 2], "-", label="wave 1")
    ax.semilogx(tl, rows[late, 3], "-", label="wave 2")
    ax.set_title("localization norm")
    ax.set_xlabel("t")
    ax.legend()

    if job.style.title:
        fig.suptitle(job.style.title)
    return fig


_BUILDERS = {
    "decay": _fig_decay,
    "resonance": _fig_resonance,
    "volume": _fig_volume,
    "normal_surface": _fig_normal_surface,
    "diagnostics": _fig_diagnostics,
}


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def build_figure(job: FigureJob) -> Figure:
    """Validate the job's inputs and construct the figure in memory."""
    return _BUILDERS[job.kind](job)


def render(job: FigureJob) -> Path:
    """Build the figure and write it to the job's output path.

    All input validation happens before the file is created: a job that
    raises leaves no partial output behind.
    """
    fig = build_figure(job)
    job.output.parent.mkdir(parents=True, exist_ok=True)
    # drop date metadata so reruns are byte-identical
    metadata: dict[str, str | None] = {}
    if job.output.suffix == ".svg":
        metadata = {"Date": None}
    elif job.output.suffix == ".pdf":
        metadata = {"CreationDate": None}
    fig.savefig(job.output, dpi=job.style.dpi, metadata=metadata or None)
    return job.output
