"""Render the event-probability figure and the four-panel experiment
figure from experiment CSV outputs.

The input is a manifest JSON naming the CSV files (paths relative to the
manifest). Rendering is a pure function of the CSV contents; PNG
metadata that would vary between runs is suppressed, so re-rendering
identical CSVs yields identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

FIG3_COLUMNS = ["h", "empirical", "bound", "gumbel"]
RECORD_COLUMNS = ["h", "trial", "cv", "risk", "in_xi", "skipped_count"]
AGGREGATE_COLUMNS = [
    "h",
    "mean_cv",
    "mean_risk",
    "q05_cv",
    "q95_cv",
    "q05_risk",
    "q95_risk",
    "q90_absdiff",
    "gamma",
    "eps_risk",
    "eps_cv",
    "eps_diff",
]

# metadata keys matplotlib would otherwise fill with version strings
_STABLE_PNG_METADATA = {"Software": None}


class SchemaError(ValueError):
    """A CSV is missing required columns."""

    def __init__(self, path, missing):
        self.path = str(path)
        self.missing = list(missing)
        super().__init__(f"{path}: missing columns {self.missing}")


@dataclass(frozen=True)
class FigureSpec:
    which: str  # "fig3" or "fig4"
    input_manifest: Path
    output_path: Path
    log_axes: bool = True

    def __post_init__(self):
        if self.which not in ("fig3", "fig4"):
            raise ValueError(f"unknown figure {self.which!r}")


def read_columns(path: Path, expected: list[str]) -> dict[str, list]:
    """Parse a CSV into float columns, checking the schema exactly."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        missing = [c for c in expected if c not in header]
        if missing:
            raise SchemaError(path, missing)
        extra = [c for c in header if c not in expected]
        if extra:
            raise SchemaError(path, [f"unexpected:{c}" for c in extra])
        index = {c: header.index(c) for c in expected}
        columns: dict[str, list] = {c: [] for c in expected}
        for line in fh:
            parts = line.rstrip("\n").split(",")
            for c in expected:
                columns[c].append(_parse(parts[index[c]]))
    return columns


def _parse(token: str):
    if token == "true":
        return 1.0
    if token == "false":
        return 0.0
    return float(token)


def _finite(hs, vals):
    pairs = [(h, v) for h, v in zip(hs, vals) if math.isfinite(v)]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _render_fig3(csv_path: Path, spec: FigureSpec) -> None:
    data = read_columns(csv_path, FIG3_COLUMNS)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(data["h"], data["empirical"], "-", color="C0", label="empirical")
    ax.plot(data["h"], data["bound"], "--", color="C1", label="bound")
    ax.plot(data["h"], data["gumbel"], "-", color="0.6", label="Gumbel limit")
    ax.set_xlabel("h")
    ax.set_ylabel("event probability")
    if data["h"]:
        ax.legend()
    _save(fig, spec.output_path)


def _render_fig4(records_path: Path, aggregates_path: Path, spec: FigureSpec) -> None:
    rec = read_columns(records_path, RECORD_COLUMNS)
    agg = read_columns(aggregates_path, AGGREGATE_COLUMNS)
    fig, axes = plt.subplots(2, 2, figsize=(10.0, 7.0))
    (ax_cv, ax_risk), (ax_bands, ax_diff) = axes

    ax_cv.plot(rec["h"], rec["cv"], ".", color="C0", markersize=2)
    ax_cv.set_title("cross-validation score")
    ax_risk.plot(rec["h"], rec["risk"], ".", color="C1", markersize=2)
    ax_risk.set_title("risk score")

    ax_bands.plot(agg["h"], agg["mean_cv"], "-", color="C0", label="mean cv")
    ax_bands.plot(agg["h"], agg["mean_risk"], "-", color="C1", label="mean risk")
    ax_bands.fill_between(agg["h"], agg["q05_cv"], agg["q95_cv"], color="C0", alpha=0.25)
    ax_bands.fill_between(agg["h"], agg["q05_risk"], agg["q95_risk"], color="C1", alpha=0.25)
    ax_bands.plot(*_finite(agg["h"], agg["eps_cv"]), "--", color="C0", label="cv bound")
    ax_bands.plot(*_finite(agg["h"], agg["eps_risk"]), "--", color="C1", label="risk bound")
    ax_bands.set_title("means with 90% bands and bounds")

    ax_diff.plot(agg["h"], agg["q90_absdiff"], "-", color="C0", label="q90 |cv - risk|")
    ax_diff.plot(*_finite(agg["h"], agg["eps_diff"]), "--", color="C1", label="bound")
    ax_diff.set_title("90% quantile of |cv - risk|")

    has_data = {ax_cv: rec["h"], ax_risk: rec["h"], ax_bands: agg["h"], ax_diff: agg["h"]}
    for ax in (ax_cv, ax_risk, ax_bands, ax_diff):
        ax.set_xlabel("h")
        # an empty axis cannot be log-scaled; header-only CSVs stay linear
        if spec.log_axes and has_data[ax]:
            ax.set_yscale("log")
    if agg["h"]:
        ax_bands.legend(fontsize=8)
        ax_diff.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, spec.output_path)


def _save(fig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="png", dpi=120, metadata=_STABLE_PNG_METADATA)
    plt.close(fig)


def render(spec: FigureSpec) -> Path:
    """Render the figure named by the manifest; returns the image path."""
    with open(spec.input_manifest, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("figure") != spec.which:
        raise ValueError(
            f"manifest describes {manifest.get('figure')!r}, expected {spec.which!r}"
        )
    base = spec.input_manifest.parent
    csvs = manifest.get("csv", {})
    if spec.which == "fig3":
        if "curves" not in csvs:
            raise ValueError("fig3 manifest must name a 'curves' CSV")
        _render_fig3(base / csvs["curves"], spec)
    else:
        for key in ("records", "aggregates"):
            if key not in csvs:
                raise ValueError(f"fig4 manifest must name a {key!r} CSV")
        _render_fig4(base / csvs["records"], base / csvs["aggregates"], spec)
    return spec.output_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="render_figures")
    parser.add_argument("--manifest", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--linear-axes", action="store_true")
    args = parser.parse_args(argv)
    manifest_path = Path(args.manifest)
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            which = json.load(fh).get("figure")
        spec = FigureSpec(
            which=which,
            input_manifest=manifest_path,
            output_path=Path(args.out) / f"{which}.png",
            log_axes=not args.linear_axes,
        )
        out = render(spec)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}), file=sys.stderr)
        return 1
    print(json.dumps({"image": str(out)}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
