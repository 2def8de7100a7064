"""Render the scan and step-size-study CSVs into PNG figures.

This package only reads the documented CSV schemas and draws; no
quantity is recomputed here.  plot_fig1 produces the two-panel figure
as two image files (phase angle B versus alpha with the pi/2 reference,
and I versus alpha with both computations overlaid); plot_convergence
draws the log-log energy-drift study with its fitted slope.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SCAN_COLUMNS = ["alpha", "B", "I_phase", "I_quad", "delta"]
TABLE_COLUMNS = ["h", "I", "H0_min", "H0_max", "H1_min", "H1_max",
                 "H0_drift", "H1_drift"]


class PlotsError(Exception):
    pass


class SchemaError(PlotsError):
    """Input CSV columns differ from the documented schema."""


def _check_header(found: list[str], expected: list[str], path) -> None:
    if found != expected:
        missing = [c for c in expected if c not in found]
        extra = [c for c in found if c not in expected]
        raise SchemaError(
            f"{path}: column mismatch; expected {expected}, found {found}"
            f" (missing {missing}, unexpected {extra})"
        )


def _read_rows(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = [row for row in reader if row and not row[0].startswith("#")]
    return header, rows


def _cell(value: str) -> float:
    return float(value) if value != "" else math.nan


@dataclass(frozen=True)
class ScanFrame:
    """Parsed scan CSV, sorted by alpha.  Empty cells become NaN."""

    alpha: np.ndarray
    B: np.ndarray
    I_phase: np.ndarray
    I_quad: np.ndarray
    delta: np.ndarray

    @staticmethod
    def load(path) -> "ScanFrame":
        header, rows = _read_rows(path)
        _check_header(header, SCAN_COLUMNS, path)
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        data = np.array([[_cell(v) for v in row] for row in rows])
        data = data[np.argsort(data[:, 0])]
        return ScanFrame(alpha=data[:, 0], B=data[:, 1], I_phase=data[:, 2],
                         I_quad=data[:, 3], delta=data[:, 4])

    def value_at(self, column: str, alpha: float) -> float:
        """Linear interpolation of a column at the given alpha."""
        ys = getattr(self, column)
        good = ~np.isnan(ys)
        return float(np.interp(alpha, self.alpha[good], ys[good]))


@dataclass(frozen=True)
class TableFrame:
    """Parsed step-size-study CSV, sorted by h."""

    h: np.ndarray
    I: np.ndarray
    H0_drift: np.ndarray
    H1_drift: np.ndarray

    @staticmethod
    def load(path) -> "TableFrame":
        header, rows = _read_rows(path)
        _check_header(header, TABLE_COLUMNS, path)
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        data = np.array([[_cell(v) for v in row] for row in rows])
        data = data[np.argsort(data[:, 0])]
        return TableFrame(h=data[:, 0], I=data[:, 1],
                          H0_drift=data[:, 6], H1_drift=data[:, 7])


def panel_paths(out_path) -> tuple[Path, Path]:
    out = Path(out_path)
    return (out.with_stem(out.stem + "-B"), out.with_stem(out.stem + "-I"))


def plot_fig1(scan_csv, out_path, note: str | None = None) -> tuple[Path, Path]:
    """Two-panel figure from a scan CSV, written as two image files.

    Left: B versus alpha with the pi/2 asymptote marked.  Right: I
    versus alpha, phase-angle and quadrature values overlaid.  Returns
    the two written paths.
    """
    frame = ScanFrame.load(scan_csv)
    left_path, right_path = panel_paths(out_path)

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(frame.alpha, frame.B, "-", color="tab:blue", label="B")
    ax.axhline(math.pi / 2.0, linestyle="--", color="gray")
    ax.annotate("pi/2", xy=(frame.alpha[-1], math.pi / 2.0),
                xytext=(-30, 6), textcoords="offset points", color="gray")
    ax.set_xlabel("alpha")
    ax.set_ylabel("B")
    ax.set_title(note or f"phase angle from {Path(scan_csv).name}", fontsize=8)
    fig.tight_layout()
    fig.savefig(left_path, dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 4))
    good = ~np.isnan(frame.I_phase)
    ax.plot(frame.alpha[good], frame.I_phase[good], "-", color="tab:orange",
            label="alpha cot(B)")
    ax.plot(frame.alpha, frame.I_quad, ".", markersize=3, color="tab:blue",
            label="quadrature")
    ax.axhline(0.0, linewidth=0.5, color="gray")
    ax.set_xlabel("alpha")
    ax.set_ylabel("I")
    ax.legend(fontsize=8)
    ax.set_title(note or f"splitting integral from {Path(scan_csv).name}",
                 fontsize=8)
    fig.tight_layout()
    fig.savefig(right_path, dpi=150)
    plt.close(fig)
    return left_path, right_path


def plot_convergence(table_csv, out_path, note: str | None = None) -> float:
    """Log-log drift-versus-step plot with a least-squares slope fit.

    Fits log2(H0_drift) against log2(h) (at least three rows required)
    and annotates the slope, expected near 4 for a 4th-order scheme.
    Returns the fitted slope.
    """
    frame = TableFrame.load(table_csv)
    if len(frame.h) < 3:
        raise PlotsError(
            f"{table_csv}: slope fit needs at least 3 rows, got {len(frame.h)}")
    lh = np.log2(frame.h)
    slope, intercept = np.polyfit(lh, np.log2(frame.H0_drift), 1)

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(lh, np.log2(frame.H0_drift), "o-", label="solution 0")
    ax.plot(lh, np.log2(frame.H1_drift), "s--", label="solution 1")
    ax.plot(lh, slope * lh + intercept, ":", color="gray",
            label=f"fit slope = {slope:.2f}")
    ax.set_xlabel("log2 h")
    ax.set_ylabel("log2 energy drift")
    ax.legend(fontsize=8)
    ax.set_title(note or f"drift convergence from {Path(table_csv).name}",
                 fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return float(slope)
