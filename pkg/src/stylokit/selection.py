"""Feature selection: reliability-driven and frequency-rank cutoffs.

The reliability criterion asks, per feature, how large a sample would be
needed to estimate its probability within a margin of two standard
deviations at the configured confidence, and keeps the feature when the
shortest document in the corpus is already that large. The probability
estimate is debiased by averaging each observation with its mirror
around the observed range, which collapses to the midrange
(max + min) / 2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import AnalysisError
from .features import FeatureMatrix, Scale, format_value


@dataclass(frozen=True)
class SelectionParams:
    confidence_z: float = 1.645
    margin_multiplier: float = 2.0
    min_doc_len: int = 1
    # "augmented" pools the observations with their mirrors before taking
    # the standard deviation; the default uses the original values only.
    sigma_mode: str = "original"

    def __post_init__(self) -> None:
        if self.confidence_z <= 0:
            raise ValueError("confidence_z must be > 0")
        if self.margin_multiplier <= 0:
            raise ValueError("margin_multiplier must be > 0")
        if self.min_doc_len < 1:
            raise ValueError("min_doc_len must be >= 1")
        if self.sigma_mode not in ("original", "augmented"):
            raise ValueError("sigma_mode must be 'original' or 'augmented'")


@dataclass(frozen=True)
class FeatureDiagnostic:
    name: str
    p_bar: float
    sigma: float
    required_n: float
    retained: bool
    degenerate: bool


@dataclass(frozen=True)
class SelectionReport:
    retained: tuple[str, ...]
    per_feature: tuple[FeatureDiagnostic, ...]


def mirror_correct(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Average each value with its mirror (max + min) - v.

    Every corrected entry (v + ((max + min) - v)) / 2 equals the midrange
    (max + min) / 2, so that is what gets returned, avoiding the rounding
    noise of the elementwise form.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("mirror correction needs at least one value")
    return np.full(arr.shape, (arr.max() + arr.min()) / 2.0)


def corrected_mean(values: Sequence[float] | np.ndarray) -> float:
    # The corrected vector is constant, so its mean is its first entry.
    return float(mirror_correct(values)[0])


def required_sample_size(p_bar: float, sigma: float, params: SelectionParams) -> float:
    """Minimum sample size for a proportion at margin of error mult * sigma.

    A zero sigma marks a constant feature: the formula degenerates and the
    caller flags the feature instead.
    """
    if sigma == 0.0:
        return 0.0
    ratio = params.confidence_z / (params.margin_multiplier * sigma)
    return p_bar * (1.0 - p_bar) * ratio * ratio


def select_reliable(matrix: FeatureMatrix, params: SelectionParams) -> SelectionReport:
    """Keep features whose required sample size fits the shortest document.

    Constant features (sigma = 0) are dropped as degenerate: they carry no
    clustering signal and break the z-score transform downstream.
    """
    if matrix.scale is not Scale.RELATIVE_FREQUENCY:
        raise AnalysisError("reliability selection expects relative frequencies")
    rows: list[FeatureDiagnostic] = []
    retained: list[str] = []
    for j, name in enumerate(matrix.feature_names):
        col = matrix.values[:, j]
        p_bar = float((col.max() + col.min()) / 2.0)
        if params.sigma_mode == "augmented":
            pooled = np.concatenate([col, (col.max() + col.min()) - col])
            sigma = float(pooled.std(ddof=1)) if pooled.size > 1 else 0.0
        else:
            sigma = float(col.std(ddof=1)) if col.size > 1 else 0.0
        degenerate = sigma == 0.0
        required_n = required_sample_size(p_bar, sigma, params)
        keep = not degenerate and required_n <= params.min_doc_len
        rows.append(
            FeatureDiagnostic(
                name=name,
                p_bar=p_bar,
                sigma=sigma,
                required_n=required_n,
                retained=keep,
                degenerate=degenerate,
            )
        )
        if keep:
            retained.append(name)
    if not retained:
        raise AnalysisError("selection eliminated all features")
    return SelectionReport(retained=tuple(retained), per_feature=tuple(rows))


def select_top_frequency(matrix: FeatureMatrix, fraction: float) -> tuple[str, ...]:
    """The ceil(fraction * n) features with highest total corpus frequency.

    Ties break lexicographically; the returned names keep the matrix's
    column order so downstream output stays deterministic.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    n_keep = math.ceil(fraction * matrix.n_features)
    totals = matrix.values.sum(axis=0)
    ranked = sorted(
        range(matrix.n_features), key=lambda j: (-totals[j], matrix.feature_names[j])
    )
    chosen = {matrix.feature_names[j] for j in ranked[:n_keep]}
    return tuple(name for name in matrix.feature_names if name in chosen)


def write_selection_csv(report: SelectionReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["feature", "p_bar", "sigma", "required_n", "retained", "degenerate"])
        for row in report.per_feature:
            writer.writerow(
                [
                    row.name,
                    format_value(row.p_bar),
                    format_value(row.sigma),
                    format_value(row.required_n),
                    str(row.retained).lower(),
                    str(row.degenerate).lower(),
                ]
            )
