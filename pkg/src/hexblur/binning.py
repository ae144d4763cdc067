"""Ingest weighted, optionally labeled 2-D points and aggregate them into
a sparse hexagonal bin grid.

Per-bin totals are accumulated with ``math.fsum``, so they are exact up
to a single final rounding and therefore independent of row order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .hexgrid import SQRT3, AxialCoord, HexLayout


class CsvParseError(ValueError):
    """A CSV row that cannot be ingested; carries its 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DataPoint:
    """One scatter point in data units, e.g. (mass in Da, log P)."""

    x: float
    y: float
    weight: float = 1.0
    label: str | None = None


class Dataset:
    """Immutable column store of points with cached bounds."""

    def __init__(self, xs, ys, weights, labels=None):
        self.xs = np.ascontiguousarray(xs, dtype=np.float64)
        self.ys = np.ascontiguousarray(ys, dtype=np.float64)
        self.weights = np.ascontiguousarray(weights, dtype=np.float64)
        self.labels = labels  # list[str | None] or None when nothing is labeled
        if not (len(self.xs) == len(self.ys) == len(self.weights)):
            raise ValueError("column lengths differ")
        if labels is not None and len(labels) != len(self.xs):
            raise ValueError("label column length differs")
        self._bounds = None
        if len(self.xs):
            self._bounds = (float(self.xs.min()), float(self.xs.max()),
                            float(self.ys.min()), float(self.ys.max()))

    @classmethod
    def from_points(cls, points) -> "Dataset":
        xs, ys, ws, labels = [], [], [], []
        any_label = False
        for i, p in enumerate(points):
            _check_point(p.x, p.y, p.weight, f"point {i}")
            xs.append(p.x)
            ys.append(p.y)
            ws.append(p.weight)
            labels.append(p.label)
            any_label = any_label or p.label is not None
        return cls(xs, ys, ws, labels if any_label else None)

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def is_empty(self) -> bool:
        return len(self.xs) == 0

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        """(min_x, max_x, min_y, max_y); undefined for an empty dataset."""
        if self._bounds is None:
            raise ValueError("empty dataset has no bounds")
        return self._bounds

    def points(self):
        for i in range(len(self.xs)):
            label = self.labels[i] if self.labels is not None else None
            yield DataPoint(float(self.xs[i]), float(self.ys[i]),
                            float(self.weights[i]), label)


def _check_point(x: float, y: float, weight: float, where: str):
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"{where}: non-finite coordinate")
    if not math.isfinite(weight):
        raise ValueError(f"{where}: non-finite weight")
    if weight < 0:
        raise ValueError(f"{where}: negative weight")


def parse_csv(text: str, permissive: bool = False):
    """Parse CSV point data into a dataset.

    Columns are ``x,y[,weight[,label]]``; an optional header row is
    detected by a non-numeric first field; weight defaults to 1 and an
    empty label field means unlabeled. Returns ``(dataset, skipped)``
    where ``skipped`` is a list of ``(line, reason)`` for rows dropped in
    permissive mode. In strict mode the first bad row raises
    :class:`CsvParseError` with its line number.
    """
    xs, ys, ws = [], [], []
    labels: list[str | None] = []
    any_label = False
    skipped: list[tuple[int, str]] = []
    reader = csv.reader(io.StringIO(text))
    first_data_row = True
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue
        if first_data_row:
            first_data_row = False
            try:
                float(row[0])
            except ValueError:
                continue  # header row
        try:
            x, y, w, label = _parse_row(row)
        except ValueError as exc:
            if permissive:
                skipped.append((line, str(exc)))
                continue
            raise CsvParseError(line, str(exc)) from None
        xs.append(x)
        ys.append(y)
        ws.append(w)
        labels.append(label)
        any_label = any_label or label is not None
    return Dataset(xs, ys, ws, labels if any_label else None), skipped


def _parse_row(row):
    if len(row) < 2:
        raise ValueError(f"expected at least 2 fields, got {len(row)}")
    if len(row) > 4:
        raise ValueError(f"expected at most 4 fields, got {len(row)}")
    try:
        x = float(row[0])
        y = float(row[1])
        w = float(row[2]) if len(row) >= 3 else 1.0
    except ValueError as exc:
        raise ValueError(f"not a number: {exc}") from None
    label = row[3] if len(row) == 4 and row[3] != "" else None
    _check_point(x, y, w, "value")
    return x, y, w, label


def read_csv(path, permissive: bool = False):
    """Parse a CSV file; see :func:`parse_csv`."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_csv(fh.read(), permissive=permissive)


@dataclass
class BinAggregate:
    """Accumulated weight and per-label weight for one bin."""

    total_weight: float = 0.0
    label_counts: dict[str, float] = field(default_factory=dict)


@dataclass
class BinGrid:
    """Sparse map from axial bin address to aggregate, under one layout."""

    layout: HexLayout
    bins: dict[AxialCoord, BinAggregate] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.bins)

    def value(self, a: AxialCoord) -> float:
        agg = self.bins.get(a)
        return agg.total_weight if agg is not None else 0.0

    def total_weight(self) -> float:
        return math.fsum(agg.total_weight for agg in self.bins.values())

    def max_value(self) -> float:
        return max((agg.total_weight for agg in self.bins.values()), default=0.0)

    def sorted_items(self):
        return sorted(self.bins.items(), key=lambda kv: kv[0])


def bin_points(dataset: Dataset, layout: HexLayout) -> BinGrid:
    """Assign every point to its nearest bin center and aggregate.

    Total weight is conserved; zero-weight unlabeled contributions are
    not stored (sparsity).
    """
    if dataset.is_empty:
        return BinGrid(layout, {})
    u = (dataset.xs - layout.origin_x) / layout.scale_x
    v = (dataset.ys - layout.origin_y) / layout.scale_y
    q, r = _backend.assign_points(u, v)
    keys = _backend.pack_keys(q, r)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    sorted_weights = dataset.weights[order]
    boundaries = np.flatnonzero(np.diff(sorted_keys)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(sorted_keys)]))

    labels_by_key: dict[int, dict[str, list[float]]] = {}
    if dataset.labels is not None:
        for i, label in enumerate(dataset.labels):
            if label is not None:
                per_bin = labels_by_key.setdefault(int(keys[i]), {})
                per_bin.setdefault(label, []).append(float(dataset.weights[i]))

    bins: dict[AxialCoord, BinAggregate] = {}
    seg_q, seg_r = _backend.unpack_keys(sorted_keys[starts])
    for key_q, key_r, a_idx, b_idx in zip(seg_q, seg_r, starts, ends):
        total = math.fsum(sorted_weights[a_idx:b_idx])
        per_bin = labels_by_key.get(int(sorted_keys[a_idx]), {})
        counts = {label: math.fsum(vals) for label, vals in sorted(per_bin.items())}
        if total == 0.0 and not counts:
            continue
        bins[AxialCoord(int(key_q), int(key_r))] = BinAggregate(total, counts)
    return BinGrid(layout, bins)


def suggest_layout(dataset: Dataset, target_bins_across: int) -> HexLayout:
    """Layout with the origin at the data minimum, sized so the data spans
    about ``target_bins_across`` columns (and as many rows)."""
    if dataset.is_empty:
        raise ValueError("cannot suggest a layout for an empty dataset")
    if target_bins_across < 1:
        raise ValueError("target_bins_across must be >= 1")
    min_x, max_x, min_y, max_y = dataset.bounds
    span_x = max_x - min_x
    span_y = max_y - min_y
    scale_x = span_x / (1.5 * target_bins_across) if span_x > 0 else 1.0
    scale_y = span_y / (SQRT3 * target_bins_across) if span_y > 0 else 1.0
    return HexLayout(min_x, min_y, scale_x, scale_y)


def top_labels(grid: BinGrid, a: AxialCoord, k: int):
    """Up to *k* (label, weight) pairs for one bin, heaviest first, ties
    broken lexicographically; empty list for a missing bin."""
    if k < 1:
        raise ValueError("k must be >= 1")
    agg = grid.bins.get(a)
    if agg is None:
        return []
    ranked = sorted(agg.label_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]
