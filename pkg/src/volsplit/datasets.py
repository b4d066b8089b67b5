"""Dataset generation and file I/O: logistic mixtures, Iris, CSV, labels JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LabeledDataset",
    "sample_logistic_mixture_5",
    "load_iris",
    "read_csv",
    "write_csv",
    "write_labels_json",
]

IRIS_CLASSES = {"Iris-setosa": 0, "Iris-versicolor": 1, "Iris-virginica": 2}

# Five well-separated planar logistic components: four corner blobs with a
# wide x-spread, one central blob elongated along y.  Logistic scale s gives
# axis variance (pi * s)^2 / 3.
LOGISTIC_5_MEANS = ((-40.0, 5.0), (-40.0, -5.0), (0.0, 0.0), (40.0, 5.0), (40.0, -5.0))
LOGISTIC_5_SCALES = ((6.0, 1.0), (6.0, 1.0), (1.0, 12.0), (6.0, 1.0), (6.0, 1.0))


@dataclass(frozen=True)
class LabeledDataset:
    """A data matrix with optional per-point integer labels and class names."""

    data: np.ndarray
    labels: np.ndarray | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != self.data.shape[0]:
            raise ValueError("labels length must match number of points")


def _logistic(rng: np.random.Generator, loc: float, scale: float, n: int) -> np.ndarray:
    u = rng.random(n)
    return loc + scale * np.log(u / (1.0 - u))


def sample_logistic_mixture_5(per_component_n: int, seed: int = 0) -> LabeledDataset:
    """Draw per_component_n points from each of the five logistic components."""
    if per_component_n < 1:
        raise ValueError("per_component_n must be at least 1")
    blocks = []
    labels = []
    for k, (mean, scale) in enumerate(zip(LOGISTIC_5_MEANS, LOGISTIC_5_SCALES)):
        rng = np.random.default_rng(np.random.SeedSequence((seed, k)))
        cols = [
            _logistic(rng, mean[j], scale[j], per_component_n) for j in range(2)
        ]
        blocks.append(np.column_stack(cols))
        labels.extend([k] * per_component_n)
    return LabeledDataset(
        data=np.vstack(blocks),
        labels=np.asarray(labels, dtype=int),
        names=tuple(f"L{k + 1}" for k in range(5)),
    )


def load_iris(path) -> LabeledDataset:
    """Load a UCI-format iris.data file: four decimals and a class name per line."""
    text = Path(path).read_text()
    rows = []
    labels = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 5 or parts[4] not in IRIS_CLASSES:
            raise ValueError(f"malformed iris record on line {lineno}")
        try:
            rows.append([float(v) for v in parts[:4]])
        except ValueError:
            raise ValueError(f"malformed iris record on line {lineno}") from None
        labels.append(IRIS_CLASSES[parts[4]])
    if not rows:
        raise ValueError("iris file contains no records")
    return LabeledDataset(
        data=np.asarray(rows, dtype=float),
        labels=np.asarray(labels, dtype=int),
        names=tuple(sorted(IRIS_CLASSES, key=IRIS_CLASSES.get)),
    )


def read_csv(path, has_header: bool = False) -> np.ndarray:
    """Read a rectangular numeric CSV into a float matrix."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if has_header:
        lines = lines[1:]
    if not lines:
        raise ValueError("CSV contains no data rows")
    rows = []
    width = None
    for i, line in enumerate(lines):
        try:
            row = [float(v) for v in line.split(",")]
        except ValueError:
            raise ValueError(f"non-numeric value in CSV row {i}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError(f"ragged CSV row {i}: expected {width} fields, got {len(row)}")
        rows.append(row)
    return np.asarray(rows, dtype=float)


def write_csv(path, matrix, header: str | None = None):
    """Write a matrix as plain numeric CSV with repr-precision floats."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = []
    if header:
        lines.append(header)
    for row in m:
        lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_labels_json(tree, path):
    """Serialize a ClusterTree (or any object with to_dict) to JSON."""
    doc = tree.to_dict() if hasattr(tree, "to_dict") else tree
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
