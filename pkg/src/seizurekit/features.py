"""Per-epoch statistical features, train-only scaling, and CSV serialization.

Each epoch yields four statistics per channel (mean, max, min, population
standard deviation), concatenated in channel order. The z-score scaler is
fitted on training rows only and applied unchanged everywhere else; columns
with zero training variance scale to 0 rather than NaN.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .epochs import Epoch
from .errors import DataError


@dataclass(frozen=True)
class FeatureMatrix:
    """Feature rows plus per-row provenance (patient, file, epoch start)."""

    values: np.ndarray  # (n_rows, n_dims) float64
    patients: np.ndarray  # (n_rows,) str
    files: np.ndarray  # (n_rows,) str
    starts: np.ndarray  # (n_rows,) float64

    def __post_init__(self):
        if self.values.ndim != 2:
            raise DataError("feature values must be a 2-D array")
        n = len(self.values)
        if not (len(self.patients) == len(self.files) == len(self.starts) == n):
            raise DataError("feature metadata length mismatch")
        if n and not np.isfinite(self.values).all():
            raise DataError("feature matrix contains non-finite values")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_dims(self) -> int:
        return self.values.shape[1]

    def take(self, index) -> "FeatureMatrix":
        """Row subset (boolean mask or index array), metadata kept aligned."""
        return FeatureMatrix(
            values=self.values[index],
            patients=self.patients[index],
            files=self.files[index],
            starts=self.starts[index],
        )


@dataclass(frozen=True)
class Scaler:
    """Per-column mean and population std, fitted from training rows only."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise DataError("scaler mean/std must be matching 1-D arrays")
        if (self.std < 0).any():
            raise DataError("scaler std must be nonnegative")


def extract_features(epochs: list[Epoch], pool_channels: bool = False) -> FeatureMatrix:
    """Compute (mean, max, min, population std) per channel for each epoch.

    Row layout: channel 0's four statistics, then channel 1's, and so on,
    giving 4 x n_channels columns. With pool_channels=True the statistics
    are computed over all channels' samples together, giving 4 columns.
    Every epoch needs at least 2 samples per channel.
    """
    if not epochs:
        return FeatureMatrix(
            values=np.zeros((0, 0)),
            patients=np.array([], dtype=object),
            files=np.array([], dtype=object),
            starts=np.array([], dtype=np.float64),
        )
    rows = []
    for e in epochs:
        if e.samples.shape[1] < 2:
            raise DataError(
                f"epoch at {e.start_s}s in {e.file_name!r} has "
                f"{e.samples.shape[1]} samples per channel; need >= 2"
            )
        data = e.samples.reshape(1, -1) if pool_channels else e.samples
        stats = np.stack(
            [
                data.mean(axis=1),
                data.max(axis=1),
                data.min(axis=1),
                data.std(axis=1),  # population convention (divide by n)
            ],
            axis=1,
        )
        rows.append(stats.reshape(-1))
    values = np.stack(rows).astype(np.float64)
    if not np.isfinite(values).all():
        raise DataError("non-finite feature value; check input samples")
    return FeatureMatrix(
        values=values,
        patients=np.array([e.patient_id for e in epochs], dtype=object),
        files=np.array([e.file_name for e in epochs], dtype=object),
        starts=np.array([e.start_s for e in epochs], dtype=np.float64),
    )


def fit_scaler(train: FeatureMatrix) -> Scaler:
    """Per-column mean and population std of the training rows only."""
    if train.n_rows == 0:
        raise DataError("cannot fit a scaler on an empty training matrix")
    return Scaler(
        mean=train.values.mean(axis=0), std=train.values.std(axis=0)
    )


def apply_scaler(s: Scaler, m: FeatureMatrix) -> FeatureMatrix:
    """z = (x - mean) / std per column; zero-std columns map to 0."""
    if len(s.mean) != m.n_dims:
        raise DataError(
            f"scaler has {len(s.mean)} columns, matrix has {m.n_dims}"
        )
    safe = np.where(s.std == 0, 1.0, s.std)
    z = (m.values - s.mean) / safe
    z[:, s.std == 0] = 0.0
    return FeatureMatrix(values=z, patients=m.patients, files=m.files, starts=m.starts)


def csv_header(n_dims: int) -> str:
    return "patient,file,start_s,label," + ",".join(f"f{i}" for i in range(n_dims))


def _format_float(x: float) -> str:
    """Shortest decimal that parses back to the same float."""
    return repr(float(x))


def write_feature_csv(m: FeatureMatrix, labels: np.ndarray, path) -> None:
    """Write rows as `patient,file,start_s,label,f0..f{d-1}`, UTF-8 with LF."""
    labels = np.asarray(labels)
    if len(labels) != m.n_rows:
        raise DataError(f"{len(labels)} labels for {m.n_rows} rows")
    buf = io.StringIO()
    buf.write(csv_header(m.n_dims) + "\n")
    for i in range(m.n_rows):
        cells = [
            str(m.patients[i]),
            str(m.files[i]),
            _format_float(m.starts[i]),
            str(int(labels[i])),
        ]
        cells.extend(_format_float(v) for v in m.values[i])
        buf.write(",".join(cells) + "\n")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(buf.getvalue())


def read_feature_csv(path) -> tuple[FeatureMatrix, np.ndarray]:
    """Read the CSV written by write_feature_csv back into memory."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty feature file")
    header = lines[0].split(",")
    if header[:4] != ["patient", "file", "start_s", "label"]:
        raise DataError(f"{path}: unexpected header {lines[0]!r}")
    d = len(header) - 4
    if [h for h in header[4:]] != [f"f{i}" for i in range(d)]:
        raise DataError(f"{path}: unexpected feature column names")
    patients, files, starts, labels, values = [], [], [], [], []
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != 4 + d:
            raise DataError(f"{path}:{ln}: expected {4 + d} fields, got {len(cells)}")
        patients.append(cells[0])
        files.append(cells[1])
        try:
            starts.append(float(cells[2]))
            labels.append(int(cells[3]))
            values.append([float(c) for c in cells[4:]])
        except ValueError as exc:
            raise DataError(f"{path}:{ln}: {exc}") from None
    m = FeatureMatrix(
        values=np.array(values, dtype=np.float64).reshape(len(values), d),
        patients=np.array(patients, dtype=object),
        files=np.array(files, dtype=object),
        starts=np.array(starts, dtype=np.float64),
    )
    return m, np.array(labels, dtype=np.int64)
