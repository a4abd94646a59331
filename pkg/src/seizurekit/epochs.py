"""Epoch slicing and labeling.

Recordings are cut into fixed-length, non-overlapping windows starting at
t=0. Detection labeling marks any epoch that overlaps an annotated seizure
interval; prediction labeling marks the pre-seizure horizon as positive and
drops the seizure epochs themselves. Sequence construction for recurrent
models windows consecutive epochs within one file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .edf import Recording, SeizureInterval
from .errors import ConfigError, DataError

if TYPE_CHECKING:
    from .features import FeatureMatrix


@dataclass(frozen=True)
class Epoch:
    """One fixed-length window of a recording, all channels, physical units."""

    patient_id: str
    file_name: str
    start_s: float
    duration_s: float
    samples: np.ndarray  # shape (channels, window_len)

    def __post_init__(self):
        if self.duration_s <= 0:
            raise DataError(f"epoch duration must be positive, got {self.duration_s}")
        if self.samples.ndim != 2:
            raise DataError("epoch samples must be a (channels, window) array")


@dataclass(frozen=True)
class LabeledEpochSet:
    """Epochs paired with binary labels for one task."""

    epochs: tuple[Epoch, ...]
    labels: np.ndarray
    task: str  # "detection" or "prediction"

    def __post_init__(self):
        if self.task not in ("detection", "prediction"):
            raise ConfigError(f"unknown task {self.task!r}")
        if len(self.labels) != len(self.epochs):
            raise DataError(
                f"{len(self.labels)} labels for {len(self.epochs)} epochs"
            )
        if len(self.labels) and not np.isin(self.labels, (0, 1)).all():
            raise DataError("labels must be 0 or 1")


def denoise(r: Recording, highpass_hz: float | None = None) -> Recording:
    """Optional noise-reduction hook applied before epoching.

    The default is a pass-through: the recording is returned unchanged.
    When ``highpass_hz`` is given, each channel runs through a first-order
    RC high-pass filter at that cutoff, which removes slow drift and DC
    offset. No other artifact removal is performed here.
    """
    if highpass_hz is None:
        return r
    if highpass_hz <= 0:
        raise ConfigError(f"highpass cutoff must be positive, got {highpass_hz}")
    filtered = []
    for meta, x in zip(r.channels, r.signals):
        fs = meta.samples_per_record / r.record_duration_s
        rc = 1.0 / (2.0 * math.pi * highpass_hz)
        alpha = rc / (rc + 1.0 / fs)
        y = np.empty_like(x)
        if len(x):
            y[0] = x[0]
            for n in range(1, len(x)):
                y[n] = alpha * (y[n - 1] + x[n] - x[n - 1])
        filtered.append(y)
    return Recording(
        patient_id=r.patient_id,
        start_datetime=r.start_datetime,
        record_duration_s=r.record_duration_s,
        num_records=r.num_records,
        channels=r.channels,
        signals=tuple(filtered),
        recording_id=r.recording_id,
    )


def slice_epochs(
    r: Recording, epoch_len_s: float = 2.0, file_name: str = ""
) -> list[Epoch]:
    """Cut a recording into non-overlapping epochs of epoch_len_s seconds.

    Windows tile the recording from t=0 with no gaps or overlap; a trailing
    partial window is dropped. All channels must share one sample rate, and
    epoch_len_s times that rate must land on a whole number of samples.
    """
    if epoch_len_s <= 0:
        raise ConfigError(f"epoch length must be positive, got {epoch_len_s}")
    if not r.channels:
        return []
    rates = set(r.sample_rate_hz)
    if len(rates) > 1:
        raise DataError(
            f"channels have unequal sample rates {sorted(rates)}; resampling "
            "is not supported"
        )
    rate = rates.pop()
    window = epoch_len_s * rate
    if abs(window - round(window)) > 1e-9 or round(window) < 1:
        raise ConfigError(
            f"epoch length {epoch_len_s} s at {rate} Hz is {window} samples; "
            "must be a positive whole number"
        )
    window = int(round(window))

    total = len(r.signals[0])
    n_epochs = total // window
    if n_epochs == 0:
        return []

    stacked = np.stack(r.signals)  # (channels, total)
    out = []
    for i in range(n_epochs):
        out.append(
            Epoch(
                patient_id=r.patient_id,
                file_name=file_name,
                start_s=i * epoch_len_s,
                duration_s=epoch_len_s,
                samples=stacked[:, i * window : (i + 1) * window].copy(),
            )
        )
    return out


def _overlaps(start: float, end: float, intervals: list[SeizureInterval]) -> bool:
    """Nonzero-measure intersection of [start, end) with any [s, e)."""
    return any(start < iv.end_s and iv.start_s < end for iv in intervals)


def label_detection(
    epochs: list[Epoch], seizures: list[SeizureInterval]
) -> LabeledEpochSet:
    """Label 1 iff the epoch overlaps a seizure interval with nonzero measure.

    Intervals are half-open, so an epoch that merely touches a seizure
    boundary stays 0. No seizures means all labels 0.
    """
    labels = np.array(
        [
            1 if _overlaps(e.start_s, e.start_s + e.duration_s, seizures) else 0
            for e in epochs
        ],
        dtype=np.int64,
    )
    return LabeledEpochSet(epochs=tuple(epochs), labels=labels, task="detection")


def label_prediction(
    epochs: list[Epoch],
    seizures: list[SeizureInterval],
    horizon_s: float = 300.0,
) -> LabeledEpochSet:
    """Preictal-vs-interictal labeling for seizure prediction.

    Epochs overlapping [s - horizon_s, s) before any seizure start s are
    labeled 1; epochs overlapping a seizure itself are excluded entirely;
    everything else is 0. Overlapping preictal windows from nearby seizures
    union without duplicating epochs.
    """
    if horizon_s <= 0:
        raise ConfigError(f"prediction horizon must be positive, got {horizon_s}")
    preictal = [
        SeizureInterval(iv.file_name, iv.start_s - horizon_s, iv.start_s)
        for iv in seizures
    ]
    kept: list[Epoch] = []
    labels: list[int] = []
    for e in epochs:
        end = e.start_s + e.duration_s
        if _overlaps(e.start_s, end, seizures):
            continue
        labels.append(1 if _overlaps(e.start_s, end, preictal) else 0)
        kept.append(e)
    out = LabeledEpochSet(
        epochs=tuple(kept), labels=np.array(labels, dtype=np.int64), task="prediction"
    )
    # An ictal epoch in a prediction set would poison both classes.
    assert not any(
        _overlaps(e.start_s, e.start_s + e.duration_s, seizures) for e in out.epochs
    )
    return out


@dataclass(frozen=True)
class SequenceDataset:
    """Windows of consecutive epoch-feature rows for sequence models.

    ``X[i]`` is T consecutive feature rows from one file; ``y[i]`` is the
    label of the window's last epoch, and the metadata arrays describe that
    last epoch.
    """

    X: np.ndarray  # (n_windows, T, d)
    y: np.ndarray  # (n_windows,)
    patients: np.ndarray
    files: np.ndarray
    starts: np.ndarray

    def __len__(self) -> int:
        return len(self.y)


def build_sequences(
    features: "FeatureMatrix", labels: np.ndarray, T: int
) -> SequenceDataset:
    """Slide a length-T window over each file's consecutive epoch rows.

    Rows must already be ordered by time within each file. Window label =
    last epoch's label; windows never span file boundaries; a file with
    fewer than T epochs contributes no windows.
    """
    if T < 1:
        raise ConfigError(f"sequence length must be >= 1, got {T}")
    labels = np.asarray(labels)
    if len(labels) != features.n_rows:
        raise DataError(f"{len(labels)} labels for {features.n_rows} feature rows")

    windows, win_labels, pats, fils, starts = [], [], [], [], []
    keys = [
        (p, f) for p, f in zip(features.patients, features.files)
    ]
    seen: dict[tuple, list[int]] = {}
    for idx, key in enumerate(keys):
        seen.setdefault(key, []).append(idx)
    # Files in first-appearance order keeps output deterministic.
    for key in dict.fromkeys(keys):
        rows = seen[key]
        for j in range(len(rows) - T + 1):
            block = rows[j : j + T]
            windows.append(features.values[block])
            last = block[-1]
            win_labels.append(labels[last])
            pats.append(features.patients[last])
            fils.append(features.files[last])
            starts.append(features.starts[last])

    d = features.n_dims
    if windows:
        X = np.stack(windows)
    else:
        X = np.zeros((0, T, d))
    return SequenceDataset(
        X=X,
        y=np.array(win_labels, dtype=np.int64),
        patients=np.array(pats, dtype=object),
        files=np.array(fils, dtype=object),
        starts=np.array(starts, dtype=np.float64),
    )
