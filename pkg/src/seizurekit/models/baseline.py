"""Trivial baseline predictors, mainly the always-negative majority model.

On rare-event data the constant negative predictor posts high accuracy with
zero recall; it exists so that pathology can be measured and compared
against rather than stumbled into.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError


@dataclass(frozen=True)
class ConstantModel:
    """Predicts one fixed class for every input row."""

    constant_class: int = 0

    def __post_init__(self):
        if self.constant_class not in (0, 1):
            raise ConfigError(f"constant class must be 0 or 1, got {self.constant_class}")


def constant_predict(model: ConstantModel, X) -> np.ndarray:
    n = len(np.atleast_2d(np.asarray(X)))
    return np.full(n, model.constant_class, dtype=np.int64)


def constant_scores(model: ConstantModel, X) -> np.ndarray:
    n = len(np.atleast_2d(np.asarray(X)))
    return np.full(n, float(model.constant_class))
