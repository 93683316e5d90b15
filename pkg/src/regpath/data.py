"""Dataset container shared by the path engines and the oracle."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError

REGRESSION = "regression"
CLASSIFICATION = "classification"
TASKS = (REGRESSION, CLASSIFICATION)


@dataclass
class Dataset:
    """Design matrix X (n x p), response y and task kind.

    Classification responses must be exactly +-1. `column_means`/`column_scales`
    are populated by :meth:`standardize` so that predictions on raw data can be
    mapped back into the fitted coordinate system.
    """

    X: np.ndarray
    y: np.ndarray
    task: str = REGRESSION
    column_names: list[str] | None = None
    standardized: bool = False
    column_means: np.ndarray | None = None
    column_scales: np.ndarray | None = None

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.ndim != 2:
            raise DataError("X must be a 2-D matrix")
        if X.shape[0] != y.shape[0]:
            raise DataError(
                f"X has {X.shape[0]} rows but y has {y.shape[0]} entries"
            )
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise DataError("need at least one observation and one feature")
        if not np.all(np.isfinite(X)):
            raise DataError("X contains non-finite entries")
        if not np.all(np.isfinite(y)):
            raise DataError("y contains non-finite entries")
        if self.task not in TASKS:
            raise DataError(f"unknown task {self.task!r}")
        if self.task == CLASSIFICATION and not np.all((y == 1.0) | (y == -1.0)):
            raise DataError("classification responses must be -1 or +1")
        if self.column_names is not None and len(self.column_names) != X.shape[1]:
            raise DataError("column_names length does not match X")
        self.X = X
        self.y = y

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def standardize(self) -> "Dataset":
        """Return a copy with zero-mean, unit-variance columns.

        Constant columns keep scale 1 so the transform stays invertible.
        """
        if self.standardized:
            return self
        means = self.X.mean(axis=0)
        scales = self.X.std(axis=0)
        scales = np.where(scales > 0.0, scales, 1.0)
        return replace(
            self,
            X=(self.X - means) / scales,
            standardized=True,
            column_means=means,
            column_scales=scales,
        )
