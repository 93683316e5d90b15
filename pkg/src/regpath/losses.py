"""Differentiable piecewise-quadratic loss family.

Every loss here is a convex C^1 quadratic spline of a generalized residual r:
l(r) = a r^2 + b r + c on each interval between knots, with r = y - eta for
regression and r = y * eta (the margin) for classification. Losses are stored
as explicit (knots, pieces) data so the path engine can enumerate knots and
read the curvature coefficient a(r) directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import CLASSIFICATION, REGRESSION, Dataset
from .errors import DataError

SQUARED_ERROR = "squared-error"
HUBER = "huber"
SQUARED_HINGE = "squared-hinge"
HUBERIZED_SQUARED_HINGE = "huberized-squared-hinge"

_C1_TOL = 1e-12


class InvalidLossError(ValueError):
    """Loss parameters or a custom spline violate the family's contract."""


class InvalidLabelError(DataError):
    """Classification response outside {-1, +1}."""


@dataclass(frozen=True)
class LossModel:
    """Quadratic spline l(r) with knots and per-interval (a, b, c) triples.

    Interval convention is half-open, closed on the left: piece j covers
    [knots[j-1], knots[j]). Immutable after construction; safe to share
    across concurrent solver runs.
    """

    kind: str
    knots: np.ndarray
    pieces: np.ndarray
    residual_kind: str
    huber_t: float | None = None

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float).ravel()
        pieces = np.asarray(self.pieces, dtype=float)
        pieces = pieces.reshape(-1, 3) if pieces.size else pieces.reshape(0, 3)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "pieces", pieces)
        if self.residual_kind not in (REGRESSION, CLASSIFICATION):
            raise InvalidLossError(f"unknown residual kind {self.residual_kind!r}")
        if pieces.shape[0] != knots.size + 1:
            raise InvalidLossError(
                f"{knots.size} knots require {knots.size + 1} pieces, "
                f"got {pieces.shape[0]}"
            )
        if not np.all(np.isfinite(knots)) or not np.all(np.isfinite(pieces)):
            raise InvalidLossError("non-finite knot or piece data")
        if knots.size and np.any(np.diff(knots) <= 0):
            raise InvalidLossError("knots must be strictly increasing")
        if np.any(pieces[:, 0] < -_C1_TOL):
            raise InvalidLossError("negative curvature piece (loss must be convex)")
        for j, r in enumerate(knots):
            al, bl, cl = pieces[j]
            ar, br, cr = pieces[j + 1]
            val_gap = abs((al * r + bl) * r + cl - ((ar * r + br) * r + cr))
            der_gap = abs((2.0 * al * r + bl) - (2.0 * ar * r + br))
            if val_gap > _C1_TOL * max(1.0, abs(cl), abs(cr)):
                raise InvalidLossError(f"loss discontinuous at knot {r!r}")
            if der_gap > _C1_TOL * max(1.0, abs(bl), abs(br)):
                raise InvalidLossError(f"loss not C^1 at knot {r!r}")
        _check_nonnegative(knots, pieces)

    @property
    def n_knots(self) -> int:
        return self.knots.size


def _check_nonnegative(knots, pieces):
    # minimum of each piece over its (possibly unbounded) interval
    lo = np.concatenate(([-np.inf], knots))
    hi = np.concatenate((knots, [np.inf]))
    scale = max(1.0, float(np.max(np.abs(pieces))) if pieces.size else 1.0)
    tol = 1e-9 * scale
    for (a, b, c), lft, rgt in zip(pieces, lo, hi):
        vals = [(a * r + b) * r + c for r in (lft, rgt) if np.isfinite(r)]
        if a > _C1_TOL:
            v = -b / (2.0 * a)
            if lft < v < rgt:
                vals.append((a * v + b) * v + c)
        else:
            if b > _C1_TOL and not np.isfinite(lft):
                raise InvalidLossError("loss unbounded below on the left piece")
            if b < -_C1_TOL and not np.isfinite(rgt):
                raise InvalidLossError("loss unbounded below on the right piece")
            if not vals:
                vals.append(c)
        if vals and min(vals) < -tol:
            raise InvalidLossError("loss takes negative values")


def make_loss(kind: str, t: float | None = None) -> LossModel:
    """Build one of the four named losses.

    `t` is the Huberization knot: required positive for "huber" and required
    < 1 (any sign) for "huberized-squared-hinge".
    """
    if kind == SQUARED_ERROR:
        return LossModel(kind, [], [(1.0, 0.0, 0.0)], REGRESSION)
    if kind == HUBER:
        if t is None or not (t > 0.0):
            raise InvalidLossError("huber requires a knot t > 0")
        t = float(t)
        pieces = [(0.0, -2.0 * t, -t * t), (1.0, 0.0, 0.0), (0.0, 2.0 * t, -t * t)]
        return LossModel(kind, [-t, t], pieces, REGRESSION, huber_t=t)
    if kind == SQUARED_HINGE:
        return LossModel(
            kind, [1.0], [(1.0, -2.0, 1.0), (0.0, 0.0, 0.0)], CLASSIFICATION
        )
    if kind == HUBERIZED_SQUARED_HINGE:
        if t is None or not (t < 1.0):
            raise InvalidLossError("huberized squared hinge requires a knot t < 1")
        t = float(t)
        pieces = [
            (0.0, -2.0 * (1.0 - t), 1.0 - t * t),
            (1.0, -2.0, 1.0),
            (0.0, 0.0, 0.0),
        ]
        return LossModel(kind, [t, 1.0], pieces, CLASSIFICATION, huber_t=t)
    raise InvalidLossError(f"unknown loss kind {kind!r}")


def custom_loss(knots, pieces, residual_kind: str, kind: str = "custom") -> LossModel:
    """Accept a user-supplied quadratic spline; the constructor validates it."""
    return LossModel(kind, knots, pieces, residual_kind)


def piece_index(loss: LossModel, r):
    """Index of the piece containing r (half-open intervals, closed on the left)."""
    return np.searchsorted(loss.knots, r, side="right")


def _coeffs(loss: LossModel, r):
    rows = loss.pieces[piece_index(loss, r)]
    return np.moveaxis(rows, -1, 0)


def loss_value(loss: LossModel, r):
    r = np.asarray(r, dtype=float)
    a, b, c = _coeffs(loss, r)
    out = (a * r + b) * r + c
    return float(out) if out.ndim == 0 else out


def loss_derivative(loss: LossModel, r):
    r = np.asarray(r, dtype=float)
    a, b, _ = _coeffs(loss, r)
    out = 2.0 * a * r + b
    return float(out) if out.ndim == 0 else out


def loss_curvature(loss: LossModel, r):
    r = np.asarray(r, dtype=float)
    out = loss.pieces[piece_index(loss, r), 0]
    return float(out) if np.ndim(out) == 0 else out


def generalized_residual(kind: str, y, eta):
    """r = y - eta for regression, r = y * eta (margin) for classification."""
    y = np.asarray(y, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if kind == REGRESSION:
        out = y - eta
    elif kind == CLASSIFICATION:
        if not np.all((y == 1.0) | (y == -1.0)):
            raise InvalidLabelError("classification labels must be -1 or +1")
        out = y * eta
    else:
        raise ValueError(f"unknown residual kind {kind!r}")
    return float(out) if out.ndim == 0 else out


def predict_eta(X, beta, intercept=None):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    beta = np.asarray(beta, dtype=float).ravel()
    if X.shape[1] != beta.shape[0]:
        raise ValueError(f"X has {X.shape[1]} columns, beta has {beta.shape[0]}")
    eta = X @ beta
    if intercept is not None:
        eta = eta + float(intercept)
    return eta


def total_loss(loss: LossModel, dataset: Dataset, beta, intercept=None) -> float:
    eta = predict_eta(dataset.X, beta, intercept)
    r = generalized_residual(loss.residual_kind, dataset.y, eta)
    return float(np.sum(loss_value(loss, r)))


def total_gradient(loss: LossModel, dataset: Dataset, beta, intercept=None):
    """Gradient of sum_i l(r_i) in beta (and in the intercept when given).

    Returns (grad, intercept_grad); intercept_grad is None when no intercept
    is in use.
    """
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.shape[0] != dataset.n_features:
        raise ValueError(
            f"beta has length {beta.shape[0]}, expected {dataset.n_features}"
        )
    if loss.residual_kind != dataset.task:
        raise ValueError(
            f"loss residual kind {loss.residual_kind!r} does not match "
            f"dataset task {dataset.task!r}"
        )
    eta = predict_eta(dataset.X, beta, intercept)
    r = generalized_residual(loss.residual_kind, dataset.y, eta)
    d = loss_derivative(loss, r)
    if loss.residual_kind == REGRESSION:
        grad = -(dataset.X.T @ d)
        gicpt = -float(np.sum(d)) if intercept is not None else None
    else:
        yd = dataset.y * d
        grad = dataset.X.T @ yd
        gicpt = float(np.sum(yd)) if intercept is not None else None
    return grad, gicpt
