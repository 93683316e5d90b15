"""Event-driven engine for exact piecewise-linear l1 regularization paths.

The coefficient path beta(lambda) of

    minimize  sum_i l(r_i(beta, b)) + lambda * ||beta||_1

is piecewise linear in lambda for every loss in the piecewise-quadratic
family. The engine follows the path from lambda_max down, stepping from one
direction change to the next. Three event kinds change the direction: an
inactive variable reaching the correlation bound (add), an active coefficient
hitting zero (drop), and a generalized residual crossing a loss knot
(knot-cross). Between events the exact solution is the linear interpolant.

Conventions: gamma solves C gamma = s with C = sum_i 2 a(r_i) x~_i x~_i^T
(the true Hessian of the total loss, intercept column included) and
beta(lambda - d) = beta(lambda) + d * gamma, so active gradients satisfy
|grad_j| = lambda exactly along each segment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import losses as L
from ._chol import (
    chol_append,
    chol_delete,
    chol_downdate,
    chol_factor,
    chol_solve,
    chol_update,
)
from .data import CLASSIFICATION, REGRESSION, Dataset
from .errors import (
    BudgetExceededError,
    DataError,
    KktViolationError,
    SingularGramError,
    SolverError,
)

_POS_TOL = 1e-14          # smallest admissible positive event step
_PIVOT_REL = 1e-12        # collinearity threshold for factor pivots
_REFRESH_EVERY = 25       # events between from-scratch refactorizations
_KNOT_BAND = 1e-9         # residuals further than this from a knot resync by value

_ORDER = {"drop": 0, "knot": 1, "add": 2}


@dataclass
class PathOptions:
    intercept: bool = True
    lambda_min: float = 0.0
    max_steps: int | None = None      # default 50 * (n + p) + 200
    max_active: int | None = None     # default min(n, p)
    kkt_tol: float = 1e-8
    event_tol: float = 1e-10          # simultaneous-event window in delta-lambda


@dataclass
class Breakpoint:
    lam: float
    beta: np.ndarray
    intercept: float | None
    event: str


@dataclass
class PathEvent:
    kind: str                         # add | drop | knot | terminate
    index: int | None
    delta_lambda: float
    batch: list = field(default_factory=list)


@dataclass
class KktReport:
    max_active_violation: float
    max_inactive_violation: float
    intercept_violation: float
    sign_violations: int
    passed: bool


@dataclass
class RegularizationPath:
    breakpoints: list[Breakpoint]
    loss: L.LossModel
    meta: dict

    @property
    def lambda_max(self) -> float:
        return self.breakpoints[0].lam

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([bp.lam for bp in self.breakpoints])


@dataclass
class PathState:
    lam: float
    beta: np.ndarray
    intercept: float | None
    active: list[int]
    sign: list[float]                 # aligned with active
    gamma: np.ndarray                 # aligned with active
    gamma_intercept: float
    resid: np.ndarray
    residual_piece: np.ndarray
    grad: np.ndarray
    grad_intercept: float | None
    chol: np.ndarray | None = None    # factor of C in [intercept?, active...] order
    events_since_refactor: int = 0
    excluded: set = field(default_factory=set)
    warnings: list = field(default_factory=list)
    trail: list = field(default_factory=list)
    n_steps: int = 0
    lambda_max: float = 0.0

    @property
    def has_intercept(self) -> bool:
        return self.intercept is not None


# ---------------------------------------------------------------------------
# basic state computations


def _design(dataset: Dataset, active, with_intercept: bool) -> np.ndarray:
    cols = []
    if with_intercept:
        cols.append(np.ones((dataset.n_samples, 1)))
    if active:
        cols.append(dataset.X[:, active])
    if not cols:
        return np.zeros((dataset.n_samples, 0))
    return np.hstack(cols)


def _refresh(state: PathState, dataset: Dataset, loss: L.LossModel) -> None:
    """Recompute residuals and the full gradient from scratch.

    The per-observation piece assignment stays authoritative near knots (the
    far-side convention after a crossing) and is resynchronized by value once
    the residual is clearly inside a piece.
    """
    eta = L.predict_eta(dataset.X, state.beta, state.intercept)
    r = L.generalized_residual(loss.residual_kind, dataset.y, eta)
    r = np.atleast_1d(r)
    if loss.n_knots:
        canonical = np.searchsorted(loss.knots, r, side="right")
        stale = canonical != state.residual_piece
        if np.any(stale):
            dist = np.min(np.abs(r[stale, None] - loss.knots[None, :]), axis=1)
            fix = np.flatnonzero(stale)[dist > _KNOT_BAND]
            state.residual_piece[fix] = canonical[fix]
    state.resid = r
    a = loss.pieces[state.residual_piece, 0]
    b = loss.pieces[state.residual_piece, 1]
    d = 2.0 * a * r + b
    if loss.residual_kind == REGRESSION:
        state.grad = -(dataset.X.T @ d)
        gi = -float(np.sum(d))
    else:
        yd = dataset.y * d
        state.grad = dataset.X.T @ yd
        gi = float(np.sum(yd))
    state.grad_intercept = gi if state.has_intercept else None


def _curvature_matrix(state: PathState, dataset: Dataset, loss: L.LossModel) -> np.ndarray:
    Xa = _design(dataset, state.active, state.has_intercept)
    a = loss.pieces[state.residual_piece, 0]
    return 2.0 * Xa.T @ (a[:, None] * Xa)


def _sign_vector(state: PathState) -> np.ndarray:
    s = np.asarray(state.sign, dtype=float)
    if state.has_intercept:
        s = np.concatenate(([0.0], s))
    return s


def _store_gamma(state: PathState, g: np.ndarray) -> None:
    if state.has_intercept:
        state.gamma_intercept = float(g[0]) if g.size else 0.0
        state.gamma = g[1:].copy()
    else:
        state.gamma_intercept = 0.0
        state.gamma = g.copy()


def _eta_rate(state: PathState, dataset: Dataset) -> np.ndarray:
    e = np.full(dataset.n_samples, state.gamma_intercept)
    if state.active:
        e += dataset.X[:, state.active] @ state.gamma
    return e


def _residual_rate(state: PathState, dataset: Dataset, loss: L.LossModel) -> np.ndarray:
    e = _eta_rate(state, dataset)
    return -e if loss.residual_kind == REGRESSION else dataset.y * e


# ---------------------------------------------------------------------------
# direction solve, including degenerate (zero curvature) configurations


def _factor_ok(Lf: np.ndarray) -> bool:
    if Lf.size == 0:
        return True
    d = np.diag(Lf)
    return float(np.min(d) ** 2) > _PIVOT_REL * float(np.sum(Lf * Lf)) / Lf.shape[0]


def _set_direction(state, dataset, loss, options) -> None:
    """Solve for the advance direction; resolve zero-curvature states by jumps.

    A jump moves beta at fixed lambda along a null direction of C (which
    keeps the whole gradient frozen and trades loss against penalty at equal
    rate) until a knot crossing restores curvature or an active coefficient
    hits zero. Each jump is recorded as an extra breakpoint at the same
    lambda.
    """
    guard = dataset.n_samples + len(state.active) + 10
    for _ in range(guard):
        m = len(state.active) + (1 if state.has_intercept else 0)
        if m == 0:
            state.gamma = np.zeros(0)
            state.gamma_intercept = 0.0
            state.chol = None
            return
        if state.chol is not None and state.chol.shape[0] == m and _factor_ok(state.chol):
            _store_gamma(state, chol_solve(state.chol, _sign_vector(state)))
            return
        C = _curvature_matrix(state, dataset, loss)
        try:
            Lf = chol_factor(C)
        except SingularGramError:
            Lf = None
        if Lf is not None and _factor_ok(Lf):
            state.chol = Lf
            state.events_since_refactor = 0
            _store_gamma(state, chol_solve(Lf, _sign_vector(state)))
            return
        state.chol = None
        if _degenerate_step(state, dataset, loss, options, C):
            return
        # a jump mutated the state; rebuild and retry
    raise SolverError("zero-curvature resolution did not terminate")


def _degenerate_step(state, dataset, loss, options, C) -> bool:
    """Handle singular C. Returns True when a direction was produced."""
    s = _sign_vector(state)
    evals, evecs = np.linalg.eigh(C)
    scale = max(float(evals[-1]), 0.0)
    null_mask = evals <= 1e-10 * scale + 1e-300
    if not np.any(null_mask):
        inv = 1.0 / evals
        _store_gamma(state, evecs @ (inv * (evecs.T @ s)))
        return True
    N = evecs[:, null_mask]
    sN = N.T @ s
    if np.max(np.abs(sN), initial=0.0) <= 1e-10 * max(1.0, float(np.max(np.abs(s), initial=0.0))):
        # consistent singular system: minimum-norm direction on range(C)
        inv = np.where(null_mask, 0.0, 1.0 / np.where(null_mask, 1.0, evals))
        _store_gamma(state, evecs @ (inv * (evecs.T @ s)))
        return True
    # inconsistent: the solution correspondence at this lambda is set-valued;
    # move along the limit direction of a(r) -> a(r) + eps
    Xa = _design(dataset, state.active, state.has_intercept)
    D = 2.0 * Xa.T @ Xa
    M = N.T @ D @ N
    try:
        w = np.linalg.solve(M, sN)
    except np.linalg.LinAlgError:
        w, *_ = np.linalg.lstsq(M, sN, rcond=None)
    v = N @ w
    _jump(state, dataset, loss, options, v)
    return False


def _jump(state, dataset, loss, options, v) -> None:
    if state.has_intercept:
        v_icpt, v_act = float(v[0]), v[1:]
    else:
        v_icpt, v_act = 0.0, v
    e = np.full(dataset.n_samples, v_icpt)
    if state.active:
        e += dataset.X[:, state.active] @ v_act
    rho = -e if loss.residual_kind == REGRESSION else dataset.y * e
    cands = []
    knots = loss.knots
    m = loss.n_knots
    piece = state.residual_piece
    r = state.resid
    up = np.flatnonzero((piece < m) & (rho > _POS_TOL))
    for i in up:
        tau = (knots[piece[i]] - r[i]) / rho[i]
        if tau > _POS_TOL:
            cands.append((tau, _ORDER["knot"], int(i), ("knot", (int(i), int(piece[i]) + 1))))
    down = np.flatnonzero((piece > 0) & (rho < -_POS_TOL))
    for i in down:
        tau = (knots[piece[i] - 1] - r[i]) / rho[i]
        if tau > _POS_TOL:
            cands.append((tau, _ORDER["knot"], int(i), ("knot", (int(i), int(piece[i]) - 1))))
    for pos, j in enumerate(state.active):
        if v_act[pos] != 0.0 and state.beta[j] * v_act[pos] < 0.0:
            tau = -state.beta[j] / v_act[pos]
            if tau > _POS_TOL:
                cands.append((tau, _ORDER["drop"], int(j), ("drop", int(j))))
    if not cands:
        raise SolverError(
            "degenerate flat optimum with no terminating knot crossing"
        )
    tau_star = min(c[0] for c in cands)
    batch = sorted(
        (c for c in cands if c[0] <= tau_star + options.event_tol),
        key=lambda c: (c[1], c[2]),
    )
    if state.active:
        state.beta[state.active] += tau_star * v_act
    if state.has_intercept:
        state.intercept += tau_star * v_icpt
    tags = []
    for _, _, _, (kind, payload) in batch:
        if kind == "drop":
            j = payload
            state.beta[j] = 0.0
            pos = state.active.index(j)
            state.active.pop(pos)
            state.sign.pop(pos)
            tags.append(f"drop({j})")
        else:
            i, new_piece = payload
            state.residual_piece[i] = new_piece
            tags.append(f"knot-cross({i})")
    _refresh(state, dataset, loss)
    state.trail.append(
        Breakpoint(state.lam, state.beta.copy(), state.intercept, "+".join(tags))
    )


def compute_direction(state: PathState, dataset: Dataset, loss: L.LossModel):
    """Advance direction as a full-length vector plus the intercept rate.

    beta(lambda - d) = beta(lambda) + d * gamma on the current segment.
    """
    m = len(state.active) + (1 if state.has_intercept else 0)
    full = np.zeros(dataset.n_features)
    if m == 0:
        return full, 0.0
    C = _curvature_matrix(state, dataset, loss)
    try:
        Lf = chol_factor(C)
        if not _factor_ok(Lf):
            raise SingularGramError("curvature matrix numerically singular")
        g = chol_solve(Lf, _sign_vector(state))
    except SingularGramError:
        g, *_ = np.linalg.lstsq(C, _sign_vector(state), rcond=None)
    if state.has_intercept:
        gi, ga = float(g[0]), g[1:]
    else:
        gi, ga = 0.0, g
    full[state.active] = ga
    return full, gi


# ---------------------------------------------------------------------------
# initialization


def _intercept_only(dataset: Dataset, loss: L.LossModel) -> float:
    """Exact minimizer of sum_i l(r_i(b)) over the intercept alone.

    The derivative phi(b) is continuous, piecewise linear and nondecreasing;
    the root is located by scanning the knot-crossing grid and solving the
    bracketing linear piece exactly.
    """
    y = dataset.y

    def phi(b):
        r = L.generalized_residual(loss.residual_kind, y, np.full(y.shape, b))
        d = L.loss_derivative(loss, r)
        if loss.residual_kind == REGRESSION:
            return -float(np.sum(d))
        return float(np.sum(y * d))

    if loss.residual_kind == REGRESSION:
        cross = np.unique(y[:, None] - loss.knots[None, :]) if loss.n_knots else np.zeros(0)
    else:
        cross = np.unique(np.outer(y, loss.knots)) if loss.n_knots else np.zeros(0)

    def root_on_ray(b0, towards_right):
        p0 = phi(b0)
        b1 = b0 + (1.0 if towards_right else -1.0)
        slope = (phi(b1) - p0) / (b1 - b0)
        if abs(slope) <= _POS_TOL:
            if abs(p0) <= _POS_TOL:
                return b0
            raise SolverError("intercept-only problem has no finite minimizer")
        return b0 - p0 / slope

    if cross.size == 0:
        return root_on_ray(0.0, towards_right=True)
    vals = np.array([phi(b) for b in cross])
    if vals[0] >= 0.0:
        if vals[0] == 0.0:
            run = 0
            while run + 1 < cross.size and vals[run + 1] == 0.0:
                run += 1
            return float(0.5 * (cross[0] + cross[run]))
        return root_on_ray(float(cross[0]), towards_right=False)
    if vals[-1] < 0.0:
        return root_on_ray(float(cross[-1]), towards_right=True)
    idx = int(np.argmax(vals >= 0.0))
    if vals[idx] == 0.0:
        run = idx
        while run + 1 < cross.size and vals[run + 1] == 0.0:
            run += 1
        return float(0.5 * (cross[idx] + cross[run]))
    b_lo, b_hi = float(cross[idx - 1]), float(cross[idx])
    p_lo, p_hi = float(vals[idx - 1]), float(vals[idx])
    return b_lo - p_lo * (b_hi - b_lo) / (p_hi - p_lo)


def _fill_defaults(dataset: Dataset, options: PathOptions) -> PathOptions:
    if options.max_steps is None or options.max_active is None:
        options = PathOptions(**vars(options))
        if options.max_steps is None:
            options.max_steps = 50 * (dataset.n_samples + dataset.n_features) + 200
        if options.max_active is None:
            options.max_active = min(dataset.n_samples, dataset.n_features)
    return options


def initialize(dataset: Dataset, loss: L.LossModel, options: PathOptions | None = None) -> PathState:
    options = _fill_defaults(dataset, options or PathOptions())
    if loss.residual_kind != dataset.task:
        raise DataError(
            f"loss residual kind {loss.residual_kind!r} does not match "
            f"dataset task {dataset.task!r}"
        )
    intercept = _intercept_only(dataset, loss) if options.intercept else None
    beta = np.zeros(dataset.n_features)
    state = PathState(
        lam=0.0,
        beta=beta,
        intercept=intercept,
        active=[],
        sign=[],
        gamma=np.zeros(0),
        gamma_intercept=0.0,
        resid=np.zeros(dataset.n_samples),
        residual_piece=np.zeros(dataset.n_samples, dtype=int),
        grad=np.zeros(dataset.n_features),
        grad_intercept=None,
    )
    eta = L.predict_eta(dataset.X, beta, intercept)
    r = np.atleast_1d(L.generalized_residual(loss.residual_kind, dataset.y, eta))
    state.residual_piece = np.searchsorted(loss.knots, r, side="right")
    _refresh(state, dataset, loss)
    lam_max = float(np.max(np.abs(state.grad)))
    state.lambda_max = lam_max
    if lam_max <= 1e-12:
        state.lam = 0.0
        state.trail.append(Breakpoint(0.0, beta.copy(), intercept, "init"))
        return state
    state.lam = lam_max
    tie = 1e-10 * max(lam_max, 1.0)
    order = np.argsort(-np.abs(state.grad), kind="stable")
    for j in order:
        if np.abs(state.grad[j]) < lam_max - tie:
            break
        state.active.append(int(j))
        state.sign.append(-float(np.sign(state.grad[j])))
    state.trail.append(Breakpoint(lam_max, beta.copy(), intercept, "init"))
    _set_direction(state, dataset, loss, options)
    return state


# ---------------------------------------------------------------------------
# events


def next_event(state: PathState, dataset: Dataset, loss: L.LossModel,
               options: PathOptions | None = None) -> PathEvent:
    options = _fill_defaults(dataset, options or PathOptions())
    lam = state.lam
    cap = lam - options.lambda_min
    e = _eta_rate(state, dataset)
    a = loss.pieces[state.residual_piece, 0]
    rho = -e if loss.residual_kind == REGRESSION else dataset.y * e
    u = 2.0 * (dataset.X.T @ (a * e))
    g = state.grad
    cands = []

    if len(state.active) < options.max_active:
        blocked = set(state.active) | state.excluded
        with np.errstate(divide="ignore", invalid="ignore"):
            d_neg = (lam - g) / (1.0 + u)   # gradient meets +(lam - d); sign -1
            d_pos = (lam + g) / (1.0 - u)   # gradient meets -(lam - d); sign +1
        for j in range(dataset.n_features):
            if j in blocked:
                continue
            if np.isfinite(d_neg[j]) and d_neg[j] > _POS_TOL:
                cands.append((float(d_neg[j]), _ORDER["add"], j, ("add", (j, -1.0))))
            if np.isfinite(d_pos[j]) and d_pos[j] > _POS_TOL:
                cands.append((float(d_pos[j]), _ORDER["add"], j, ("add", (j, 1.0))))

    for pos, j in enumerate(state.active):
        gj = state.gamma[pos] if state.gamma.size else 0.0
        if gj != 0.0 and state.beta[j] * gj < 0.0:
            d = -state.beta[j] / gj
            if d > _POS_TOL:
                cands.append((float(d), _ORDER["drop"], j, ("drop", j)))

    if loss.n_knots:
        knots = loss.knots
        piece = state.residual_piece
        r = state.resid
        up = np.flatnonzero((piece < loss.n_knots) & (rho > 0.0))
        for i in up:
            d = (knots[piece[i]] - r[i]) / rho[i]
            if d > _POS_TOL:
                cands.append((float(d), _ORDER["knot"], int(i),
                              ("knot", (int(i), int(piece[i]) + 1))))
        down = np.flatnonzero((piece > 0) & (rho < 0.0))
        for i in down:
            d = (knots[piece[i] - 1] - r[i]) / rho[i]
            if d > _POS_TOL:
                cands.append((float(d), _ORDER["knot"], int(i),
                              ("knot", (int(i), int(piece[i]) - 1))))

    if not cands:
        return PathEvent("terminate", None, max(cap, 0.0))
    d_min = min(c[0] for c in cands)
    if d_min >= cap - 1e-12:
        return PathEvent("terminate", None, max(cap, 0.0))
    batch = sorted(
        (c for c in cands if c[0] <= d_min + options.event_tol),
        key=lambda c: (c[1], c[2]),
    )
    kind, payload = batch[0][3]
    index = batch[0][2]
    return PathEvent(kind, index, d_min, [c[3] for c in batch])


def apply_event(state: PathState, event: PathEvent, dataset: Dataset,
                loss: L.LossModel, options: PathOptions | None = None) -> PathState:
    options = _fill_defaults(dataset, options or PathOptions())
    d = event.delta_lambda
    if state.active:
        state.beta[state.active] += d * state.gamma
    if state.has_intercept:
        state.intercept += d * state.gamma_intercept
    state.lam = max(state.lam - d, options.lambda_min)
    if event.kind == "terminate":
        state.lam = options.lambda_min
        _refresh(state, dataset, loss)
        state.trail.append(
            Breakpoint(state.lam, state.beta.copy(), state.intercept, "terminate")
        )
        state.n_steps += 1
        return state

    icpt_off = 1 if state.has_intercept else 0
    tags = []
    for kind, payload in event.batch:
        if kind == "drop":
            j = payload
            state.beta[j] = 0.0
            pos = state.active.index(j)
            if state.chol is not None:
                state.chol = chol_delete(state.chol, icpt_off + pos)
            state.active.pop(pos)
            state.sign.pop(pos)
            tags.append(f"drop({j})")
        elif kind == "knot":
            i, new_piece = payload
            da = loss.pieces[new_piece, 0] - loss.pieces[state.residual_piece[i], 0]
            state.residual_piece[i] = new_piece
            if state.chol is not None and da != 0.0:
                xt = np.concatenate(
                    (np.ones(icpt_off), dataset.X[i, state.active])
                ) * np.sqrt(2.0 * abs(da))
                try:
                    state.chol = (
                        chol_update(state.chol, xt)
                        if da > 0
                        else chol_downdate(state.chol, xt)
                    )
                except SingularGramError:
                    state.chol = None
            tags.append(f"knot-cross({i})")
        else:  # add
            j, sgn = payload
            if state.chol is None:
                try:
                    Lf = chol_factor(_curvature_matrix(state, dataset, loss))
                    state.chol = Lf if _factor_ok(Lf) else None
                except SingularGramError:
                    state.chol = None
            added = False
            if state.chol is not None:
                a = loss.pieces[state.residual_piece, 0]
                Xa = _design(dataset, state.active, state.has_intercept)
                xj = dataset.X[:, j]
                cross = 2.0 * Xa.T @ (a * xj)
                diag = 2.0 * float(np.sum(a * xj * xj))
                pivot_tol = _PIVOT_REL * (float(np.sum(state.chol ** 2)) + diag) / (
                    state.chol.shape[0] + 1
                )
                try:
                    state.chol = chol_append(state.chol, cross, diag, pivot_tol)
                    added = True
                except SingularGramError:
                    state.excluded.add(j)
                    state.warnings.append(
                        f"variable {j} skipped: collinear with the active set"
                    )
            else:
                # curvature currently degenerate; admit and let the direction
                # solve route through the zero-curvature handler
                added = True
            if added:
                state.active.append(j)
                state.sign.append(float(sgn))
                tags.append(f"add({j})")
        state.events_since_refactor += 1
    if state.events_since_refactor >= _REFRESH_EVERY:
        state.chol = None

    _refresh(state, dataset, loss)
    for pos, j in enumerate(state.active):
        if state.beta[j] != 0.0:
            state.sign[pos] = float(np.sign(state.beta[j]))
    state.trail.append(
        Breakpoint(state.lam, state.beta.copy(), state.intercept, "+".join(tags))
    )
    _set_direction(state, dataset, loss, options)
    report = verify_kkt(
        dataset, loss, state.beta, state.intercept, state.lam, options.kkt_tol
    )
    if not report.passed:
        raise KktViolationError(
            f"optimality violated at lambda={state.lam!r}: {report!r}"
        )
    state.n_steps += 1
    return state


# ---------------------------------------------------------------------------
# driver and queries


def solve_path(dataset: Dataset, loss: L.LossModel,
               options: PathOptions | None = None) -> RegularizationPath:
    options = _fill_defaults(dataset, options or PathOptions())
    state = initialize(dataset, loss, options)
    bps = list(state.trail)
    state.trail.clear()
    meta = {
        "n": dataset.n_samples,
        "p": dataset.n_features,
        "task": dataset.task,
        "intercept": options.intercept,
        "lambda_min": options.lambda_min,
        "column_names": dataset.column_names,
        "standardize": False,
        "status": "ok",
        "warnings": state.warnings,
    }
    if dataset.standardized:
        meta["standardize"] = {
            "means": dataset.column_means.tolist(),
            "scales": dataset.column_scales.tolist(),
        }
    if state.lambda_max <= 1e-12:
        meta["steps"] = len(bps)
        return RegularizationPath(bps, loss, meta)
    while True:
        if state.n_steps >= options.max_steps:
            meta["status"] = "budget-exceeded"
            meta["steps"] = len(bps)
            raise BudgetExceededError(
                f"no termination within {options.max_steps} steps",
                partial_path=RegularizationPath(bps, loss, meta),
            )
        event = next_event(state, dataset, loss, options)
        apply_event(state, event, dataset, loss, options)
        bps.extend(state.trail)
        state.trail.clear()
        if event.kind == "terminate":
            break
    meta["steps"] = len(bps)
    return RegularizationPath(bps, loss, meta)


def coefficients_at(path: RegularizationPath, lam: float):
    """Exact solution at `lam` by linear interpolation between breakpoints."""
    bps = path.breakpoints
    if not bps:
        raise ValueError("empty path")
    lams = np.array([bp.lam for bp in bps])
    if lam >= lams[0]:
        return bps[0].beta.copy(), bps[0].intercept
    if lam < lams[-1] - 1e-12 * max(1.0, lams[0]):
        raise ValueError(
            f"lambda={lam!r} below the terminal breakpoint {lams[-1]!r}"
        )
    lam_q = max(lam, float(lams[-1]))
    k = int(np.searchsorted(-lams, -lam_q, side="right")) - 1
    if k >= len(bps) - 1:
        return bps[-1].beta.copy(), bps[-1].intercept
    lo, hi = bps[k + 1], bps[k]
    w = (hi.lam - lam_q) / (hi.lam - lo.lam)
    beta = hi.beta + w * (lo.beta - hi.beta)
    if hi.intercept is None:
        return beta, None
    return beta, float(hi.intercept + w * (lo.intercept - hi.intercept))


def verify_kkt(dataset: Dataset, loss: L.LossModel, beta, intercept,
               lam: float, tol: float = 1e-8) -> KktReport:
    """Check the subgradient optimality conditions at (beta, intercept, lam)."""
    beta = np.asarray(beta, dtype=float).ravel()
    grad, gicpt = L.total_gradient(loss, dataset, beta, intercept)
    tolscale = tol * max(lam, 1.0)
    active = np.abs(beta) > tol
    act_viol = 0.0
    sign_violations = 0
    if np.any(active):
        ga = grad[active]
        act_viol = float(np.max(np.abs(np.abs(ga) - lam)))
        sign_violations = int(
            np.sum((ga * beta[active] > 0.0) & (np.abs(ga) > tolscale))
        )
    inact_viol = 0.0
    if np.any(~active):
        inact_viol = float(max(0.0, np.max(np.abs(grad[~active])) - lam))
    icpt_viol = abs(gicpt) if gicpt is not None else 0.0
    passed = (
        act_viol <= tolscale
        and inact_viol <= tolscale
        and icpt_viol <= tolscale
        and sign_violations == 0
    )
    return KktReport(act_viol, inact_viol, float(icpt_viol), sign_violations, passed)


def predict(data, beta, intercept=None):
    """Linear predictor eta = X beta + intercept for a Dataset or raw rows."""
    X = data.X if isinstance(data, Dataset) else data
    return L.predict_eta(X, beta, intercept)
