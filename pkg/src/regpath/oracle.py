"""Independent high-precision solvers used to validate the path engines.

Proximal gradient with backtracking on the smooth part; the l1 penalty is
handled by soft-thresholding. Deliberately simple and slow: this module
exists to be trusted, not fast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import losses as L
from .data import Dataset
from .errors import ConvergenceError
from .l1path import RegularizationPath, coefficients_at


@dataclass
class OracleOptions:
    tol: float = 1e-12
    max_iter: int = 1_000_000
    step_init: float = 1.0
    step_shrink: float = 0.5
    step_grow: float = 1.02
    penalized: np.ndarray | None = None   # boolean mask; default: all columns


def _soft(x, thresh):
    return np.sign(x) * np.maximum(np.abs(x) - thresh, 0.0)


def solve_penalized(dataset: Dataset, loss: L.LossModel, lam: float,
                    options: OracleOptions | None = None, intercept: bool = True,
                    beta0=None, intercept0: float | None = None):
    """Global minimizer of sum_i l(r_i) + lam * sum_{penalized j} |beta_j|.

    Returns (beta, intercept); intercept is None when disabled. The proximal
    iteration is monotone in the objective; once it stalls (or periodically),
    the support it has discovered is certified by an exact Newton solve whose
    result is accepted only if the full subgradient conditions hold. The
    polish step is what makes badly conditioned designs (truncated-power
    spline bases) solvable to full precision.
    """
    opts = options or OracleOptions()
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    p = dataset.n_features
    mask = (
        np.ones(p, dtype=bool)
        if opts.penalized is None
        else np.asarray(opts.penalized, dtype=bool)
    )
    if mask.shape != (p,):
        raise ValueError("penalized mask must have one entry per column")
    beta = np.zeros(p) if beta0 is None else np.asarray(beta0, dtype=float).copy()
    b = (0.0 if intercept0 is None else float(intercept0)) if intercept else None

    def smooth(bb, ii):
        return L.total_loss(loss, dataset, bb, ii)

    def penalty(bb):
        return lam * float(np.sum(np.abs(bb[mask])))

    step = opts.step_init
    f = smooth(beta, b)
    obj = f + penalty(beta)
    for it in range(opts.max_iter):
        grad, gicpt = L.total_gradient(loss, dataset, beta, b)
        while True:
            cand = beta - step * grad
            cand[mask] = _soft(cand[mask], step * lam)
            b_cand = b - step * gicpt if intercept else None
            delta = cand - beta
            delta_b = (b_cand - b) if intercept else 0.0
            quad = float(delta @ delta) + delta_b * delta_b
            lin = float(grad @ delta) + (gicpt * delta_b if intercept else 0.0)
            f_cand = smooth(cand, b_cand)
            if f_cand <= f + lin + quad / (2.0 * step) + 1e-14 * max(1.0, abs(f)):
                break
            step *= opts.step_shrink
            if step < 1e-300:
                raise ConvergenceError("backtracking step underflow")
        obj_cand = f_cand + penalty(cand)
        move = float(np.max(np.abs(delta), initial=0.0))
        if intercept:
            move = max(move, abs(delta_b))
        decrease = obj - obj_cand
        beta, b, f, obj = cand, b_cand, f_cand, obj_cand
        scale = max(1.0, float(np.max(np.abs(beta), initial=0.0)))
        stalled = decrease <= 1e3 * opts.tol * max(1.0, abs(obj)) and move <= 1e-6 * scale
        if stalled or (it + 1) % 50 == 0:
            polished = _polish(dataset, loss, lam, mask, beta, b, intercept)
            if polished is not None:
                return polished
        if decrease <= opts.tol * max(1.0, abs(obj)) and move <= opts.tol * scale:
            return beta, b
        step *= opts.step_grow
    raise ConvergenceError(
        f"no convergence within {opts.max_iter} iterations (lambda={lam!r})"
    )


def _polish(dataset, loss, lam, mask, beta, b, intercept):
    """Exact solve on a support guessed from the proximal iterate.

    Tries supports from sparsest (large magnitude threshold) to densest;
    each is certified by Newton on the sign-fixed smooth problem and the
    full subgradient conditions. Returns None when no guess is optimal.
    """
    scale = max(1.0, float(np.max(np.abs(beta), initial=0.0)))
    for thresh in (1e-4, 1e-6, 1e-8, 0.0):
        support = np.flatnonzero((np.abs(beta) > thresh * scale) | ~mask)
        result = _newton_on_support(
            dataset, loss, lam, mask, beta, b, intercept, support
        )
        if result is not None:
            return result
    return None


def _newton_on_support(dataset, loss, lam, mask, beta, b, intercept, support):
    X, y = dataset.X, dataset.y
    n, p = X.shape
    beta_w = np.zeros(p)
    beta_w[support] = beta[support]
    bw = b
    gscale = max(lam, 1.0)
    for _ in range(60):
        cols = [np.ones((n, 1))] if intercept else []
        cols.append(X[:, support])
        Xa = np.hstack(cols)
        eta = L.predict_eta(X, beta_w, bw)
        r = L.generalized_residual(loss.residual_kind, y, eta)
        d = L.loss_derivative(loss, r)
        a = L.loss_curvature(loss, r)
        if loss.residual_kind == L.REGRESSION:
            g_all = -(X.T @ d)
            gi = -float(np.sum(d))
        else:
            yd = y * d
            g_all = X.T @ yd
            gi = float(np.sum(yd))
        s_sup = np.where(mask[support], np.sign(beta_w[support]), 0.0)
        res = g_all[support] + lam * s_sup
        res_full = np.concatenate(([gi], res)) if intercept else res
        if np.max(np.abs(res_full), initial=0.0) <= 1e-12 * gscale:
            break
        C = 2.0 * Xa.T @ (a[:, None] * Xa)
        try:
            delta = np.linalg.solve(C, -res_full)
        except np.linalg.LinAlgError:
            delta, *_ = np.linalg.lstsq(C, -res_full, rcond=None)
        if intercept:
            bw = bw + float(delta[0])
            delta = delta[1:]
        new_vals = beta_w[support] + delta
        flipped = mask[support] & (np.sign(new_vals) * s_sup < 0.0) & (s_sup != 0.0)
        beta_w[support] = np.where(flipped, 0.0, new_vals)
        if np.any(flipped):
            support = support[np.abs(beta_w[support]) > 0.0]
            if support.size == 0 and not intercept:
                break
    else:
        return None
    grad, gicpt = L.total_gradient(loss, dataset, beta_w, bw)
    ok = np.max(
        np.abs((grad + lam * np.where(mask, np.sign(beta_w), 0.0))[support]),
        initial=0.0,
    ) <= 1e-10 * gscale
    off = np.ones(p, dtype=bool)
    off[support] = False
    if np.any(off):
        ok = ok and float(np.max(np.abs(grad[off]))) <= lam + 1e-10 * gscale
    if intercept and gicpt is not None:
        ok = ok and abs(gicpt) <= 1e-10 * gscale
    if not ok:
        return None
    old_obj = L.total_loss(loss, dataset, beta, b) + lam * float(np.sum(np.abs(beta[mask])))
    new_obj = L.total_loss(loss, dataset, beta_w, bw) + lam * float(np.sum(np.abs(beta_w[mask])))
    if new_obj > old_obj + 1e-9 * max(1.0, abs(old_obj)):
        return None
    return beta_w, bw


def grid_check(path: RegularizationPath, dataset: Dataset, loss: L.LossModel,
               lambda_grid, tol: float = 1e-5,
               options: OracleOptions | None = None) -> float:
    """Max infinity-norm gap between the path and fresh penalized solves.

    Solves are warm-started down the sorted grid. Returns the worst gap; the
    caller compares against tol (also exposed via the returned value).
    """
    grid = np.sort(np.asarray(lambda_grid, dtype=float))[::-1]
    intercept = path.breakpoints[0].intercept is not None
    worst = 0.0
    beta0, icpt0 = None, None
    for lam in grid:
        ref_beta, ref_icpt = solve_penalized(
            dataset, loss, float(lam), options, intercept=intercept,
            beta0=beta0, intercept0=icpt0,
        )
        beta0, icpt0 = ref_beta, ref_icpt
        beta, icpt = coefficients_at(path, float(lam))
        gap = float(np.max(np.abs(beta - ref_beta), initial=0.0))
        if intercept:
            gap = max(gap, abs(icpt - ref_icpt))
        worst = max(worst, gap)
    return worst


def numeric_gradient(loss: L.LossModel, dataset: Dataset, beta, intercept=None,
                     h: float = 1e-5):
    """Central-difference gradient of the total loss; mirrors total_gradient."""
    if h <= 0:
        raise ValueError("h must be positive")
    beta = np.asarray(beta, dtype=float).copy()
    grad = np.zeros_like(beta)
    for j in range(beta.size):
        base = beta[j]
        beta[j] = base + h
        up = L.total_loss(loss, dataset, beta, intercept)
        beta[j] = base - h
        dn = L.total_loss(loss, dataset, beta, intercept)
        beta[j] = base
        grad[j] = (up - dn) / (2.0 * h)
    if intercept is None:
        return grad, None
    up = L.total_loss(loss, dataset, beta, intercept + h)
    dn = L.total_loss(loss, dataset, beta, intercept - h)
    return grad, (up - dn) / (2.0 * h)
