"""Optimization over probability simplices.

All subproblems have the form ``min_w w'Qw - 2c'w + const`` over the simplex
with ``Q`` positive semidefinite. They are solved by projected gradient
descent with backtracking. Every few steps the solver tries an exact
equality-constrained solve on the current support and keeps it when it is
feasible and no worse.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .kcd import as_weights, kcd_value
from .mmd import as_generator

_POLISH_EVERY = 5


@dataclass(frozen=True)
class OptimizerConfig:
    max_outer_iters: int = 200
    max_inner_iters: int = 1000
    grad_tol: float = 1e-7
    obj_tol: float = 1e-10
    init: str = "dirichlet"
    restarts: int = 5

    def __post_init__(self):
        if self.max_outer_iters < 1 or self.max_inner_iters < 1:
            raise InvalidInputError("iteration limits must be at least 1")
        if not (self.grad_tol > 0 and self.obj_tol > 0):
            raise InvalidInputError("tolerances must be positive")
        if self.init not in ("uniform", "dirichlet"):
            raise InvalidInputError(f"init must be 'uniform' or 'dirichlet', got {self.init!r}")
        if self.restarts < 0:
            raise InvalidInputError("restarts must be nonnegative")

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class OptResult:
    """``weights`` is one vector for :func:`minimize_eta`, a ``(lam, eta)`` pair
    for :func:`minimize_biconvex`."""

    weights: object
    objective: float
    converged: bool
    iters: int
    trace: list = field(default_factory=list)
    restarts: int = 0


def project_to_simplex(v):
    """Euclidean projection onto the probability simplex (sort and threshold)."""
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size == 0:
        raise InvalidInputError("cannot project an empty vector")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("cannot project a non-finite vector")
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _objective(Q, c, const, w):
    return float(w @ Q @ w - 2.0 * (c @ w) + const)


def _polish(Q, c, w, floor=0.0):
    """Exact minimizer on the support ``{w > floor}`` with the sum constraint, or None."""
    S = np.flatnonzero(w > floor)
    m = S.size
    A = np.zeros((m + 1, m + 1))
    A[:m, :m] = 2.0 * Q[np.ix_(S, S)]
    A[:m, m] = 1.0
    A[m, :m] = 1.0
    b = np.append(2.0 * c[S], 1.0)
    sol = np.linalg.lstsq(A, b, rcond=None)[0][:m]
    if not np.all(np.isfinite(sol)) or sol.min() < 0.0:
        return None
    out = np.zeros_like(w)
    out[S] = sol
    return out / out.sum()


def _finish(Q, c, const, w, f, floor):
    """Snap coordinates below ``floor`` to zero when the exact support solve is no worse."""
    wp = _polish(Q, c, w, floor)
    if wp is not None:
        fp = _objective(Q, c, const, wp)
        if fp <= f:
            return wp, fp
    return w, f


def _stationarity(Q, c, w, step):
    grad = 2.0 * (Q @ w) - 2.0 * c
    return float(np.linalg.norm(w - project_to_simplex(w - step * grad)))


def solve_simplex_qp(Q, c, w0, cfg, const=0.0):
    """Minimize ``w'Qw - 2c'w + const`` over the simplex starting at ``w0``.

    Returns ``(w, objective, converged, iterations)``. The returned objective
    never exceeds the objective at ``w0``.
    """
    Q = np.asarray(Q, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    w = project_to_simplex(w0)
    if w.size == 1:
        return w, _objective(Q, c, const, w), True, 0

    lip = 2.0 * float(np.max(np.diag(Q)))
    step0 = 1.0 / lip if lip > 0 else 1.0
    step = step0
    f = _objective(Q, c, const, w)
    for it in range(1, cfg.max_inner_iters + 1):
        grad = 2.0 * (Q @ w) - 2.0 * c
        if np.linalg.norm(w - project_to_simplex(w - step0 * grad)) <= cfg.grad_tol:
            w, f = _finish(Q, c, const, w, f, cfg.grad_tol)
            return w, f, True, it - 1
        while True:
            w_new = project_to_simplex(w - step * grad)
            dw = w_new - w
            f_new = _objective(Q, c, const, w_new)
            if f_new <= f + grad @ dw + (dw @ dw) / (2.0 * step) or step < 1e-20:
                break
            step *= 0.5
        if f_new <= f:
            w, f = w_new, f_new
        if it % _POLISH_EVERY == 0:
            wp = _polish(Q, c, w)
            if wp is not None:
                fp = _objective(Q, c, const, wp)
                if fp <= f:
                    w, f = wp, fp
    w, f = _finish(Q, c, const, w, f, cfg.grad_tol)
    converged = _stationarity(Q, c, w, step0) <= cfg.grad_tol
    return w, f, converged, cfg.max_inner_iters


def minimize_eta(g, cfg=None, row=0):
    """Best mixture of the Y extreme points for X extreme point ``row``.

    Minimizes ``L(e_row, eta)``; the problem is convex, so it always starts
    from the uniform weights and ignores ``cfg.init`` / ``cfg.restarts``.
    """
    cfg = cfg or OptimizerConfig()
    l, r = g.shape
    if not 0 <= row < l:
        raise InvalidInputError(f"row {row} out of range for {l} X extreme points")
    w, _, converged, iters = solve_simplex_qp(
        g.Myy, g.Mxy[row], np.full(r, 1.0 / r), cfg, const=g.Mxx[row, row]
    )
    eta = as_weights(w, r)
    lam = np.zeros(l)
    lam[row] = 1.0
    return OptResult(eta, kcd_value(g, lam, eta), converged, iters)


def _alternate(g, lam, eta, cfg):
    f = kcd_value(g, lam, eta)
    trace = [f]
    converged = False
    it = 0
    for it in range(1, cfg.max_outer_iters + 1):
        lam, _, _, _ = solve_simplex_qp(g.Mxx, g.Mxy @ eta, lam, cfg, const=eta @ g.Myy @ eta)
        eta, f_new, _, _ = solve_simplex_qp(g.Myy, g.Mxy.T @ lam, eta, cfg, const=lam @ g.Mxx @ lam)
        trace.append(f_new)
        if f - f_new < cfg.obj_tol:
            converged = True
            f = f_new
            break
        f = f_new
    return lam, eta, converged, it, trace


def minimize_biconvex(g, cfg=None, rng=None):
    """Alternating minimization of ``L(lam, eta)`` over both simplices.

    Runs ``1 + cfg.restarts`` starts. The first uses ``cfg.init``, the rest are
    Dirichlet(1, ..., 1) draws from ``rng``. Returns the best start; ties go
    to the earliest.
    """
    cfg = cfg or OptimizerConfig()
    rng = as_generator(rng)
    l, r = g.shape
    best = None
    for k in range(1 + cfg.restarts):
        if k == 0 and cfg.init == "uniform":
            lam0, eta0 = np.full(l, 1.0 / l), np.full(r, 1.0 / r)
        else:
            lam0, eta0 = rng.dirichlet(np.ones(l)), rng.dirichlet(np.ones(r))
        lam, eta, converged, iters, trace = _alternate(g, lam0, eta0, cfg)
        lam, eta = as_weights(lam, l), as_weights(eta, r)
        res = OptResult((lam, eta), kcd_value(g, lam, eta), converged, iters, trace, cfg.restarts)
        if best is None or res.objective < best.objective:
            best = res
    return best
