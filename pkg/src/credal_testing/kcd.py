"""Kernel credal discrepancy between two finitely generated credal sets.

A credal set is represented by one sample per extreme point (a *credal
sample*). Mixture weights live on the probability simplex. The empirical
discrepancy of a pair of mixtures is the quadratic form

    L(lam, eta) = lam' Mxx lam - 2 lam' Mxy eta + eta' Myy eta

over Gram matrices of empirical kernel mean embeddings.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .kernels import as_dataset, gram_mean

NEG_TOL = 1e-12
SUM_TOL = 1e-9


def as_credal_sample(datasets, name="credal sample"):
    """Validate a sequence of datasets sharing one dimension; returns a list."""
    if isinstance(datasets, np.ndarray) and datasets.ndim <= 2:
        datasets = [datasets]
    out = [as_dataset(d, f"{name}[{i}]") for i, d in enumerate(datasets)]
    if not out:
        raise InvalidInputError(f"{name}: needs at least one extreme point")
    dims = {d.shape[1] for d in out}
    if len(dims) != 1:
        raise InvalidInputError(f"{name}: extreme points disagree on dimension {sorted(dims)}")
    return out


def as_weights(w, length=None):
    """Convert to a simplex vector, clamping solver-level negatives and renormalizing."""
    w = np.array(w, dtype=np.float64).ravel()
    if w.size == 0:
        raise InvalidInputError("weights must be non-empty")
    if length is not None and w.size != length:
        raise InvalidInputError(f"expected {length} weights, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise InvalidInputError("weights must be finite")
    if w.min() < -NEG_TOL:
        raise InvalidInputError(f"negative weight {w.min():.3g}")
    np.maximum(w, 0.0, out=w)
    s = w.sum()
    if abs(s - 1.0) > SUM_TOL:
        raise InvalidInputError(f"weights sum to {s!r}, not 1")
    return w / s


@dataclass(frozen=True)
class KcdGrams:
    """Inner products between empirical mean embeddings of extreme points."""

    Mxx: np.ndarray
    Mxy: np.ndarray
    Myy: np.ndarray
    mixed_sizes: bool = False

    @property
    def shape(self):
        return self.Mxy.shape

    def transposed(self):
        """The same record with the roles of the two credal sets exchanged."""
        return KcdGrams(self.Myy, self.Mxy.T, self.Mxx, self.mixed_sizes)


def _self_grams(spec, S):
    m = len(S)
    M = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            M[i, j] = M[j, i] = gram_mean(spec, S[i], S[j])
    return M


def kme_grams(spec, Sx, Sy):
    """Gram matrices of the empirical embeddings; each entry is a full double mean."""
    Sx = as_credal_sample(Sx, "S_X")
    Sy = as_credal_sample(Sy, "S_Y")
    if Sx[0].shape[1] != Sy[0].shape[1]:
        raise InvalidInputError(
            f"credal samples disagree on dimension: {Sx[0].shape[1]} vs {Sy[0].shape[1]}"
        )
    Mxy = np.array([[gram_mean(spec, a, b) for b in Sy] for a in Sx])
    sizes = {d.shape[0] for d in Sx} | {d.shape[0] for d in Sy}
    return KcdGrams(_self_grams(spec, Sx), Mxy, _self_grams(spec, Sy), len(sizes) > 1)


def _check_weights(g, lam, eta):
    l, r = g.shape
    lam = np.asarray(lam, dtype=np.float64).ravel()
    eta = np.asarray(eta, dtype=np.float64).ravel()
    if lam.size != l or eta.size != r:
        raise InvalidInputError(
            f"weight lengths ({lam.size}, {eta.size}) do not match Gram shape ({l}, {r})"
        )
    return lam, eta


def kcd_value(g, lam, eta):
    lam, eta = _check_weights(g, lam, eta)
    return float(lam @ g.Mxx @ lam - 2.0 * (lam @ g.Mxy @ eta) + eta @ g.Myy @ eta)


def kcd_gradient(g, lam, eta):
    """Analytic gradient of :func:`kcd_value` with respect to ``(lam, eta)``."""
    lam, eta = _check_weights(g, lam, eta)
    d_lam = 2.0 * (g.Mxx @ lam) - 2.0 * (g.Mxy @ eta)
    d_eta = 2.0 * (g.Myy @ eta) - 2.0 * (g.Mxy.T @ lam)
    return d_lam, d_eta


@dataclass(frozen=True)
class CredalDiscrepancies:
    inclusion_xy: float
    inclusion_yx: float
    equality: float
    intersection: float


def _inclusion(g, cfg):
    from .simplex import minimize_eta

    return max(minimize_eta(g, cfg, row=i).objective for i in range(g.shape[0]))


def credal_discrepancies(spec, Sx, Sy, cfg=None, rng=None):
    """Plug-in estimates of inclusion, equality and intersection discrepancies.

    These are descriptive only; no calibration is attached to them.
    ``inclusion_xy`` is the worst extreme point of ``Sx`` measured against its
    best approximation inside the hull of ``Sy``.
    """
    from .simplex import OptimizerConfig, minimize_biconvex

    cfg = cfg or OptimizerConfig()
    g = kme_grams(spec, Sx, Sy)
    inc_xy = max(_inclusion(g, cfg), 0.0)
    inc_yx = max(_inclusion(g.transposed(), cfg), 0.0)
    inter = max(minimize_biconvex(g, cfg, rng=rng).objective, 0.0)
    return CredalDiscrepancies(inc_xy, inc_yx, max(inc_xy, inc_yx), inter)
