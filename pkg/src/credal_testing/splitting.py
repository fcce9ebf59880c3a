"""Estimation/testing sample splitting, adaptive split ratios and mixture redraws."""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import ConvergenceError, InvalidInputError, InvalidSplitError
from .kcd import as_credal_sample, as_weights
from .mmd import as_generator

SPLIT = "split"
DOUBLE_DIP = "double_dip"


@dataclass(frozen=True)
class SplitConfig:
    """``beta`` sets ``n_t / n_e = n_e ** -beta``; ``beta = 0`` is the 50:50 split.

    ``mode="double_dip"`` reuses all data for estimation and tests on a
    random subset of size ``floor(n ** (1 - beta))``. It exists for ablations
    only and is not a valid default.
    """

    beta: float = 0.25
    mode: str = SPLIT

    def __post_init__(self):
        if not 0 <= self.beta < 1:
            raise InvalidInputError(f"beta must lie in [0, 1), got {self.beta}")
        if self.mode not in (SPLIT, DOUBLE_DIP):
            raise InvalidInputError(f"unknown split mode {self.mode!r}")


def adaptive_split_ratio(n, beta, tol=1e-8, max_iter=100):
    """Fraction ``n_e / n`` with ``n_t / n_e = n_e ** -beta`` and ``n_e + n_t = n``.

    Solves ``n_e + n_e ** (1 - beta) = n`` by Newton's method started at
    ``n // 2``, so the testing share vanishes relative to the estimation
    share as ``n`` grows (for ``beta > 0``).
    """
    if n < 4:
        raise InvalidInputError(f"need n >= 4, got {n}")
    if not 0 <= beta < 1:
        raise InvalidInputError(f"beta must lie in [0, 1), got {beta}")
    ne = float(n // 2)
    for _ in range(max_iter):
        ne_next = ne - (ne + ne ** (1 - beta) - n) / (1 + (1 - beta) * ne**-beta)
        if abs(ne_next - ne) < tol:
            return ne_next / n
        ne = ne_next
    raise ConvergenceError(f"split ratio for n={n}, beta={beta} did not converge in {max_iter} steps")


def estimation_size(n, rho):
    """``floor(n * rho)`` with a guard against representation error in ``rho``."""
    return int(math.floor(n * rho + 1e-9))


class SplitData(NamedTuple):
    x_est: list
    y_est: list
    x_test: list
    y_test: list
    # row indices into the original datasets, one array per extreme point
    x_est_idx: list
    y_est_idx: list
    x_test_idx: list
    y_test_idx: list


def _split_one(data, rho, rng, mode, beta):
    n = data.shape[0]
    perm = rng.permutation(n)
    if mode == DOUBLE_DIP:
        nt = int(math.floor(n ** (1.0 - beta) + 1e-9))
        if nt < 1:
            raise InvalidSplitError(f"double-dip test part is empty for n={n}")
        est, test = np.arange(n), np.sort(perm[:nt])
    else:
        ne = estimation_size(n, rho)
        if ne < 1 or ne >= n:
            raise InvalidSplitError(
                f"split ratio {rho} leaves an empty part for a dataset of {n} rows"
            )
        est, test = np.sort(perm[:ne]), np.sort(perm[ne:])
    return data[est], data[test], est, test


def split_data(Sx, Sy, rho, rng=None, mode=SPLIT, beta=0.0):
    """Randomly split every extreme-point sample into estimation and testing parts.

    In split mode each dataset of ``n_j`` rows contributes ``floor(n_j * rho)``
    rows to estimation and the rest to testing. ``beta`` is only consulted in
    double-dip mode.
    """
    Sx = as_credal_sample(Sx, "S_X")
    Sy = as_credal_sample(Sy, "S_Y")
    if mode == SPLIT and not 0 < rho < 1:
        raise InvalidSplitError(f"split ratio must lie in (0, 1), got {rho}")
    rng = as_generator(rng)
    xs = [_split_one(d, rho, rng, mode, beta) for d in Sx]
    ys = [_split_one(d, rho, rng, mode, beta) for d in Sy]

    def col(parts, k):
        return [p[k] for p in parts]

    return SplitData(col(xs, 0), col(ys, 0), col(xs, 1), col(ys, 1),
                     col(xs, 2), col(ys, 2), col(xs, 3), col(ys, 3))


class MixtureDraw(NamedTuple):
    rows: np.ndarray
    components: np.ndarray
    row_index: np.ndarray
    exhausted: int


def redraw_mixture(S, weights, rng=None, target=None):
    """Draw ``target`` rows without replacement from the ``weights``-mixture of ``S``.

    Each draw picks a component from the categorical law of ``weights`` and
    then a uniformly chosen unused row of that component. If a drawn
    component has no rows left, the draw is repeated among the components
    that still have rows, weights renormalized; ``exhausted`` counts those
    events. With the default target (the smallest component size) this
    cannot happen.
    """
    S = as_credal_sample(S)
    w = as_weights(weights, len(S))
    rng = as_generator(rng)
    sizes = np.array([d.shape[0] for d in S], dtype=np.int64)
    if target is None:
        target = int(sizes.min())
    if target > sizes[w > 0].sum():
        raise InvalidInputError(f"cannot draw {target} rows from weighted components of sizes {sizes}")
    u = rng.random(target)
    comps, events = _kernels.draw_components(u, w, sizes)
    perms = [rng.permutation(n) for n in sizes]
    row_index = np.empty(target, dtype=np.int64)
    rows = np.empty((target, S[0].shape[1]))
    for j, d in enumerate(S):
        pos = np.flatnonzero(comps == j)
        row_index[pos] = perms[j][: pos.size]
        rows[pos] = d[row_index[pos]]
    return MixtureDraw(rows, comps, row_index, int(events))


def redraw_samples(Sx, Sy, lam, eta, rng=None):
    """Resample each credal sample into one i.i.d.-like draw from its mixture.

    Output sizes are the smallest extreme-point sample size on each side.
    """
    rng = as_generator(rng)
    x = redraw_mixture(Sx, lam, rng)
    y = redraw_mixture(Sy, eta, rng)
    return x.rows, y.rows
