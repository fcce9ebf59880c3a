"""Pure numpy implementations of the hot kernels.

Signatures and semantics mirror the compiled ``_native`` module exactly; the
two are interchangeable and tested against each other.
"""
import numpy as np
from scipy.spatial.distance import cdist

NAME = "python"


def gaussian_gram(A, B, sigma):
    d2 = cdist(A, B, "sqeuclidean")
    return np.exp(d2 * (-0.5 / (sigma * sigma)))


def gram_mean(A, B, sigma):
    return float(gaussian_gram(A, B, sigma).mean())


def h_matrix(X, Y, sigma):
    """U-statistic core h(x_i, y_i, x_j, y_j) for all pairs, zero diagonal."""
    kxy = gaussian_gram(X, Y, sigma)
    h = gaussian_gram(X, X, sigma)
    h += gaussian_gram(Y, Y, sigma)
    h -= kxy
    h -= kxy.T
    np.fill_diagonal(h, 0.0)
    return h


def draw_components(u, weights, capacity):
    """Sequential categorical draws with exhaustion fallback.

    ``u`` holds one uniform per draw. A draw landing on a component whose
    ``capacity`` is used up is re-resolved with the same uniform over the
    components that still have room, weights renormalized. Returns the
    component index per draw and the number of such re-resolutions.
    """
    u = np.asarray(u, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    cap = np.asarray(capacity, dtype=np.int64)
    cum = np.cumsum(w)
    cum /= cum[-1]
    comps = np.searchsorted(cum, u, side="right")
    np.minimum(comps, len(w) - 1, out=comps)
    if np.all(np.bincount(comps, minlength=len(w)) <= cap):
        return comps.astype(np.int64), 0

    out = np.empty(len(u), dtype=np.int64)
    used = np.zeros(len(w), dtype=np.int64)
    events = 0
    for t, ut in enumerate(u):
        j = int(comps[t])
        if used[j] >= cap[j]:
            events += 1
            avail = np.where(used < cap, w, 0.0)
            total = avail.sum()
            if total <= 0.0:
                raise RuntimeError("all weighted components exhausted")
            c = np.cumsum(avail) / total
            j = min(int(np.searchsorted(c, ut, side="right")), len(w) - 1)
            while avail[j] <= 0.0:
                j -= 1
        out[t] = j
        used[j] += 1
    return out, events
