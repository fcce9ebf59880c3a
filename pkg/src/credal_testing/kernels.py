"""Gaussian kernel evaluation, Gram matrices and the median-heuristic bandwidth.

Datasets are plain 2-D float arrays (rows are observations). A 1-D array is
read as ``n`` observations of a scalar, i.e. shape ``(n, 1)``.
"""
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from . import _kernels
from .errors import DegenerateDataError, InsufficientSamplesError, InvalidInputError


def as_dataset(values, name="dataset"):
    """Validate and convert ``values`` to a C-contiguous ``(n, d)`` float array."""
    try:
        arr = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name}: not a numeric matrix ({exc})") from None
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D array, got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name}: empty dataset with shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or infinite entries")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class KernelSpec:
    """Gaussian kernel ``exp(-|x - y|^2 / (2 bandwidth^2))``."""

    bandwidth: float
    family: str = "gaussian"

    def __post_init__(self):
        if self.family != "gaussian":
            raise InvalidInputError(f"unsupported kernel family {self.family!r}")
        bw = float(self.bandwidth)
        if not np.isfinite(bw) or bw <= 0:
            raise InvalidInputError(f"bandwidth must be positive and finite, got {bw}")
        object.__setattr__(self, "bandwidth", bw)


def kernel_eval(spec, x, y):
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise InvalidInputError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    diff = x - y
    return float(np.exp(-np.dot(diff, diff) / (2.0 * spec.bandwidth**2)))


def _check_same_dim(A, B):
    if A.shape[1] != B.shape[1]:
        raise InvalidInputError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")


def gram_matrix(spec, A, B):
    """Kernel matrix with entry ``(i, j) = k(A[i], B[j])``."""
    A = as_dataset(A, "A")
    B = as_dataset(B, "B")
    _check_same_dim(A, B)
    return _kernels.gaussian_gram(A, B, spec.bandwidth)


def gram_mean(spec, A, B):
    """Grand mean of ``gram_matrix(spec, A, B)`` without materializing it."""
    A = as_dataset(A, "A")
    B = as_dataset(B, "B")
    _check_same_dim(A, B)
    return _kernels.gram_mean(A, B, spec.bandwidth)


def median_heuristic_bandwidth(datasets):
    """Median of all pairwise Euclidean distances over the pooled rows.

    An even number of pairs gives the mean of the two middle distances.
    """
    if isinstance(datasets, np.ndarray):
        datasets = [datasets]
    arrays = [as_dataset(d) for d in datasets]
    dims = {a.shape[1] for a in arrays}
    if len(dims) != 1:
        raise InvalidInputError(f"datasets disagree on dimension: {sorted(dims)}")
    pooled = np.concatenate(arrays, axis=0)
    if pooled.shape[0] < 2:
        raise InsufficientSamplesError("median heuristic needs at least two points")
    sigma = float(np.median(pdist(pooled)))
    if not sigma > 0:
        raise DegenerateDataError("median pairwise distance is zero; bandwidth undefined")
    return sigma
