"""Unbiased MMD^2 and the bootstrap-calibrated kernel two-sample test."""
import enum
import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InsufficientSamplesError, InvalidInputError
from .kernels import as_dataset


class Decision(str, enum.Enum):
    REJECT = "Reject"
    FAIL_TO_REJECT = "FailToReject"


@dataclass(frozen=True)
class TestReport:
    """Outcome of one hypothesis test.

    ``statistic`` is the raw unbiased MMD^2 of the final two-sample test; the
    scaled ``n_t * MMD^2`` is kept in ``metadata["scaled_statistic"]``.
    Composite tests (inclusion, equality) put their constituents in
    ``sub_reports`` and report a Bonferroni-adjusted p-value.
    """

    __test__ = False  # keep pytest from collecting this class

    decision: Decision
    p_value: float
    statistic: float
    permutations_used: int
    alpha: float
    metadata: dict = field(default_factory=dict)
    sub_reports: tuple = ()

    @property
    def rejected(self):
        return self.decision is Decision.REJECT

    def to_dict(self):
        return {
            "decision": self.decision.value,
            "p_value": self.p_value,
            "statistic": self.statistic,
            "permutations_used": self.permutations_used,
            "alpha": self.alpha,
            "metadata": self.metadata,
            "sub_reports": [r.to_dict() for r in self.sub_reports],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)


def decide(p_value, alpha):
    return Decision.REJECT if p_value < alpha else Decision.FAIL_TO_REJECT


def as_generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _check_pair(X, Y):
    X = as_dataset(X, "S_X")
    Y = as_dataset(Y, "S_Y")
    if X.shape[1] != Y.shape[1]:
        raise InvalidInputError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    if X.shape[0] != Y.shape[0]:
        raise InvalidInputError(
            f"sample sizes differ ({X.shape[0]} vs {Y.shape[0]}); truncate to a common size first"
        )
    if X.shape[0] < 2:
        raise InsufficientSamplesError("MMD^2 U-statistic needs at least two pairs")
    return X, Y


def mmd2_unbiased(spec, X, Y):
    """Unbiased U-statistic estimate of MMD^2 for equal-size samples."""
    X, Y = _check_pair(X, Y)
    n = X.shape[0]
    h = _kernels.h_matrix(X, Y, spec.bandwidth)
    return float(h.sum() / (n * (n - 1)))


def permutation_p_value(observed, null_stats):
    """``(1 + #{null >= observed}) / (B + 1)``; ties count against rejection."""
    null_stats = np.asarray(null_stats)
    return (1.0 + np.count_nonzero(null_stats >= observed)) / (null_stats.size + 1.0)


def wild_bootstrap_statistics(h, signs):
    """Sign-flipped statistics ``e^T H e / (n (n - 1))`` for each row ``e`` of ``signs``."""
    n = h.shape[0]
    signs = np.asarray(signs, dtype=np.float64)
    return np.einsum("bi,bi->b", signs @ h, signs) / (n * (n - 1))


def _permutation_statistics(spec, X, Y, perms):
    n = X.shape[0]
    Z = np.concatenate([X, Y])
    K = _kernels.gaussian_gram(Z, Z, spec.bandwidth)
    out = np.empty(len(perms))
    for b, perm in enumerate(perms):
        ix, iy = perm[:n], perm[n:]
        kxy = K[np.ix_(ix, iy)]
        h = K[np.ix_(ix, ix)] + K[np.ix_(iy, iy)] - kxy - kxy.T
        np.fill_diagonal(h, 0.0)
        out[b] = h.sum() / (n * (n - 1))
    return out


def kernel_2s_test(spec, X, Y, B=500, alpha=0.05, rng=None, method="wild"):
    """Two-sample test of ``P_X = P_Y`` calibrated by ``B`` resampled statistics.

    ``method="wild"`` draws i.i.d. Rademacher signs per pair index and reuses
    one precomputed core matrix; ``method="permutation"`` reshuffles the
    pooled sample. The observed statistic is evaluated along the same
    numerical path as the resampled ones, so exact ties stay ties.
    """
    if int(B) != B or B < 1:
        raise InvalidInputError(f"number of resamples must be a positive integer, got {B}")
    if not 0 < alpha < 1:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    B = int(B)
    X, Y = _check_pair(X, Y)
    rng = as_generator(rng)
    n = X.shape[0]

    if method == "wild":
        h = _kernels.h_matrix(X, Y, spec.bandwidth)
        signs = np.empty((B + 1, n), dtype=np.float64)
        signs[0] = 1.0
        signs[1:] = 2.0 * rng.integers(0, 2, size=(B, n)) - 1.0
        stats = wild_bootstrap_statistics(h, signs)
        statistic = float(h.sum() / (n * (n - 1)))
    elif method == "permutation":
        perms = [np.arange(2 * n)] + [rng.permutation(2 * n) for _ in range(B)]
        stats = _permutation_statistics(spec, X, Y, perms)
        statistic = float(stats[0])
    else:
        raise InvalidInputError(f"unknown resampling method {method!r}")

    p = float(permutation_p_value(stats[0], stats[1:]))
    return TestReport(
        decision=decide(p, alpha),
        p_value=p,
        statistic=statistic,
        permutations_used=B,
        alpha=float(alpha),
        metadata={
            "test": "two_sample",
            "method": method,
            "n": n,
            "bandwidth": spec.bandwidth,
            "scaled_statistic": n * statistic,
        },
    )
