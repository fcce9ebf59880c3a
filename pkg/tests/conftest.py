import numpy as np
import pytest

from credal_testing._kernels import available_backends


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


def brute_kernel(x, y, sigma):
    """Scalar Gaussian kernel written out independently of the package."""
    s = 0.0
    for a, b in zip(np.atleast_1d(x), np.atleast_1d(y)):
        s += (a - b) ** 2
    return np.exp(-s / (2.0 * sigma**2))


def brute_mmd2(X, Y, sigma):
    """Direct O(n^2) double loop over the U-statistic core."""
    n = len(X)
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            total += (brute_kernel(X[i], X[j], sigma) + brute_kernel(Y[i], Y[j], sigma)
                      - brute_kernel(X[i], Y[j], sigma) - brute_kernel(X[j], Y[i], sigma))
    return total / (n * (n - 1))


def brute_mixture_mmd2(Sx, Sy, lam, eta, sigma):
    """|sum_i lam_i mu_i - sum_j eta_j nu_j|^2 expanded as a weighted double sum over points."""
    pts = [(lam[i] / len(S), x) for i, S in enumerate(Sx) for x in S]
    pts += [(-eta[j] / len(S), y) for j, S in enumerate(Sy) for y in S]
    total = 0.0
    for wa, a in pts:
        for wb, b in pts:
            total += wa * wb * brute_kernel(a, b, sigma)
    return total
