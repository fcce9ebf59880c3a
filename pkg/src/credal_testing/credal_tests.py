"""Specification, inclusion, equality and plausibility tests for credal sets.

Every test follows the same two-stage recipe: split each extreme-point
sample, align mixture weights on the estimation parts by minimizing the
kernel credal discrepancy, redraw one sample per side from the aligned
mixtures of the testing parts, and finish with a kernel two-sample test.
Inclusion and equality combine specification tests with Bonferroni.
"""
import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .kcd import as_credal_sample, kme_grams
from .kernels import KernelSpec, as_dataset, median_heuristic_bandwidth
from .mmd import Decision, TestReport, kernel_2s_test
from .simplex import OptimizerConfig, minimize_biconvex, minimize_eta
from .splitting import DOUBLE_DIP, SplitConfig, adaptive_split_ratio, redraw_mixture, split_data
from .errors import InvalidInputError


@dataclass(frozen=True)
class CredalTestConfig:
    """Settings shared by all credal tests.

    ``bandwidth=None`` selects the median heuristic on the pooled testing
    parts, subsampled to at most ``bandwidth_points`` rows. ``seed=None``
    draws fresh entropy; the seed actually used is always reported.
    """

    alpha: float = 0.05
    permutations: int = 500
    split: SplitConfig = field(default_factory=SplitConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    bandwidth: float = None
    bandwidth_points: int = 1000
    method: str = "wild"
    seed: int = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise InvalidInputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.permutations < 1:
            raise InvalidInputError("permutations must be at least 1")
        if self.bandwidth_points < 2:
            raise InvalidInputError("bandwidth_points must be at least 2")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def derive_seed(seed, *keys):
    """Deterministic 63-bit child seed of ``seed`` for the path ``keys``."""
    state = np.random.SeedSequence([seed, *keys]).generate_state(2, np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


def _resolve_seed(seed):
    if seed is None:
        return int(np.random.SeedSequence().generate_state(1, np.uint32)[0])
    return int(seed)


def _streams(seed):
    names = ("split", "bandwidth", "align", "redraw", "bootstrap")
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {k: np.random.default_rng(c) for k, c in zip(names, children)}


def _bandwidth(cfg, test_parts, rng):
    if cfg.bandwidth is not None:
        return float(cfg.bandwidth)
    pooled = np.concatenate(test_parts, axis=0)
    if pooled.shape[0] > cfg.bandwidth_points:
        pooled = pooled[rng.choice(pooled.shape[0], cfg.bandwidth_points, replace=False)]
    return median_heuristic_bandwidth(pooled)


def _align_single(g, cfg, rng):
    res = minimize_eta(g, cfg.optimizer)
    return np.ones(1), res.weights, res


def _align_both(g, cfg, rng):
    res = minimize_biconvex(g, cfg.optimizer, rng=rng)
    lam, eta = res.weights
    return lam, eta, res


def _two_stage(kind, Sx, Sy, cfg, align):
    seed = _resolve_seed(cfg.seed)
    rngs = _streams(seed)
    split = cfg.split
    n = min(d.shape[0] for d in Sx + Sy)
    rho = adaptive_split_ratio(n, split.beta) if split.mode != DOUBLE_DIP else 1.0
    parts = split_data(Sx, Sy, rho, rngs["split"], mode=split.mode, beta=split.beta)

    sigma = _bandwidth(cfg, parts.x_test + parts.y_test, rngs["bandwidth"])
    spec = KernelSpec(sigma)
    grams = kme_grams(spec, parts.x_est, parts.y_est)
    lam, eta, opt = align(grams, cfg, rngs["align"])

    x = redraw_mixture(parts.x_test, lam, rngs["redraw"])
    y = redraw_mixture(parts.y_test, eta, rngs["redraw"])
    m = min(len(x.rows), len(y.rows))
    report = kernel_2s_test(
        spec, x.rows[:m], y.rows[:m], cfg.permutations, cfg.alpha, rngs["bootstrap"], cfg.method
    )

    meta = {
        "test": kind,
        "seed": seed,
        "backend": _kernels.BACKEND,
        "bandwidth": sigma,
        "bandwidth_source": "fixed" if cfg.bandwidth is not None else "median_heuristic",
        "beta": split.beta,
        "mode": split.mode,
        "rho": rho,
        "n": n,
        "n_e": [len(p) for p in parts.x_est + parts.y_est],
        "n_t": m,
        "lambda": [float(v) for v in lam],
        "eta": [float(v) for v in eta],
        "alignment_objective": opt.objective,
        "optimizer_converged": opt.converged,
        "optimizer_iters": opt.iters,
        "optimizer": cfg.optimizer.to_dict(),
        "redraw_exhausted": x.exhausted + y.exhausted,
        "mixed_sizes": grams.mixed_sizes,
        "method": cfg.method,
        "scaled_statistic": report.metadata["scaled_statistic"],
    }
    if split.mode == DOUBLE_DIP:
        meta["warning"] = "double-dip mode reuses estimation data; Type I control is not guaranteed"
    if opt.trace:
        meta["objective_trace"] = {"start": opt.trace[0], "end": opt.trace[-1], "length": len(opt.trace)}
    return dataclasses.replace(report, metadata=meta)


def specification_test(Sx, Sy, cfg=None):
    """Test whether the distribution of ``Sx`` is a mixture of the ``Sy`` extremes."""
    cfg = cfg or CredalTestConfig()
    Sx = [as_dataset(Sx, "S_X")]
    Sy = as_credal_sample(Sy, "S_Y")
    _check_dims(Sx, Sy)
    return _two_stage("specification", Sx, Sy, cfg, _align_single)


def plausibility_test(Sx, Sy, cfg=None):
    """Test whether the two credal sets intersect."""
    cfg = cfg or CredalTestConfig()
    Sx = as_credal_sample(Sx, "S_X")
    Sy = as_credal_sample(Sy, "S_Y")
    _check_dims(Sx, Sy)
    return _two_stage("plausibility", Sx, Sy, cfg, _align_both)


def _check_dims(Sx, Sy):
    if Sx[0].shape[1] != Sy[0].shape[1]:
        raise InvalidInputError(
            f"dimension mismatch between sides: {Sx[0].shape[1]} vs {Sy[0].shape[1]}"
        )


def _bonferroni(kind, subs, cfg, seed, extra=None):
    k = len(subs)
    p = min(1.0, k * min(r.p_value for r in subs))
    rejected = any(r.rejected for r in subs)
    worst = min(subs, key=lambda r: r.p_value)
    meta = {"test": kind, "seed": seed, "subtests": k, "combination": "bonferroni"}
    meta.update(extra or {})
    return TestReport(
        decision=Decision.REJECT if rejected else Decision.FAIL_TO_REJECT,
        p_value=p,
        statistic=worst.statistic,
        permutations_used=cfg.permutations,
        alpha=cfg.alpha,
        metadata=meta,
        sub_reports=tuple(subs),
    )


def inclusion_test(Sx, Sy, cfg=None):
    """Test whether the hull of the ``Sx`` extremes lies inside the hull of ``Sy``.

    Runs one specification test per extreme point of ``Sx`` at level
    ``alpha / len(Sx)``, each with its own derived seed and split.
    """
    cfg = cfg or CredalTestConfig()
    Sx = as_credal_sample(Sx, "S_X")
    Sy = as_credal_sample(Sy, "S_Y")
    _check_dims(Sx, Sy)
    seed = _resolve_seed(cfg.seed)
    level = cfg.alpha / len(Sx)
    subs = [
        specification_test(x, Sy, cfg.replace(alpha=level, seed=derive_seed(seed, i)))
        for i, x in enumerate(Sx)
    ]
    return _bonferroni("inclusion", subs, cfg, seed)


def equality_test(Sx, Sy, cfg=None):
    """Test whether the two credal sets coincide (inclusion both ways at ``alpha / 2``)."""
    cfg = cfg or CredalTestConfig()
    Sx = as_credal_sample(Sx, "S_X")
    Sy = as_credal_sample(Sy, "S_Y")
    _check_dims(Sx, Sy)
    seed = _resolve_seed(cfg.seed)
    half = cfg.alpha / 2
    subs = [
        inclusion_test(Sx, Sy, cfg.replace(alpha=half, seed=derive_seed(seed, 0))),
        inclusion_test(Sy, Sx, cfg.replace(alpha=half, seed=derive_seed(seed, 1))),
    ]
    return _bonferroni("equality", subs, cfg, seed)


TESTS = {
    "specification": specification_test,
    "inclusion": inclusion_test,
    "equality": equality_test,
    "plausibility": plausibility_test,
}
