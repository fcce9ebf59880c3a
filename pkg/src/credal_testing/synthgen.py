"""Seeded generators for synthetic credal-testing scenarios.

Extreme points of the reference credal set are isotropic Gaussians
``N(mu_j, I)`` with means on the unit sphere; their heavy-tailed
counterparts are multivariate Student-t with the same means and identity
scale matrix.

Mixture data here are *population* draws: every row picks a component and
then a fresh observation from it. This is unrelated to the finite-sample,
without-replacement resampling in :mod:`credal_testing.splitting`.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .mmd import as_generator

KINDS = ("specification", "inclusion", "equality", "plausibility")
HYPOTHESES = ("null", "alternative")


def make_extreme_means(r, d, rng=None, radius=1.0):
    """``r`` independent uniform points on the sphere of ``radius`` in ``R^d``."""
    if r < 1 or d < 1:
        raise InvalidInputError(f"need r >= 1 and d >= 1, got r={r}, d={d}")
    rng = as_generator(rng)
    v = rng.standard_normal((r, d))
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    # a standard normal vector is zero with probability 0; redraw just in case
    while np.any(norms == 0):
        bad = norms[:, 0] == 0
        v[bad] = rng.standard_normal((bad.sum(), d))
        norms = np.linalg.norm(v, axis=1, keepdims=True)
    return radius * v / norms


def sample_gaussian_extreme(mean, n, rng=None):
    mean = np.asarray(mean, dtype=np.float64).ravel()
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    rng = as_generator(rng)
    return mean + rng.standard_normal((n, mean.size))


def sample_student_extreme(mean, df, n, rng=None):
    """Multivariate t: ``mean + g / sqrt(chi2_df / df)`` with ``g ~ N(0, I)``."""
    mean = np.asarray(mean, dtype=np.float64).ravel()
    if not df > 0:
        raise InvalidInputError(f"degrees of freedom must be positive, got {df}")
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    rng = as_generator(rng)
    g = rng.standard_normal((n, mean.size))
    scale = np.sqrt(rng.chisquare(df, size=n) / df)
    return mean + g / scale[:, None]


@dataclass(frozen=True)
class Component:
    """One extreme-point distribution: Gaussian (``df=None``) or Student-t."""

    mean: np.ndarray
    df: float = None

    def sample(self, n, rng):
        if self.df is None:
            return sample_gaussian_extreme(self.mean, n, rng)
        return sample_student_extreme(self.mean, self.df, n, rng)


def sample_mixture(components, weights, n, rng=None):
    """``n`` population draws from the mixture ``sum_j weights[j] * components[j]``."""
    rng = as_generator(rng)
    w = np.asarray(weights, dtype=np.float64)
    labels = rng.choice(len(components), size=n, p=w / w.sum())
    out = np.empty((n, components[0].mean.size))
    for j, comp in enumerate(components):
        pos = np.flatnonzero(labels == j)
        if pos.size:
            out[pos] = comp.sample(pos.size, rng)
    return out


@dataclass(frozen=True)
class ScenarioSpec:
    """One synthetic scenario.

    ``structure_seed`` fixes the extreme-point means and the true mixture
    weights; ``seed`` drives the observation noise. Leaving
    ``structure_seed`` unset ties both to ``seed``.
    """

    test_kind: str
    hypothesis: str
    n: int
    d: int = 10
    r: int = 3
    l: int = 3
    df: float = 3.0
    radius: float = 1.0
    seed: int = 0
    structure_seed: int = None
    dependent_extreme: bool = False

    def __post_init__(self):
        if self.test_kind not in KINDS:
            raise InvalidInputError(f"test_kind must be one of {KINDS}, got {self.test_kind!r}")
        if self.hypothesis not in HYPOTHESES:
            raise InvalidInputError(f"hypothesis must be one of {HYPOTHESES}, got {self.hypothesis!r}")
        if self.d < 1 or self.r < 1 or self.l < 1:
            raise InvalidInputError("d, r and l must be at least 1")
        if self.n < 4:
            raise InvalidInputError(f"n must be at least 4, got {self.n}")
        if not self.df >= 1:
            raise InvalidInputError(f"df must be at least 1, got {self.df}")
        if self.dependent_extreme and self.test_kind != "specification":
            raise InvalidInputError("dependent_extreme is only defined for specification scenarios")


@dataclass(frozen=True)
class Structure:
    """Population-level ingredients of a scenario."""

    means: np.ndarray
    gaussians: list
    students: list
    mixture_weights: np.ndarray  # one row per X extreme (specification: one row)


def scenario_structure(spec):
    base = spec.seed if spec.structure_seed is None else spec.structure_seed
    rng = np.random.default_rng(np.random.SeedSequence([base, 0]))
    means = make_extreme_means(spec.r, spec.d, rng, spec.radius)
    rows = 1 if spec.test_kind == "specification" else spec.l
    weights = rng.dirichlet(np.ones(spec.r), size=rows)
    return Structure(
        means,
        [Component(m) for m in means],
        [Component(m, spec.df) for m in means],
        weights,
    )


def build_scenario(spec):
    """Draw ``(Sx, Sy)`` for the scenario.

    ``Sx`` is a single ``(n, d)`` array for specification scenarios and a
    list of arrays otherwise; ``Sy`` is always a list.

    * specification: ``Sy ~ P``, ``Sx ~ w'P`` (null) or ``w'Q`` (alternative)
    * inclusion: ``Sx_i ~ w_i'P`` (null) or ``w_i'Q``, ``Sy ~ P``
    * equality: ``Sx ~ P`` (null) or ``Q``, ``Sy ~ P``
    * plausibility: ``Sx ~ P``; ``Sy ~ (P_1, ..., P_{r-1}, Q_r)`` (null) or ``Q``

    with ``P`` the Gaussian extremes, ``Q`` the Student-t extremes and ``w``
    drawn uniformly from the simplex.
    """
    st = scenario_structure(spec)
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 1]))
    P, Q = st.gaussians, st.students
    null = spec.hypothesis == "null"
    n = spec.n

    def draw(components):
        return [c.sample(n, rng) for c in components]

    if spec.test_kind == "specification":
        Sy = draw(P)
        Sx = sample_mixture(P if null else Q, st.mixture_weights[0], n, rng)
        if spec.dependent_extreme:
            Sy.append(sample_mixture(P, np.full(spec.r, 1.0 / spec.r), n, rng))
        return Sx, Sy
    if spec.test_kind == "inclusion":
        Sx = [sample_mixture(P if null else Q, w, n, rng) for w in st.mixture_weights]
        return Sx, draw(P)
    if spec.test_kind == "equality":
        Sx = draw(P if null else Q)
        return Sx, draw(P)
    Sx = draw(P)
    Sy = draw(P[:-1] + Q[-1:] if null else Q)
    return Sx, Sy
