"""Kernel-based two-sample tests for credal sets.

A credal set is the convex hull of finitely many distributions (extreme
points), each observed through an i.i.d. sample. The package tests whether a
distribution lies in a credal set (specification), whether one credal set is
contained in (inclusion), equal to (equality) or intersects (plausibility)
another.
"""
from ._kernels import BACKEND
from .credal_tests import (
    CredalTestConfig,
    equality_test,
    inclusion_test,
    plausibility_test,
    specification_test,
)
from .errors import (
    ConvergenceError,
    CredalTestingError,
    DegenerateDataError,
    InsufficientSamplesError,
    InvalidInputError,
    InvalidSplitError,
)
from .kcd import KcdGrams, credal_discrepancies, kcd_gradient, kcd_value, kme_grams
from .kernels import KernelSpec, gram_matrix, kernel_eval, median_heuristic_bandwidth
from .mmd import Decision, TestReport, kernel_2s_test, mmd2_unbiased
from .simplex import OptimizerConfig, minimize_biconvex, minimize_eta, project_to_simplex
from .splitting import SplitConfig, adaptive_split_ratio, redraw_samples, split_data
from .synthgen import ScenarioSpec, build_scenario

__version__ = "0.1.0"
