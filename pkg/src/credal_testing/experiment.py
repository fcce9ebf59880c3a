"""Monte Carlo rejection-rate sweeps over sample sizes and split exponents."""
import contextlib
import csv
import logging
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .credal_tests import TESTS, CredalTestConfig, derive_seed
from .errors import InvalidInputError
from .simplex import OptimizerConfig
from .splitting import SPLIT, SplitConfig
from .synthgen import ScenarioSpec, build_scenario

log = logging.getLogger(__name__)

CSV_HEADER = ["test", "hypothesis", "n", "beta", "mode", "reps", "rejections", "rate", "seconds"]
MAX_FAILURE_FRACTION = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    test_kind: str = "specification"
    hypothesis: str = "null"
    n_grid: tuple = (128, 256, 512, 1024, 2048)
    beta_grid: tuple = (0.0, 0.25, 1 / 3)
    repetitions: int = 500
    alpha: float = 0.05
    permutations: int = 500
    mode: str = SPLIT
    seed: int = 0
    d: int = 10
    r: int = 3
    l: int = 3
    df: float = 3.0
    dependent_extreme: bool = False
    bandwidth: float = None
    threads: int = 1
    record_timing: bool = True
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.repetitions < 1:
            raise InvalidInputError("repetitions must be at least 1")
        if not self.n_grid or not self.beta_grid:
            raise InvalidInputError("n_grid and beta_grid must be non-empty")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise InvalidInputError(f"n_grid must be strictly increasing, got {self.n_grid}")
        if self.threads < 1:
            raise InvalidInputError("threads must be at least 1")
        for beta in self.beta_grid:
            SplitConfig(beta=beta, mode=self.mode)


@dataclass(frozen=True)
class RejectionRecord:
    test_kind: str
    hypothesis: str
    n: int
    beta: float
    mode: str
    repetitions: int
    rejections: int
    rate: float
    wall_time_seconds: float
    failures: int = 0

    @property
    def valid(self):
        attempted = self.repetitions + self.failures
        return self.failures <= MAX_FAILURE_FRACTION * attempted

    def csv_row(self):
        """Fixed-format CSV fields; an invalid cell reports its rate as ``nan``."""
        rate = f"{self.rate:.6f}" if self.valid else "nan"
        return [
            self.test_kind, self.hypothesis, str(self.n), f"{self.beta:.6g}", self.mode,
            str(self.repetitions), str(self.rejections), rate, f"{self.wall_time_seconds:.3f}",
        ]


def _cell_key(cfg, n, beta):
    key = f"{cfg.test_kind}|{cfg.hypothesis}|{n}|{beta:.12g}|{cfg.mode}"
    return zlib.crc32(key.encode())


def run_repetition(cfg, n, beta, rep):
    """One scenario draw plus one test; returns True when the test rejects."""
    cell = _cell_key(cfg, n, beta)
    scenario = ScenarioSpec(
        cfg.test_kind, cfg.hypothesis, n, d=cfg.d, r=cfg.r, l=cfg.l, df=cfg.df,
        seed=derive_seed(cfg.seed, cell, rep, 0),
        structure_seed=derive_seed(cfg.seed, 0),
        dependent_extreme=cfg.dependent_extreme,
    )
    Sx, Sy = build_scenario(scenario)
    test_cfg = CredalTestConfig(
        alpha=cfg.alpha,
        permutations=cfg.permutations,
        split=SplitConfig(beta=beta, mode=cfg.mode),
        optimizer=cfg.optimizer,
        bandwidth=cfg.bandwidth,
        seed=derive_seed(cfg.seed, cell, rep, 1),
    )
    return TESTS[cfg.test_kind](Sx, Sy, test_cfg).rejected


def _safe_repetition(args):
    cfg, n, beta, rep = args
    try:
        return run_repetition(cfg, n, beta, rep)
    except (ArithmeticError, ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        log.warning("repetition %d of cell n=%d beta=%g failed: %s", rep, n, beta, exc)
        return None


def run_cell(cfg, n, beta, pool=None):
    start = time.perf_counter()
    jobs = [(cfg, n, beta, rep) for rep in range(cfg.repetitions)]
    outcomes = list(pool.map(_safe_repetition, jobs) if pool else map(_safe_repetition, jobs))
    done = [o for o in outcomes if o is not None]
    rejections = int(sum(done))
    seconds = time.perf_counter() - start if cfg.record_timing else 0.0
    record = RejectionRecord(
        cfg.test_kind, cfg.hypothesis, n, beta, cfg.mode, len(done), rejections,
        rejections / len(done) if done else float("nan"), seconds,
        failures=len(outcomes) - len(done),
    )
    log.info(
        "%s/%s n=%d beta=%.4g: %d/%d rejected (rate %.4f, %d failed) in %.1fs",
        cfg.test_kind, cfg.hypothesis, n, beta, rejections, len(done),
        record.rate, record.failures, time.perf_counter() - start,
    )
    return record


def run_experiment(cfg, out=None, cells=None):
    """Run every ``(n, beta)`` cell (or only ``cells``), writing CSV rows as they finish.

    Each cell derives its seeds from the master seed and its own coordinates,
    so any subset of cells reproduces the values of a full sweep.
    """
    if cells is None:
        cells = [(n, beta) for n in cfg.n_grid for beta in cfg.beta_grid]
    records = []
    fh = open(out, "w", newline="") if out else None
    try:
        writer = csv.writer(fh, lineterminator="\n") if fh else None
        if writer:
            writer.writerow(CSV_HEADER)
        pool_ctx = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else contextlib.nullcontext()
        with pool_ctx as pool:
            for n, beta in cells:
                record = run_cell(cfg, n, beta, pool)
                records.append(record)
                if writer:
                    writer.writerow(record.csv_row())
                    fh.flush()
    finally:
        if fh:
            fh.close()
    return records

