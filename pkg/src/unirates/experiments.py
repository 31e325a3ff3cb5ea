"""Learning curves, rate-regime fits and the random test corpus.

Every trial draws its sample from ``Generator(Philox(SeedSequence([seed, n, trial])))``
so a (seed, n, trial) triple pins the data regardless of worker count or
execution order.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import (
    STAR,
    ConceptClass,
    FiniteDistribution,
    constant_class,
    distribution_error,
    format_mcc,
    full_class,
    singleton_class,
    threshold_class,
)
from .dimensions import natarajan_dim
from .errors import InputError, ProtocolError
from .partial import build_biclique_class, cycle4_instance, partial_pac_learn
from .universal import erm_table, learn_exponential, learn_linear, oig_table, soa_table

# Regime decision thresholds; printed into every fit report.
FIT_CONFIG = {
    "exp_r2_min": 0.9,
    "exp_slope_max": -0.1,
    "power_r2_min": 0.9,
    "power_exponent_lo": -1.5,
    "power_exponent_hi": -0.5,
    "zero_impute_factor": 0.5,
}


def trial_rng(seed: int, n: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, n, trial])))


@dataclass(frozen=True, order=True)
class CurveRecord:
    n: int
    trial: int
    error: float


LEARNERS = ("exp", "linear", "erm", "soa", "oig", "pac")


def train_table(learner: str, cls: ConceptClass, sample, epsilon: float = 0.25, delta: float = 0.1) -> list[int]:
    if learner == "exp":
        return learn_exponential(sample, cls).table
    if learner == "linear":
        return learn_linear(sample, cls).table
    if learner == "erm":
        return erm_table(cls, sample)
    if learner == "soa":
        return soa_table(cls, sample)
    if learner == "oig":
        return oig_table(cls, sample)
    if learner == "pac":
        return partial_pac_learn(cls, sample, epsilon, delta).table
    raise InputError(f"unknown learner {learner!r}; choose from {', '.join(LEARNERS)}")


def _one_trial(args) -> CurveRecord:
    learner, cls, dist, n, trial, seed, opts = args
    sample = dist.sample(trial_rng(seed, n, trial), n)
    table = train_table(learner, cls, sample, **opts)
    return CurveRecord(n, trial, distribution_error(table, dist))


def run_curve(learner: str, cls: ConceptClass, dist: FiniteDistribution, ns: Sequence[int], trials: int,
              seed: int = 0, threads: int = 1, **opts) -> list[CurveRecord]:
    """Exact distribution error of the learner for every (n, trial), sorted."""
    if learner not in LEARNERS:
        raise InputError(f"unknown learner {learner!r}; choose from {', '.join(LEARNERS)}")
    if trials < 1 or not ns or any(n < 1 for n in ns):
        raise InputError("need trials >= 1 and positive sample sizes")
    dist.validate(cls)
    if not dist.is_realizable(cls):
        raise ProtocolError("distribution is not realizable by the class")
    jobs = [(learner, cls, dist, n, t, seed, opts) for n in ns for t in range(trials)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_one_trial, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        records = [_one_trial(j) for j in jobs]
    return sorted(records)


def format_curve_csv(records: Iterable[CurveRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "trial", "error"])
    for r in sorted(records):
        w.writerow([r.n, r.trial, repr(r.error)])
    return buf.getvalue()


def parse_curve_csv(text: str, source: str = "<string>") -> list[CurveRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["n", "trial", "error"]:
        raise InputError(f"{source}:1: header must be exactly n,trial,error")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            n, t, e = int(row[0]), int(row[1]), float(row[2])
        except (ValueError, IndexError):
            raise InputError(f"{source}:{lineno}: bad record {row}") from None
        if not 0 <= e <= 1:
            raise InputError(f"{source}:{lineno}: error {e} outside [0, 1]")
        out.append(CurveRecord(n, t, e))
    return out


# --- rate fitting ---

@dataclass(frozen=True)
class RateFit:
    regime: str  # exponential | linear | slower
    C: float
    c: float
    r2: float
    exp_slope: float = float("nan")
    exp_r2: float = float("nan")
    power_exponent: float = float("nan")
    power_r2: float = float("nan")
    config: dict = field(default_factory=lambda: dict(FIT_CONFIG), compare=False)

    def report(self) -> str:
        items = {
            "regime": self.regime, "C": self.C, "c": self.c, "r2": self.r2,
            "exp_slope": self.exp_slope, "exp_r2": self.exp_r2,
            "power_exponent": self.power_exponent, "power_r2": self.power_r2,
        }
        items.update({f"config.{k}": v for k, v in self.config.items()})
        return "".join(f"{k}={v}\n" for k, v in items.items())


def _linfit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return float(slope), float(intercept), r2


def mean_curve(records: Iterable[CurveRecord]) -> tuple[np.ndarray, np.ndarray]:
    by_n: dict[int, list[float]] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r.error)
    ns = np.array(sorted(by_n), dtype=float)
    means = np.array([np.mean(by_n[int(n)]) for n in ns])
    return ns, means


def fit_rate(records: Iterable[CurveRecord], config: Optional[dict] = None) -> RateFit:
    """Classify a learning curve as exponential, linear or slower."""
    cfg = dict(FIT_CONFIG if config is None else config)
    ns, means = mean_curve(records)
    if len(ns) < 4:
        raise InputError(f"need at least 4 distinct n values, got {len(ns)}")
    positive = means[means > 0]
    if positive.size == 0:
        return RateFit("exponential", 0.0, math.inf, 1.0, config=cfg)
    y = np.log(np.where(means > 0, means, cfg["zero_impute_factor"] * positive.min()))
    es, ei, er2 = _linfit(ns, y)
    ps, pi, pr2 = _linfit(np.log(ns), y)
    extra = dict(exp_slope=es, exp_r2=er2, power_exponent=ps, power_r2=pr2, config=cfg)
    if er2 >= cfg["exp_r2_min"] and es <= cfg["exp_slope_max"]:
        return RateFit("exponential", math.exp(ei), -es, er2, **extra)
    if pr2 >= cfg["power_r2_min"] and cfg["power_exponent_lo"] <= ps <= cfg["power_exponent_hi"]:
        return RateFit("linear", math.exp(pi), -ps, pr2, **extra)
    return RateFit("slower", math.exp(pi), -ps, pr2, **extra)


# --- corpus ---

@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    count: int = 40
    n_range: tuple[int, int] = (2, 5)
    k_range: tuple[int, int] = (1, 3)
    size_range: tuple[int, int] = (1, 12)
    partial_count: int = 0
    star_rate: float = 0.3

    def validate(self):
        for name in ("n_range", "k_range", "size_range"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < (0 if name == "size_range" else 1):
                raise InputError(f"{name} must be an increasing range of valid values, got {(lo, hi)}")
        if self.count < 0 or self.partial_count < 0:
            raise InputError("counts must be nonnegative")
        if not 0 <= self.star_rate <= 1:
            raise InputError("star_rate must be in [0, 1]")


def canonical_classes() -> list[tuple[str, ConceptClass]]:
    return [
        ("single_n3_k1", ConceptClass(1, 3, ((0, 1, 1),))),
        ("full_n2_k1", full_class(2, 1)),
        ("full_n3_k1", full_class(3, 1)),
        ("full_n3_k2", full_class(3, 2)),
        ("constants_n4_k2", constant_class(4, 2)),
        ("singletons_n3", singleton_class(3)),
        ("thresholds_n4", threshold_class(4)),
        ("biclique_c4", build_biclique_class(cycle4_instance(), 1)),
        ("biclique_c4_x2", build_biclique_class(cycle4_instance(), 2)),
    ]


def random_class(rng: np.random.Generator, n: int, k: int, size: int, partial: bool = False,
                 star_rate: float = 0.3) -> ConceptClass:
    vals = rng.integers(0, k + 1, size=(size, n))
    if partial:
        vals = np.where(rng.random((size, n)) < star_rate, STAR, vals)
    return ConceptClass(k, n, tuple(tuple(int(v) for v in row) for row in vals), partial)


def generate_corpus(spec: CorpusSpec = CorpusSpec()) -> list[tuple[str, ConceptClass]]:
    """Canonical classes followed by seeded random ones; checks Natarajan values 0..3 all occur."""
    spec.validate()
    out = canonical_classes()
    for i in range(spec.count + spec.partial_count):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([spec.seed, i])))
        n = int(rng.integers(spec.n_range[0], spec.n_range[1] + 1))
        k = int(rng.integers(spec.k_range[0], spec.k_range[1] + 1))
        size = int(rng.integers(spec.size_range[0], spec.size_range[1] + 1))
        partial = i >= spec.count
        tag = "p" if partial else "r"
        out.append((f"{tag}{i:04d}_n{n}_k{k}", random_class(rng, n, k, size, partial, spec.star_rate)))
    seen = {natarajan_dim(c) for _, c in out if not c.partial}
    missing = {0, 1, 2, 3} - seen
    if missing:
        raise AssertionError(f"corpus lacks Natarajan dimensions {sorted(missing)}")
    return out


def write_corpus(classes: Sequence[tuple[str, ConceptClass]], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, cls in classes:
        p = out / f"{name}.mcc"
        p.write_text(format_mcc(cls))
        paths.append(p)
    return paths
