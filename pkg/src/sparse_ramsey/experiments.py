"""Named Monte-Carlo experiments, one per property, with reproducible reports.

Every experiment is a function ``(params, seed) -> record`` where the record
is a JSON-ready dict holding at least ``seed``, ``passed`` and
``statistic``. :func:`batch_run` maps it over the seeds of an
:class:`ExperimentConfig` and aggregates the pass fraction.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .embedding import DrcParams, dependent_random_choice
from .graph import Graph
from .random_graphs import (
    RandomGraphSpec,
    _jsonable,
    arrangeability_witness,
    check_density_between_large_sets,
    check_small_subgraph_density,
    closure_F,
    cool_ordering,
    count_high_degree,
    count_k23_pairs,
    sample_gnp,
)
from .sparseness import (
    find_light_vertex,
    measure_certificate,
    peel_ordering,
    random_ordering,
)

WORKERS_ENV = "SPARSE_RAMSEY_WORKERS"
CSV_COLUMNS = ("lemma_id", "n", "d", "seed", "statistic", "result")


def tool_version() -> str:
    try:
        from importlib.metadata import version

        return version("artifact")
    except Exception:  # not installed
        return "0.1.0"


def _gnp(params, seed, default_n, default_d):
    n = int(params.get("n") or default_n)
    if params.get("p") is not None:
        spec = RandomGraphSpec(n, float(params["p"]), seed)
    else:
        spec = RandomGraphSpec.from_d(n, float(params.get("d") or default_d), seed)
    return sample_gnp(spec), spec


def _record(seed, passed, statistic, **extra):
    out = {"seed": seed, "passed": bool(passed), "statistic": _jsonable(statistic)}
    out.update({k: _jsonable(v) for k, v in extra.items()})
    return out


# ---------------------------------------------------------------------------
# experiments


def exp_first1(params, seed):
    """No vertex of G(n, d/n) has degree above 16d."""
    G, spec = _gnp(params, seed, 100_000, 10)
    d = params.get("d") or 10
    threshold = params.get("threshold_degree")
    threshold = int(16 * d if threshold is None else threshold)
    k = count_high_degree(G, threshold)
    return _record(seed, k == 0, k, threshold_degree=threshold, max_degree=int(G.degrees.max(initial=0)))


def exp_second2(params, seed):
    """A random set S of fixed size has a closure at most 4|S|."""
    G, spec = _gnp(params, seed, 100_000, 10)
    s = int(params.get("t") or 50)
    rng = np.random.default_rng([seed, 2])
    S = rng.choice(G.n, size=s, replace=False).tolist()
    res = closure_F(G, S)
    return _record(seed, len(res.closure) <= 4 * s, len(res.closure), set_size=s)


def _all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield Graph.from_arrays(n, [pairs[i][0] for i in range(len(pairs)) if bits >> i & 1],
                                [pairs[i][1] for i in range(len(pairs)) if bits >> i & 1])


def exp_third3(params, seed):
    """Graphs with fewer than 9n/8 edges have a light vertex.

    Exhaustive over all labelled graphs on up to ``n_max`` vertices, or on
    ``trials`` random sparse graphs otherwise.
    """
    failures = 0
    checked = 0
    if params.get("exhaustive"):
        graphs = itertools.chain.from_iterable(_all_graphs(n) for n in range(1, int(params.get("n_max") or 6) + 1))
    else:
        rng = np.random.default_rng([seed, 3])
        n_max = int(params.get("n_max") or 40)

        def gen():
            for _ in range(int(params.get("trials") or 1000)):
                n = int(rng.integers(1, n_max + 1))
                yield sample_gnp(RandomGraphSpec(n, float(rng.uniform(0, 0.15)), int(rng.integers(2 ** 63))))

        graphs = gen()
    for G in graphs:
        if 8 * G.m >= 9 * G.n:
            continue
        checked += 1
        w = find_light_vertex(G)
        if w is None or not w.check(G):
            failures += 1
    return _record(seed, failures == 0, failures, graphs_checked=checked)


def exp_fourth4(params, seed):
    """A successful (s, r) peel gives back degree <= s and left-set count <= r + 1."""
    rng = np.random.default_rng([seed, 4])
    s, r = int(params.get("s") or 2), int(params.get("r") or 2)
    n_max = int(params.get("n_max") or 40)
    p_max = float(params.get("p") or 0.15)
    violations = successes = 0
    trials = int(params.get("trials") or 1000)
    for _ in range(trials):
        n = int(rng.integers(1, n_max + 1))
        G = sample_gnp(RandomGraphSpec(n, float(rng.uniform(0, p_max)), int(rng.integers(2 ** 63))))
        out = peel_ordering(G, s, r)
        if not out:
            continue
        successes += 1
        cert = measure_certificate(G, out)
        if cert.d > s or cert.delta > r + 1:
            violations += 1
    return _record(seed, violations == 0, violations, peel_successes=successes, trials=trials)


def exp_fifth5(params, seed):
    """No set of at most ``size_cap`` vertices spans 9/8 times as many edges."""
    G, spec = _gnp(params, seed, 10_000, 1.5)
    cap = int(params.get("size_cap") or 8)
    rep = check_small_subgraph_density(G, cap, seed=seed)
    return _record(seed, rep.passed, rep.statistic, mode=rep.mode, witness=rep.witness)


def exp_six6(params, seed):
    """Disjoint sets of size n/6 carry at least half their expected edge count."""
    G, spec = _gnp(params, seed, 6000, 300)
    rep = check_density_between_large_sets(G, Fraction(1, 6), int(params.get("trials") or 1000), seed, spec.p)
    return _record(seed, rep.passed, rep.statistic, mode=rep.mode)


def exp_seven7(params, seed):
    """No pair of vertices has three common neighbours."""
    G, spec = _gnp(params, seed, 1_000_000, 5)
    k = count_k23_pairs(G)
    return _record(seed, k == 0, k)


def exp_eight8(params, seed):
    """The witness for a random ordering exceeds d^2/144."""
    G, spec = _gnp(params, seed, 6000, 300)
    d = spec.p * spec.n
    ordering = random_ordering(G.n, np.random.default_rng([seed, 8]))
    w = arrangeability_witness(G, ordering, spec.p)
    return _record(seed, w > d * d / 144, w, bound=d * d / 144)


def exp_cool(params, seed):
    """The closure-based ordering has back degree and left-set count at most 16d."""
    G, spec = _gnp(params, seed, 30_000, 10)
    d = int(params.get("d") or 10)
    _, cert = cool_ordering(G, d)
    bound = 16 * d
    return _record(seed, cert.d <= bound and cert.delta <= bound, max(cert.d, cert.delta),
                   d_prime=cert.d, delta_prime=cert.delta, p_prime=cert.p, metadata=cert.metadata)


def exp_drc_expectation(params, seed):
    """Mean common-neighbourhood size of 2t random vertices is at least eps^(2t) N."""
    N = int(params.get("n") or 500)
    p = float(params.get("p") or 0.5)
    t = int(params.get("t") or 1)
    trials = int(params.get("trials") or 200)
    G = sample_gnp(RandomGraphSpec(N, p, seed, bipartite=True))
    res = dependent_random_choice(G, DrcParams(t, 1, trials), seed=seed)
    sizes = np.asarray(res.trial_sizes, dtype=float)
    eps = float(res.epsilon)
    target = 0.9 * eps ** (2 * t) * N
    slack = 3 * sizes.std(ddof=1) / math.sqrt(trials) if trials > 1 else 0.0
    return _record(seed, sizes.mean() >= target - slack, float(sizes.mean()), target=target, slack=slack,
                   epsilon=eps)


def exp_conversions(params, seed):
    """Per-ordering conversions between back degree, left-set count and arrangeability."""
    rng = np.random.default_rng([seed, 9])
    n_max = int(params.get("n_max") or 30)
    violations = 0
    trials = int(params.get("trials") or 1000)
    for _ in range(trials):
        n = int(rng.integers(1, n_max + 1))
        G = sample_gnp(RandomGraphSpec(n, float(rng.uniform(0, 0.5)), int(rng.integers(2 ** 63))))
        c = measure_certificate(G, random_ordering(n, rng))
        if c.d >= 1 and c.p > c.delta * (c.d - 1) + 1:
            violations += 1
        if c.d > c.p or (c.p >= 1 and c.delta > 2 ** (c.p - 1)):
            violations += 1
    return _record(seed, violations == 0, violations, trials=trials)


EXPERIMENTS: dict = {
    "first1": exp_first1,
    "second2": exp_second2,
    "third3": exp_third3,
    "fourth4": exp_fourth4,
    "fifth5": exp_fifth5,
    "six6": exp_six6,
    "seven7": exp_seven7,
    "eight8": exp_eight8,
    "cool": exp_cool,
    "drc-expectation": exp_drc_expectation,
    "conversions": exp_conversions,
}

# pass-fraction thresholds used when the config does not set one
DEFAULT_THRESHOLDS = {"second2": 0.95, "fifth5": 0.95, "cool": 0.9, "seven7": 0.9}


# ---------------------------------------------------------------------------
# orchestration


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    seeds: list = field(default_factory=lambda: [0])
    threshold: Optional[float] = None  # required pass fraction
    out: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; available: {', '.join(EXPERIMENTS)}")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        self.seeds = [int(s) for s in self.seeds]
        if self.threshold is None:
            self.threshold = DEFAULT_THRESHOLDS.get(self.experiment, 1.0)
        if not 0 <= self.threshold <= 1:
            raise ValueError("threshold must lie in [0, 1]")


@dataclass
class RunReport:
    config: dict
    records: list
    pass_fraction: Optional[float]
    passed: Optional[bool]
    wall_clock: float
    version: str

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.pass_fraction is None:
            out["pass_fraction_undefined"] = True
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        p = self.config["params"]
        for r in self.records:
            stat = r["statistic"]
            w.writerow([self.config["experiment"], p.get("n"), p.get("d"), r["seed"],
                        json.dumps(stat) if isinstance(stat, (list, dict)) else stat,
                        "pass" if r["passed"] else "fail"])
        return buf.getvalue()


def _run_one(args):
    name, params, seed = args
    return EXPERIMENTS[name](params, seed)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def batch_run(config: ExperimentConfig, workers: Optional[int] = None) -> RunReport:
    """Run the experiment once per seed; records come back in seed-list order."""
    workers = default_workers() if workers is None else workers
    start = time.perf_counter()
    jobs = [(config.experiment, config.params, s) for s in config.seeds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, jobs))
    else:
        records = [_run_one(j) for j in jobs]
    if records:
        frac = sum(r["passed"] for r in records) / len(records)
        passed = frac >= config.threshold
    else:
        frac, passed = None, None
    cfg = asdict(config)
    report = RunReport(_jsonable(cfg), records, frac, passed, time.perf_counter() - start, tool_version())
    if config.out:
        write_atomic(config.out, report.to_csv() if config.format == "csv" else report.to_json() + "\n")
    return report
