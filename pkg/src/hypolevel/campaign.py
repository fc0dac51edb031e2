"""Falsification campaigns: many (map, level-set) trials, deterministic at any thread count."""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, List, Sequence

import numpy as np

from hypolevel.convexity import (
    EmptyRegion,
    WholeDisk,
    ZeroGradient,
    boundary_points,
    check_h_convex,
    support_test,
)
from hypolevel.dsl import Blaschke, MapExpr, unparse
from hypolevel.level_set import DMu, LevelSpec, OmegaLambda, dmu_nonempty
from hypolevel.proofs import omega_excluded

THREADS_ENV = "HYPOLEVEL_THREADS"


def thread_count(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, default)))
    except ValueError:
        return default


def trial_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def random_blaschke(rng: np.random.Generator, max_degree: int = 5,
                    max_modulus: float = 0.9) -> Blaschke:
    """Degree uniform in 1..max_degree, zeros uniform by area in |a| <= max_modulus."""
    deg = int(rng.integers(1, max_degree + 1))
    r = max_modulus * np.sqrt(rng.random(deg))
    zeros = tuple(complex(z) for z in r * np.exp(2j * np.pi * rng.random(deg)))
    theta = float(rng.uniform(-math.pi, math.pi))
    return Blaschke(theta, zeros)


def blaschke_pool(n: int = 200, seed: int = 0, max_degree: int = 5,
                  max_modulus: float = 0.9) -> List[Blaschke]:
    return [random_blaschke(np.random.default_rng(trial_seed(seed, i)), max_degree, max_modulus)
            for i in range(n)]


# ------------------------------------------------------------------- trials


def classify(spec: LevelSpec, f: MapExpr) -> str:
    """``covered`` by a theorem, ``excluded`` by its hypotheses, ``empty``, or ``outside``."""
    if isinstance(spec, OmegaLambda):
        if spec.lam < 1:
            return "outside"
        return "excluded" if omega_excluded(f, spec.lam) else "covered"
    if isinstance(spec, DMu):
        if spec.mu >= 0:
            return "outside"
        if spec.z0 == 0 and spec.w0 == 0 and not dmu_nonempty(f, spec.mu):
            return "empty"
        return "covered"
    return "outside"


@dataclass
class TrialRecord:
    trial: int
    map: str
    spec: dict
    status: str
    verdict: str = "skipped"
    pairs_tested: int = 0
    margin: float = float("nan")
    witness: dict = None
    support_checked: int = 0
    support_failed: int = 0
    zero_gradient: int = 0
    elapsed: float = 0.0

    def to_dict(self, timings: bool = True) -> dict:
        d = dict(self.__dict__)
        if not timings:
            d.pop("elapsed")
        if isinstance(d["margin"], float) and math.isnan(d["margin"]):
            d["margin"] = None
        return d


def run_trial(index: int, f: MapExpr, spec: LevelSpec, seed: int, n_pairs: int = 500,
              n_segment: int = 64, tol: float = 1e-9, n_support: int = 2) -> TrialRecord:
    t0 = time.perf_counter()
    status = classify(spec, f)
    rec = TrialRecord(index, unparse(f), spec.to_dict(), status)
    if status in ("excluded", "empty"):
        return rec
    try:
        rep = check_h_convex(spec, f, n_pairs, n_segment, tol, trial_seed(seed, index))
    except EmptyRegion:
        rec.status = "empty"
        return rec
    rec.verdict = rep.verdict
    rec.pairs_tested = rep.pairs_tested
    rec.margin = rep.margin
    rec.witness = rep.witness.to_dict() if rep.witness else None
    if n_support:
        try:
            pts = boundary_points(spec, f, n_support)
        except (WholeDisk, EmptyRegion):
            pts = []
        for z in pts:
            rec.support_checked += 1
            try:
                rec.support_failed += not support_test(spec, f, z)
            except ZeroGradient:
                rec.zero_gradient += 1
    rec.elapsed = time.perf_counter() - t0
    return rec


@dataclass
class CampaignSummary:
    seed: int
    records: List[TrialRecord] = field(default_factory=list)

    def count(self, **match) -> int:
        return sum(all(getattr(r, k) == v for k, v in match.items()) for r in self.records)

    @property
    def violations(self) -> int:
        return self.count(verdict="violated")

    @property
    def support_failures(self) -> int:
        return sum(r.support_failed + r.zero_gradient for r in self.records)

    def totals(self) -> dict:
        statuses = sorted({r.status for r in self.records})
        return {"trials": len(self.records),
                "by_status": {s: self.count(status=s) for s in statuses},
                "violations": self.violations,
                "violations_covered": self.count(status="covered", verdict="violated"),
                "support_checked": sum(r.support_checked for r in self.records),
                "support_failures": self.support_failures}

    def to_dict(self, timings: bool = False) -> dict:
        return {"seed": self.seed, "totals": self.totals(),
                "trials": [r.to_dict(timings) for r in self.records]}

    def write_jsonl(self, path: str) -> None:
        from hypolevel.io import atomic_write_text

        atomic_write_text(path, "".join(json.dumps(r.to_dict(True)) + "\n"
                                        for r in self.records))


def falsification_campaign(maps: Sequence[MapExpr], specs: Iterable[LevelSpec], seed: int = 0,
                           n_pairs: int = 500, n_segment: int = 64, tol: float = 1e-9,
                           n_support: int = 2, threads: int = None) -> CampaignSummary:
    """Run every (map, spec) pair; trial ``i`` uses an RNG stream derived from ``(seed, i)``."""
    jobs = list(product(maps, list(specs)))
    threads = thread_count() if threads is None else threads

    def go(i):
        f, spec = jobs[i]
        return run_trial(i, f, spec, seed, n_pairs, n_segment, tol, n_support)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            records = list(ex.map(go, range(len(jobs))))
    else:
        records = [go(i) for i in range(len(jobs))]
    return CampaignSummary(seed, records)
