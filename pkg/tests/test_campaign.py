import json

import numpy as np

from hypolevel.campaign import (
    blaschke_pool,
    classify,
    falsification_campaign,
    random_blaschke,
    trial_seed,
)
from hypolevel.dsl import as_blaschke, parse, unparse
from hypolevel.level_set import DMu, OmegaLambda


def test_pool_shape_and_reproducibility():
    a, b = blaschke_pool(30, 4), blaschke_pool(30, 4)
    assert [unparse(f) for f in a] == [unparse(f) for f in b]
    for f in a:
        d = as_blaschke(f)
        assert 1 <= d.degree <= 5 and max(abs(z) for z in d.zeros) <= 0.9
        assert parse(unparse(f)) == f


def test_random_blaschke_uses_generator():
    f = random_blaschke(np.random.default_rng(1), max_degree=2, max_modulus=0.5)
    assert as_blaschke(f).degree <= 2


def test_trial_seeds_differ():
    assert len({trial_seed(0, i) for i in range(100)}) == 100


def test_classification():
    assert classify(OmegaLambda(1), parse("z^2")) == "excluded"
    assert classify(OmegaLambda(1), parse("aut(0.4,0)")) == "excluded"
    assert classify(OmegaLambda(1), parse("blaschke(0; 0.3, 0.5)")) == "covered"
    assert classify(OmegaLambda(0.8), parse("z")) == "outside"
    assert classify(DMu(-0.5), parse("z")) == "empty"
    assert classify(DMu(0.5), parse("z")) == "outside"


def test_campaign_thread_independent(tmp_path):
    pool = blaschke_pool(6, 2)
    specs = [OmegaLambda(1.5), DMu(-0.3)]
    one = falsification_campaign(pool, specs, seed=9, n_pairs=80, n_segment=16, threads=1)
    four = falsification_campaign(pool, specs, seed=9, n_pairs=80, n_segment=16, threads=4)
    assert one.to_dict() == four.to_dict()
    assert one.violations == 0
    out = tmp_path / "c.jsonl"
    one.write_jsonl(str(out))
    lines = out.read_text().splitlines()
    assert len(lines) == 12 and "elapsed" in json.loads(lines[0])


def test_campaign_detects_counterexample_family():
    maps = [parse("aut(-0.5,0)"), parse("aut(0.7i,1)")]
    s = falsification_campaign(maps, [OmegaLambda(0.8)], seed=0)
    assert s.violations == 2
