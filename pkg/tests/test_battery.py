import json
import re

from sglab import battery


def _scrubbed(reports):
    return json.loads(re.sub(r'"runtime_ms": [0-9.e+-]+', '"runtime_ms": 0',
                             json.dumps(reports)))


def test_applicability_table():
    assert battery.applicable("hj-lt", "heisenberg")
    assert battery.applicable("kn", "euclidean1")
    assert not battery.applicable("kn", "affine")
    assert not battery.applicable("js", "cyclic5")


def test_trial_generation_is_deterministic(catalog):
    gen = battery.default_config_generator("hj-lt")
    a = gen(catalog["affine"], 9, 3)
    b = gen(catalog["affine"], 9, 3)
    assert a.kwargs == b.kwargs
    assert [d.support for d in a.dists] == [d.support for d in b.dists]
    assert [d.weights for d in a.dists] == [d.weights for d in b.dists]
    c = gen(catalog["affine"], 9, 4)
    assert (c.kwargs, [d.support for d in c.dists]) != (a.kwargs, [d.support for d in a.dists])


def test_battery_results_independent_of_parallelism():
    seq = battery.run_battery(seed=3, trials=2, inequality_ids=("hj-lt", "os"))
    par = battery.run_battery(seed=3, trials=2, inequality_ids=("hj-lt", "os"), parallelism=2)
    assert seq["summary"] == par["summary"]
    assert _scrubbed(seq["reports"]) == _scrubbed(par["reports"])


def test_battery_weights_are_exactly_normalized(catalog):
    gen = battery.default_config_generator("os")
    for trial in range(20):
        cfg = gen(catalog["heisenberg"], 5, trial)
        for law in cfg.dists:
            assert sum(law.weights) == 1.0
