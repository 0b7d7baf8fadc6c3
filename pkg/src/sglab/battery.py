"""Seeded random configuration battery over the built-in instances.

Each battery entry draws laws with small supports (atoms from the
instance's dyadic sampler, weights from small integer menus) and
thresholds from a grid that deliberately lands both on and off the atoms
of the relevant statistics, then runs one checker with the exact engine.
Per-trial generators are derived from (master seed, inequality, instance,
trial), so the battery is reproducible and can be partitioned across
workers without changing any result.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

from . import inequalities as ineq
from .algebra import MetricMagmaInstance, get_instance
from .probability import Exact, FiniteDistribution
from .seeding import spawn_rng

INEQUALITY_IDS = (
    "hj-general",
    "hj-general-strengthened",
    "hj-lt",
    "hj-hm",
    "js",
    "kn",
    "os",
    "mogulskii-min",
    "mogulskii-max",
    "levy-ottaviani",
    "moment",
)

BATTERY_INSTANCES = ("euclidean1", "euclidean2", "affine", "heisenberg", "cyclic5")

#: bounds from the acceptance battery: n <= 6, support <= 3, product <= 729
MAX_VARS = 6
MAX_SUPPORT = 3
PRODUCT_CAP = 729

_REAL_LINE_ONLY = ("js", "kn")


def applicable(inequality: str, instance_name: str) -> bool:
    if inequality in _REAL_LINE_ONLY:
        return instance_name == "euclidean1"
    return True


@dataclass(frozen=True)
class TrialConfig:
    instance: MetricMagmaInstance
    dists: tuple
    z0: object
    z1: object
    kwargs: dict


def _name_key(*names) -> int:
    digest = hashlib.blake2s("|".join(names).encode()).digest()
    return int.from_bytes(digest[:4], "little") & 0x7FFFFFFF


def _distinct_atoms(inst, rng, count, transform=None):
    atoms, seen = [], set()
    while len(atoms) < count:
        el = inst.sample_fn(rng)
        if transform is not None:
            el = transform(el)
        code = inst.encode(el)
        if code not in seen:
            seen.add(code)
            atoms.append(el)
    return atoms


def _integer_weights(rng, count):
    # a composition of 16 into positive sixteenths: dyadic weights with an
    # exactly representable float sum of 1.0, so enumerated probabilities
    # are exact and slack comparisons are free of normalization noise
    cuts = sorted(int(rng.integers(1, 16)) for _ in range(count - 1))
    while len(set(cuts)) != count - 1:
        cuts = sorted(int(rng.integers(1, 16)) for _ in range(count - 1))
    edges = [0] + cuts + [16]
    return tuple((edges[i + 1] - edges[i]) / 16.0 for i in range(count))


def _draw_dists(inst, rng, n_max=MAX_VARS, support_max=MAX_SUPPORT, nonneg=False, symmetric=False):
    n = int(rng.integers(2, n_max + 1))
    shared = rng.random() < 0.5
    laws = []
    for j in range(n):
        if shared and laws:
            laws.append(laws[0])
            continue
        if symmetric:
            positive = _distinct_atoms(
                inst, rng, int(rng.integers(1, 2)), transform=lambda x: abs(x) if x != 0 else 0.125
            )
            a = positive[0]
            if rng.random() < 0.5:
                support = (-a, a)
                weights = (0.5, 0.5)
            else:
                wa = rng.choice([0.25, 0.375])
                support = (-a, 0.0, a)
                weights = (float(wa), 1.0 - 2 * float(wa), float(wa))
        else:
            size = int(rng.integers(1, support_max + 1))
            transform = (lambda x: abs(x)) if nonneg else None
            support = tuple(_distinct_atoms(inst, rng, size, transform))
            weights = _integer_weights(rng, size)
        laws.append(FiniteDistribution(inst, tuple(support), tuple(weights)))
    return laws


def _draw_base_points(inst, rng):
    if inst.identity is not None and rng.random() < 0.7:
        return inst.identity, inst.identity
    return inst.sample_fn(rng), inst.sample_fn(rng)


def _y_atoms(inst, dists, z0):
    mul, d = inst.compose_fn, inst.dist_fn
    vals = set()
    for law in dists:
        for x in law.support:
            vals.add(d(z0, mul(z0, x)))
    return sorted(vals)


def _draw_threshold(rng, atoms, scale, positive=False):
    pool = [a for a in atoms if a > 0] if positive else list(atoms)
    if pool and rng.random() < 0.5:
        return float(pool[int(rng.integers(0, len(pool)))])
    lo = 1 if positive else 0
    return scale * int(rng.integers(lo, 11)) / 8.0


def default_config_generator(inequality: str):
    """A seeded (instance, seed, trial) -> TrialConfig generator."""

    def gen(instance, seed, trial):
        rng = spawn_rng(seed, _name_key(inequality, instance.name), trial)
        kwargs = {}
        if inequality == "js":
            dists = _draw_dists(instance, rng, nonneg=True)
            z0 = z1 = 0.0
            atoms = _y_atoms(instance, dists, z0)
            scale = max(atoms) if atoms and max(atoms) > 0 else 1.0
            kwargs = {
                "k": int(rng.integers(1, 4)),
                "t": _draw_threshold(rng, atoms, scale, positive=True),
            }
        elif inequality == "kn":
            symmetric = trial % 2 == 1
            for attempt in range(50):
                sub = spawn_rng(seed, _name_key(inequality, instance.name), trial, attempt)
                dists = _draw_dists(
                    instance, sub, n_max=4, nonneg=not symmetric, symmetric=symmetric
                )
                # keep atoms small so that lambda = P(U >= 1) < 1
                dists = [_shrink_scale(d) for d in dists]
                lam = ineq.exact_event_probs(
                    dists, {"lam": lambda st: st.U >= 1.0}, 0.0, 0.0, "left", Exact()
                )["lam"]
                if lam < 1.0:
                    break
            z0 = z1 = 0.0
            kwargs = {"k": int(rng.integers(1, 3))}
        else:
            dists = _draw_dists(instance, rng)
            z0, z1 = _draw_base_points(instance, rng)
            atoms = _y_atoms(instance, dists, z0)
            scale = max(atoms) if atoms and max(atoms) > 0 else 1.0
            n = len(dists)
            if inequality in ("hj-general", "hj-general-strengthened"):
                k = int(rng.integers(1, 4))
                k = min(k, n + 1)
                K = int(rng.integers(k, n + 2))
                counts = [1] * k
                for _ in range(K - k):
                    counts[int(rng.integers(0, k))] += 1
                kwargs = {
                    "counts": tuple(counts),
                    "thresholds": tuple(
                        _draw_threshold(rng, atoms, scale) for _ in range(k)
                    ),
                    "s": _draw_threshold(rng, atoms, scale),
                    "strengthened": inequality.endswith("strengthened"),
                }
            elif inequality == "hj-lt":
                kwargs = {
                    "t": _draw_threshold(rng, atoms, scale, positive=True),
                    "s": _draw_threshold(rng, atoms, scale, positive=True),
                }
            elif inequality == "hj-hm":
                kwargs = {
                    "K": int(rng.integers(1, 4)),
                    "t": _draw_threshold(rng, atoms, scale, positive=True),
                    "s": _draw_threshold(rng, atoms, scale, positive=True),
                }
            elif inequality == "os":
                kwargs = {
                    "alpha": _draw_threshold(rng, atoms, scale, positive=True),
                    "beta": _draw_threshold(rng, atoms, scale, positive=True),
                }
            elif inequality in ("mogulskii-min", "mogulskii-max"):
                kwargs = {
                    "m": int(rng.integers(1, n + 1)),
                    "a": _draw_threshold(rng, atoms, scale),
                    "b": _draw_threshold(rng, atoms, scale),
                    "variant": inequality.split("-")[1],
                }
            elif inequality == "levy-ottaviani":
                l = 2 + trial % 3
                kwargs = {"a_list": tuple(_draw_threshold(rng, atoms, scale) for _ in range(l))}
            elif inequality == "moment":
                kwargs = {"p": (0.5, 1.0, 2.0)[trial % 3]}
            else:
                raise ValueError(f"unknown inequality {inequality!r}")
        return TrialConfig(instance, tuple(dists), z0, z1, kwargs)

    return gen


def _shrink_scale(dist):
    """Rescale a real-line law into [-1, 1] (helps keep lambda < 1)."""
    support = tuple(x / 8.0 if abs(x) > 1 else x for x in dist.support)
    if len(set(support)) != len(support):
        return dist
    return FiniteDistribution(dist.instance, support, dist.weights)


def run_config(inequality: str, cfg: TrialConfig, budget: int = Exact().budget) -> list:
    """Run one checker on one configuration with the exact engine."""
    engine = Exact(budget=budget)
    dists = list(cfg.dists)
    kw = cfg.kwargs
    if inequality in ("hj-general", "hj-general-strengthened"):
        params = ineq.HJParams(
            kw["counts"], kw["thresholds"], kw["s"], cfg.z0, cfg.z1,
            strengthened=kw["strengthened"],
        )
        return [ineq.hj_general(dists, params, engine)]
    if inequality == "hj-lt":
        return [ineq.hj_lt(dists, kw["t"], kw["s"], cfg.z0, cfg.z1, engine)]
    if inequality == "hj-hm":
        return [ineq.hj_hm(dists, kw["K"], kw["t"], kw["s"], cfg.z0, cfg.z1, engine)]
    if inequality == "js":
        return [ineq.js_bound(dists, kw["k"], kw["t"], engine)]
    if inequality == "kn":
        return ineq.kn_bounds(dists, kw["k"], engine)
    if inequality == "os":
        return [
            ineq.ottaviani_skorohod(
                dists, kw["alpha"], kw["beta"], cfg.z0, cfg.z1, engine=engine
            )
        ]
    if inequality in ("mogulskii-min", "mogulskii-max"):
        return [
            ineq.mogulskii(
                dists, kw["m"], kw["a"], kw["b"], kw["variant"], cfg.z0, cfg.z1, engine=engine
            )
        ]
    if inequality == "levy-ottaviani":
        return [ineq.levy_ottaviani(dists, kw["a_list"], cfg.z0, cfg.z1, engine=engine)]
    if inequality == "moment":
        return [ineq.moment_bound(dists, kw["p"], cfg.z0, cfg.z1, engine=engine)]
    raise ValueError(f"unknown inequality {inequality!r}")


def _shrink_candidates(inequality, cfg):
    n = len(cfg.dists)
    if n > 1:
        for j in range(n):
            dists = cfg.dists[:j] + cfg.dists[j + 1:]
            kw = dict(cfg.kwargs)
            if inequality in ("mogulskii-min", "mogulskii-max"):
                kw["m"] = min(kw["m"], len(dists))
            if inequality in ("hj-general", "hj-general-strengthened"):
                if sum(kw["counts"]) > len(dists) + 1:
                    continue
            yield replace(cfg, dists=dists, kwargs=kw)
    for j, law in enumerate(cfg.dists):
        if len(law.support) < 2:
            continue
        for i in range(len(law.support)):
            support = law.support[:i] + law.support[i + 1:]
            weights = law.weights[:i] + law.weights[i + 1:]
            total = sum(weights)
            weights = tuple(w / total for w in weights)
            smaller = FiniteDistribution(law.instance, support, weights)
            dists = cfg.dists[:j] + (smaller,) + cfg.dists[j + 1:]
            yield replace(cfg, dists=dists)


def shrink_config(inequality: str, cfg: TrialConfig, budget: int = Exact().budget) -> TrialConfig:
    """Greedily remove variables and support atoms while the violation persists."""
    current = cfg
    improved = True
    while improved:
        improved = False
        for cand in _shrink_candidates(inequality, current):
            try:
                reports = run_config(inequality, cand, budget)
            except Exception:
                continue
            if any(r.verdict == "violated" for r in reports):
                current = cand
                improved = True
                break
    return current


# ---------------------------------------------------------------------------
# the full battery


def run_trial(inequality: str, instance_name: str, seed: int, trial: int) -> list:
    instance = get_instance(instance_name)
    cfg = default_config_generator(inequality)(instance, seed, trial)
    return run_config(inequality, cfg)


def _battery_worker(task):
    inequality, instance_name, seed, trial = task
    return [r.to_dict() for r in run_trial(inequality, instance_name, seed, trial)]


def run_battery(
    seed: int = 1,
    trials: int = 50,
    instances=BATTERY_INSTANCES,
    inequality_ids=INEQUALITY_IDS,
    parallelism: int = 1,
) -> dict:
    """Run the full battery; returns {"reports": [...], "summary": {...}}.

    Reports are plain dicts (JSON-ready) merged in task order, which is
    identical for any parallelism level.
    """
    tasks = [
        (iq, name, seed, trial)
        for iq in inequality_ids
        for name in instances
        if applicable(iq, name)
        for trial in range(trials)
    ]
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            chunks = pool.map(_battery_worker, tasks, chunksize=16)
            reports = [r for chunk in chunks for r in chunk]
    else:
        reports = [r for task in tasks for r in _battery_worker(task)]
    summary = {
        "total": len(reports),
        "holds": sum(r["verdict"] == "holds" for r in reports),
        "violated": sum(r["verdict"] == "violated" for r in reports),
        "indeterminate": sum(r["verdict"] == "indeterminate" for r in reports),
    }
    return {"summary": summary, "reports": reports}
