"""Monte Carlo experiment orchestration.

An ExperimentSpec bundles a graph recipe, spreading parameters, an adversary,
an estimator id, a trial count, and a master seed.  run_experiment derives an
independent rng stream per trial from (master_seed, trial index), simulates,
observes, estimates, and aggregates hits into a DetectionReport with a Wilson
95% interval and, where a closed form applies, a theory overlay.

Reports are reproducible bit-for-bit: streams are keyed by trial index, not
worker, so the result is independent of the worker count; all tie-break draws
happen on the trial's own stream after its simulation draws.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import analytics
from .adversary import observe_eavesdropper, observe_snapshot, observe_spy
from .estimators import (
    ball_centrality,
    first_timestamp,
    reporting_centrality,
    rumor_centers,
    spy_first_timestamp,
)
from .graphs import build_random_regular, build_regular_tree, lazy_regular_tree, load_edge_list
from .spreading import (
    SpreadParams,
    first_report_trial,
    simulate_diffusion,
    simulate_trickle,
    trial_stream,
)
from .trc import timestamp_rumor_centrality

ESTIMATORS = (
    "first-timestamp",
    "ball-centrality",
    "timestamp-rumor-centrality",
    "reporting-centrality",
    "rumor-centers",
)

ADVERSARIES = ("eavesdropper", "spy", "snapshot")

DEFAULT_RC_INFECTIONS = 500


@dataclass(frozen=True)
class GraphSpec:
    """Recipe for the trial topology.

    kind: 'tree' (lazy infinite regular tree, fresh instance per trial),
    'balanced-tree' (explicit, needs depth), 'random-regular' (needs n; built
    once per experiment from the master seed), or 'file' (edge list path).
    root_degree modifies only the lazy tree's root (the diffusion
    first-timestamp closed form is exact for root_degree = d - 2).
    """

    kind: str
    d: int | None = None
    n: int | None = None
    depth: int | None = None
    path: str | None = None
    root_degree: int | None = None

    def __post_init__(self):
        if self.kind not in ("tree", "balanced-tree", "random-regular", "file"):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.kind in ("tree", "balanced-tree", "random-regular") and not self.d:
            raise ValueError(f"graph kind {self.kind!r} needs d")
        if self.kind == "balanced-tree" and self.depth is None:
            raise ValueError("balanced-tree needs depth")
        if self.kind == "random-regular" and not self.n:
            raise ValueError("random-regular needs n")
        if self.kind == "file" and not self.path:
            raise ValueError("file graph needs path")


@dataclass(frozen=True)
class AdversarySpec:
    """model + its parameters; estimation_time None means the realized
    horizon (stop_time) for full simulations and t = infinity for
    first-report experiments."""

    model: str = "eavesdropper"
    p: float | None = None
    estimation_time: float | None = None

    def __post_init__(self):
        if self.model not in ADVERSARIES:
            raise ValueError(f"unknown adversary model {self.model!r}")
        if self.model == "spy" and (self.p is None or not 0 <= self.p <= 1):
            raise ValueError("spy adversary needs p in [0, 1]")


@dataclass(frozen=True)
class ExperimentSpec:
    graph: GraphSpec
    params: SpreadParams
    adversary: AdversarySpec
    estimator: str
    trials: int
    master_seed: int
    workers: int = 1

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        _check_compatible(self)


def _check_compatible(spec):
    est, adv, proto = spec.estimator, spec.adversary.model, spec.params.protocol
    if est == "ball-centrality" and (proto != "trickle" or adv != "eavesdropper"):
        raise ValueError("ball centrality needs trickle + eavesdropper")
    if est == "timestamp-rumor-centrality" and (proto != "trickle" or adv != "eavesdropper"):
        raise ValueError("timestamp rumor centrality needs trickle + eavesdropper")
    if est == "first-timestamp" and adv == "snapshot":
        raise ValueError("first-timestamp needs timestamps (eavesdropper or spy)")
    if est == "reporting-centrality" and adv == "snapshot":
        raise ValueError("reporting centrality needs eavesdropper or spy reports")
    if est == "rumor-centers" and adv != "snapshot":
        raise ValueError("rumor centers is the snapshot baseline")
    if est == "reporting-centrality" and spec.graph.kind in ("random-regular", "file"):
        raise ValueError("reporting centrality is defined on trees")


@dataclass
class DetectionReport:
    spec: ExperimentSpec
    hits: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float
    strict_win_rate: float | None = None
    theory: float | None = None
    mean_stop_time: float | None = None
    wall_time: float = 0.0

    def csv_fields(self):
        g, a, p = self.spec.graph, self.spec.adversary, self.spec.params
        t_or_k = (
            p.max_infections
            if p.max_infections is not None
            else (a.estimation_time if a.estimation_time is not None else p.max_time)
        )
        return {
            "protocol": p.protocol,
            "estimator": self.spec.estimator,
            "adversary": a.model,
            "d": g.d if g.d is not None else "",
            "theta": p.theta,
            "t_or_K": t_or_k if t_or_k is not None else "inf",
            "p": a.p if a.p is not None else "",
            "trials": self.trials,
            "hits": self.hits,
            "p_hat": repr(self.p_hat),
            "ci_low": repr(self.ci_low),
            "ci_high": repr(self.ci_high),
            "strict_win_rate": "" if self.strict_win_rate is None else repr(self.strict_win_rate),
            "theory": "" if self.theory is None else repr(self.theory),
            "seed": self.spec.master_seed,
        }


CSV_COLUMNS = (
    "protocol", "estimator", "adversary", "d", "theta", "t_or_K", "p",
    "trials", "hits", "p_hat", "ci_low", "ci_high", "strict_win_rate",
    "theory", "seed",
)


def wilson_interval(hits, trials, z=1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    p = hits / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _build_graph(gspec, master_seed):
    if gspec.kind == "balanced-tree":
        return build_regular_tree(gspec.d, gspec.depth)
    if gspec.kind == "random-regular":
        return build_random_regular(gspec.n, gspec.d, seed=master_seed)
    if gspec.kind == "file":
        return load_edge_list(gspec.path)
    return None  # lazy tree: fresh instance per trial


def _trial_graph(spec, shared):
    if spec.graph.kind == "tree":
        return lazy_regular_tree(spec.graph.d, root_degree=spec.graph.root_degree)
    return shared


def _pick_source(spec, g, rng):
    # Generated graphs carry the source at node 0; loaded snapshots get a
    # uniform random source per trial (drawn before any simulation draws).
    if spec.graph.kind == "file":
        return rng.randrange(g.node_count)
    return 0


def run_trial(spec, shared_graph, index):
    """One trial: (hit, strict_win or None, stop_time or None)."""
    rng = trial_stream(spec.master_seed, index)
    g = _trial_graph(spec, shared_graph)
    source = _pick_source(spec, g, rng)
    est = spec.estimator
    adv = spec.adversary

    if est == "first-timestamp" and adv.model == "eavesdropper" and adv.estimation_time is None:
        # Exact t = infinity shortcut: nothing after the first report can
        # change the argmin.
        res = first_report_trial(g, spec.params, rng, source=source)
        if not res.reporters:
            return (False, False, None)
        strict = res.reporters == frozenset([source])
        ordered = sorted(res.reporters)
        if len(ordered) == 1:
            hit = ordered[0] == source
        else:
            hit = ordered[rng.randrange(len(ordered))] == source
        return (hit, strict, res.time)

    if spec.params.protocol == "trickle":
        trace = simulate_trickle(g, spec.params, rng, source=source)
    else:
        trace = simulate_diffusion(g, spec.params, rng, source=source)
    t = adv.estimation_time if adv.estimation_time is not None else trace.stop_time

    if adv.model == "eavesdropper":
        keep_all = est == "timestamp-rumor-centrality"
        obs = observe_eavesdropper(trace, t, keep_all=keep_all)
        if est == "first-timestamp":
            if not obs.first_reports:
                return (False, False, trace.stop_time)
            result = first_timestamp(obs, rng)
            strict = result.candidates == frozenset([source])
            return (result.chosen == source, strict, trace.stop_time)
        if est == "ball-centrality":
            result = ball_centrality(obs, g, rng)
        elif est == "timestamp-rumor-centrality":
            result = timestamp_rumor_centrality(obs, g, int(t), rng,
                                                theta=spec.params.theta)
        else:
            result = reporting_centrality(obs, g, rng=rng)
        return (result.chosen == source, None, trace.stop_time)

    if adv.model == "spy":
        obs = observe_spy(trace, adv.p, t, rng)
        if not obs.spy_times:
            return (False, None, trace.stop_time)
        if est == "first-timestamp":
            result = spy_first_timestamp(obs, rng)
        else:
            result = reporting_centrality(obs, g, rng=rng)
        return (result.chosen == source, None, trace.stop_time)

    # snapshot + rumor-centers baseline
    obs = observe_snapshot(trace, t)
    centers = sorted(rumor_centers(g, obs.snapshot))
    chosen = centers[0] if len(centers) == 1 else centers[rng.randrange(len(centers))]
    return (chosen == source, None, trace.stop_time)


def _run_block(spec, lo, hi):
    shared = _build_graph(spec.graph, spec.master_seed)
    hits = strict = 0
    stop_sum = 0.0
    stop_n = 0
    for i in range(lo, hi):
        hit, s, stop = run_trial(spec, shared, i)
        hits += bool(hit)
        strict += bool(s)
        if stop is not None:
            stop_sum += stop
            stop_n += 1
    return hits, strict, stop_sum, stop_n


def run_experiment(spec):
    """Execute every trial of the spec and aggregate a DetectionReport."""
    t0 = time.perf_counter()
    if spec.workers > 1:
        chunk = max(1, math.ceil(spec.trials / spec.workers))
        bounds = [(lo, min(lo + chunk, spec.trials))
                  for lo in range(0, spec.trials, chunk)]
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            parts = list(pool.map(_run_block, [spec] * len(bounds),
                                  [b[0] for b in bounds], [b[1] for b in bounds]))
    else:
        parts = [_run_block(spec, 0, spec.trials)]
    hits = sum(p[0] for p in parts)
    strict = sum(p[1] for p in parts)
    stop_sum = sum(p[2] for p in parts)
    stop_n = sum(p[3] for p in parts)
    lo, hi = wilson_interval(hits, spec.trials)
    strict_rate = None
    if spec.estimator == "first-timestamp" and spec.params.protocol == "trickle":
        strict_rate = strict / spec.trials
    return DetectionReport(
        spec=spec,
        hits=hits,
        trials=spec.trials,
        p_hat=hits / spec.trials,
        ci_low=lo,
        ci_high=hi,
        strict_win_rate=strict_rate,
        theory=theory_overlay(spec),
        mean_stop_time=(stop_sum / stop_n) if stop_n else None,
        wall_time=time.perf_counter() - t0,
    )


def theory_overlay(spec):
    """Matching closed-form value, where one exists for the spec."""
    d = spec.graph.d
    theta = spec.params.theta
    est, adv, proto = spec.estimator, spec.adversary.model, spec.params.protocol
    try:
        if est == "first-timestamp" and adv == "eavesdropper":
            if proto == "diffusion" and d and d > 2:
                return analytics.diffusion_ft(d, theta).value
            if proto == "trickle" and d:
                return analytics.trickle_ft_lower_bound(d, theta).value
        if est == "first-timestamp" and adv == "spy":
            return analytics.spy_ft_bound(spec.adversary.p).value
        if est == "timestamp-rumor-centrality" and d:
            return analytics.trickle_ml_upper(d, theta).value
        if est == "ball-centrality" and d and spec.adversary.estimation_time:
            return analytics.trickle_ml_lower(d, theta, spec.adversary.estimation_time).value
        if est == "reporting-centrality" and d and d > 2:
            return analytics.reporting_centrality_constant(d).value
    except ValueError:
        return None
    return None


SWEEP_AXES = ("d", "theta", "t", "p", "trials")


def sweep(base, axis, values):
    """One report per axis value; theory overlay attached where applicable."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; valid: {SWEEP_AXES}")
    reports = []
    for value in values:
        reports.append(run_experiment(_with_axis(base, axis, value)))
    return reports


def _with_axis(spec, axis, value):
    if axis == "d":
        return replace(spec, graph=replace(spec.graph, d=int(value)))
    if axis == "theta":
        params = replace(spec, params=_params_with(spec.params, theta=value))
        return params
    if axis == "t":
        spec = replace(spec, adversary=replace(spec.adversary, estimation_time=value))
        return replace(spec, params=_params_with(spec.params, max_time=value))
    if axis == "p":
        return replace(spec, adversary=replace(spec.adversary, p=value))
    return replace(spec, trials=int(value))


def _params_with(params, **kw):
    merged = dict(
        protocol=params.protocol,
        theta=params.theta,
        lam=params.lam,
        max_time=params.max_time,
        max_infections=params.max_infections,
        seed=params.seed,
    )
    merged.update(kw)
    return SpreadParams(**merged)
