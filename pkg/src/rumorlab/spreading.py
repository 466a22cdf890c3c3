"""Forward simulation of trickle and diffusion broadcasts.

Trickle is a synchronous discrete-time gossip: on infection a node draws one
uniform permutation of its uninfected connections (uninfected honest
neighbors plus its theta adversary taps) and transmits to one connection per
step, starting the step after it was infected.  Diffusion is the
continuous-time SI process: every edge relays after an independent Exp(lam)
delay, and each node's first adversary report fires after Exp(theta) (the
minimum of theta unit-rate taps; one draw is distributionally identical and
cheaper).

The ground truth lives in a SpreadTrace: per-node infection times X, per-node
adversary report times, infection parents, and the realized horizon.
Adversary models are applied afterwards (see rumorlab.adversary) so a single
trace can feed several observers.

Reproducibility: a simulation owns its rng stream; the harness derives one
stream per trial from (master_seed, trial_index) with trial_stream(), so
results do not depend on scheduling or worker count.
"""

import math
import random
from dataclasses import dataclass, field
from heapq import heappush, heappop

_MASK64 = (1 << 64) - 1

# Adversary-tap slot marker inside trickle permutations.
TAP = "tap"


def trial_stream(master_seed, trial_index):
    """Independent per-trial stream: trial index mixed into the master seed."""
    return random.Random(((master_seed & _MASK64) << 64) | (trial_index & _MASK64))


@dataclass
class SpreadParams:
    """Knobs for one spreading run.

    theta is an integer tap count for trickle (>= 1) and a real report rate
    for diffusion (> 0); lam is the diffusion relay rate.  The horizon is
    max_time, max_infections, or neither (run to exhaustion on finite graphs).
    """

    protocol: str
    theta: float = 1
    lam: float = 1.0
    max_time: float | None = None
    max_infections: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.protocol not in ("trickle", "diffusion"):
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.protocol == "trickle":
            if self.theta != int(self.theta) or self.theta < 1:
                raise ValueError(f"trickle needs integer theta >= 1, got {self.theta}")
            self.theta = int(self.theta)
        else:
            if self.theta <= 0:
                raise ValueError(f"diffusion needs theta > 0, got {self.theta}")
            if self.lam <= 0:
                raise ValueError(f"diffusion needs lam > 0, got {self.lam}")
        if self.max_time is not None and self.max_time < 0:
            raise ValueError("max_time must be >= 0")
        if self.max_infections is not None and self.max_infections < 1:
            raise ValueError("max_infections must be >= 1")


@dataclass
class SpreadTrace:
    protocol: str
    source: int
    X: dict
    reports: dict
    parent: dict
    infected_order: list
    stop_time: float
    skipped: int = 0  # trickle slots spent on already-infected targets


@dataclass(frozen=True)
class FirstReport:
    """All nodes achieving the minimal adversary report time (trickle can
    tie; diffusion ties have probability zero), or an explicit no-report."""

    reporters: frozenset
    time: float | None


def _trickle_slots(g, v, infected, theta, rng):
    pool = [u for u in g.neighbors(v) if u not in infected]
    pool.extend([TAP] * theta)
    rng.shuffle(pool)
    return pool


def simulate_trickle(g, params, rng, source=0):
    """Discrete-time trickle from ``source`` (node 0 on generated graphs).

    Each infected node holds a permutation of its infection-time uninfected
    connections and serves one per step.  On non-tree graphs a slot aimed at a
    meanwhile-infected neighbor is consumed without effect (tallied in
    ``skipped``).  Taps append to the node's report list; the first entry is
    the eavesdropper timestamp tau_v.
    """
    if params.protocol != "trickle":
        raise ValueError(f"simulate_trickle got protocol {params.protocol!r}")
    theta = params.theta
    max_time = params.max_time if params.max_time is not None else math.inf
    max_inf = params.max_infections

    X = {source: 0}
    parent = {source: None}
    reports = {}
    order = [source]
    skipped = 0
    queues = {source: (_trickle_slots(g, source, X, theta, rng), 0)}
    active = [source]
    step = 0
    stop = max_inf is not None and len(X) >= max_inf
    while active and not stop and step + 1 <= max_time:
        step += 1
        newly = []
        still_active = []
        for v in active:
            pool, pos = queues[v]
            target = pool[pos]
            pos += 1
            if pos < len(pool):
                queues[v] = (pool, pos)
                still_active.append(v)
            else:
                del queues[v]
            if target is TAP:
                reports.setdefault(v, []).append(step)
            elif target not in X:
                X[target] = step
                parent[target] = v
                order.append(target)
                newly.append(target)
                if max_inf is not None and len(X) >= max_inf:
                    stop = True
            else:
                skipped += 1
        for w in newly:
            queues[w] = (_trickle_slots(g, w, X, theta, rng), 0)
        active = still_active + newly

    if max_inf is not None and len(X) >= max_inf:
        stop_time = step
    elif params.max_time is not None:
        stop_time = params.max_time
    else:
        stop_time = step
    return SpreadTrace("trickle", source, X, reports, parent, order, stop_time,
                       skipped=skipped)


def simulate_diffusion(g, params, rng, source=0):
    """Event-driven diffusion from ``source``.

    On infection at X_v, node v schedules one report event at X_v + Exp(theta)
    followed by one infection event per currently-uninfected neighbor at
    X_v + Exp(lam), in adjacency order (the order fixes the stream layout).
    Infection events landing on already-infected nodes are discarded.
    """
    if params.protocol != "diffusion":
        raise ValueError(f"simulate_diffusion got protocol {params.protocol!r}")
    theta, lam = params.theta, params.lam
    max_time = params.max_time if params.max_time is not None else math.inf
    max_inf = params.max_infections

    X = {}
    parent = {}
    reports = {}
    order = []
    heap = []
    seq = 0
    heappush(heap, (0.0, seq, "infect", source, None))
    stop_time = 0.0
    while heap:
        t, _, kind, node, par = heappop(heap)
        if t > max_time:
            stop_time = max_time
            break
        if kind == "infect":
            if node in X:
                continue
            X[node] = t
            parent[node] = par
            order.append(node)
            stop_time = t
            if max_inf is not None and len(X) >= max_inf:
                break
            seq += 1
            heappush(heap, (t + rng.expovariate(theta), seq, "report", node, None))
            for u in g.neighbors(node):
                if u not in X:
                    seq += 1
                    heappush(heap, (t + rng.expovariate(lam), seq, "infect", u, node))
        else:
            reports.setdefault(node, []).append(t)
            stop_time = t
    if params.max_time is not None and not (max_inf is not None and len(X) >= max_inf):
        # Horizon is wall-clock unless the infection budget fired first.
        stop_time = params.max_time
    return SpreadTrace("diffusion", source, X, reports, parent, order, stop_time)


def first_report_trial(g, params, rng, source=0):
    """Run only until the earliest adversary report and return the tying set.

    Later events cannot change the minimum, so this is exact for the
    t = infinity first-timestamp experiment while touching a tiny prefix of
    the spread.  A finite horizon with no report yields an explicit
    FirstReport(frozenset(), None).
    """
    if params.protocol == "trickle":
        return _first_report_trickle(g, params, rng, source)
    return _first_report_diffusion(g, params, rng, source)


def _first_report_trickle(g, params, rng, source):
    theta = params.theta
    max_time = params.max_time if params.max_time is not None else math.inf
    X = {source: 0}
    queues = {source: (_trickle_slots(g, source, X, theta, rng), 0)}
    active = [source]
    step = 0
    while active and step + 1 <= max_time:
        step += 1
        reporters = []
        newly = []
        still_active = []
        for v in active:
            pool, pos = queues[v]
            target = pool[pos]
            pos += 1
            if pos < len(pool):
                queues[v] = (pool, pos)
                still_active.append(v)
            if target is TAP:
                reporters.append(v)
            elif target not in X:
                X[target] = step
                newly.append(target)
        if reporters:
            return FirstReport(frozenset(reporters), step)
        for w in newly:
            queues[w] = (_trickle_slots(g, w, X, theta, rng), 0)
        active = still_active + newly
    return FirstReport(frozenset(), None)


def _first_report_diffusion(g, params, rng, source):
    theta, lam = params.theta, params.lam
    max_time = params.max_time if params.max_time is not None else math.inf
    X = {}
    heap = [(0.0, 0, "infect", source)]
    seq = 0
    while heap:
        t, _, kind, node = heappop(heap)
        if t > max_time:
            break
        if kind == "report":
            return FirstReport(frozenset([node]), t)
        if node in X:
            continue
        X[node] = t
        seq += 1
        heappush(heap, (t + rng.expovariate(theta), seq, "report", node))
        for u in g.neighbors(node):
            if u not in X:
                seq += 1
                heappush(heap, (t + rng.expovariate(lam), seq, "infect", u))
    return FirstReport(frozenset(), None)


def trace_to_csv(trace):
    """One record per infected node: node, X, first_report_time, parent.

    Diffusion times carry 9 significant digits; trickle times print as
    integers.  Nodes appear in infection order.
    """
    diffusion = trace.protocol == "diffusion"

    def fmt(t):
        if t is None:
            return ""
        return f"{t:.9g}" if diffusion else str(int(t))

    lines = ["node,X,first_report_time,parent"]
    for v in trace.infected_order:
        first = min(trace.reports[v]) if v in trace.reports else None
        par = trace.parent[v]
        lines.append(
            f"{v},{fmt(trace.X[v])},{fmt(first)},{'' if par is None else par}"
        )
    return "\n".join(lines) + "\n"
