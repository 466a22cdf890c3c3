"""Project a ground-truth SpreadTrace onto what each adversary actually sees.

Three observers:

* eavesdropper: theta taps per server; sees each node's first report time
  tau_v (and, with keep_all, every tap time, which timestamp rumor centrality
  needs).  A deterministic pure filter of the trace.
* spy: every infected non-source node is independently corrupted with
  probability p; a spy leaks its exact infection time and the neighbor that
  relayed to it.  Spies are re-sampled per trial from the supplied stream.
* snapshot: the infected set {v : X_v <= T}, nothing else.

``observed_until`` rides along inside the Observation so estimators can never
peek past the estimation time.
"""

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Observation:
    variant: str
    observed_until: float
    first_reports: dict | None = None      # eavesdropper: node -> tau_v
    all_reports: dict | None = None        # eavesdropper keep_all: node -> tuple of tap times
    spy_times: dict | None = None          # spy: node -> exact X_s
    spy_infectors: dict | None = None      # spy: node -> relaying neighbor
    snapshot: frozenset | None = None      # snapshot: infected set at T


def observe_eavesdropper(trace, t=math.inf, keep_all=False):
    """Report times filtered to <= t; keep_all retains all theta tap times."""
    if t < 0:
        raise ValueError("estimation time must be >= 0")
    first = {}
    full = {}
    for v, times in trace.reports.items():
        seen = [x for x in times if x <= t]
        if not seen:
            continue
        first[v] = min(seen)
        if keep_all:
            full[v] = tuple(sorted(seen))
    return Observation(
        "eavesdropper",
        observed_until=t,
        first_reports=first,
        all_reports=full if keep_all else None,
    )


def observe_spy(trace, p, t=math.inf, rng=None):
    """Independent corruption of infected non-source nodes with probability p."""
    if not 0 <= p <= 1:
        raise ValueError(f"spy probability must be in [0, 1], got {p}")
    if rng is None and p not in (0, 1):
        raise ValueError("spy sampling needs an rng stream")
    times = {}
    infectors = {}
    for v in trace.infected_order:
        if v == trace.source or trace.X[v] > t:
            continue
        if p == 1 or (p > 0 and rng.random() < p):
            times[v] = trace.X[v]
            infectors[v] = trace.parent[v]
    return Observation(
        "spy", observed_until=t, spy_times=times, spy_infectors=infectors
    )


def observe_snapshot(trace, T):
    """Infected node set at time T, no timestamps."""
    if T < 0:
        raise ValueError("snapshot time must be >= 0")
    return Observation(
        "snapshot",
        observed_until=T,
        snapshot=frozenset(v for v, x in trace.X.items() if x <= T),
    )
