"""Timestamp rumor centrality: exact feasible-ordering counts for trickle.

For each candidate source the estimator counts the trickle executions through
estimation time t that reproduce every observed tap time.  On regular trees
all feasible executions of a fixed observation are equally likely, so the
count is proportional to the likelihood and its argmax is the ML estimate.

Counting is two-phase message passing on the tree rooted at the candidate:
downward, each node's feasible infection times are those reachable from the
parent's slot windows minus conflicts with its own observed taps; upward,
each node combines its children's counts over one slot window.

A node infected at time x with c children (on the rooted tree) and theta taps
owns slots x+1 .. x+c+theta, serves one per step, and stops at t.  A feasible
configuration is an injective assignment of the realized slot times
{x+1 .. min(x+c+theta, t)} to distinct targets in which every observed tap of
the node sits at its reported time, unobserved taps land past t, and each
slot given to a child y recursively admits count(child, y) configurations.
Subtrees containing no observed node collapse to a count depending only on
the infection time, which keeps the pass linear in the observed skeleton
rather than in the radius-t ball.

Candidates are the observed nodes whose first report is at most d+theta (the
source's tap must land within its own d+theta slots), prefiltered by the
ball-intersection feasibility test, which never discards a positive-count
candidate.  Cost grows like (2d)^d per candidate, so degrees above 6 are
refused unless explicitly allowed.
"""

from itertools import permutations

from .estimators import EstimateResult, InfeasibleObservationError, _pick_uniform
from .graphs import hop_distance, tree_path


def timestamp_rumor_centrality(obs, g, t, rng=None, theta=1,
                               allow_high_degree=False):
    """ML source estimate for a trickle eavesdropper observation.

    Needs keep_all report times and t >= d + theta.  Returns the argmax set
    of ordering counts with a uniform pick, and the per-candidate counts as
    the score map.
    """
    if obs.variant != "eavesdropper":
        raise ValueError("timestamp rumor centrality needs an eavesdropper observation")
    if obs.all_reports is None:
        raise ValueError("timestamp rumor centrality needs keep_all report times")
    if theta != int(theta) or theta < 1:
        raise ValueError(f"need integer theta >= 1, got {theta}")
    theta = int(theta)
    d = _infer_degree(g, obs)
    if d > 6 and not allow_high_degree:
        raise ValueError(
            f"degree {d} exceeds the default guardrail (cost ~ (2d)^d); "
            "pass allow_high_degree=True to override"
        )
    if t != int(t) or t < d + theta:
        raise ValueError(f"need integer t >= d + theta = {d + theta}, got {t}")
    t = int(t)
    reports = {}
    for v, times in obs.all_reports.items():
        clean = tuple(sorted(times))
        if any(x != int(x) for x in clean):
            raise ValueError(f"non-integer trickle report times at node {v}")
        clean = tuple(int(x) for x in clean)
        if clean and clean[-1] > t:
            raise ValueError(f"report past estimation time at node {v}")
        if len(clean) > theta:
            raise ValueError(f"node {v} shows {len(clean)} taps but theta={theta}")
        if clean:
            reports[v] = clean
    if not reports:
        raise InfeasibleObservationError("no reports to estimate from")

    candidates = [v for v, tau in obs.first_reports.items() if tau <= d + theta]
    scores = {}
    for v in candidates:
        if _ball_feasible(g, v, obs.first_reports):
            scores[v] = ordering_count(g, v, reports, t, theta)
        else:
            scores[v] = 0
    best = max(scores.values(), default=0)
    if best <= 0:
        raise InfeasibleObservationError(
            "no candidate source admits a feasible ordering"
        )
    ties = frozenset(v for v, s in scores.items() if s == best)
    return EstimateResult(
        _pick_uniform(ties, rng), ties, "timestamp_rumor_centrality", score=scores
    )


def _infer_degree(g, obs):
    if g.degree_hint is not None:
        return g.degree_hint
    return max(g.degree(v) for v in obs.first_reports)


def _ball_feasible(g, v, first_reports):
    # Sound prefilter: any feasible source sits within tau_w - 1 hops of
    # every reporter w (X_w >= hop, first tap >= X_w + 1).
    return all(hop_distance(g, v, w) <= tau - 1 for w, tau in first_reports.items())


def ordering_count(g, root, reports, t, theta=1):
    """Exact number of feasible trickle executions through time t with source
    ``root`` matching ``reports`` (node -> sorted tuple of tap times <= t).
    """
    parent = {root: None}
    children = {root: []}
    for w in reports:
        if w == root:
            continue
        path = tree_path(g, root, w)
        for a, b in zip(path, path[1:]):
            if b not in parent:
                parent[b] = a
                children[b] = []
                children[a].append(b)

    if g.is_lazy:
        if g.root_degree != g.d:
            # A modified-degree root could land inside an "unobserved subtree",
            # where the closed-form count assumes full regularity.
            raise ValueError("ordering counts need an unmodified regular tree")
        fresh = _RegularFresh(g.degree_hint, theta, t)
    else:
        fresh = _ExplicitFresh(g, theta, t)

    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(children[v])

    tables = {}
    for w in reversed(order):
        tables[w] = _node_table(g, w, parent[w], children[w], reports.get(w, ()),
                                tables, fresh, t, theta, is_root=(w == root))
    return tables[root].get(0, 0)


def _node_table(g, w, par, skel_kids, R, tables, fresh, t, theta, is_root):
    """count[x] over feasible infection times x for skeleton node w."""
    child_count = g.degree(w) - (0 if is_root else 1)
    k = child_count + theta
    hidden = theta - len(R)

    if is_root:
        xs = [0]
    elif R:
        # Taps live in the slot window: R[-1] <= x + k and R[0] >= x + 1.
        xs = range(max(1, R[-1] - k), R[0])
    else:
        # Unobserved: all theta taps must hide past t, so t - x <= k - theta.
        xs = range(max(1, t - child_count), t + 1)

    table = {}
    for x in xs:
        if x > t:
            continue
        e = min(x + k, t)
        if hidden > k - (e - x):
            continue  # not enough unrealized slots to hide the unseen taps
        if R and (R[0] <= x or R[-1] > x + k):
            continue
        R_set = set(R)
        child_times = [y for y in range(x + 1, e + 1) if y not in R_set]
        if len(child_times) < len(skel_kids):
            continue
        count = _assign(g, w, par, child_times, skel_kids, tables, fresh,
                        child_count)
        if count:
            table[x] = count
    return table


def _assign(g, w, par, child_times, skel_kids, tables, fresh, child_count):
    """Sum over injective assignments of all of child_times onto distinct
    children, with every skeleton child covered.  Children outside the
    skeleton score via the unobserved-subtree count."""
    n_fresh = child_count - len(skel_kids)
    if g.is_lazy:
        # Fresh children of one node are exchangeable on the regular tree.
        total = 0
        for assn in permutations(child_times, len(skel_kids)):
            prod = 1
            for c, y in zip(skel_kids, assn):
                prod *= tables[c].get(y, 0)
                if not prod:
                    break
            if not prod:
                continue
            rest = [y for y in child_times if y not in assn]
            if len(rest) > n_fresh:
                continue
            ways = _falling(n_fresh, len(rest))
            for y in rest:
                ways *= fresh.count(None, None, y)
                if not ways:
                    break
            total += prod * ways
        return total

    # Explicit graph: fresh subtrees are heterogeneous; bitmask DP over the
    # actual children with per-child weights.
    skel_set = set(skel_kids)
    kids = list(skel_kids) + [u for u in g.neighbors(w)
                              if u != par and u not in skel_set]
    mandatory = (1 << len(skel_kids)) - 1
    dp = {0: 1}
    for y in child_times:
        ndp = {}
        for mask, val in dp.items():
            for i, c in enumerate(kids):
                if mask >> i & 1:
                    continue
                wgt = (tables[c].get(y, 0) if i < len(skel_kids)
                       else fresh.count(c, w, y))
                if wgt:
                    nm = mask | (1 << i)
                    ndp[nm] = ndp.get(nm, 0) + val * wgt
        dp = ndp
        if not dp:
            return 0
    return sum(v for m, v in dp.items() if m & mandatory == mandatory)


def _falling(n, r):
    out = 1
    for i in range(r):
        out *= n - i
    return out


class _RegularFresh:
    """Execution count of a fully unobserved subtree of the infinite
    d-regular tree, as a function of the subtree root's infection time x:
    0 unless t - x <= d - 1 (else some tap fires by t), otherwise the
    realized times x+1..t map injectively onto the d-1 fresh children."""

    def __init__(self, d, theta, t):
        self.d = d
        self.t = t
        self._memo = {}

    def count(self, _node, _par, x):
        t, d = self.t, self.d
        if x >= t:
            return 1 if x == t else 0
        got = self._memo.get(x)
        if got is not None:
            return got
        if t - x > d - 1:
            out = 0
        else:
            out = _falling(d - 1, t - x)
            for y in range(x + 1, t + 1):
                out *= self.count(None, None, y)
                if not out:
                    break
        self._memo[x] = out
        return out


class _ExplicitFresh:
    """Same count on an explicit tree, where fresh subtrees differ in shape
    (finite branches, leaves): injective-assignment DP over actual children."""

    def __init__(self, g, theta, t):
        self.g = g
        self.theta = theta
        self.t = t
        self._memo = {}

    def count(self, node, par, x):
        t = self.t
        if x >= t:
            return 1 if x == t else 0
        key = (node, par, x)
        got = self._memo.get(key)
        if got is not None:
            return got
        children = [u for u in self.g.neighbors(node) if u != par]
        k = len(children) + self.theta
        if self.theta > k - (t - x):
            out = 0  # a tap would be forced to fire by t
        else:
            dp = {0: 1}
            for y in range(x + 1, t + 1):
                ndp = {}
                for mask, val in dp.items():
                    for i, c in enumerate(children):
                        if mask >> i & 1:
                            continue
                        wgt = self.count(c, node, y)
                        if wgt:
                            nm = mask | (1 << i)
                            ndp[nm] = ndp.get(nm, 0) + val * wgt
                dp = ndp
                if not dp:
                    break
            out = sum(dp.values())
        self._memo[key] = out
        return out
