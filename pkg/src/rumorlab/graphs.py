"""Topology construction and the tree/graph queries the estimators need.

Two graph flavors share one read interface (``neighbors`` / ``degree`` /
``has_node``):

* ``ExplicitGraph``: finite simple undirected graph with dense node ids
  0..n-1, built by the generators here or ingested from an edge-list file.
* ``LazyRegularTree``: an infinite d-regular tree materialized on first
  access.  Simulations on "infinite" trees touch only the nodes the spread
  reaches, so no truncation bias enters at the boundary.  Materialization is
  purely additive: expanding a node never changes existing structure.

Explicit graphs are immutable after construction and safe to share across
threads/processes.  Lazy trees mutate on materialization; each Monte Carlo
trial owns a private instance.
"""

from collections import deque
import math

INFINITY = math.inf


class ExplicitGraph:
    """Simple undirected graph over node ids 0..node_count-1.

    ``node_labels``, when present, maps the dense ids back to the original
    labels of an ingested edge list (index i holds the original id of node i).
    """

    kind = "explicit"
    is_lazy = False

    def __init__(self, adjacency, degree_hint=None, node_labels=None):
        self._adj = [sorted(set(nbrs)) for nbrs in adjacency]
        self.degree_hint = degree_hint
        self.node_labels = node_labels
        for v, nbrs in enumerate(self._adj):
            for u in nbrs:
                if u == v:
                    raise ValueError(f"self-loop at node {v}")
                if not 0 <= u < len(self._adj):
                    raise ValueError(f"edge {v}-{u} leaves the node range")
                if v not in self._adj[u]:
                    raise ValueError(f"adjacency not symmetric at edge {v}-{u}")

    @property
    def node_count(self):
        return len(self._adj)

    def nodes(self):
        return range(len(self._adj))

    def has_node(self, v):
        return 0 <= v < len(self._adj)

    def neighbors(self, v):
        if not self.has_node(v):
            raise ValueError(f"unknown node {v}")
        return self._adj[v]

    def degree(self, v):
        return len(self.neighbors(v))

    def edge_count(self):
        return sum(len(n) for n in self._adj) // 2

    def edges(self):
        for v, nbrs in enumerate(self._adj):
            for u in nbrs:
                if v < u:
                    yield (v, u)


class LazyRegularTree:
    """Infinite d-regular tree, grown on demand from root node 0.

    ``neighbors(v)`` materializes v's missing children with fresh ids, so the
    first call and every later call return the same list.  Parent pointers and
    depths are kept for O(depth) hop-distance and path queries.

    ``root_degree`` (default d) gives the root a different number of
    neighbors while every other node keeps degree d.  root_degree = d - 2 is
    the setting solved exactly by the diffusion first-timestamp closed form.
    """

    kind = "lazy_regular_tree"
    is_lazy = True

    def __init__(self, d, root_degree=None):
        if d < 2:
            raise ValueError(f"regular tree degree must be >= 2, got {d}")
        if root_degree is None:
            root_degree = d
        if root_degree < 1:
            raise ValueError(f"root degree must be >= 1, got {root_degree}")
        self.d = d
        self.root_degree = root_degree
        self.degree_hint = d
        self._adj = {0: []}
        self._parent = {0: None}
        self._depth = {0: 0}
        self._next_id = 1

    def has_node(self, v):
        return v in self._adj

    def materialized_nodes(self):
        return self._adj.keys()

    @property
    def node_count(self):
        return len(self._adj)

    def neighbors(self, v):
        if v not in self._adj:
            raise ValueError(f"unknown node {v}")
        nbrs = self._adj[v]
        want = self.root_degree if v == 0 else self.d
        while len(nbrs) < want:
            child = self._next_id
            self._next_id += 1
            self._adj[child] = [v]
            self._parent[child] = v
            self._depth[child] = self._depth[v] + 1
            nbrs.append(child)
        return nbrs

    def degree(self, v):
        if v not in self._adj:
            raise ValueError(f"unknown node {v}")
        return self.root_degree if v == 0 else self.d

    def parent_of(self, v):
        if v not in self._parent:
            raise ValueError(f"unknown node {v}")
        return self._parent[v]

    def depth_of(self, v):
        if v not in self._depth:
            raise ValueError(f"unknown node {v}")
        return self._depth[v]


def build_regular_tree(d, depth):
    """Balanced d-regular tree: root 0, every node at hop < depth has degree d.

    Node ids are assigned in BFS order, so hop distance from the root is
    nondecreasing in id.  Node count is 1 + d * sum((d-1)**k, k < depth).
    """
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    adjacency = [[]]
    frontier = [0]
    levels = {0: 0}
    for level in range(depth):
        next_frontier = []
        for v in frontier:
            want = d if level == 0 else d - 1
            for _ in range(want):
                child = len(adjacency)
                adjacency.append([v])
                adjacency[v].append(child)
                levels[child] = level + 1
                next_frontier.append(child)
        frontier = next_frontier
    return ExplicitGraph(adjacency, degree_hint=d)


def lazy_regular_tree(d, root_degree=None):
    """Infinite d-regular tree realized lazily (see LazyRegularTree)."""
    return LazyRegularTree(d, root_degree=root_degree)


def build_random_regular(n, d, seed, max_tries=100):
    """Random simple d-regular graph on n nodes via the configuration model.

    Stubs are paired uniformly; valid (simple, non-loop) pairs are kept and
    clashed stubs are re-shuffled until none remain, restarting from scratch
    when no suitable pairing can exist.  Deterministic given ``seed``.
    Asymptotically uniform for d much smaller than n.
    """
    import random as _random

    if n <= 0 or d < 0:
        raise ValueError(f"need n > 0 and d >= 0, got n={n}, d={d}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    if d >= n:
        raise ValueError(f"need d < n, got n={n}, d={d}")
    rng = _random.Random(seed)

    def suitable(edges, leftover):
        # True if some pair of leftover stubs can still form a fresh edge.
        if not leftover:
            return True
        nodes = sorted(leftover)
        for i, s1 in enumerate(nodes):
            for s2 in nodes[i + 1:]:
                if (s1, s2) not in edges:
                    return True
        return False

    def try_creation():
        edges = set()
        stubs = list(range(n)) * d
        while stubs:
            leftover = {}
            rng.shuffle(stubs)
            it = iter(stubs)
            for s1, s2 in zip(it, it):
                if s1 > s2:
                    s1, s2 = s2, s1
                if s1 != s2 and (s1, s2) not in edges:
                    edges.add((s1, s2))
                else:
                    leftover[s1] = leftover.get(s1, 0) + 1
                    leftover[s2] = leftover.get(s2, 0) + 1
            if not suitable(edges, leftover):
                return None
            stubs = [v for v, c in leftover.items() for _ in range(c)]
        return edges

    for _ in range(max_tries):
        edges = try_creation()
        if edges is not None:
            adjacency = [[] for _ in range(n)]
            for u, v in edges:
                adjacency[u].append(v)
                adjacency[v].append(u)
            return ExplicitGraph(adjacency, degree_hint=d)
    raise RuntimeError(
        f"configuration model failed for n={n}, d={d} after {max_tries} restarts"
    )


def load_edge_list(path):
    """Ingest a whitespace-separated edge list into an ExplicitGraph.

    One edge per line, two non-negative integers; '#' lines are comments and
    blank lines are skipped.  Duplicate edges collapse; self-loops are an
    error.  Sparse ids are remapped to dense 0..n-1 (the mapping is kept in
    ``node_labels``).  Disconnected graphs are accepted.
    """
    edges = set()
    ids = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(
                    f"{path}:{lineno}: expected two fields, got {len(parts)}"
                )
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer node id") from None
            if u < 0 or v < 0:
                raise ValueError(f"{path}:{lineno}: negative node id")
            if u == v:
                raise ValueError(f"{path}:{lineno}: self-loop at node {u}")
            ids.add(u)
            ids.add(v)
            edges.add((min(u, v), max(u, v)))
    if not ids:
        raise ValueError(f"{path}: empty edge list")
    labels = sorted(ids)
    remap = {orig: i for i, orig in enumerate(labels)}
    adjacency = [[] for _ in labels]
    for u, v in edges:
        adjacency[remap[u]].append(remap[v])
        adjacency[remap[v]].append(remap[u])
    return ExplicitGraph(adjacency, node_labels=labels)


def hop_distance(g, u, v):
    """BFS hop count between u and v; INFINITY if disconnected."""
    if not g.has_node(u) or not g.has_node(v):
        raise ValueError(f"unknown node in pair ({u}, {v})")
    if u == v:
        return 0
    if g.is_lazy:
        # Walk the deeper endpoint up to the common ancestor.
        du, dv = g.depth_of(u), g.depth_of(v)
        dist = 0
        while du > dv:
            u = g.parent_of(u)
            du -= 1
            dist += 1
        while dv > du:
            v = g.parent_of(v)
            dv -= 1
            dist += 1
        while u != v:
            u = g.parent_of(u)
            v = g.parent_of(v)
            dist += 2
        return dist
    seen = {u}
    frontier = deque([(u, 0)])
    while frontier:
        w, dist = frontier.popleft()
        for x in g.neighbors(w):
            if x == v:
                return dist + 1
            if x not in seen:
                seen.add(x)
                frontier.append((x, dist + 1))
    return INFINITY


def tree_path(g, u, v):
    """Node sequence of the unique u..v path in a tree graph."""
    if g.is_lazy:
        up, vp = [u], [v]
        du, dv = g.depth_of(u), g.depth_of(v)
        while du > dv:
            up.append(g.parent_of(up[-1]))
            du -= 1
        while dv > du:
            vp.append(g.parent_of(vp[-1]))
            dv -= 1
        while up[-1] != vp[-1]:
            up.append(g.parent_of(up[-1]))
            vp.append(g.parent_of(vp[-1]))
        return up + vp[-2::-1]
    # BFS parents from u, then walk back from v.
    parent = {u: None}
    frontier = deque([u])
    while frontier and v not in parent:
        w = frontier.popleft()
        for x in g.neighbors(w):
            if x not in parent:
                parent[x] = w
                frontier.append(x)
    if v not in parent:
        raise ValueError(f"nodes {u} and {v} are disconnected")
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def subtree_partition(g, root, nodes=None):
    """Label every node (except root) with the root-neighbor subtree it is in.

    ``nodes`` restricts the walk (defaults to all nodes of an explicit graph,
    or to the materialized nodes of a lazy tree).  Raises if the restriction
    is not a tree containing root.
    """
    if nodes is None:
        universe = set(g.nodes()) if not g.is_lazy else set(g.materialized_nodes())
    else:
        universe = set(nodes)
    if root not in universe:
        raise ValueError(f"root {root} not among supplied nodes")
    labels = {}
    parent = {root: None}
    frontier = deque([root])
    while frontier:
        w = frontier.popleft()
        for x in g.neighbors(w):
            if x not in universe or x == parent[w]:
                continue
            if x in parent:
                raise ValueError("cycle detected: input is not a tree")
            parent[x] = w
            labels[x] = x if w == root else labels[w]
            frontier.append(x)
    if len(parent) != len(universe):
        raise ValueError("supplied nodes are not connected through root")
    return labels
