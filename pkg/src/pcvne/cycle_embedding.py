"""Optimal one-direction embedding of cycle requests onto a substrate ring.

The solver builds, for every feasible anchor node and both traversal
directions, a layered weighted digraph whose vertices are the feasible host
nodes of each virtual node and whose arcs connect hosts that are compatible
in ring order with a bandwidth-feasible connecting segment. Directed cycles
through the anchor vertex correspond exactly to feasible one-direction
embeddings, and arc weights are chosen so that cycle weight equals total
bandwidth consumption. A layer-by-layer dynamic program extracts the minimum
weight cycle; the cheapest over all anchors and directions is the answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import (
    Embedding,
    EmbeddingBatch,
    ModelError,
    Shape,
    commit,
    edge_key,
)

CLOCKWISE = "+"
ANTICLOCKWISE = "-"
DIRECTIONS = (CLOCKWISE, ANTICLOCKWISE)


class CycleView:
    """Cyclic ordering of a substrate network that is a simple ring.

    The canonical orientation starts at the minimum node id and proceeds
    toward its smaller neighbor; "+" follows that stored order, "-" reverses
    it. Both directions are explored by the solver, so the canonical choice
    never affects results.
    """

    def __init__(self, net):
        if len(net.nodes) < 3 or len(net.edges) != len(net.nodes):
            raise ModelError("substrate is not a cycle")
        for v in net.nodes:
            if net.degree(v) != 2:
                raise ModelError(f"substrate is not a cycle: degree {net.degree(v)} at {v!r}")
        self.net = net
        start = min(net.nodes)
        order = [start, min(net.neighbors(start))]
        while len(order) < len(net.nodes):
            prev, cur = order[-2], order[-1]
            a, b = net.neighbors(cur)
            order.append(b if a == prev else a)
        self.order = order
        self.index = {v: i for i, v in enumerate(order)}
        self.m = len(order)

    def seq_pos(self, start, direction, node):
        """Position of `node` in the SN sequence anchored at `start` following
        `direction` (start itself has position 0)."""
        delta = self.index[node] - self.index[start]
        if direction == ANTICLOCKWISE:
            delta = -delta
        return delta % self.m

    def node_at(self, start, direction, pos):
        step = pos if direction == CLOCKWISE else -pos
        return self.order[(self.index[start] + step) % self.m]

    def segment_edges(self, start_node, hops, direction):
        """The SLs crossed by walking `hops` steps from `start_node`."""
        i = self.index[start_node]
        step = 1 if direction == CLOCKWISE else -1
        edges = []
        for t in range(hops):
            a = self.order[(i + step * t) % self.m]
            b = self.order[(i + step * (t + 1)) % self.m]
            edges.append(edge_key(a, b))
        return edges


@dataclass
class FeasibleSets:
    """Per-VN feasible host SNs and per-VL feasible SLs, from residuals."""

    vn_sets: list   # list of sets of SNs, one per VN in request order
    vl_sets: list   # list of sets of SL keys, one per VL in request order


def feasible_sets(net, req):
    vn_sets = [
        {v for v in net.nodes if net.residual_cpu[v] >= req.cpu_demand[vn]}
        for vn in req.vns
    ]
    vl_sets = [
        {k for k in net.edges if net.residual_bw[k] >= req.bw_demand[vl]}
        for vl in req.vls
    ]
    return FeasibleSets(vn_sets, vl_sets)


@dataclass
class Wdag:
    """Layered weighted digraph for one (anchor SN, direction) pair.

    `layers[j]` lists the SNs hosting layer-j vertices (layer 0 is the
    singleton anchor). `arcs[(j, sn)]` holds (head_sn, weight, hops) triples
    into layer j+1; `closing[sn]` holds the (weight, hops) of the wrap-around
    arc from a final-layer vertex back to the anchor. A vertex is identified
    by its (layer, sn) pair; the SN is its host under the vertex-to-SN map.
    """

    start: object
    direction: str
    m: int
    n: int
    layers: list
    arcs: dict = field(default_factory=dict)
    closing: dict = field(default_factory=dict)
    complete: bool = True  # False when construction died at an empty frontier

    def arc_count(self):
        return sum(len(v) for v in self.arcs.values()) + len(self.closing)

    def max_layer_size(self):
        return max((len(l) for l in self.layers), default=0)

    def to_json(self):
        return {
            "start": self.start,
            "direction": self.direction,
            "layers": [list(l) for l in self.layers],
            "arcs": [
                {"tail": [j, sn], "head": [j + 1, head], "weight": str(w), "hops": h}
                for (j, sn), outs in sorted(self.arcs.items(), key=lambda kv: (kv[0][0], repr(kv[0][1])))
                for head, w, h in outs
            ],
            "closing": [
                {"tail": [self.n - 1, sn], "head": [0, self.start], "weight": str(w), "hops": h}
                for sn, (w, h) in sorted(self.closing.items(), key=lambda kv: repr(kv[0]))
            ],
        }


class _SegmentOracle:
    """Constant-time feasibility queries for directed ring segments.

    For each VL a prefix count of infeasible SLs along the doubled clockwise
    edge sequence; a directed segment is feasible iff its clockwise index
    range contains no infeasible SL.
    """

    def __init__(self, cycle, fs):
        m = cycle.m
        self.m = m
        self.bad_prefix = []
        for vl_ok in fs.vl_sets:
            bad = [0] * (2 * m + 1)
            for t in range(2 * m):
                e = edge_key(cycle.order[t % m], cycle.order[(t + 1) % m])
                bad[t + 1] = bad[t] + (0 if e in vl_ok else 1)
            self.bad_prefix.append(bad)

    def feasible(self, j, node_idx, hops, direction):
        # walking h hops from clockwise index i crosses clockwise edges
        # [i, i+h) for "+" and [i-h, i) for "-"
        a = node_idx if direction == CLOCKWISE else (node_idx - hops) % self.m
        bad = self.bad_prefix[j]
        return bad[a + hops] == bad[a]


def build_wdag(cycle, req, start, direction, fs=None, seg=None):
    """Construct the layered digraph for `req` anchored at `start`.

    Arcs between consecutive layers require the tail host to sit strictly
    ahead of the head host in the anchored sequence and every SL on the
    connecting segment to carry the VL's demand; arc weight is hop count
    times that demand. Construction stops early (no closing arcs, hence no
    cycles) as soon as a layer ends up with no positively-indegreed vertex.
    """
    if req.shape is not Shape.CYCLE:
        raise ModelError("request is not a cycle")
    net = cycle.net
    n = req.n_vns
    if fs is None:
        fs = feasible_sets(net, req)
    if start not in fs.vn_sets[0]:
        raise ModelError(f"start {start!r} is not feasible for the first VN")
    if seg is None:
        seg = _SegmentOracle(cycle, fs)

    layers = [[start]] + [sorted(fs.vn_sets[j]) for j in range(1, n)]
    w = Wdag(start=start, direction=direction, m=cycle.m, n=n, layers=layers)

    pos = {v: cycle.seq_pos(start, direction, v) for v in net.nodes}
    idx = cycle.index

    clockwise = direction == CLOCKWISE
    m = cycle.m
    frontier = [start]
    for j in range(n - 1):
        demand = req.bw_demand[req.vls[j]]
        bad = seg.bad_prefix[j]
        heads = [(pos[h], idx[h], h) for h in layers[j + 1]]
        reached = set()
        for tail in frontier:
            outs = []
            p_tail = pos[tail]
            i_tail = idx[tail]
            for p_head, i_head, head in heads:
                hops = p_head - p_tail
                if hops <= 0:
                    continue
                a = i_tail if clockwise else i_head
                if bad[a + hops] == bad[a]:
                    outs.append((head, hops * demand, hops))
                    reached.add(head)
            if outs:
                w.arcs[(j, tail)] = outs
        if not reached:
            w.complete = False
            return w
        frontier = sorted(reached)

    demand = req.bw_demand[req.vls[n - 1]]
    bad = seg.bad_prefix[n - 1]
    for tail in frontier:
        hops = m - pos[tail]
        a = idx[tail] if clockwise else (idx[tail] - hops) % m
        if bad[a + hops] == bad[a]:
            w.closing[tail] = (hops * demand, hops)
    if not w.closing:
        w.complete = False
    return w


def min_weight_cycle(w):
    """Minimum weight directed cycle through the anchor vertex, or None.

    Layer-by-layer relaxation: cost-to-reach per vertex, then the closing
    arcs. Ties resolve to the host sequence that is lexicographically
    smallest layer by layer.
    """
    best = {w.start: (0, (w.start,))}
    for j in range(w.n - 1):
        nxt = {}
        for tail, state in best.items():
            arcs = w.arcs.get((j, tail))
            if not arcs:
                continue
            cost, path = state
            for head, weight, _hops in arcs:
                c2 = cost + weight
                cur = nxt.get(head)
                if cur is None or c2 < cur[0]:
                    nxt[head] = (c2, path + (head,))
                elif c2 == cur[0]:
                    p2 = path + (head,)
                    if p2 < cur[1]:
                        nxt[head] = (c2, p2)
        best = nxt
        if not best:
            return None
    result = None
    for tail, (weight, _hops) in w.closing.items():
        state = best.get(tail)
        if state is None:
            continue
        cand = (state[0] + weight, state[1])
        if result is None or cand < result:
            result = cand
    if result is None:
        return None
    return list(result[1]), result[0]


@dataclass
class SimplexEmbedding:
    """A one-direction ring embedding: ordered host assignment, per-VL SL
    segments that wrap the ring exactly once, and the total BW cost."""

    start: object
    direction: str
    assignment: list   # host SN per VN, in request order
    segments: list     # list of SL-key lists, one per VL in request order
    hops: list
    cost: object

    def to_embedding(self, req):
        node_map = {vn: sn for vn, sn in zip(req.vns, self.assignment)}
        link_map = {vl: list(seg) for vl, seg in zip(req.vls, self.segments)}
        return Embedding(req_id=req.req_id, node_map=node_map, link_map=link_map)


def _simplex_from_hosts(cycle, req, start, direction, hosts):
    segments = []
    hops = []
    cost = 0
    for j in range(req.n_vns):
        a = hosts[j]
        b = hosts[(j + 1) % req.n_vns]
        h = (cycle.seq_pos(start, direction, b) - cycle.seq_pos(start, direction, a)) % cycle.m
        if h == 0:
            h = cycle.m
        segments.append(cycle.segment_edges(a, h, direction))
        hops.append(h)
        cost += h * req.bw_demand[req.vls[j]]
    return SimplexEmbedding(start=start, direction=direction, assignment=list(hosts),
                            segments=segments, hops=hops, cost=cost)


def c2ce(net, req, collect=None):
    """Least-BW-cost one-direction embedding of a cycle request on a ring.

    Scans every feasible anchor for the first VN crossed with both
    directions, takes the minimum weight directed cycle of each layered
    digraph, and keeps the strictly cheapest. Returns a SimplexEmbedding or
    None when no feasible one-direction embedding exists. `collect`, if
    given, receives every constructed digraph (used by the dump facility).
    """
    cycle = CycleView(net)
    fs = feasible_sets(net, req)
    seg = _SegmentOracle(cycle, fs)
    best = None
    best_cost = None
    for start in sorted(fs.vn_sets[0]):
        for direction in DIRECTIONS:
            w = build_wdag(cycle, req, start, direction, fs=fs, seg=seg)
            if collect is not None:
                collect(w)
            found = min_weight_cycle(w)
            if found is None:
                continue
            hosts, cost = found
            if best_cost is None or cost < best_cost:
                best = _simplex_from_hosts(cycle, req, start, direction, hosts)
                best_cost = cost
    return best


def greedy_revenue(net, requests, fallback=None, collect=None):
    """Embed cycle requests in descending revenue-to-demand ratio.

    Each request is tried once with the ring solver and committed on success.
    Requests the ring solver cannot place are afterwards offered, once each
    and in the same order, to the `fallback` generic embedder (a callable
    (net, req) -> Embedding or None). Returns the accepted batch.
    """
    for req in requests:
        if req.shape is not Shape.CYCLE:
            raise ModelError(f"request {req.req_id!r} is not a cycle")
    ranked = sorted(
        requests,
        key=lambda r: Fraction(r.revenue, r.total_cpu_demand + r.total_bw_demand),
        reverse=True,
    )
    batch = EmbeddingBatch()
    leftovers = []
    for req in ranked:
        simplex = c2ce(net, req, collect=collect)
        if simplex is None:
            leftovers.append(req)
            continue
        emb = simplex.to_embedding(req)
        commit(net, req, emb)
        batch.add(req, emb)
    if fallback is not None:
        for req in leftovers:
            emb = fallback(net, req)
            if emb is None:
                continue
            commit(net, req, emb)
            batch.add(req, emb)
    return batch
