"""Exact minimum-cost transport on small dense instances.

Successive shortest augmenting paths on the bipartite transport graph:
ship min(total supply, total demand) units at minimum total cost subject
to per-bin supply and demand capacities. Node potentials keep residual
costs non-negative so each augmentation is a plain Dijkstra pass.
Instances here are histogram sized (tens of bins), so the dense O(V^2)
search is both exact and fast; no approximation layer is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FlowSolution", "min_cost_transport"]

_REL_EPS = 1e-12


@dataclass(frozen=True)
class FlowSolution:
    """Optimal transport plan: sparse (source, sink, amount) flows and cost."""

    flows: tuple[tuple[int, int, float], ...]
    cost: float


def _dijkstra(cmat: np.ndarray) -> tuple[list[float], list[int]]:
    """Distances and predecessors from node 0 on a dense non-negative graph.

    Plain-Python O(V^2) scan: the graphs here have a few dozen nodes, where
    list operations beat numpy's per-call overhead several times over.
    """
    rows = cmat.tolist()
    v = len(rows)
    inf = float("inf")
    dist = [inf] * v
    dist[0] = 0.0
    pred = [-1] * v
    done = [False] * v
    for _ in range(v):
        u = -1
        best = inf
        for i in range(v):
            if not done[i] and dist[i] < best:
                best = dist[i]
                u = i
        if u < 0:
            break
        done[u] = True
        row = rows[u]
        for w in range(v):
            if not done[w]:
                through = best + row[w]
                if through < dist[w]:
                    dist[w] = through
                    pred[w] = u
    return dist, pred


def min_cost_transport(supply, demand, cost) -> FlowSolution:
    """Cheapest way to move min(sum supply, sum demand) mass.

    supply (ns,) and demand (nd,) are non-negative masses; cost is an
    (ns, nd) matrix of non-negative unit costs. Flows never exceed the
    per-bin masses and their total equals the smaller of the two totals.
    """
    supply = np.asarray(supply, dtype=np.float64)
    demand = np.asarray(demand, dtype=np.float64)
    cost = np.asarray(cost, dtype=np.float64)
    if supply.ndim != 1 or demand.ndim != 1 or cost.shape != (supply.size, demand.size):
        raise ValueError("cost matrix shape must be (len(supply), len(demand))")
    if (supply < 0).any() or (demand < 0).any() or (cost < 0).any():
        raise ValueError("supplies, demands and costs must be >= 0")

    # zero-mass bins cannot carry flow; solve on the compressed instance
    si = np.flatnonzero(supply > 0)
    dj = np.flatnonzero(demand > 0)
    if si.size < supply.size or dj.size < demand.size:
        inner = min_cost_transport(supply[si], demand[dj], cost[np.ix_(si, dj)])
        flows = tuple((int(si[i]), int(dj[j]), amt) for i, j, amt in inner.flows)
        return FlowSolution(flows=flows, cost=inner.cost)

    ns, nd = cost.shape
    target = min(supply.sum(), demand.sum())
    flow = np.zeros((ns, nd))
    if target > 0:
        eps = _REL_EPS * max(1.0, float(target))
        rs = supply.copy()
        rd = demand.copy()
        shipped = 0.0
        # node layout: 0 = source, 1..ns = supply bins,
        # ns+1..ns+nd = demand bins, last = sink
        v = ns + nd + 2
        sink = v - 1
        potential = np.zeros(v)
        while target - shipped > eps:
            cmat = np.full((v, v), np.inf)
            cmat[0, 1 : ns + 1] = np.where(rs > eps, 0.0, np.inf)
            cmat[1 : ns + 1, ns + 1 : sink] = cost
            cmat[ns + 1 : sink, 1 : ns + 1] = np.where(flow.T > eps, -cost.T, np.inf)
            cmat[ns + 1 : sink, sink] = np.where(rd > eps, 0.0, np.inf)
            # reduced costs are >= 0 up to float rounding; clamp the noise
            reduced = cmat + potential[:, None] - potential[None, :]
            np.maximum(reduced, 0.0, out=reduced, where=np.isfinite(reduced))
            dist, pred = _dijkstra(reduced)
            if not np.isfinite(dist[sink]):
                raise RuntimeError("transport target unreachable")
            potential += np.minimum(dist, dist[sink])

            path = [sink]
            while path[-1] != 0:
                path.append(pred[path[-1]])
            path.reverse()
            first, last = path[1] - 1, path[-2] - ns - 1
            bottleneck = min(target - shipped, rs[first], rd[last])
            hops = list(zip(path[1:-2], path[2:-1]))
            for u, w in hops:
                if u > ns:  # backward arc demand -> supply
                    bottleneck = min(bottleneck, flow[w - 1, u - ns - 1])
            for u, w in hops:
                if u <= ns:
                    flow[u - 1, w - ns - 1] += bottleneck
                else:
                    flow[w - 1, u - ns - 1] -= bottleneck
            rs[first] -= bottleneck
            rd[last] -= bottleneck
            shipped += bottleneck

    nz = np.argwhere(flow > 0)
    flows = tuple((int(i), int(j), float(flow[i, j])) for i, j in nz)
    return FlowSolution(flows=flows, cost=float((flow * cost).sum()))
