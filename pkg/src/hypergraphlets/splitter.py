"""Edge-size splits: the niceness curve and cost-model-driven threshold choice.

An alpha-split partitions edges into a lower part (size <= alpha, handled via
its Gaifman projection) and an upper part (size > alpha, handled by
inclusion-exclusion over per-vertex types).  beta is the max degree of the
upper part; the curve maps each candidate alpha to its beta.
"""

from __future__ import annotations

import heapq
import math

from .hypercore import Hypergraph, HypergraphError, gaifman


def _weighted(gamma, lower_cost, upper_cost):
    """gamma*lower + (1-gamma)*upper as a float, infinity on overflow.

    The 2^d terms are exact big integers; a cost too large for a float is
    effectively infinite for selection purposes anyway.
    """
    try:
        return gamma * float(lower_cost) + (1.0 - gamma) * float(upper_cost)
    except OverflowError:
        return math.inf


class AlphaSplit:
    """An alpha-split of H with the pieces the build-up and sampler need.

    lower/upper are hypergraphs on H's full vertex set.  upper_types[v] is
    the sorted tuple of upper-edge indices containing v; upper adjacency is
    decided by merge-intersecting two such tuples (O(beta) per check), never
    by materializing the upper Gaifman projection.
    """

    __slots__ = (
        "alpha", "beta", "lower", "upper", "gaif_lower",
        "lower_neighbors", "upper_types", "n",
    )

    def __init__(self, H, alpha):
        lower_edges = [e for e in H.edges if len(e) <= alpha]
        upper_edges = [e for e in H.edges if len(e) > alpha]
        self.alpha = alpha
        self.n = H.n
        self.lower = Hypergraph(H.n, lower_edges)
        self.upper = Hypergraph(H.n, upper_edges)
        self.beta = self.upper.max_degree
        self.gaif_lower = gaifman(self.lower)
        self.lower_neighbors = self.gaif_lower.adj
        self.upper_types = [tuple(t) for t in self.upper.incidence]

    def upper_adjacent(self, u, v):
        """True iff u and v share an upper edge (sorted-type intersection)."""
        a, b = self.upper_types[u], self.upper_types[v]
        i = j = 0
        while i < len(a) and j < len(b):
            if a[i] == b[j]:
                return True
            if a[i] < b[j]:
                i += 1
            else:
                j += 1
        return False

    def __repr__(self):
        return "AlphaSplit(alpha=%d, beta=%d, lower_m=%d, upper_m=%d)" % (
            self.alpha, self.beta, self.lower.m, self.upper.m)


class SplitCost:
    """Cost-model value of one split.

    lower_cost = sum of |e|^2 over lower edges; upper_cost = sum over all
    vertices of 2^(upper degree); weighted = gamma*lower + (1-gamma)*upper.
    objective is whatever quantity the selector minimized (the weighted cost
    for the refined selector, alpha^2*m + 2^beta*n for the simple one).
    Powers of two are exact big integers, so no saturation cap is needed.
    """

    __slots__ = ("lower_cost", "upper_cost", "gamma", "weighted", "objective")

    def __init__(self, lower_cost, upper_cost, gamma, objective=None):
        self.lower_cost = lower_cost
        self.upper_cost = upper_cost
        self.gamma = gamma
        self.weighted = _weighted(gamma, lower_cost, upper_cost)
        self.objective = self.weighted if objective is None else objective

    def __repr__(self):
        return "SplitCost(lower=%d, upper=%d, weighted=%.6g)" % (
            self.lower_cost, self.upper_cost, self.weighted)


def candidate_alphas(H):
    """Thresholds worth considering: 0 plus each distinct edge size."""
    return [0] + sorted({len(e) for e in H.edges})


def alpha_beta_curve(H):
    """All (alpha, beta) pairs: beta = max upper degree at that threshold.

    Max-heap sweep: start from full degrees (alpha=0), then decrement the
    endpoints of each edge bucket as the threshold passes its size; stale
    heap entries are discarded lazily when popped.
    """
    degrees = [len(t) for t in H.incidence]
    heap = [(-d, v) for v, d in enumerate(degrees) if d > 0]
    heapq.heapify(heap)

    def current_max():
        while heap:
            d, v = heap[0]
            if degrees[v] == -d:
                return -d
            heapq.heappop(heap)
        return 0

    by_size = {}
    for e in H.edges:
        by_size.setdefault(len(e), []).append(e)

    curve = [(0, current_max())]
    for s in sorted(by_size):
        for e in by_size[s]:
            for v in e:
                degrees[v] -= 1
                if degrees[v] > 0:
                    heapq.heappush(heap, (-degrees[v], v))
        curve.append((s, current_max()))
    return curve


def apply_split(H, alpha):
    if alpha < 0:
        raise HypergraphError("alpha must be nonnegative")
    return AlphaSplit(H, alpha)


def split_cost(H, split, gamma, objective=None):
    lower_cost = sum(len(e) ** 2 for e in split.lower.edges)
    upper_cost = sum(1 << len(t) for t in split.upper.incidence)
    return SplitCost(lower_cost, upper_cost, gamma, objective=objective)


def _cost_table(H):
    """(alpha, beta, lower_cost, upper_cost) at every candidate threshold.

    One descending pass: upper degrees grow as alpha drops past each edge
    size, and the 2^d sum is maintained by a subtract-old/add-new update per
    incidence, so the whole table costs O(size of H).
    """
    sizes = sorted({len(e) for e in H.edges})
    by_size = {}
    sq_by_size = {}
    for e in H.edges:
        by_size.setdefault(len(e), []).append(e)
        sq_by_size[len(e)] = sq_by_size.get(len(e), 0) + len(e) ** 2

    total_sq = sum(sq_by_size.values())
    d = [0] * H.n
    pow_sum = H.n  # sum of 2^0 over all vertices
    beta = 0
    rows = []  # descending alpha
    lower_sq = total_sq
    for s in reversed(sizes):
        # threshold alpha = s: upper holds sizes > s, already accumulated
        rows.append((s, beta, lower_sq, pow_sum))
        for e in by_size[s]:
            for v in e:
                pow_sum -= 1 << d[v]
                d[v] += 1
                pow_sum += 1 << d[v]
                if d[v] > beta:
                    beta = d[v]
        lower_sq -= sq_by_size[s]
    rows.append((0, beta, 0, pow_sum))
    rows.reverse()
    return rows


def curve_with_costs(H, gamma=0.01):
    """Rows (alpha, beta, lower_cost, upper_cost, weighted) along the curve."""
    out = []
    for alpha, beta, lo, up in _cost_table(H):
        out.append((alpha, beta, lo, up, _weighted(gamma, lo, up)))
    return out


def choose_split_simple(H):
    """Minimize alpha^2*|E| + 2^beta*|V| over the curve; ties to smaller alpha."""
    best = None
    for alpha, beta in alpha_beta_curve(H):
        obj = alpha * alpha * H.m + (1 << beta) * H.n
        if best is None or obj < best[0]:
            best = (obj, alpha)
    obj, alpha = best
    split = apply_split(H, alpha)
    return split, split_cost(H, split, 0.5, objective=obj)


def choose_split_refined(H, gamma=0.01):
    """Minimize gamma*sum|e|^2 + (1-gamma)*sum 2^d over all thresholds."""
    if not 0.0 <= gamma <= 1.0:
        raise HypergraphError("gamma must lie in [0, 1]")
    best = None
    for alpha, beta, lo, up in _cost_table(H):
        w = _weighted(gamma, lo, up)
        if best is None or w < best[0]:
            best = (w, alpha)
    w, alpha = best
    split = apply_split(H, alpha)
    return split, split_cost(H, split, gamma, objective=w)
