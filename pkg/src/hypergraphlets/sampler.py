"""Sampling colorful treelets and estimating hypergraphlet counts.

A built CounterSet induces a distribution over rooted colorful treelets:
drawing (T, v) proportionally to C(T,[k],v) and then recursively drawing
neighbors proportionally to C(T2,S2,u) yields a uniform colorful treelet,
so the sampled vertex set U lands with probability proportional to the
number sigma of spanning trees of the Gaifman graph on U.  Dividing each
observation by its sigma (or rejecting with probability 1 - 1/sigma)
removes that bias.  All discrete draws use alias tables, built lazily and
cached; cache warm-up consumes no randomness, so results are reproducible.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction

from .buildup import build_counters, build_counters_naive, random_coloring, derived_rng
from .canonlab import canonical_key
from .hypercore import Hypergraphlet, HypergraphError, induced_sub
from .splitter import apply_split, choose_split_refined


class SamplerError(HypergraphError):
    pass


class NoColorfulOccurrences(SamplerError):
    """The coloring produced no colorful treelet at all (W = 0)."""


class VoseAlias:
    """Constant-time draws from a fixed weighted support (Vose alias method)."""

    __slots__ = ("items", "prob", "alias", "size")

    def __init__(self, items, weights):
        pairs = [(it, w) for it, w in zip(items, weights) if w > 0]
        if not pairs:
            raise SamplerError("alias table needs positive total weight")
        total = 0
        for _, w in pairs:
            total += w
        n = len(pairs)
        scaled = [(w * n) / total for _, w in pairs]  # exact big-int ratio
        prob = [1.0] * n
        alias = [0] * n
        small = [i for i, p in enumerate(scaled) if p < 1.0]
        large = [i for i, p in enumerate(scaled) if p >= 1.0]
        while small and large:
            s = small.pop()
            l = large.pop()
            prob[s] = scaled[s]
            alias[s] = l
            scaled[l] -= 1.0 - scaled[s]
            if scaled[l] < 1.0:
                small.append(l)
            else:
                large.append(l)
        self.items = [it for it, _ in pairs]
        self.prob = prob
        self.alias = alias
        self.size = n

    def draw(self, rng):
        i = rng.randrange(self.size)
        if rng.random() < self.prob[i]:
            return self.items[i]
        return self.items[self.alias[i]]


class Generators:
    """Alias-table machinery over one CounterSet.

    The root table is eager; the per-(T2,S2,v) neighbor tables, per-(T2,S2,e)
    vertex tables, per-(T2,S2,v) upper-edge tables, and per-(T,S,v) partition
    tables are built on first use and cached (their construction is
    deterministic and consumes no randomness).
    """

    def __init__(self, cs):
        self.cs = cs
        items = []
        weights = []
        for tid, vec in cs.root_weights():
            for v, w in enumerate(vec):
                if w:
                    items.append((tid, v))
                    weights.append(w)
        if not items:
            raise NoColorfulOccurrences(
                "no colorful treelet occurrences under this coloring")
        self.root_gen = VoseAlias(items, weights)
        self._partition = {}
        self._lower = {}
        self._upper_edge = {}
        self._edge_vertex = {}
        self._edge_total = {}

    # -- lazy table builders ------------------------------------------

    def _partition_gen(self, tid, S, v):
        key = (tid, S, v)
        gen = self._partition.get(key)
        if gen is None:
            cs = self.cs
            t = cs.catalog[tid]
            h2 = cs.catalog[t.t2].order
            items = []
            weights = []
            for S2 in _submasks_of_size(S, h2):
                trip = cs.eta_triple(t.t2, S2)
                if trip is None:
                    continue
                comb = trip[2][v]
                if not comb:
                    continue
                S1 = S & ~S2
                w1 = cs.tables[t.t1][S1][v]
                if w1:
                    items.append((S1, S2))
                    weights.append(w1 * comb)
            if not items:
                raise SamplerError(
                    "sample_neigh called with C(T,S,v) = 0 (no partition weight)")
            gen = self._partition[key] = VoseAlias(items, weights)
        return gen

    def _lower_gen(self, t2, S2, v):
        key = (t2, S2, v)
        gen = self._lower.get(key)
        if gen is None:
            cs = self.cs
            vec = cs.tables[t2][S2]
            nbrs = cs.lower_neighbors(v)
            gen = self._lower[key] = VoseAlias(nbrs, [vec[u] for u in nbrs])
        return gen

    def _edge_totals(self, t2, S2):
        key = (t2, S2)
        totals = self._edge_total.get(key)
        if totals is None:
            totals = self._edge_total[key] = {}
        return totals

    def _upper_edge_gen(self, t2, S2, v):
        key = (t2, S2, v)
        gen = self._upper_edge.get(key)
        if gen is None:
            cs = self.cs
            vec = cs.tables[t2][S2]
            totals = self._edge_totals(t2, S2)
            edges = cs.upper_types_of(v)
            weights = []
            for j in edges:
                tot = totals.get(j)
                if tot is None:
                    tot = totals[j] = sum(vec[u] for u in cs.upper_edge(j))
                weights.append(tot)
            gen = self._upper_edge[key] = VoseAlias(edges, weights)
        return gen

    def _edge_vertex_gen(self, t2, S2, j):
        key = (t2, S2, j)
        gen = self._edge_vertex.get(key)
        if gen is None:
            cs = self.cs
            vec = cs.tables[t2][S2]
            verts = cs.upper_edge(j)
            gen = self._edge_vertex[key] = VoseAlias(verts, [vec[u] for u in verts])
        return gen

    # -- the samplers --------------------------------------------------

    def sample_neigh(self, tid, S, v, rng):
        """Draw (T2, S1, S2, u) with u a Gaifman neighbor of v, u drawn
        with probability proportional to C(T2,S2,u) within N(v)."""
        cs = self.cs
        t2 = cs.catalog[tid].t2
        S1, S2 = self._partition_gen(tid, S, v).draw(rng)
        trip = cs.eta_triple(t2, S2)
        w_low, w_high = trip[0][v], trip[1][v]
        total = w_low + w_high
        lower_nbrs = cs.lower_neighbors(v)
        v_has_upper = bool(cs.upper_types_of(v))
        while True:
            if rng.random() < w_low / total:
                u = self._lower_gen(t2, S2, v).draw(rng)
                in_upper = v_has_upper and cs.upper_overlap(u, v) > 0
                in_lower = True
            else:
                while True:
                    j = self._upper_edge_gen(t2, S2, v).draw(rng)
                    u = self._edge_vertex_gen(t2, S2, j).draw(rng)
                    overlap = cs.upper_overlap(u, v)
                    if overlap == 1 or rng.random() < 1.0 / overlap:
                        break
                in_upper = True
                i = bisect_left(lower_nbrs, u)
                in_lower = i < len(lower_nbrs) and lower_nbrs[i] == u
            denom = in_lower + in_upper
            if denom == 1 or rng.random() < 1.0 / denom:
                return t2, S1, S2, u

    def _sample_rec(self, tid, S, v, rng, vertices, edges):
        if self.cs.catalog[tid].order == 1:
            vertices.append(v)
            return
        t2, S1, S2, u = self.sample_neigh(tid, S, v, rng)
        edges.append((v, u))
        self._sample_rec(self.cs.catalog[tid].t1, S1, v, rng, vertices, edges)
        self._sample_rec(t2, S2, u, rng, vertices, edges)

    def sample_treelet(self, rng):
        """One uniform colorful treelet: returns (root tid, U, tree edges)."""
        tid, v = self.root_gen.draw(rng)
        vertices, edges = [], []
        self._sample_rec(tid, (1 << self.cs.k) - 1, v, rng, vertices, edges)
        return tid, tuple(sorted(vertices)), edges


def _submasks_of_size(S, h):
    """Submasks of S with h bits, deterministic order."""
    bits = []
    rest = S
    while rest:
        low = rest & -rest
        bits.append(low)
        rest ^= low
    out = []

    def rec(i, left, acc):
        if not left:
            out.append(acc)
            return
        if len(bits) - i < left:
            return
        rec(i + 1, left - 1, acc | bits[i])
        rec(i + 1, left, acc)

    rec(0, h, 0)
    return out


def build_generators(cs):
    return Generators(cs)


# -- extraction and local topology ------------------------------------


def extract_hypergraphlet(split, U):
    """H|_U from the split's two parts: intersect incident edges with U."""
    U = tuple(sorted(U))
    pos = {v: i for i, v in enumerate(U)}
    masks = set()
    for part in (split.lower, split.upper):
        cand = set()
        for v in U:
            cand.update(part.incidence[v])
        for j in cand:
            mask = 0
            for v in part.edges[j]:
                i = pos.get(v)
                if i is not None:
                    mask |= 1 << i
            if mask:
                masks.add(mask)
    return Hypergraphlet(len(U), masks, vertex_map=U)


class IEExtractor:
    """Extraction via subset counters and inclusion-exclusion.

    N[X] = number of edges containing X, split into a precomputed table over
    lower-edge subsets of size <= k and a sorted-type intersection for the
    upper part.  Then the number of edges with e cap U exactly X is the
    alternating sum over Y inside U minus X, and X is an edge of H|_U iff
    that count is positive.  Must agree with extract_hypergraphlet.
    """

    def __init__(self, split, k):
        self.split = split
        self.k = k
        table = {}
        from itertools import combinations as _comb
        for e in split.lower.edges:
            for size in range(1, min(k, len(e)) + 1):
                for sub in _comb(e, size):
                    table[sub] = table.get(sub, 0) + 1
        self._lower_table = table

    def _count_containing(self, verts):
        cnt = self._lower_table.get(verts, 0)
        types = self.split.upper_types
        inter = types[verts[0]]
        for v in verts[1:]:
            if not inter:
                break
            inter = _sorted_intersection(inter, types[v])
        return cnt + len(inter)

    def extract(self, U):
        U = tuple(sorted(U))
        kp = len(U)
        full = (1 << kp) - 1
        N = [0] * (full + 1)
        for mask in range(1, full + 1):
            verts = tuple(U[i] for i in range(kp) if mask >> i & 1)
            N[mask] = self._count_containing(verts)
        masks = set()
        for mask in range(1, full + 1):
            rest = full & ~mask
            total = 0
            Y = rest
            while True:
                n_xy = N[mask | Y]
                if n_xy:
                    total += -n_xy if bin(Y).count("1") % 2 else n_xy
                if Y == 0:
                    break
                Y = (Y - 1) & rest
            if total > 0:
                masks.add(mask)
        return Hypergraphlet(kp, masks, vertex_map=U)


def _sorted_intersection(a, b):
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return out


def local_adjacency(split, U):
    """Gaifman adjacency restricted to U, without the full projection:
    binary search in sorted lower neighbor lists, sorted-type intersection
    for the upper part."""
    U = list(U)
    kp = len(U)
    A = [[0] * kp for _ in range(kp)]
    for i in range(kp):
        v = U[i]
        nbrs = split.lower_neighbors[v]
        for j in range(i + 1, kp):
            u = U[j]
            p = bisect_left(nbrs, u)
            if (p < len(nbrs) and nbrs[p] == u) or split.upper_adjacent(u, v):
                A[i][j] = A[j][i] = 1
    return A


def _cs_adjacency(cs, U):
    U = list(U)
    kp = len(U)
    A = [[0] * kp for _ in range(kp)]
    for i in range(kp):
        v = U[i]
        nbrs = cs.lower_neighbors(v)
        has_up = bool(cs.upper_types_of(v))
        for j in range(i + 1, kp):
            u = U[j]
            p = bisect_left(nbrs, u)
            if (p < len(nbrs) and nbrs[p] == u) or (
                    has_up and cs.upper_overlap(u, v) > 0):
                A[i][j] = A[j][i] = 1
    return A


def spanning_tree_count(A):
    """Kirchhoff: exact integer determinant of a Laplacian minor (Bareiss)."""
    n = len(A)
    if n == 0:
        raise SamplerError("empty adjacency")
    if n == 1:
        return 1
    seen = 1
    stack = [0]
    while stack:
        v = stack.pop()
        for u in range(n):
            if A[v][u] and not seen >> u & 1:
                seen |= 1 << u
                stack.append(u)
    if seen != (1 << n) - 1:
        raise SamplerError("adjacency matrix is disconnected")
    m = n - 1
    M = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if i == j:
                M[i][j] = sum(A[i + 1])
            else:
                M[i][j] = -A[i + 1][j + 1]
    sign = 1
    prev = 1
    for col in range(m):
        if M[col][col] == 0:
            for r in range(col + 1, m):
                if M[r][col]:
                    M[col], M[r] = M[r], M[col]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[col][col]
        for r in range(col + 1, m):
            row = M[r]
            base = M[col]
            f = row[col]
            for c in range(col + 1, m):
                row[c] = (row[c] * pivot - f * base[c]) // prev
            row[col] = 0
        prev = pivot
    return sign * M[m - 1][m - 1]


class SampleOutcome:
    __slots__ = ("U", "tree_edges", "sigma", "hypergraphlet", "key")

    def __init__(self, U, tree_edges, sigma, hypergraphlet, key):
        self.U = U
        self.tree_edges = tree_edges
        self.sigma = sigma
        self.hypergraphlet = hypergraphlet
        self.key = key


def sample_outcome(gens, rng, ie_extractor=None):
    """Sample one treelet and complete it with sigma, extraction, and key."""
    cs = gens.cs
    _tid, U, tree_edges = gens.sample_treelet(rng)
    A = _cs_adjacency(cs, U)
    sigma = spanning_tree_count(A)
    if cs.split is not None:
        if ie_extractor is not None:
            P = ie_extractor.extract(U)
        else:
            P = extract_hypergraphlet(cs.split, U)
    else:
        P = induced_sub(cs.H, U)
    return SampleOutcome(U, tree_edges, sigma, P, canonical_key(P))


class EstimateReport:
    """Aggregated sampling results for one build.

    rows maps key -> dict(samples, inv_sigma_sum (Fraction), estimate
    (Fraction, colorful count scale), relative_frequency (float)).  W, k,
    samples record the build total and budget; log holds (key, sigma) per
    accepted sample.
    """

    __slots__ = ("k", "W", "samples", "mode", "rows", "log")

    def __init__(self, k, W, samples, mode, rows, log):
        self.k = k
        self.W = W
        self.samples = samples
        self.mode = mode
        self.rows = rows
        self.log = log

    def total_estimate(self):
        return sum((r["estimate"] for r in self.rows.values()), Fraction(0))


def estimate_counts(gens, K, rng, mode="weighted", ie_extractor=None, keep_log=True):
    """Run K sampling rounds and aggregate per-key statistics.

    weighted: every sample contributes 1/sigma to its key.  uniform: a
    sample survives with probability 1/sigma, each accepted one contributing
    1.  Either way the colorful-count estimate for key i is
    W/(k*K) * (that key's accumulated contribution); the contribution is held
    exactly (a per-key histogram of sigma values) until report time.
    """
    if K < 1:
        raise SamplerError("sample budget must be at least 1")
    cs = gens.cs
    hists = {}
    accepted = {}
    log = [] if keep_log else None
    for _ in range(K):
        out = sample_outcome(gens, rng, ie_extractor=ie_extractor)
        if mode == "uniform":
            if out.sigma > 1 and rng.random() >= 1.0 / out.sigma:
                continue
            accepted[out.key] = accepted.get(out.key, 0) + 1
        elif mode == "weighted":
            h = hists.get(out.key)
            if h is None:
                h = hists[out.key] = {}
            h[out.sigma] = h.get(out.sigma, 0) + 1
        else:
            raise SamplerError("unknown mode %r" % (mode,))
        if keep_log:
            log.append((out.key, out.sigma))
    rows = {}
    scale = Fraction(cs.W, cs.k * K)
    if mode == "uniform":
        total = sum(accepted.values())
        for key, cnt in accepted.items():
            rows[key] = {
                "samples": cnt,
                "inv_sigma_sum": Fraction(cnt),
                "estimate": scale * cnt,
                "relative_frequency": cnt / total if total else 0.0,
            }
    else:
        sums = {key: sum(Fraction(c, s) for s, c in h.items())
                for key, h in hists.items()}
        denom = sum(sums.values(), Fraction(0))
        for key, h in hists.items():
            rows[key] = {
                "samples": sum(h.values()),
                "inv_sigma_sum": sums[key],
                "estimate": scale * sums[key],
                "relative_frequency": float(sums[key] / denom) if denom else 0.0,
            }
    return EstimateReport(cs.k, cs.W, K, mode, rows, log)


def merge_reports(reports, total_samples):
    """Combine shard reports from one build (same W, k, mode) into one.

    Estimates are recomputed at the merged budget: W/(k*total) times the
    summed contribution, so the merge is exact, not an average of averages.
    """
    if not reports:
        raise SamplerError("nothing to merge")
    first = reports[0]
    if any(r.W != first.W or r.k != first.k or r.mode != first.mode
           for r in reports):
        raise SamplerError("shard reports disagree on build parameters")
    rows = {}
    for rep in reports:
        for key, row in rep.rows.items():
            agg = rows.get(key)
            if agg is None:
                agg = rows[key] = {"samples": 0, "inv_sigma_sum": Fraction(0)}
            agg["samples"] += row["samples"]
            agg["inv_sigma_sum"] += row["inv_sigma_sum"]
    scale = Fraction(first.W, first.k * total_samples)
    denom = sum((r["inv_sigma_sum"] for r in rows.values()), Fraction(0))
    for agg in rows.values():
        agg["estimate"] = scale * agg["inv_sigma_sum"]
        agg["relative_frequency"] = (
            float(agg["inv_sigma_sum"] / denom) if denom else 0.0)
    logs = [r.log for r in reports]
    log = None
    if all(lg is not None for lg in logs):
        log = [entry for lg in logs for entry in lg]
    return EstimateReport(first.k, first.W, total_samples, first.mode, rows, log)


def sharded_estimate(gens, K, seed, run, threads, mode="weighted",
                     ie_extractor=None, keep_log=True):
    """estimate_counts with one RNG stream per thread slot.

    threads=1 reproduces the plain single-stream estimate bit for bit; higher
    values deterministically re-partition the budget across per-shard streams
    (there is no actual concurrency, only stream layout).
    """
    if threads < 1:
        raise SamplerError("threads must be at least 1")
    if threads == 1:
        rng = derived_rng(seed, "run%d|sampling" % run)
        return estimate_counts(gens, K, rng, mode=mode,
                               ie_extractor=ie_extractor, keep_log=keep_log)
    reports = []
    base, extra = divmod(K, threads)
    for t in range(threads):
        kt = base + (1 if t < extra else 0)
        if kt == 0:
            continue
        rng = derived_rng(seed, "run%d|sampling|shard%d" % (run, t))
        reports.append(estimate_counts(gens, kt, rng, mode=mode,
                                       ie_extractor=ie_extractor,
                                       keep_log=keep_log))
    return merge_reports(reports, K)


# -- end-to-end pipeline ------------------------------------------------


def resolve_build(H, k, coloring, alpha_policy="auto", gamma=0.01, cap=20):
    """Build counters under an alpha policy: 'auto' (refined cost model),
    'naive' (Gaifman baseline), or an explicit integer threshold."""
    if alpha_policy == "naive":
        return build_counters_naive(H, k, coloring)
    if alpha_policy == "auto":
        split, _cost = choose_split_refined(H, gamma)
    else:
        split = apply_split(H, int(alpha_policy))
    return build_counters(H, split, k, coloring, cap=cap)


def approx_counts(H, k, samples, seed, runs=1, alpha_policy="auto", gamma=0.01,
                  mode="weighted", use_ie=False, cap=20, keep_log=False,
                  threads=1):
    """Full estimate: `runs` independent colorings, estimates averaged.

    Returns (rows, reports): rows maps key -> dict(samples,
    inv_sigma_sum, estimate (Fraction, colorful scale averaged over runs),
    relative_frequency); reports is the per-run EstimateReport list (entries
    are None for runs with no colorful occurrence).
    """
    if runs < 1:
        raise SamplerError("runs must be at least 1")
    per_run = []
    for r in range(runs):
        coloring = random_coloring(H, k, "%s|run%d" % (seed, r))
        cs = resolve_build(H, k, coloring, alpha_policy=alpha_policy,
                           gamma=gamma, cap=cap)
        try:
            gens = build_generators(cs)
        except NoColorfulOccurrences:
            per_run.append(None)
            continue
        ie = IEExtractor(cs.split, k) if (use_ie and cs.split is not None) else None
        per_run.append(sharded_estimate(gens, samples, seed, r, threads,
                                        mode=mode, ie_extractor=ie,
                                        keep_log=keep_log))
    rows = {}
    for rep in per_run:
        if rep is None:
            continue
        for key, row in rep.rows.items():
            agg = rows.get(key)
            if agg is None:
                agg = rows[key] = {
                    "samples": 0,
                    "inv_sigma_sum": Fraction(0),
                    "estimate": Fraction(0),
                }
            agg["samples"] += row["samples"]
            agg["inv_sigma_sum"] += row["inv_sigma_sum"]
            agg["estimate"] += row["estimate"]
    for agg in rows.values():
        agg["estimate"] /= runs
    denom = sum((r["estimate"] for r in rows.values()), Fraction(0))
    for agg in rows.values():
        agg["relative_frequency"] = float(agg["estimate"] / denom) if denom else 0.0
    return rows, per_run
