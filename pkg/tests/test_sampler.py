import math
import random
from fractions import Fraction

import pytest

from hypergraphlets.buildup import Coloring, build_counters, build_counters_naive, random_coloring
from hypergraphlets.canonlab import canonical_key, connected_ksets
from hypergraphlets.hypercore import Hypergraph, gaifman, induced_sub, parse_hypergraph
from hypergraphlets.sampler import (
    IEExtractor,
    NoColorfulOccurrences,
    SamplerError,
    VoseAlias,
    approx_counts,
    build_generators,
    estimate_counts,
    extract_hypergraphlet,
    local_adjacency,
    merge_reports,
    resolve_build,
    sample_outcome,
    sharded_estimate,
    spanning_tree_count,
)
from hypergraphlets.splitter import apply_split, candidate_alphas

from oracles import count_spanning_trees_brute, random_hypergraph

TOY_TEXT = "# vertices 8\n0 1\n1 4\n3 5 6\n0 1 2 4 6\n"

# Three colorful connected triples under colors (0,1,2,1,2):
# {0,1,2} with 3 spanning trees, {0,2,3} and {0,3,4} with 1 each; W = 15.
CRAFTED = Hypergraph(5, [(0, 1), (0, 2), (1, 2), (0, 3), (3, 4)])
CRAFTED_COLORING = Coloring(3, (0, 1, 2, 1, 2))
CRAFTED_LAW = {(0, 1, 2): Fraction(3, 5), (0, 2, 3): Fraction(1, 5), (0, 3, 4): Fraction(1, 5)}


def four_sigma_ok(hits, n, p):
    # Binomial tail bound: empirical rate within four standard errors.
    se = math.sqrt(p * (1 - p) / n)
    return abs(hits / n - p) <= 4 * se + 1e-12


# --- alias sampling -------------------------------------------------------

def test_vose_alias_law():
    alias = VoseAlias(["a", "b", "c"], [1, 2, 7])
    rng = random.Random(79)
    n = 50000
    tally = {"a": 0, "b": 0, "c": 0}
    for _ in range(n):
        tally[alias.draw(rng)] += 1
    assert four_sigma_ok(tally["a"], n, 0.1)
    assert four_sigma_ok(tally["b"], n, 0.2)
    assert four_sigma_ok(tally["c"], n, 0.7)


def test_vose_alias_zero_weights_excluded():
    alias = VoseAlias(["a", "b", "c"], [0, 5, 0])
    rng = random.Random(83)
    assert {alias.draw(rng) for _ in range(50)} == {"b"}
    with pytest.raises(SamplerError):
        VoseAlias(["a"], [0])
    with pytest.raises(SamplerError):
        VoseAlias([], [])


def test_vose_alias_big_integer_weights():
    alias = VoseAlias([0, 1], [10 ** 40, 3 * 10 ** 40])
    rng = random.Random(89)
    n = 20000
    ones = sum(alias.draw(rng) for _ in range(n))
    assert four_sigma_ok(ones, n, 0.75)


# --- spanning-tree counts -------------------------------------------------

def test_spanning_tree_count_frozen():
    tri = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert spanning_tree_count(tri) == 3
    k4 = [[int(i != j) for j in range(4)] for i in range(4)]
    assert spanning_tree_count(k4) == 16
    k5 = [[int(i != j) for j in range(5)] for i in range(5)]
    assert spanning_tree_count(k5) == 125
    c4 = [[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]]
    assert spanning_tree_count(c4) == 4
    assert spanning_tree_count([[0]]) == 1
    with pytest.raises(SamplerError, match="disconnected"):
        spanning_tree_count([[0, 1, 0], [1, 0, 0], [0, 0, 0]])


def test_spanning_tree_count_random_agreement():
    rng = random.Random(97)
    done = 0
    while done < 120:
        n = rng.randint(2, 6)
        pairs = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.6
        ]
        A = [[0] * n for _ in range(n)]
        for i, j in pairs:
            A[i][j] = A[j][i] = 1
        expect = count_spanning_trees_brute(n, pairs)
        if expect == 0:
            continue
        assert spanning_tree_count(A) == expect
        done += 1


def test_spanning_tree_count_is_integer_exact():
    # A big complete graph: n^(n-2) spanning trees, exact to the last digit.
    n = 9
    A = [[int(i != j) for j in range(n)] for i in range(n)]
    assert spanning_tree_count(A) == n ** (n - 2)


# --- treelet sampling law -------------------------------------------------

def crafted_generators(alpha=None):
    if alpha is None:
        cs = build_counters_naive(CRAFTED, 3, CRAFTED_COLORING)
    else:
        cs = build_counters(CRAFTED, apply_split(CRAFTED, alpha), 3, CRAFTED_COLORING)
    return build_generators(cs)


def test_crafted_build_total():
    gens = crafted_generators()
    assert gens.cs.W == 15


def test_sample_law_weighted():
    gens = crafted_generators()
    rng = random.Random(101)
    n = 20000
    tally = {}
    for _ in range(n):
        out = sample_outcome(gens, rng)
        tally[out.U] = tally.get(out.U, 0) + 1
        assert out.sigma == (3 if out.U == (0, 1, 2) else 1)
    assert set(tally) == set(CRAFTED_LAW)
    for U, p in CRAFTED_LAW.items():
        assert four_sigma_ok(tally[U], n, float(p))


def test_sample_law_through_split_generators():
    # Same law when lower/upper generators drive the walk.
    for alpha in (0, 2):
        gens = crafted_generators(alpha=alpha)
        assert gens.cs.W == 15
        rng = random.Random(103)
        n = 20000
        tally = {}
        for _ in range(n):
            out = sample_outcome(gens, rng)
            tally[out.U] = tally.get(out.U, 0) + 1
        for U, p in CRAFTED_LAW.items():
            assert four_sigma_ok(tally[U], n, float(p))


def test_sampled_trees_are_spanning_trees():
    gens = crafted_generators()
    rng = random.Random(107)
    for _ in range(300):
        tid, U, edges = gens.sample_treelet(rng)
        assert len(U) == 3
        assert len(edges) == 2
        verts = set()
        for u, v in edges:
            verts.update((u, v))
        assert verts == set(U)
        A = local_adjacency(gens.cs.split, U) if gens.cs.split else None
        # Every tree edge joins co-occurring vertices.
        G = gaifman(CRAFTED)
        for u, v in edges:
            assert v in G.adj[u]


def test_no_colorful_occurrences():
    H = Hypergraph(3, [(0, 1), (1, 2), (0, 2)])
    cs = build_counters_naive(H, 3, Coloring(3, [0, 0, 1]))
    with pytest.raises(NoColorfulOccurrences):
        build_generators(cs)


# --- extraction -----------------------------------------------------------

def test_extraction_agreement():
    rng = random.Random(109)
    toy = parse_hypergraph(TOY_TEXT)
    for H in [toy] + [random_hypergraph(rng, n_max=10, m_max=8, size_max=5) for _ in range(20)]:
        k = rng.randint(2, 3)
        col = random_coloring(H, k, rng.random())
        for alpha in candidate_alphas(H):
            split = apply_split(H, alpha)
            cs = build_counters(H, split, k, col)
            try:
                gens = build_generators(cs)
            except NoColorfulOccurrences:
                continue
            ie = IEExtractor(split, k)
            for _ in range(10):
                _tid, U, _edges = gens.sample_treelet(rng)
                direct = induced_sub(H, U)
                assert extract_hypergraphlet(split, U) == direct
                assert ie.extract(U) == direct


def test_sample_outcome_key_consistency():
    gens = crafted_generators(alpha=2)
    ie = IEExtractor(gens.cs.split, 3)
    rng = random.Random(113)
    for _ in range(50):
        out = sample_outcome(gens, rng, ie_extractor=ie)
        assert out.key == canonical_key(induced_sub(CRAFTED, out.U))


# --- estimation -----------------------------------------------------------

def test_estimator_exact_on_unique_occurrence():
    H = Hypergraph(3, [(0, 1), (1, 2), (0, 2)])
    cs = build_counters_naive(H, 3, Coloring(3, [0, 1, 2]))
    gens = build_generators(cs)
    rng = random.Random(127)
    report = estimate_counts(gens, 500, rng)
    key = canonical_key(induced_sub(H, (0, 1, 2)))
    assert set(report.rows) == {key}
    row = report.rows[key]
    assert row["samples"] == 500
    assert row["inv_sigma_sum"] == Fraction(500, 3)
    assert row["estimate"] == Fraction(1)
    assert row["relative_frequency"] == 1.0
    assert report.total_estimate() == 1


def test_estimator_uniform_mode():
    H = Hypergraph(3, [(0, 1), (1, 2), (0, 2)])
    cs = build_counters_naive(H, 3, Coloring(3, [0, 1, 2]))
    gens = build_generators(cs)
    rng = random.Random(131)
    report = estimate_counts(gens, 3000, rng, mode="uniform")
    key = canonical_key(induced_sub(H, (0, 1, 2)))
    row = report.rows[key]
    # Acceptance probability 1/sigma = 1/3; the estimate recovers ~1.
    assert four_sigma_ok(row["samples"], 3000, 1 / 3)
    assert row["estimate"] == Fraction(cs.W, 3 * 3000) * row["samples"]
    assert report.mode == "uniform"


def test_estimate_counts_validation():
    gens = crafted_generators()
    rng = random.Random(1)
    with pytest.raises(SamplerError):
        estimate_counts(gens, 0, rng)
    with pytest.raises(SamplerError):
        estimate_counts(gens, 10, rng, mode="nonsense")


def test_estimator_unbiased_on_crafted():
    # Mean of independent runs approaches the exact colorful counts.  The
    # three colorful triples all land on distinct keys (edge truncations
    # leave different singleton patterns), each with exact count 1.
    gens = crafted_generators()
    runs, K = 120, 60
    acc = {}
    for r in range(runs):
        rng = random.Random("law|%d" % r)
        rep = estimate_counts(gens, K, rng, keep_log=False)
        for key, row in rep.rows.items():
            acc.setdefault(key, []).append(row["estimate"])
    expected_keys = {
        canonical_key(induced_sub(CRAFTED, U)) for U in CRAFTED_LAW
    }
    assert set(acc) == expected_keys
    assert len(expected_keys) == 3
    for key, vals in acc.items():
        assert abs(float(sum(vals) / runs) - 1.0) < 0.15


def test_merge_reports_consistency():
    gens = crafted_generators()
    reports = []
    sizes = [300, 500, 200]
    for i, kt in enumerate(sizes):
        rng = random.Random("shard|%d" % i)
        reports.append(estimate_counts(gens, kt, rng))
    merged = merge_reports(reports, sum(sizes))
    assert merged.samples == 1000
    for key, row in merged.rows.items():
        assert row["samples"] == sum(
            r.rows.get(key, {"samples": 0})["samples"] for r in reports
        )
        assert row["estimate"] == Fraction(15, 3 * 1000) * row["inv_sigma_sum"]
    assert len(merged.log) == 1000
    with pytest.raises(SamplerError):
        merge_reports([], 10)


def test_merge_reports_rejects_mixed_builds():
    g1 = crafted_generators()
    H = Hypergraph(3, [(0, 1), (1, 2), (0, 2)])
    cs = build_counters_naive(H, 3, Coloring(3, [0, 1, 2]))
    g2 = build_generators(cs)
    r1 = estimate_counts(g1, 10, random.Random(1))
    r2 = estimate_counts(g2, 10, random.Random(2))
    with pytest.raises(SamplerError, match="disagree"):
        merge_reports([r1, r2], 20)


def test_sharded_estimate_single_thread_matches_plain():
    from hypergraphlets.buildup import derived_rng

    gens = crafted_generators()
    direct = estimate_counts(gens, 400, derived_rng("s9", "run0|sampling"))
    sharded = sharded_estimate(gens, 400, "s9", 0, 1)
    assert sharded.rows == direct.rows
    assert sharded.log == direct.log


def test_sharded_estimate_multithread_partitions_budget():
    gens = crafted_generators()
    rep = sharded_estimate(gens, 1001, "s10", 0, 4)
    assert rep.samples == 1001
    assert sum(r["samples"] for r in rep.rows.values()) == 1001
    again = sharded_estimate(gens, 1001, "s10", 0, 4)
    assert rep.rows == again.rows
    with pytest.raises(SamplerError):
        sharded_estimate(gens, 10, "s", 0, 0)


def test_resolve_build_policies():
    toy = parse_hypergraph(TOY_TEXT)
    col = random_coloring(toy, 3, "p")
    naive = resolve_build(toy, 3, col, alpha_policy="naive")
    assert naive.split is None
    auto = resolve_build(toy, 3, col, alpha_policy="auto")
    assert auto.split is not None and auto.split.alpha == 5
    fixed = resolve_build(toy, 3, col, alpha_policy=3)
    assert fixed.split.alpha == 3
    assert naive.tables_equal(auto) and auto.tables_equal(fixed)


def test_approx_counts_runs_average():
    toy = parse_hypergraph(TOY_TEXT)
    rows, reports = approx_counts(toy, 3, 300, "avg2", runs=3)
    assert len(reports) == 3
    per_key = {}
    for rep in reports:
        assert rep is not None
        for key, row in rep.rows.items():
            per_key.setdefault(key, Fraction(0))
            per_key[key] += row["estimate"]
    for key, row in rows.items():
        assert row["estimate"] == per_key[key] / 3
    total = sum(r["relative_frequency"] for r in rows.values())
    assert total == pytest.approx(1.0)


def test_approx_counts_counts_empty_runs_in_average():
    # A 2-vertex graph colored with 3 colors never sees all colors; with
    # more vertices some runs are colorful and some are not, and the dead
    # runs still divide the average.
    H = Hypergraph(3, [(0, 1), (1, 2), (0, 2)])
    rows, reports = approx_counts(H, 3, 50, "dead-runs", runs=8)
    dead = sum(1 for rep in reports if rep is None)
    live = 8 - dead
    assert 0 < live < 8  # seed chosen so both kinds occur
    per_key = {}
    for rep in reports:
        if rep is None:
            continue
        for key, row in rep.rows.items():
            per_key.setdefault(key, Fraction(0))
            per_key[key] += row["estimate"]
    for key, row in rows.items():
        assert row["estimate"] == per_key[key] / 8
    with pytest.raises(SamplerError):
        approx_counts(H, 3, 50, "x", runs=0)
