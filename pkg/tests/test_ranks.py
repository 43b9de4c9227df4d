"""Edge/path/word ranks, partitions, stabilizer rank sets, and the walk
lemmas."""
import pytest
from hypothesis import given, settings, strategies as st

from sgcov.automata import cayley_graph
from sgcov.corpus import corpus
from sgcov.ranks import (RankContext, RankError, class_edges,
                         conjugate_rank_check, edge_rank, idempotent_chain,
                         low_rank_reach, partition_by_edge_ranks, path_rank,
                         rank_of_class, rank_partition, sausage_check,
                         stabilizer_hypotheses, stabilizer_rank_sets,
                         word_rank)
from sgcov.zoo import (ladder_ranked_edges, left_zero, line_ranked_edges,
                       rank_one_band, trivial, two_state_ranked_edges,
                       z2_times_left_zero)

MEMBERS = corpus(seed=9, count=10, max_size=5)


def ctx_of(gs):
    return RankContext.identity(cayley_graph(gs))


def test_rank_one_band_edge_ranks():
    ctx = ctx_of(rank_one_band())
    assert edge_rank(ctx, "f", "f") == 0
    cls = frozenset({"a", "b"})
    assert rank_of_class(ctx, cls) == 1


def test_idempotent_chain_rank_one_band():
    gs = rank_one_band()
    r, chain = idempotent_chain(gs, frozenset({"a", "b"}))
    s = gs.base
    assert s.elements[r] == "b"
    assert tuple(s.elements[c] for c in chain) == ("f", "b")


def test_partitions_on_line():
    states, edges = line_ranked_edges()
    expected = {0: [["q1"], ["q2"], ["q3"], ["q4"]],
                1: [["q1", "q2"], ["q3", "q4"]],
                2: [["q1", "q2", "q3", "q4"]]}
    for level, blocks in expected.items():
        part = partition_by_edge_ranks(states, edges, level)
        assert [sorted(b) for b in part.blocks] == blocks
        for b in part.blocks:
            assert part.block_of(next(iter(b))) == b


def test_two_state_low_reach():
    states, edges = two_state_ranked_edges()
    assert [r for (_q, _l, _p, r) in edges] == [1, 2, 1]
    part = partition_by_edge_ranks(states, edges, 1)
    assert sorted(part.block_of("q1")) == ["q1", "q2"]


def test_ladder_stabilizer_rank_sets():
    states, edges = ladder_ranked_edges()
    srs = stabilizer_rank_sets(states, edges)
    assert [sorted(srs[q]) for q in states] == \
        [[1, 2, 3], [1, 2, 3], [2, 3], [3]]


def test_path_rank_matches_edges_on_closed_walk():
    ctx = ctx_of(rank_one_band())
    assert word_rank(ctx, ("f",)) == 0
    # a within-class walk at "a": its path rank never exceeds the max
    # edge rank of the class
    cls = frozenset({"a", "b"})
    for (q, letter, _p) in class_edges(ctx.source, cls):
        assert path_rank(ctx, q, (letter,)) <= rank_of_class(ctx, cls)


def test_path_rank_rejects_cross_class_walks():
    ctx = ctx_of(rank_one_band())
    with pytest.raises(RankError):
        path_rank(ctx, "I", ("f", "f"))
    with pytest.raises(RankError):
        path_rank(ctx, "a", ())


def test_low_rank_reach_stays_in_class():
    ctx = ctx_of(z2_times_left_zero())
    for q in ctx.source.states:
        reach = low_rank_reach(ctx, q, 3)
        assert reach <= ctx.reach.class_of(q)
        assert q in reach


def test_rank_partition_refines_with_level():
    ctx = ctx_of(rank_one_band())
    cls = frozenset({"a", "b"})
    p0 = rank_partition(ctx, cls, 0)
    p1 = rank_partition(ctx, cls, 1)
    assert len(p0.blocks) >= len(p1.blocks)
    for b in p0.blocks:
        assert any(b <= c for c in p1.blocks)


def test_stabilizer_hypotheses_on_bands():
    ok, msg = stabilizer_hypotheses(cayley_graph(rank_one_band()))
    assert ok, msg


def test_sausage_on_zoo():
    for gs in (trivial(2), left_zero(), rank_one_band(),
               z2_times_left_zero()):
        rep = sausage_check(ctx_of(gs))
        if rep.hypotheses_ok:
            assert rep.ok, rep.counterexample


def test_sausage_and_conjugate_on_corpus():
    checked = 0
    for gs in MEMBERS:
        ctx = ctx_of(gs)
        rep = sausage_check(ctx)
        if not rep.hypotheses_ok:
            continue
        checked += 1
        assert rep.ok, rep.counterexample
        ok, witness = conjugate_rank_check(ctx)
        assert ok, witness
    assert checked > 3


@given(st.sampled_from(MEMBERS), st.lists(st.integers(0, 1),
                                          min_size=1, max_size=4),
       st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_word_rank_depends_only_on_omega_power(gs, idxs, k):
    # w and w^k share an omega power, hence a rank
    ctx = ctx_of(gs)
    word = tuple(ctx.source.alphabet[i % len(ctx.source.alphabet)]
                 for i in idxs)
    assert word_rank(ctx, word * k) == word_rank(ctx, word)
