"""Chain reduction, the R and L expansions, Maltsev expansions, the
counter/profile steps and the backwards-k check."""
import pytest
from hypothesis import given, settings, strategies as st

from sgcov.automata import (ResourceLimitError, cayley_graph,
                            cayley_morphism, injectivity_check,
                            reach_structure, transition_monoid)
from sgcov.corpus import corpus, exhaustive_semigroups
from sgcov.expansions import (ExpansionError, apply_pipeline,
                              backwards_k_check, backwards_k_pair,
                              classical_rhodes_l, factor_profile_expansion,
                              free_object, identity_expansion,
                              length_counter_expansion, maltsev_expansion,
                              maltsev_maximality_oracle, parse_pipeline,
                              reduce_chain, rhodes_l, rhodes_r,
                              rhodes_r_of_morphism, right_regular_automaton)
from sgcov.semigroups import (has_idempotent_stabilizers, induced_morphism,
                              kernel_in_variety, variety_check)
from sgcov.zoo import (left_zero, null_rclass_pair, rank_one_band,
                       right_zero, trivial, z2_times_left_zero)

FIXTURES = (trivial(2), left_zero(), right_zero(), rank_one_band(),
            z2_times_left_zero(), null_rclass_pair()[0])


# --- chain reduction -------------------------------------------------------

def _int_equiv(x, y):
    return x // 10 == y // 10


def _int_leq(x, y):
    return x // 10 <= y // 10


def test_reduce_chain_keep_sides():
    items = (31, 22, 21, 10)
    assert reduce_chain(items, _int_equiv, _int_leq, "leftmost") == \
        (31, 22, 10)
    assert reduce_chain(items, _int_equiv, _int_leq, "rightmost") == \
        (31, 21, 10)


def test_reduce_chain_rejects_bad_input():
    with pytest.raises(ExpansionError):
        reduce_chain((10, 31), _int_equiv, _int_leq, "leftmost")
    with pytest.raises(ExpansionError):
        reduce_chain((31, 10), _int_equiv, _int_leq, "middle")


@given(st.lists(st.integers(0, 39), min_size=1, max_size=8))
@settings(max_examples=60, deadline=None)
def test_reduce_chain_produces_strict_chain(xs):
    items = sorted(xs, reverse=True)
    out = reduce_chain(items, _int_equiv, _int_leq, "leftmost")
    for x, y in zip(out, out[1:]):
        assert _int_leq(y, x) and not _int_equiv(x, y)
    # idempotent: reducing a strict chain changes nothing
    assert reduce_chain(out, _int_equiv, _int_leq, "leftmost") == out


# --- R expansion -----------------------------------------------------------

def test_rhodes_r_chains_strictly_descend():
    for gs in FIXTURES:
        a = cayley_graph(gs)
        exp, eta = rhodes_r(a)
        rs = reach_structure(a)
        for chain in exp.states:
            assert eta.mapping[chain] == chain[-1]
            idx = [rs.class_index(q) for q in chain]
            assert len(set(idx)) == len(idx)
            for x, y in zip(idx, idx[1:]):
                assert (y, x) in rs.leq and x != y


def test_rhodes_r_is_idempotent_on_fixtures():
    for gs in FIXTURES[:4]:
        a = cayley_graph(gs)
        exp, _ = rhodes_r(a)
        exp2, eta2 = rhodes_r(exp)
        # each class of the expansion is re-entered at most once, so the
        # second pass adds nothing
        assert len(exp2.states) == len(exp.states)
        assert all(len(c) == len(set(c)) for c in exp2.states)


def test_rhodes_r_needs_unreturnable_start():
    gs = left_zero()
    a = cayley_graph(gs)
    bad = a.__class__(a.states, a.alphabet,
                      {**a.delta, ("a", "a"): a.start}, a.start, a.final)
    with pytest.raises(ExpansionError):
        rhodes_r(bad)


def test_rhodes_r_of_morphism_commutes():
    s, t, _phi = null_rclass_pair()
    phi = cayley_morphism(s, t)
    lifted = rhodes_r_of_morphism(phi)
    for chain, image in lifted.mapping.items():
        assert phi.mapping[chain[-1]] == image[-1]


# --- L expansion -----------------------------------------------------------

def test_rhodes_l_builds_faithfully_on_fixtures():
    # left_automaton raises when the left star action fails to separate
    # syntactic elements, so construction is itself the faithfulness check
    for gs in FIXTURES:
        aut = right_regular_automaton(gs)
        le = rhodes_l(aut, finals=aut.states)
        assert le.states
        for chain in le.states:
            for x, y in zip(chain, chain[1:]):
                assert le.leq(x, y) and not le.equiv(x, y)


def test_rhodes_l_action_is_monoidal():
    aut = right_regular_automaton(rank_one_band())
    le = rhodes_l(aut, finals=aut.states)
    x, y = aut.alphabet[:2]
    for chain in le.states:
        for u in ((x,), (y,), (x, y), (y, x)):
            step = chain
            for letter in reversed(u):
                step = le.act_word((letter,), step)
            assert step == le.act_word(u, chain)


def test_classical_rhodes_l_projects_onto_base():
    for gs in FIXTURES:
        exp = classical_rhodes_l(gs)
        down = induced_morphism(exp, gs)
        assert down is not None and down.is_surjective
        for chain in exp.chains:
            assert len(chain) == len(set(chain))


# --- Maltsev expansions ----------------------------------------------------

def test_maltsev_kernels_land_in_the_tag_class():
    for tag in ("lz", "rz", "rb", "dk:1", "dk:2", "dkrev:1"):
        for gs in (left_zero(), rank_one_band(), z2_times_left_zero()):
            res = maltsev_expansion(tag, gs)
            assert res.kernel_ok
            assert res.projection.is_surjective
            assert kernel_in_variety(res.projection, tag)


def test_maltsev_over_trivial_is_the_free_object():
    for tag in ("lz", "rz", "rb", "dk:2", "dkrev:2"):
        res = maltsev_expansion(tag, trivial(2))
        fo = free_object(tag, ("a", "b"))
        assert len(res.expansion.base) == len(fo.base)


def test_dkrev_expansion_is_one_to_one_on_regular_r():
    for k in (1, 2, 3):
        for gs in (left_zero(), z2_times_left_zero()):
            res = maltsev_expansion("dkrev:%d" % k, gs)
            phi = cayley_morphism(res.expansion, gs)
            ok, witness = injectivity_check(phi, "regR")
            assert ok, witness


def test_maltsev_maximality_oracle_small():
    gs = left_zero()
    res = maltsev_expansion("lz", gs)
    ok, msg = maltsev_maximality_oracle("lz", gs, res,
                                        exhaustive_semigroups(3))
    assert ok, msg


# --- counter and profile steps --------------------------------------------

def test_length_counter_shape():
    gs = trivial(1)
    exp = length_counter_expansion(gs, 2, 3)
    # lengths 1..4 with 5 -> 2 wraparound
    assert len(exp.base) == 4
    assert exp.eval_word(("a",) * 5) == exp.eval_word(("a",) * 2)
    assert has_idempotent_stabilizers(exp.base)
    with pytest.raises(ExpansionError):
        length_counter_expansion(gs, 0, 3)


def test_factor_profile_shape():
    exp = factor_profile_expansion(trivial(1), 1)
    # one-letter base: profiles are "one factor" and "one or two factors"
    assert len(exp.base) == 2
    with pytest.raises(ResourceLimitError):
        factor_profile_expansion(left_zero(), 2, limit=1)


def test_profile_records_all_cuts():
    gs = left_zero()
    exp = factor_profile_expansion(gs, 1)
    v = exp.eval_word(("a", "b"))
    # read the profile back out of the element name: the whole word has
    # value a, the two-piece cut gives (a, b)
    name = exp.base.elements[v]
    assert set(name.strip("{}").split("|")) == {"a", "a.b"}


# --- backwards-k -----------------------------------------------------------

def test_dk_cover_fails_backwards_k_on_left_zero():
    base = left_zero()
    cov = maltsev_expansion("dk:1", base).expansion
    rep = backwards_k_check(cov, base, 1, bound=6)
    assert not rep.ok
    assert rep.counterexample is not None


def test_profile_counter_cover_passes_backwards_k():
    base = trivial(2)
    cov = length_counter_expansion(factor_profile_expansion(base, 1), 2, 2)
    rep = backwards_k_check(cov, base, 1, bound=8)
    assert rep.ok, rep.counterexample


def test_backwards_k_pair_concrete_witness():
    base = trivial(2)
    cov = length_counter_expansion(factor_profile_expansion(base, 1), 2, 2)
    alpha = ("a", "a", "b", "b")
    beta = ("a", "b")
    if cov.base.table[cov.eval_word(alpha)][cov.eval_word(beta)] == \
            cov.eval_word(alpha):
        got = backwards_k_pair(cov, base, 1, alpha, beta)
        assert got is not None
        tilde, pieces = got
        assert tilde and all(pieces)
        assert tilde + sum(pieces, ()) == alpha


# --- pipelines -------------------------------------------------------------

def test_parse_pipeline_names_and_errors():
    steps = parse_pipeline("profile:1|counter:2:2|maltsev:rb")
    assert [s.name for s in steps] == \
        ["profile:1", "counter:2:2", "maltsev:rb"]
    assert parse_pipeline("identity")[0].name == "identity"
    for bad in ("bogus", "profile:x", "counter:2", "counter:a:b", ""):
        with pytest.raises(ExpansionError):
            parse_pipeline(bad)


def test_apply_pipeline_composes():
    gs = trivial(2)
    steps = parse_pipeline("profile:1|counter:2:2")
    direct = length_counter_expansion(factor_profile_expansion(gs, 1), 2, 2)
    piped = apply_pipeline(steps, gs)
    assert len(piped.base) == len(direct.base)
    assert identity_expansion().apply(gs) is gs
