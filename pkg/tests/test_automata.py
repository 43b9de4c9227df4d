"""Automata, morphisms, products, congruence intervals, and the .aut
format."""
import pytest
from hypothesis import given, settings, strategies as st

from sgcov.automata import (Automaton, AutomatonError, ResourceLimitError,
                            canonical_form, cayley_graph, cayley_morphism,
                            direct_product, enumerate_interval,
                            find_morphism, identity_morphism,
                            injectivity_check, isomorphic, parse_aut,
                            product_projections, quotient,
                            rank_condition_check, reach_structure,
                            regular_classes, serialize_aut,
                            transition_monoid)
from sgcov.corpus import corpus, corpus_morphisms
from sgcov.zoo import (diamond_automaton, left_zero, null_rclass_pair,
                       rank_one_band, trivial, z2_times_left_zero)

MEMBERS = corpus(seed=5, count=10, max_size=5)


def test_reach_structure_diamond():
    a = diamond_automaton()
    rs = reach_structure(a)
    classes = {frozenset(c) for c in rs.classes}
    assert frozenset({"qa"}) in classes
    assert frozenset({"0"}) in classes
    # the zero lies strictly below both branches
    zi = rs.class_index("0")
    assert rs.lt(rs.class_index("qa"), zi) or rs.lt(zi, rs.class_index("qa"))


def test_transition_monoid_recovers_semigroup():
    for gs in (rank_one_band(), left_zero(), z2_times_left_zero()):
        tm = transition_monoid(cayley_graph(gs))
        back = tm.generated()
        assert isomorphic(cayley_graph(back), cayley_graph(gs))


def test_cayley_graph_shape():
    gs = left_zero(("a", "b"))
    a = cayley_graph(gs)
    assert a.start == "I"
    assert set(a.states) == {"I", "a", "b"}
    assert a.step("I", "a") == "a"
    assert a.step("a", "b") == "a"
    assert a.start_unreturnable()


def test_find_morphism_and_identity():
    b = cayley_graph(z2_times_left_zero())
    a = cayley_graph(left_zero(("a", "b")))
    phi = find_morphism(b, a)
    assert phi is not None and phi.is_surjective
    assert find_morphism(a, b) is None
    ident = identity_morphism(a)
    assert all(ident(q) == q for q in a.states)


def test_morphism_commutes_with_transitions():
    b = cayley_graph(z2_times_left_zero())
    a = cayley_graph(left_zero(("a", "b")))
    phi = find_morphism(b, a)
    for q in b.states:
        for letter in b.alphabet:
            p = b.step(q, letter)
            if p is not None:
                assert phi(p) == a.step(phi(q), letter)


def test_direct_product_is_join():
    # both projections exist, and any common cover maps onto the product
    a1 = cayley_graph(left_zero(("a", "b")))
    a2 = cayley_graph(trivial(2))
    prod = direct_product(a1, a2)
    p1, p2 = product_projections(prod, a1, a2)
    assert p1.is_surjective
    common = cayley_graph(z2_times_left_zero())
    if find_morphism(common, a1) and find_morphism(common, a2):
        assert find_morphism(common, prod) is not None


def test_injectivity_modes_on_digression():
    s, t, _phi = null_rclass_pair()
    m = cayley_morphism(s, t)
    assert injectivity_check(m, "regR")[0] is True
    ok, witness = injectivity_check(m, "R")
    assert ok is False and witness[0] == "collision"
    with pytest.raises(AutomatonError):
        injectivity_check(m, "bogus")


def test_rank_condition_on_identity():
    a = cayley_graph(rank_one_band())
    assert rank_condition_check(identity_morphism(a))[0] is True


def test_regular_classes_of_cayley():
    a = cayley_graph(rank_one_band())
    rs = reach_structure(a)
    reg = regular_classes(a)
    # the class {a, b} carries idempotent loops, hence is regular
    assert rs.class_index("a") in reg


def test_enumerate_interval_and_quotient():
    gs = left_zero(("a", "b"))
    b = cayley_graph(gs)
    triv = Automaton(("I", "s"), b.alphabet,
                     {("I", x): "s" for x in b.alphabet}
                     | {("s", x): "s" for x in b.alphabet}, "I")
    phi = find_morphism(b, triv)
    entries = enumerate_interval(b, phi)
    assert len(entries) >= 2
    for cong, x, p1, p2 in entries:
        assert p1.is_surjective
        x2, _ = quotient(b, cong)
        assert isomorphic(x, x2)


def test_enumerate_interval_resource_limit():
    gs = z2_times_left_zero()
    b = cayley_graph(gs)
    triv = Automaton(("I", "s"), b.alphabet,
                     {("I", x): "s" for x in b.alphabet}
                     | {("s", x): "s" for x in b.alphabet}, "I")
    phi = find_morphism(b, triv)
    with pytest.raises(ResourceLimitError):
        enumerate_interval(b, phi, limit=2)


def test_canonical_form_invariance():
    a = cayley_graph(rank_one_band())
    relabeled = Automaton(tuple("s%d" % a.index(q) for q in a.states),
                          a.alphabet,
                          {("s%d" % a.index(q), x): "s%d" % a.index(p)
                           for (q, x), p in a.delta.items()},
                          "s%d" % a.index(a.start))
    assert canonical_form(a) == canonical_form(relabeled)
    assert isomorphic(a, relabeled)


def test_aut_round_trip():
    for a in (diamond_automaton(), cayley_graph(z2_times_left_zero())):
        back = parse_aut(serialize_aut(a))
        assert isomorphic(a, back)
        assert back.alphabet == a.alphabet


def test_closure_laws_on_seeded_morphisms():
    # 1:1R and the rank condition survive composition along the interval
    for (b, x1, x2, p1, p2, m) in corpus_morphisms(seed=2, count=25):
        ok1, _ = injectivity_check(p1, "R")
        ok2, _ = injectivity_check(m, "R")
        if ok1 and ok2:
            assert injectivity_check(m.compose(p1), "R")[0]
        assert m.compose(p1).mapping == p2.mapping


@given(st.sampled_from(MEMBERS[:40]), st.lists(st.integers(0, 1),
                                               min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_run_agrees_with_monoid_action(gs, idxs):
    a = cayley_graph(gs)
    word = [a.alphabet[i % len(a.alphabet)] for i in idxs]
    tm = transition_monoid(a)
    q = a.run(a.start, word)
    assert q == a.states[tm.transforms[tm.word(word)][a.index(a.start)]]
