"""Named small instances used by the documentation, data files and tests."""

from __future__ import annotations

from .semigroups import FiniteSemigroup, GeneratedSemigroup, SgMorphism
from .automata import Automaton


def trivial(n_letters: int = 2) -> GeneratedSemigroup:
    base = FiniteSemigroup.from_table(("e",), ((0,),))
    return GeneratedSemigroup.build(base, tuple("ab"[:n_letters]),
                                    (0,) * n_letters)


def cyclic(n: int, letter: str = "x") -> GeneratedSemigroup:
    """The cyclic group of order n generated by one letter."""
    names = tuple("1" if i == 0 else ("x" if i == 1 else "x%d" % i)
                  for i in range(n))
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    base = FiniteSemigroup.from_table(names, table)
    return GeneratedSemigroup.build(base, (letter,), (1 % n,))


def left_zero(labels=("a", "b")) -> GeneratedSemigroup:
    labels = tuple(labels)
    n = len(labels)
    table = tuple(tuple(i for _j in range(n)) for i in range(n))
    base = FiniteSemigroup.from_table(labels, table)
    return GeneratedSemigroup.build(base, labels, tuple(range(n)))


def right_zero(labels=("a", "b")) -> GeneratedSemigroup:
    labels = tuple(labels)
    n = len(labels)
    table = tuple(tuple(j for j in range(n)) for _i in range(n))
    base = FiniteSemigroup.from_table(labels, table)
    return GeneratedSemigroup.build(base, labels, tuple(range(n)))


def z2_times_left_zero() -> GeneratedSemigroup:
    """The A-generated product of Z2 and the left-zero band on {a, b}."""
    pairs = [("x", "a"), ("x", "b"), ("1", "a"), ("1", "b")]
    pos = {p: i for i, p in enumerate(pairs)}
    names = tuple("%s%s" % p for p in pairs)

    def mul(p, q):
        g = "1" if p[0] == q[0] else "x"
        return (g, p[1])

    table = tuple(tuple(pos[mul(p, q)] for q in pairs) for p in pairs)
    base = FiniteSemigroup.from_table(names, table)
    return GeneratedSemigroup.build(base, ("a", "b"),
                                    (pos[("x", "a")], pos[("x", "b")]))


def rank_one_band() -> GeneratedSemigroup:
    """A three-element band {f, a, b}: {a, b} is a rank-one R-class whose
    stabilizers carry the idempotent chain f > b."""
    names = ("f", "a", "b")
    table = ((0, 1, 2),   # f row
             (2, 1, 2),   # a row
             (2, 1, 2))   # b row
    base = FiniteSemigroup.from_table(names, table)
    return GeneratedSemigroup.build(base, ("f", "a"), (0, 1))


def null_rclass_pair():
    """A five-element S with a null middle R-class collapsing onto a
    four-element T: the projection is 1:1regR but not 1:1R.

    Returns (S, T, phi).
    """
    s_names = ("i", "x", "i-", "x-", "0")
    s_table = ((0, 1, 2, 3, 4),
               (1, 0, 2, 3, 4),
               (2, 3, 4, 4, 4),
               (3, 2, 4, 4, 4),
               (4, 4, 4, 4, 4))
    s_base = FiniteSemigroup.from_table(s_names, s_table)
    s = GeneratedSemigroup.build(s_base, ("a", "b"), (1, 2))
    t_names = ("i", "x", "y", "0")
    t_table = ((0, 1, 2, 3),
               (1, 0, 2, 3),
               (2, 2, 3, 3),
               (3, 3, 3, 3))
    t_base = FiniteSemigroup.from_table(t_names, t_table)
    t = GeneratedSemigroup.build(t_base, ("a", "b"), (1, 2))
    phi = SgMorphism.build(s_base, t_base, (0, 1, 2, 2, 3))
    return s, t, phi


def diamond_automaton() -> Automaton:
    """Two idempotent branches joining in a zero; the R expansion splits
    the zero into one state per branch."""
    states = ("I", "qa", "qb", "0")
    delta = {("I", "a"): "qa", ("I", "b"): "qb",
             ("qa", "a"): "qa", ("qa", "b"): "0",
             ("qb", "b"): "qb", ("qb", "a"): "0",
             ("0", "a"): "0", ("0", "b"): "0"}
    return Automaton(states, ("a", "b"), delta, "I")


def line_ranked_edges():
    """Four states in a line with given edge ranks 1,2,1 forward and 1,1,1
    back; partitions at levels 0, 1, 2 are singletons, pairs, everything."""
    states = ("q1", "q2", "q3", "q4")
    edges = [("q1", "a", "q2", 1), ("q2", "b", "q1", 1),
             ("q2", "c", "q3", 2), ("q3", "d", "q2", 1),
             ("q3", "e", "q4", 1), ("q4", "f", "q3", 1)]
    return states, edges


def two_state_ranked_edges():
    """Two states with a rank-2 bypass edge; level-1 walks from q1 are
    (ac)* and (ac)*a."""
    states = ("q1", "q2")
    edges = [("q1", "a", "q2", 1), ("q1", "b", "q2", 2),
             ("q2", "c", "q1", 1)]
    return states, edges


def ladder_ranked_edges():
    """Three rungs of increasing rank; stabilizer rank sets are
    {1,2,3}, {1,2,3}, {2,3}, {3}."""
    states = ("q1", "q2", "q3", "q4")
    edges = [("q1", "a", "q2", 1), ("q2", "b", "q1", 1),
             ("q2", "c", "q3", 2), ("q3", "d", "q2", 2),
             ("q3", "e", "q4", 3), ("q4", "f", "q3", 3)]
    return states, edges
