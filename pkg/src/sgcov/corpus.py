"""Deterministic corpora of A-generated semigroups and their Cayley graphs.

Exhaustive up to isomorphism for small sizes via canonical-BFS enumeration
of Cayley automata; seeded random transformation closures supply larger
members.  EXHAUSTIVE_BOUND records how far the exhaustive sweep goes.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from .semigroups import FiniteSemigroup, GeneratedSemigroup
from .automata import (Automaton, AutMorphism, cayley_graph,
                       enumerate_interval, find_morphism, quotient)

EXHAUSTIVE_BOUND = 4


def _closure_semigroup(n_letters, act, points, alphabet=None):
    """The transformation semigroup generated by the letter actions."""
    alphabet = alphabet or tuple("ab"[:n_letters])
    gens = [tuple(act[a][p] for p in range(points)) for a in range(n_letters)]
    elements = list(dict.fromkeys(gens))
    lookup = {tf: i for i, tf in enumerate(elements)}
    frontier = list(elements)
    while frontier:
        tf = frontier.pop(0)
        for g in gens:
            comp = tuple(g[tf[p]] for p in range(points))
            if comp not in lookup:
                lookup[comp] = len(elements)
                elements.append(comp)
                frontier.append(comp)
    table = tuple(tuple(lookup[tuple(e2[e1[p]] for p in range(points))]
                        for e2 in elements) for e1 in elements)
    names = tuple("t%d" % i for i in range(len(elements)))
    base = FiniteSemigroup.from_table(names, table, check=False)
    sigma = tuple(lookup[tuple(g)] for g in gens)
    return GeneratedSemigroup.build(base, alphabet, sigma)


def _from_cayley_table(n, cells, n_letters):
    """Reconstruct the A-generated semigroup from a candidate Cayley
    automaton (state 0 = fresh start); None when the letter actions do not
    induce a semigroup on the states."""
    # states 1..n; cells: ((q, a) -> state) for q in 0..n, a in 0..m-1
    points = n + 1
    letter_tf = []
    for a in range(n_letters):
        letter_tf.append(tuple(cells[(q, a)] for q in range(points)))
    elements = []
    lookup = {}
    frontier = []
    for tf in letter_tf:
        if tf not in lookup:
            lookup[tf] = len(elements)
            elements.append(tf)
            frontier.append(tf)
    while frontier:
        tf = frontier.pop(0)
        for g in letter_tf:
            comp = tuple(g[tf[p]] for p in range(points))
            if comp not in lookup:
                lookup[comp] = len(elements)
                elements.append(comp)
                frontier.append(comp)
                if len(elements) > n:
                    return None
    if len(elements) != n:
        return None
    # the map transformation -> state reached from the start must be
    # injective for the state set to carry the semigroup
    reached = [tf[0] for tf in elements]
    if len(set(reached)) != n:
        return None
    state_of = {lookup[tf]: tf[0] for tf in elements}
    elt_of_state = {v: k for k, v in state_of.items()}
    table = []
    for x in range(n):
        sx = state_of[x]
        table.append(tuple(elt_of_state[elements[y][sx]] for y in range(n)))
    # renumber elements by their state index so output order is canonical
    order = sorted(range(n), key=lambda x: state_of[x])
    pos = {x: i for i, x in enumerate(order)}
    names = tuple("s%d" % state_of[x] for x in order)
    table2 = tuple(tuple(pos[table[x][y]] for y in order) for x in order)
    base = FiniteSemigroup.from_table(names, table2, check=False)
    alphabet = tuple("ab"[:n_letters])
    sigma = tuple(pos[lookup[letter_tf[a]]] for a in range(n_letters))
    return GeneratedSemigroup.build(base, alphabet, sigma)


def _enumerate_cayley(n, n_letters):
    """Canonical-BFS enumeration of candidate Cayley automata.

    State 0 is the fresh start (no incoming edges); states 1..n appear in
    first-visit order scanning cells (0,a_1),(0,a_2),(1,a_1),...  Each
    A-generated semigroup of size n arises from exactly one table.
    """
    out = []
    cell_order = [(q, a) for q in range(n + 1) for a in range(n_letters)]

    def fill(idx, cells, max_seen):
        if idx == len(cell_order):
            if max_seen == n:
                gs = _from_cayley_table(n, cells, n_letters)
                if gs is not None:
                    out.append(gs)
            return
        (q, a) = cell_order[idx]
        if q > max_seen:
            return  # unreachable state left a gap; prune
        for target in range(1, min(max_seen + 1, n) + 1):
            cells[(q, a)] = target
            fill(idx + 1, cells, max(max_seen, target))
        del cells[(q, a)]

    fill(0, {}, 0)
    return out


@lru_cache(maxsize=None)
def exhaustive_semigroups(max_size: int = EXHAUSTIVE_BOUND,
                          n_letters: int = 2) -> tuple:
    """All A-generated semigroups with at most max_size elements, up to
    isomorphism commuting with the generator map."""
    out = []
    for n in range(1, max_size + 1):
        out.extend(_enumerate_cayley(n, n_letters))
    return tuple(out)


def sample_semigroups(seed: int, count: int, max_size: int = 6,
                      n_letters: int = 2) -> tuple:
    """Seeded random transformation semigroups with at most max_size
    elements (duplicates by canonical Cayley form removed)."""
    from .automata import canonical_form
    rng = random.Random(seed)
    seen = set()
    out = []
    attempts = 0
    while len(out) < count and attempts < count * 200:
        attempts += 1
        points = rng.randint(2, 4)
        act = [[rng.randrange(points) for _p in range(points)]
               for _a in range(n_letters)]
        gs = _closure_semigroup(n_letters, act, points)
        if len(gs.base) > max_size:
            continue
        key = canonical_form(cayley_graph(gs))
        if key in seen:
            continue
        seen.add(key)
        out.append(gs)
    return tuple(out)


def corpus(seed: int = 0, count: int = 40,
           max_size: int = 6) -> tuple:
    """The standard mixed corpus: exhaustive small + seeded samples."""
    return exhaustive_semigroups() + sample_semigroups(seed, count, max_size)


def corpus_morphisms(seed: int = 0, count: int = 500, limit: int = 9):
    """Seeded surmorphisms of automata: Cayley graphs modulo right
    congruences, paired along refinement so compositions exist."""
    rng = random.Random(seed)
    pool = [gs for gs in corpus(seed, 30) if len(gs.base) + 1 <= limit]
    out = []
    while len(out) < count:
        gs = rng.choice(pool)
        b = cayley_graph(gs)
        triv = Automaton(("I", "s"), b.alphabet,
                         {("I", a): "s" for a in b.alphabet}
                         | {("s", a): "s" for a in b.alphabet}, "I")
        phi = find_morphism(b, triv)
        entries = enumerate_interval(b, phi, limit)
        if len(entries) < 2:
            continue
        cong1, x1, p1, _ = rng.choice(entries)
        # a coarser one: join with another entry when it refines
        coarser = [e for e in entries if cong1.refines(e[0])]
        cong2, x2, p2, _ = rng.choice(coarser)
        # the induced morphism x1 -> x2
        m = find_morphism(x1, x2)
        if m is None:
            continue
        out.append((b, x1, x2, p1, p2, m))
    return tuple(out)
