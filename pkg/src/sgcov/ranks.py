"""Rank functions on words, edges and paths of automata.

All ranks bottom out in the algebraic rank of elements of a syntactic
monoid: the length of the longest strict chain of regular J-classes above
the omega power.  max over an empty edge set is -1, an explicit empty level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .semigroups import (GeneratedSemigroup, SemigroupError, algebraic_rank,
                         green_data, idempotent_below, omega_power,
                         right_stabilizer, unambiguous_l_order_within,
                         variety_check)
from .automata import (Automaton, AutMorphism, AutomatonError,
                       _tarjan_sccs, cayley_graph, identity_morphism,
                       induced_monoid_map, reach_structure, transition_monoid)


class RankError(ValueError):
    pass


@dataclass
class RankContext:
    """A morphism psi: source -> codomain with cached monoid rank data."""
    source: Automaton
    codomain: Automaton
    psi: AutMorphism

    def __post_init__(self):
        self.tm_src = transition_monoid(self.source)
        self.tm_cod = transition_monoid(self.codomain)
        self.rho = induced_monoid_map(self.psi)
        # ranks live in the proper (nonempty-word) part: an adjoined
        # identity would add a spurious top regular J-class
        proper = sorted(self.tm_cod.proper)
        sub = self.tm_cod.monoid.subsemigroup(proper)
        pos = {m: i for i, m in enumerate(proper)}
        self.elt_rank = {m: algebraic_rank(sub, pos[m]) for m in proper}
        if self.tm_cod.monoid.identity not in pos:
            self.elt_rank[self.tm_cod.monoid.identity] = 0
        self.reach = reach_structure(self.source)
        self._edge_cache: dict = {}

    @classmethod
    def identity(cls, a: Automaton) -> "RankContext":
        return cls(a, a, identity_morphism(a))


def word_rank(ctx: RankContext, word) -> int:
    """Rank of the codomain monoid element of a word (empty -> identity)."""
    return ctx.elt_rank[ctx.tm_cod.word(word)]


def _rank_via_elt(ctx, elt_src: int) -> int:
    return ctx.elt_rank[ctx.rho[elt_src]]


def _path_rank_elt(ctx, q, elt_src: int) -> int:
    """min rank over continuations w.x returning to q, w given by element."""
    src = ctx.source
    qi = src.index(q)
    monoid = ctx.tm_src.monoid
    best = None
    for x in range(len(monoid)):
        m = monoid.table[elt_src][x]
        tf = ctx.tm_src.transforms[m]
        if tf[qi] == qi:
            r = _rank_via_elt(ctx, m)
            if best is None or r < best:
                best = r
    if best is None:
        raise RankError("no continuation of the path returns to %r" % (q,))
    return best


def path_rank(ctx: RankContext, q, word) -> int:
    """Path rank of a nonempty within-class walk labelled by word at q."""
    if not word:
        raise RankError("path rank needs a nonempty word")
    src = ctx.source
    p = src.run(q, word)
    if p is None:
        raise RankError("walk undefined from %r by %r" % (q, word))
    if ctx.reach.class_of(q) != ctx.reach.class_of(p):
        raise RankError("walk leaves the reachability class of %r" % (q,))
    return _path_rank_elt(ctx, q, ctx.tm_src.word(word))


def edge_rank(ctx: RankContext, q, letter) -> int:
    key = (q, letter)
    if key not in ctx._edge_cache:
        ctx._edge_cache[key] = path_rank(ctx, q, (letter,))
    return ctx._edge_cache[key]


def class_edges(a: Automaton, r_class):
    members = set(r_class)
    return [(q, letter, p) for (q, letter, p) in a.edges()
            if q in members and p in members]


def rank_of_class(ctx: RankContext, r_class) -> int:
    """Max edge rank inside a reachability class; -1 when it has no edges."""
    edges = class_edges(ctx.source, r_class)
    if not edges:
        return -1
    return max(edge_rank(ctx, q, letter) for (q, letter, _p) in edges)


@dataclass
class RankPartition:
    r_class: frozenset
    level: int
    blocks: tuple[frozenset, ...]
    # per block, the traversed edges of rank <= level
    edges: tuple[tuple, ...]

    def block_of(self, q):
        for b in self.blocks:
            if q in b:
                return b
        raise RankError("state %r not in the class" % (q,))


def partition_by_edge_ranks(states, ranked_edges, level) -> RankPartition:
    """Blocks of mutual reachability along edges of rank <= level.

    ranked_edges: iterable of (q, letter, p, rank); usable directly when
    edge ranks are given rather than computed from a context.
    """
    states = tuple(states)
    admitted = [(q, letter, p) for (q, letter, p, r) in ranked_edges
                if r <= level]
    succ = {}
    for (q, _letter, p) in admitted:
        succ.setdefault(q, []).append(p)
    sccs = _tarjan_sccs(states, lambda q: succ.get(q, ()))
    order = {q: i for i, q in enumerate(states)}
    blocks = tuple(sorted(sccs, key=lambda c: min(order[q] for q in c)))
    per_block = tuple(tuple(sorted(
        ((q, letter, p) for (q, letter, p) in admitted
         if q in b and p in b),
        key=lambda e: (order[e[0]], str(e[1]))))
        for b in blocks)
    return RankPartition(frozenset(states), level, blocks, per_block)


def rank_partition(ctx: RankContext, r_class, level) -> RankPartition:
    edges = [(q, letter, p, edge_rank(ctx, q, letter))
             for (q, letter, p) in class_edges(ctx.source, r_class)]
    ordered = sorted(r_class, key=ctx.source.index)
    return partition_by_edge_ranks(ordered, edges, level)


def low_rank_reach(ctx: RankContext, q, level) -> frozenset:
    """States reachable from q along within-class edges of rank <= level."""
    cls = ctx.reach.class_of(q)
    seen = {q}
    frontier = [q]
    while frontier:
        p = frontier.pop()
        for letter in ctx.source.alphabet:
            t = ctx.source.delta.get((p, letter))
            if (t is not None and t in cls and t not in seen
                    and edge_rank(ctx, p, letter) <= level):
                seen.add(t)
                frontier.append(t)
    return frozenset(seen)


def stabilizer_rank_sets(states, ranked_edges) -> dict:
    """Per state, the set of max-edge-ranks achievable on closed walks.

    A rank r is achievable at q iff the block of q at level r contains an
    edge of rank exactly r.
    """
    levels = sorted({r for (_q, _l, _p, r) in ranked_edges})
    out = {q: set() for q in states}
    for r in levels:
        part = partition_by_edge_ranks(states, ranked_edges, r)
        for q in states:
            b = part.block_of(q)
            if any(rk == r for (e_q, _l, e_p, rk) in ranked_edges
                   if e_q in b and e_p in b):
                out[q].add(r)
    return out


# ---------------------------------------------------------------------------
# stabilizer hypotheses and the equalities they force

@dataclass
class SausageReport:
    ok: bool
    hypotheses_ok: bool
    detail: str
    counterexample: tuple | None = None


def stabilizer_hypotheses(a: Automaton) -> tuple[bool, str]:
    """All stabilizers are R-trivial bands with unambiguous L-order."""
    tm = transition_monoid(a)
    monoid = tm.monoid
    for q in a.states:
        qi = a.index(q)
        stab = sorted(m for m in tm.proper if tm.transforms[m][qi] == qi)
        if not stab:
            continue
        if not all(monoid.is_idempotent(m) for m in stab):
            return False, "stabilizer of %r is not a band" % (q,)
        try:
            sub = monoid.subsemigroup(stab)
        except SemigroupError:
            return False, "stabilizer of %r is not closed" % (q,)
        if not variety_check(sub, "r-trivial"):
            return False, "stabilizer of %r is not R-trivial" % (q,)
        if not unambiguous_l_order_within(monoid, stab):
            return False, "stabilizer of %r has ambiguous L-order" % (q,)
    return True, "stabilizers are R-trivial bands with unambiguous L-order"


def sausage_check(ctx: RankContext, walk_bound: int | None = None) -> SausageReport:
    """Path rank = max edge rank on within-class walks; on closed walks the
    word rank agrees too.  Walks are enumerated up to the bound with
    deduplication on (origin, end, monoid element, max edge rank)."""
    hyp_ok, hyp_msg = stabilizer_hypotheses(ctx.source)
    if walk_bound is None:
        walk_bound = 2 * len(ctx.source.states)
    src = ctx.source
    monoid = ctx.tm_src.monoid
    for cls in ctx.reach.classes:
        internal = {}
        for (q, letter, p) in class_edges(src, cls):
            internal.setdefault(q, []).append((letter, p))
        for q0 in sorted(cls, key=src.index):
            seen = set()
            frontier = []
            for (letter, p) in internal.get(q0, ()):
                frontier.append((p, ctx.tm_src.word((letter,)),
                                 edge_rank(ctx, q0, letter), (letter,)))
            depth = 1
            while frontier and depth <= walk_bound:
                nxt = []
                for (p, elt, maxr, word) in frontier:
                    key = (p, elt, maxr)
                    if key in seen:
                        continue
                    seen.add(key)
                    pr = _path_rank_elt(ctx, q0, elt)
                    if pr != maxr:
                        return SausageReport(
                            False, hyp_ok,
                            "path rank %d != max edge rank %d" % (pr, maxr),
                            (q0, "".join(map(str, word))))
                    if p == q0:
                        wr = _rank_via_elt(ctx, elt)
                        if wr != maxr:
                            return SausageReport(
                                False, hyp_ok,
                                "closed-walk word rank %d != max edge rank %d"
                                % (wr, maxr), (q0, "".join(map(str, word))))
                    for (letter, t) in internal.get(p, ()):
                        nxt.append((t, monoid.table[elt][
                            ctx.tm_src.word((letter,))],
                            max(maxr, edge_rank(ctx, p, letter)),
                            word + (letter,)))
                frontier = nxt
                depth += 1
    return SausageReport(True, hyp_ok, hyp_msg)


def conjugate_rank_check(ctx: RankContext) -> tuple[bool, tuple | None]:
    """rank(xy) = rank(yx) whenever xy and yx both label closed walks."""
    monoid = ctx.tm_src.monoid
    proper = sorted(ctx.tm_src.proper)
    fixing = {}
    for q in ctx.source.states:
        qi = ctx.source.index(q)
        fixing[q] = {m for m in proper if ctx.tm_src.transforms[m][qi] == qi}
    for q in ctx.source.states:
        for x in proper:
            for y in proper:
                xy = monoid.table[x][y]
                yx = monoid.table[y][x]
                if xy in fixing[q]:
                    qx = ctx.tm_src.act(q, x)
                    if qx is not None and yx in fixing[qx]:
                        if _rank_via_elt(ctx, xy) != _rank_via_elt(ctx, yx):
                            return False, (q, ctx.tm_src.rep_words[x],
                                           ctx.tm_src.rep_words[y])
    return True, None


# ---------------------------------------------------------------------------
# idempotent chains in stabilizers

def idempotent_chain(gs: GeneratedSemigroup, r_class):
    """For a regular R-class of rank n, an r in the class together with a
    strictly descending chain of n+1 idempotents inside its stabilizer,
    the last one L-equivalent to r."""
    s = gs.base
    gd = green_data(s)
    members = frozenset(x if isinstance(x, int) else s.index(x)
                        for x in r_class)
    if members not in set(gd.r_classes):
        raise RankError("not an R-class: %r" % (sorted(members),))
    if not any(s.is_idempotent(x) for x in members):
        raise RankError("R-class is not regular")
    aut = cayley_graph(gs)
    ctx = RankContext.identity(aut)
    state_class = frozenset(s.elements[x] for x in members)
    n = rank_of_class(ctx, state_class)
    if n < 0:
        raise RankError("regular R-class with no internal edges")
    candidates = [e for e in sorted(members)
                  if s.is_idempotent(e) and algebraic_rank(s, e) == n]
    if not candidates:
        raise RankError(
            "no idempotent of rank %d in the class; hypotheses unmet" % n)
    e = candidates[0]
    chain_classes = _regular_chain_above(gd, gd.j_index_of(e), n)
    # descend through the chain: topmost first
    top = chain_classes[-1]
    e_cur = next(x for x in sorted(gd.j_classes[top]) if s.is_idempotent(x))
    chain = [e_cur]
    for ci in reversed(chain_classes[:-1]):
        f = idempotent_below(s, e_cur, gd.j_classes[ci])
        if f is None:
            raise RankError("no idempotent below %s in the next class"
                            % s.elements[e_cur])
        chain.append(f)
        e_cur = f
    e_n = chain[-1]
    l_of_en = gd.l_class_of(e_n)
    picks = sorted(members & l_of_en)
    if not picks:
        raise RankError("egg-box pick failed")
    r = picks[0]
    stab = right_stabilizer(s, r)
    assert all(f in stab for f in chain)
    return r, tuple(chain)


def _regular_chain_above(gd, start, n):
    """J-class indices [start, c1, ..., cn], each regular, strictly
    ascending; exists when algebraic rank machinery said so."""
    best = None

    def extend(chain):
        nonlocal best
        if best is not None:
            return
        if len(chain) == n + 1:
            best = list(chain)
            return
        for c in sorted(gd.regular_j):
            if gd.j_lt(chain[-1], c):
                extend(chain + [c])

    extend([start])
    if best is None:
        raise RankError("no regular J-chain of length %d" % n)
    return best
