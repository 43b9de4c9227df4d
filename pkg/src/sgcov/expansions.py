"""Expansions of automata and A-generated semigroups.

Chain states are tuples written largest first: (q0 > q1 > ... > qk).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .semigroups import (FiniteSemigroup, GeneratedSemigroup, SgMorphism,
                         SemigroupError, variety_check)
from .automata import (Automaton, AutMorphism, AutomatonError,
                       ResourceLimitError, cayley_graph, find_morphism,
                       reach_structure, transition_monoid)


class ExpansionError(ValueError):
    pass


def reduce_chain(items, equiv, leq, keep: str):
    """Collapse each maximal run of equivalent entries of a weak chain.

    items must be weakly descending under leq; keep is "leftmost" or
    "rightmost".  Returns the strict chain as a tuple.
    """
    items = list(items)
    for x, y in zip(items, items[1:]):
        if not leq(y, x):
            raise ExpansionError("chain is not weakly descending")
    if keep not in ("leftmost", "rightmost"):
        raise ExpansionError("keep must be leftmost or rightmost")
    out = []
    i = 0
    while i < len(items):
        j = i
        while j + 1 < len(items) and equiv(items[j], items[j + 1]):
            j += 1
        out.append(items[i] if keep == "leftmost" else items[j])
        i = j + 1
    return tuple(out)


def _reduce_ascending(items, equiv, leq, keep: str):
    """reduce_chain for weakly ascending input, preserving orientation."""
    flipped = "rightmost" if keep == "leftmost" else "leftmost"
    return tuple(reversed(reduce_chain(tuple(reversed(tuple(items))),
                                       equiv, leq, flipped)))


# ---------------------------------------------------------------------------
# the R expansion of an automaton

def rhodes_r(a: Automaton) -> tuple[Automaton, AutMorphism]:
    """States become strict reachability chains from the start.

    Reading a letter either extends the chain (strict drop) or replaces its
    last entry (stay in class).  Returns the expansion and the morphism
    sending a chain to its last entry.
    """
    if a.start is None or not a.start_unreturnable():
        raise ExpansionError("R expansion needs an unreturnable start state")
    rs = reach_structure(a)
    cidx = {q: rs.class_index(q) for q in a.states}

    start = (a.start,)
    states = [start]
    seen = {start}
    delta = {}
    frontier = [start]
    while frontier:
        chain = frontier.pop(0)
        last = chain[-1]
        for letter in a.alphabet:
            p = a.delta.get((last, letter))
            if p is None:
                continue
            if cidx[p] == cidx[last]:
                nxt = chain[:-1] + (p,)
            else:
                nxt = chain + (p,)
            delta[(chain, letter)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)
                frontier.append(nxt)
    final = frozenset(c for c in states if c[-1] in a.final)
    exp = Automaton(tuple(states), a.alphabet, delta, start, final)
    eta = AutMorphism(exp, a, {c: c[-1] for c in states})
    return exp, eta


def rhodes_r_of_morphism(phi: AutMorphism) -> AutMorphism:
    """The induced morphism of R expansions, by rightmost chain reduction."""
    b_exp, _ = rhodes_r(phi.source)
    a_exp, _ = rhodes_r(phi.target)
    rs = reach_structure(phi.target)

    def equiv(x, y):
        return rs.class_index(x) == rs.class_index(y)

    def leq(x, y):
        return (rs.class_index(x), rs.class_index(y)) in rs.leq

    mapping = {}
    for chain in b_exp.states:
        image = [phi.mapping[q] for q in chain]
        mapping[chain] = reduce_chain(image, equiv, leq, "rightmost")
    for c in mapping.values():
        if c not in set(a_exp.states):
            raise ExpansionError("reduced chain %r is not a state" % (c,))
    return AutMorphism(b_exp, a_exp, mapping)


# ---------------------------------------------------------------------------
# the left automaton and the L expansion

@dataclass
class LeftAutomaton:
    """Preimage sets (f)s^-1 under the left star action s * X = X s^-1."""
    automaton: Automaton
    finals: tuple
    states: tuple[frozenset, ...]
    tm: object

    def act_letter(self, letter, x: frozenset) -> frozenset:
        a = self.automaton
        return frozenset(q for q in a.states if a.delta.get((q, letter)) in x)

    def act_elt(self, elt: int, x: frozenset) -> frozenset:
        tf = self.tm.transforms[elt]
        a = self.automaton
        idx = {a.index(q) for q in x}
        return frozenset(q for q in a.states
                         if tf[a.index(q)] is not None and tf[a.index(q)] in idx)


def left_automaton(a: Automaton, finals=None) -> LeftAutomaton:
    """All sets (f)s^-1 for s in the syntactic monoid, f a final state."""
    if finals is None:
        if not a.final:
            raise ExpansionError("left automaton needs a final state")
        finals = tuple(sorted(a.final, key=a.index))
    else:
        finals = tuple(finals)
    tm = transition_monoid(a)
    states = set()
    for f in finals:
        fi = a.index(f)
        for m in range(len(tm.monoid)):
            tf = tm.transforms[m]
            states.add(frozenset(q for q in a.states
                                 if tf[a.index(q)] == fi))
    ordered = tuple(sorted(states,
                           key=lambda x: sorted(a.index(q) for q in x)))
    la = LeftAutomaton(a, finals, ordered, tm)
    # the left star action of the syntactic semigroup is faithful here
    sig = {}
    for m in sorted(tm.proper):
        key = tuple(la.act_elt(m, x) for x in ordered)
        if key in sig:
            raise ExpansionError("left star action failed to separate %r / %r"
                                 % (tm.rep_words[sig[key]], tm.rep_words[m]))
        sig[key] = m
    return la


def _l_chain_leq(la: LeftAutomaton, x: frozenset, y: frozenset) -> bool:
    """x <= y iff x = y s^-1 for some s in the syntactic monoid."""
    return any(la.act_elt(m, y) == x for m in range(len(la.tm.monoid)))


@dataclass
class LExpansion:
    left: LeftAutomaton
    # chain states, written smallest first, ending at a final singleton
    states: tuple[tuple[frozenset, ...], ...]
    letter_act: dict
    leq: Callable = None
    equiv: Callable = None

    def act_word(self, word, chain):
        for letter in reversed(tuple(word)):
            chain = self.letter_act[letter][chain]
        return chain

    def chain_star(self, s_elts, p_chain):
        """(s_m < ... < s_1) * (P_k < ... ): heads s_i * P_k prepended, then
        leftmost reduction.  s_elts are monoid indices, smallest first."""
        head = tuple(self.left.act_elt(m, p_chain[0]) for m in s_elts)
        return _reduce_ascending(head + p_chain, self.equiv, self.leq,
                                 "leftmost")


def rhodes_l(a: Automaton, finals=None) -> LExpansion:
    """Strict descending chains of preimage sets, letters acting on the left."""
    la = left_automaton(a, finals)
    leq_cache = {}

    def leq(x, y):
        if (x, y) not in leq_cache:
            leq_cache[(x, y)] = _l_chain_leq(la, x, y)
        return leq_cache[(x, y)]

    def equiv(x, y):
        return x == y or (leq(x, y) and leq(y, x))

    def act(letter, chain):
        head = la.act_letter(letter, chain[0])
        return _reduce_ascending((head,) + chain, equiv, leq, "leftmost")

    starts = [(frozenset({f}),) for f in la.finals]
    states = list(dict.fromkeys(starts))
    seen = set(states)
    letter_act = {letter: {} for letter in a.alphabet}
    frontier = list(states)
    while frontier:
        chain = frontier.pop(0)
        for letter in a.alphabet:
            nxt = act(letter, chain)
            letter_act[letter][chain] = nxt
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)
                frontier.append(nxt)
    return LExpansion(la, tuple(states), letter_act, leq, equiv)


# ---------------------------------------------------------------------------
# the classical L expansion of an A-generated semigroup

def classical_rhodes_l(gs: GeneratedSemigroup) -> GeneratedSemigroup:
    """Strict L-chains generated by the letters, leftmost reduction."""
    s = gs.base

    def l_leq(x, y):
        return x == y or any(s.table[u][y] == x for u in range(len(s)))

    def equiv(x, y):
        return l_leq(x, y) and l_leq(y, x)

    def mul(c1, c2):
        head = tuple(s.table[x][c2[0]] for x in c1)
        return _reduce_ascending(head + c2, equiv, l_leq, "leftmost")

    gens = [(g,) for g in gs.sigma]
    elements = list(dict.fromkeys(gens))
    seen = set(elements)
    frontier = list(elements)
    while frontier:
        c = frontier.pop(0)
        for g in gens:
            p = mul(c, g)
            if p not in seen:
                seen.add(p)
                elements.append(p)
                frontier.append(p)
    pos = {c: i for i, c in enumerate(elements)}
    table = tuple(tuple(pos[mul(c1, c2)] for c2 in elements)
                  for c1 in elements)
    names = tuple("<" + ",".join(s.elements[x] for x in c) + ">"
                  for c in elements)
    base = FiniteSemigroup.from_table(names, table)
    sigma = tuple(pos[(g,)] for g in gs.sigma)
    out = GeneratedSemigroup.build(base, gs.alphabet, sigma)
    chains = tuple(elements)
    rep_words = {}
    frontier = []
    for a, g in zip(gs.alphabet, gs.sigma):
        i = pos[(g,)]
        if i not in rep_words:
            rep_words[i] = a
            frontier.append(i)
    while frontier:
        x = frontier.pop(0)
        for a, g in zip(gs.alphabet, sigma):
            y = base.table[x][g]
            if y not in rep_words:
                rep_words[y] = rep_words[x] + a
                frontier.append(y)
    object.__setattr__(out, "chains", chains)
    object.__setattr__(out, "rep_words", rep_words)
    return out


def right_regular_automaton(gs: GeneratedSemigroup) -> Automaton:
    """Right multiplication on the elements plus a fresh identity state.

    The identity state is fresh even when the semigroup has an identity
    element: reusing an internal identity lets chain reduction merge
    (1)1^-1 with the final singleton {1}, losing faithfulness of the
    chain action."""
    aut = cayley_graph(gs, "1")
    return aut


# ---------------------------------------------------------------------------
# free objects of locally finite classes

@dataclass
class FreeObject:
    """The free object of a tag on a finite generating set."""
    tag: str
    gens: tuple
    base: FiniteSemigroup
    embed_map: dict
    _decode: tuple

    def embed(self, g) -> int:
        return self.embed_map[g]

    def hom(self, gen_map: dict) -> dict[int, int]:
        """Endomorphism induced by a map of generators, as an index map."""
        tag = self.tag
        out = {}
        for i, desc in enumerate(self._decode):
            if tag in ("lz", "rz"):
                out[i] = self.embed_map[gen_map[desc]]
            elif tag == "rb":
                p, q = desc
                out[i] = self._pair_index(gen_map[p], gen_map[q])
            else:
                word = tuple(gen_map[g] for g in desc)
                out[i] = self._word_index(word)
        return out

    def _pair_index(self, p, q):
        return self._pairs[(p, q)]

    def _word_index(self, word):
        return self._words[word]


def free_object(tag: str, gens) -> FreeObject:
    """tags: lz, rz, rb, dk:<k>, dkrev:<k>."""
    gens = tuple(gens)
    tag = tag.strip().lower()
    if not gens:
        raise ExpansionError("free object needs generators")
    names = {g: "g%d" % i for i, g in enumerate(gens)}
    if tag in ("lz", "rz"):
        n = len(gens)
        table = tuple(tuple(x if tag == "lz" else y for y in range(n))
                      for x in range(n))
        base = FiniteSemigroup(tuple(names[g] for g in gens), table, None)
        fo = FreeObject(tag, gens, base, {g: i for i, g in enumerate(gens)},
                        gens)
        return fo
    if tag == "rb":
        pairs = [(p, q) for p in gens for q in gens]
        pos = {pq: i for i, pq in enumerate(pairs)}
        table = tuple(tuple(pos[(pairs[x][0], pairs[y][1])]
                            for y in range(len(pairs)))
                      for x in range(len(pairs)))
        base = FiniteSemigroup(
            tuple("%s.%s" % (names[p], names[q]) for (p, q) in pairs),
            table, None)
        fo = FreeObject(tag, gens, base, {g: pos[(g, g)] for g in gens},
                        tuple(pairs))
        fo._pairs = pos
        return fo
    if tag.startswith(("dk:", "dkrev:")):
        k = int(tag.split(":", 1)[1])
        if k < 1:
            raise ExpansionError("delay bound must be >= 1")
        words = []
        for length in range(1, k + 1):
            words.extend(itertools.product(gens, repeat=length))
        pos = {w: i for i, w in enumerate(words)}
        if tag.startswith("dkrev"):
            def cat(u, v):
                return (u + v)[:k]
        else:
            def cat(u, v):
                return (u + v)[-k:]
        table = tuple(tuple(pos[cat(u, v)] for v in words) for u in words)
        base = FiniteSemigroup(
            tuple(".".join(names[g] for g in w) for w in words), table, None)
        fo = FreeObject(tag, gens, base, {g: pos[(g,)] for g in gens},
                        tuple(words))
        fo._words = pos
        return fo
    raise ExpansionError("no free object for tag %r" % tag)


# ---------------------------------------------------------------------------
# the Maltsev expansion

@dataclass
class MaltsevResult:
    expansion: GeneratedSemigroup
    projection: SgMorphism
    kernel_ok: bool
    maximality: str


def maltsev_expansion(tag: str, gs: GeneratedSemigroup,
                      limit: int = 60000) -> MaltsevResult:
    """The largest A-generated expansion of the target whose projection has
    all idempotent fibers satisfying the tag's identities.

    Any identity instance whose variable words share an idempotent image must
    collapse in every qualifying expansion, and the quotient of the free
    semigroup by exactly those forced pairs qualifies; so the expansion is
    computed by congruence enumeration over seed instances, adding the pairs
    any remaining fiber violation forces until none remain.  Each added pair
    lies in the forced congruence, so the fixpoint is exact.
    """
    s = gs.base
    letters = gs.alphabet
    identities = _tag_identities(tag)
    li = {a: i for i, a in enumerate(letters)}
    sig = dict(zip(letters, gs.sigma))

    def sigma_of(word):
        v = sig[word[0]]
        for a in word[1:]:
            v = s.table[v][sig[a]]
        return v

    extra: list = []   # violation pairs lifted from partial quotients
    for depth in (2, 3, 4, 6):
        fibers: dict = {}
        for n in range(1, depth + 1):
            for w in itertools.product(letters, repeat=n):
                t = sigma_of(w)
                if s.is_idempotent(t):
                    fibers.setdefault(t, []).append(w)
        relations = {}
        for fiber in fibers.values():
            for lhs, rhs in identities:
                nvars = max(max(lhs), max(rhs)) + 1
                # keep the seed bounded; the violation loop supplies the rest
                m = len(fiber)
                while m > 1 and m ** nvars > 4096:
                    m -= 1
                for assign in itertools.product(fiber[:m], repeat=nvars):
                    u = sum((assign[v] for v in lhs), ())
                    v = sum((assign[v] for v in rhs), ())
                    if u != v:
                        relations.setdefault((u, v), None)
        for pair in extra:
            relations.setdefault(pair, None)
        while True:
            rel_idx = [(tuple(li[a] for a in u), tuple(li[a] for a in v))
                       for (u, v) in relations]
            try:
                table, reps = _word_quotient(len(letters), rel_idx, limit)
            except ResourceLimitError:
                break       # quotient still infinite: deepen the seed
            reps = [tuple(letters[i] for i in w) for w in reps]
            mapping = [sigma_of(w) for w in reps]
            bad = _kernel_identity_violations(table, mapping, s, identities)
            if not bad:
                word_of = tuple("".join(w) for w in reps)
                base = FiniteSemigroup.from_table(word_of, table, check=False)
                pos = {w: i for i, w in enumerate(reps)}
                sigma = tuple(pos[(a,)] for a in letters)
                exp = GeneratedSemigroup.build(base, letters, sigma)
                proj = SgMorphism.build(base, s, tuple(mapping))
                from .semigroups import kernel_in_variety
                kernel_ok = kernel_in_variety(proj, tag)
                return MaltsevResult(exp, proj, kernel_ok, "exact")
            for i, j in sorted(bad):
                pair = (reps[i], reps[j])
                extra.append(pair)
                relations.setdefault(pair, None)
    raise ResourceLimitError(
        "maltsev expansion %r did not close within %d nodes" % (tag, limit))


def _word_quotient(n_letters, relations, limit):
    """Finite quotient of the free semigroup on n letters by the congruence
    the given pairs of index words generate.

    Coset-style enumeration on the right word graph: trace both sides of
    every relation from every live node and merge the endpoints, sharing
    transition rows on merge, until the graph is closed and all relations
    hold everywhere.  Raises ResourceLimitError past the node limit (in
    particular whenever the quotient is infinite).  Returns (table, reps)
    over the nonempty-word classes, reps as index tuples.
    """
    trans = [[None] * n_letters]        # node 0 carries the empty word
    parent = [0]
    reps = [()]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def step(x, a):
        x = find(x)
        t = trans[x][a]
        if t is None:
            if len(trans) > limit:
                raise ResourceLimitError(
                    "congruence enumeration exceeded %d nodes" % limit)
            t = len(trans)
            trans.append([None] * n_letters)
            parent.append(t)
            reps.append(reps[x] + (a,))
            trans[x][a] = t
        return find(t)

    def merge(x, y):
        stack = [(x, y)]
        while stack:
            x, y = stack.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            parent[y] = x
            for a in range(n_letters):
                ty = trans[y][a]
                if ty is None:
                    continue
                if trans[x][a] is None:
                    trans[x][a] = ty
                else:
                    stack.append((trans[x][a], ty))

    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(trans):
            if find(i) != i:
                i += 1
                continue
            before = len(trans)
            for a in range(n_letters):
                step(i, a)
            for u, v in relations:
                x = i
                for a in u:
                    x = step(x, a)
                y = i
                for a in v:
                    y = step(y, a)
                if x != y:
                    merge(x, y)
                    changed = True
            if len(trans) != before:
                changed = True
            i += 1

    roots = sorted(r for r in range(len(trans)) if find(r) == r and r != 0)
    pos = {r: i for i, r in enumerate(roots)}

    def trace(x, word):
        for a in word:
            x = find(trans[find(x)][a])
        return x

    table = [tuple(pos[trace(r, reps[r2])] for r2 in roots) for r in roots]
    return table, [reps[r] for r in roots]


def _tag_identities(tag: str):
    """Defining identities of a tag, as pairs of variable-index words."""
    if tag == "lz":
        return (((0, 1), (0,)),)
    if tag == "rz":
        return (((0, 1), (1,)),)
    if tag == "rb":
        return (((0, 0), (0,)), ((0, 1, 0), (0,)))
    if tag == "band":
        return (((0, 0), (0,)),)
    if tag.startswith(("dk:", "dkrev:")):
        k = int(tag.split(":", 1)[1])
        body = tuple(range(k))
        if tag.startswith("dkrev"):
            return ((body + (k,), body),)
        return (((k,) + body, body),)
    raise ExpansionError("no identity basis for tag %r" % tag)


def _kernel_identity_violations(table, mapping, s, identities):
    """Pairs (i, j) of distinct elements that an idempotent fiber's
    identity evaluation forces together."""
    fibers = {}
    for i, t in enumerate(mapping):
        if s.is_idempotent(t):
            fibers.setdefault(t, []).append(i)

    def ev(word, assign):
        v = assign[word[0]]
        for var in word[1:]:
            v = table[v][assign[var]]
        return v

    bad = set()
    for fiber in fibers.values():
        for lhs, rhs in identities:
            nvars = max(max(lhs), max(rhs)) + 1
            for assign in itertools.product(fiber, repeat=nvars):
                a, b = ev(lhs, assign), ev(rhs, assign)
                if a != b:
                    bad.add((min(a, b), max(a, b)))
    return bad


def _quotient_table(table, pairs):
    """Quotient of a multiplication table by the congruence closure of the
    given pairs.  Returns (new table, (reps, classes, class_map))."""
    n = len(table)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = list(pairs)
    while work:
        x, y = work.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for z in range(n):
            work.append((table[x][z], table[y][z]))
            work.append((table[z][x], table[z][y]))
    classes: dict[int, list] = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    roots = sorted(classes)
    root_pos = {r: i for i, r in enumerate(roots)}
    class_map = [root_pos[find(i)] for i in range(n)]
    new_table = [tuple(class_map[table[r][r2]] for r2 in roots)
                 for r in roots]
    return new_table, (roots, [classes[r] for r in roots], class_map)


def maltsev_maximality_oracle(tag: str, gs: GeneratedSemigroup,
                              result: MaltsevResult,
                              candidates) -> tuple[bool, str]:
    """Bounded brute-force confirmation of maximality.

    Every A-generated semigroup among the candidates that maps onto the
    target with Maltsev kernel in the tag's class must be an image of the
    expansion.  Complete only up to the candidates' size bound.
    """
    from .semigroups import induced_morphism, kernel_in_variety
    bound = 0
    for cand in candidates:
        bound = max(bound, len(cand.base))
        if cand.alphabet != gs.alphabet:
            continue
        onto = induced_morphism(cand, gs)
        if onto is None or not onto.is_surjective:
            continue
        if not kernel_in_variety(onto, tag):
            continue
        down = induced_morphism(result.expansion, cand)
        if down is None:
            return False, "qualifying %d-element semigroup is not an image" \
                % len(cand.base)
    return True, "confirmed for qualifying quotients of size <= %d" % bound


# ---------------------------------------------------------------------------
# backwards-k

@dataclass
class BackwardsKReport:
    ok: bool
    k: int
    bound: int
    counterexample: tuple | None = None


def _alpha_profiles(cov: GeneratedSemigroup, base: GeneratedSemigroup, k,
                    bound, limit=200000):
    """Deduplicated scan of nonempty words up to the bound.

    Yields (cov value, base value, achievable (tilde value, piece value)
    signatures) for each behaviourally distinct word.
    """
    letters = list(zip(cov.alphabet, cov.sigma, base.sigma))
    seen = set()
    profiles = {}
    frontier = []
    for (_a, gc, gb) in letters:
        st = (gc, frozenset({("t", gb)}))
        frontier.append(st)
    depth = 1
    while frontier and depth <= bound:
        nxt = []
        for (vc, facts) in frontier:
            if (vc, facts) in seen:
                continue
            if len(seen) >= limit:
                raise ResourceLimitError(
                    "backwards-k scan exceeds %d profile states" % limit)
            seen.add((vc, facts))
            sigs = set()
            for f in facts:
                if f[0] == "p" and f[1] == k:
                    _tagp, j, vt, common, cur = f
                    if common is None or cur == common:
                        sigs.add((vt, cur))
            key = (vc, frozenset(sigs))
            profiles.setdefault(key, None)
            for (_a, gc, gb) in letters:
                nf = set()
                for f in facts:
                    if f[0] == "t":
                        vt = f[1]
                        nf.add(("t", base.base.table[vt][gb]))
                        nf.add(("p", 1, vt, None, gb))
                    else:
                        _tagp, j, vt, common, cur = f
                        nf.add(("p", j, vt, common,
                                base.base.table[cur][gb]))
                        if j < k and (common is None or cur == common):
                            nf.add(("p", j + 1, vt,
                                    cur if common is None else common, gb))
                nxt.append((cov.base.table[vc][gc], frozenset(nf)))
        frontier = nxt
        depth += 1
    # merge signature sets of identical cov values?  no: keep per-word
    return list(profiles.keys())


def _value_pairs(cov, base):
    """Cover value -> base value over all nonempty words; raises when the
    pair of generated semigroups admits no generator-respecting projection."""
    out = {}
    frontier = []
    for vc, vb in zip(cov.sigma, base.sigma):
        if out.setdefault(vc, vb) != vb:
            raise ExpansionError("cover does not determine the base value")
        frontier.append((vc, vb))
    while frontier:
        (vc, vb) = frontier.pop()
        for gc, gb in zip(cov.sigma, base.sigma):
            pc, pb = cov.base.table[vc][gc], base.base.table[vb][gb]
            if pc in out:
                if out[pc] != pb:
                    raise ExpansionError(
                        "cover does not determine the base value")
            else:
                out[pc] = pb
                frontier.append((pc, pb))
    return out


def backwards_k_check(cov: GeneratedSemigroup, base: GeneratedSemigroup,
                      k: int, bound: int | None = None,
                      limit: int = 200000) -> BackwardsKReport:
    """Whenever alpha.beta = alpha in the cover, alpha cuts into a prefix
    equal to alpha in the base followed by k pieces each equal to beta, with
    beta idempotent, in the base.  Verified for words up to the bound."""
    if cov.alphabet != base.alphabet:
        raise ExpansionError("cover and base must share the alphabet")
    if bound is None:
        bound = len(cov.base) * (k + 1)
    pairs = _value_pairs(cov, base)
    for (vc, sigs) in _alpha_profiles(cov, base, k, bound, limit):
        va = pairs[vc]
        for (bc, bb) in pairs.items():
            if cov.base.table[vc][bc] != vc:
                continue
            if not base.base.is_idempotent(bb):
                return BackwardsKReport(False, k, bound,
                                        ("beta not idempotent", vc, bc))
            if (va, bb) not in sigs:
                return BackwardsKReport(False, k, bound,
                                        ("no factorization", vc, bc))
    return BackwardsKReport(True, k, bound)


def backwards_k_pair(cov: GeneratedSemigroup, base: GeneratedSemigroup,
                     k: int, alpha, beta):
    """The factorization for one concrete (alpha, beta) pair, or None.

    Returns (alpha_tilde, pieces) as words when alpha.beta = alpha in the
    cover and the cut exists."""
    alpha = tuple(alpha)
    beta = tuple(beta)
    va = cov.eval_word(alpha)
    vb = cov.eval_word(beta)
    if cov.base.table[va][vb] != va:
        return None
    vab = base.eval_word(alpha)
    vbb = base.eval_word(beta)
    if not base.base.is_idempotent(vbb):
        return None
    n = len(alpha)
    for cuts in itertools.combinations(range(1, n), k):
        marks = (0,) + cuts + (n,)
        tilde = alpha[:marks[1]]
        pieces = [alpha[marks[i]:marks[i + 1]] for i in range(1, k + 1)]
        if not tilde or any(not p for p in pieces):
            continue
        if base.eval_word(tilde) != vab:
            continue
        if all(base.eval_word(p) == vbb for p in pieces):
            return tilde, tuple(pieces)
    return None


# ---------------------------------------------------------------------------
# pluggable pipeline of expansions over A-generated semigroups

@dataclass
class SgExpansion:
    """A named expansion step on A-generated semigroups."""
    name: str
    apply: Callable[[GeneratedSemigroup], GeneratedSemigroup]


def identity_expansion() -> SgExpansion:
    return SgExpansion("identity", lambda gs: gs)


def _maltsev_step(tag):
    def apply(gs):
        return maltsev_expansion(tag, gs).expansion
    return SgExpansion("maltsev:%s" % tag, apply)


def length_counter_expansion(gs: GeneratedSemigroup, index: int,
                             period: int) -> GeneratedSemigroup:
    """Direct product with the monogenic semigroup of the given index and
    period, every letter mapping to its generator; the expansion tracks word
    length up to the index and modulo the period.

    With index = k+1 and period >= k+1 no word of length <= k can be
    stabilized, and the only stabilizing elements are the idempotent length
    classes, so right-stabilizers are singleton bands."""
    if index < 1 or period < 1:
        raise ExpansionError("index and period must be positive")

    def add(n, m):
        t = n + m
        while t >= index + period:
            t -= period
        return t

    pairs = {}
    frontier = []
    for t in gs.sigma:
        key = (t, 1)
        if key not in pairs:
            pairs[key] = None
            frontier.append(key)
    while frontier:
        (t, n) = frontier.pop()
        for g in gs.sigma:
            key = (gs.base.table[t][g], add(n, 1))
            if key not in pairs:
                pairs[key] = None
                frontier.append(key)
    elems = sorted(pairs)
    pos = {e: i for i, e in enumerate(elems)}
    names = ["%s@%d" % (gs.base.elements[t], n) for (t, n) in elems]
    table = [[pos[(gs.base.table[t][u], add(n, m))] for (u, m) in elems]
             for (t, n) in elems]
    base = FiniteSemigroup.from_table(names, table, check=False)
    sigma = tuple(pos[(t, 1)] for t in gs.sigma)
    return GeneratedSemigroup.build(base, gs.alphabet, sigma)


def factor_profile_expansion(gs: GeneratedSemigroup, k: int,
                             limit: int = 20000) -> GeneratedSemigroup:
    """Each word maps to the set of value tuples of its factorizations into
    at most k+1 nonempty factors.

    If alpha.beta = alpha here then alpha also equals alpha.beta^k, whose
    profile set contains (alpha, beta, ..., beta); hence alpha literally cuts
    into a prefix and k pieces with those values and backwards-k holds."""
    if k < 1:
        raise ExpansionError("k must be positive")
    width = k + 1
    tbl = gs.base.table

    def mul(p, q):
        out = set()
        for u in p:
            for v in q:
                if len(u) + len(v) <= width:
                    out.add(u + v)
                if len(u) + len(v) - 1 <= width:
                    out.add(u[:-1] + (tbl[u[-1]][v[0]],) + v[1:])
        return frozenset(out)

    gens = {}
    for t in gs.sigma:
        gens.setdefault(t, frozenset({(t,)}))
    elems = []
    pos = {}
    frontier = []
    for p in gens.values():
        if p not in pos:
            pos[p] = len(elems)
            elems.append(p)
            frontier.append(p)
    while frontier:
        p = frontier.pop()
        for g in gens.values():
            q = mul(p, g)
            if q not in pos:
                if len(elems) >= limit:
                    raise ResourceLimitError(
                        "profile expansion exceeds %d elements" % limit)
                pos[q] = len(elems)
                elems.append(q)
                frontier.append(q)

    def name(p):
        return "{%s}" % "|".join(
            ".".join(gs.base.elements[x] for x in u) for u in sorted(p))

    table = [[pos[mul(p, q)] for q in elems] for p in elems]
    base = FiniteSemigroup.from_table([name(p) for p in elems], table,
                                      check=False)
    sigma = tuple(pos[gens[t]] for t in gs.sigma)
    return GeneratedSemigroup.build(base, gs.alphabet, sigma)


def _profile_step(k):
    return SgExpansion("profile:%d" % k,
                       lambda gs: factor_profile_expansion(gs, k))


def _counter_step(index, period):
    return SgExpansion("counter:%d:%d" % (index, period),
                       lambda gs: length_counter_expansion(gs, index, period))


def _classical_r(gs: GeneratedSemigroup) -> GeneratedSemigroup:
    """The classical R expansion, via chain states of the Cayley graph."""
    aut = cayley_graph(gs)
    exp, _eta = rhodes_r(aut)
    tm = transition_monoid(exp)
    return tm.generated()


def parse_pipeline(text: str) -> list[SgExpansion]:
    steps = []
    for part in text.split("|"):
        part = part.strip().lower()
        if not part:
            continue
        if part == "identity":
            steps.append(identity_expansion())
        elif part == "rhodes-r":
            steps.append(SgExpansion("rhodes-r", _classical_r))
        elif part == "rhodes-l":
            steps.append(SgExpansion("rhodes-l", classical_rhodes_l))
        elif part.startswith("profile:"):
            try:
                steps.append(_profile_step(int(part.split(":", 1)[1])))
            except ValueError:
                raise ExpansionError("profile takes an integer k")
        elif part.startswith("counter:"):
            bits = part.split(":")
            if len(bits) != 3:
                raise ExpansionError("counter takes index:period")
            try:
                steps.append(_counter_step(int(bits[1]), int(bits[2])))
            except ValueError:
                raise ExpansionError("counter takes integer index:period")
        elif part.startswith("maltsev:"):
            steps.append(_maltsev_step(part.split(":", 1)[1]))
        else:
            raise ExpansionError("unknown pipeline step %r" % part)
    if not steps:
        raise ExpansionError("empty pipeline")
    return steps


def apply_pipeline(steps, gs: GeneratedSemigroup) -> GeneratedSemigroup:
    for step in steps:
        gs = step.apply(gs)
    return gs
