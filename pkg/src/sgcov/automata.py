"""Deterministic, possibly partial automata over a fixed alphabet.

Objects are trim (every state reachable from the start when one is given);
the start state, when present, must not be returnable to for the expansion
machinery to apply.  R-class subautomata carry no start state and are
strongly connected instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .semigroups import (FiniteSemigroup, GeneratedSemigroup, SemigroupError,
                         algebraic_rank, green_data)


class AutomatonError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    pass


@dataclass
class Automaton:
    states: tuple
    alphabet: tuple[str, ...]
    delta: dict
    start: object = None
    final: frozenset = frozenset()

    def __post_init__(self):
        self.states = tuple(self.states)
        self.alphabet = tuple(self.alphabet)
        self.final = frozenset(self.final)
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate states")
        sset = set(self.states)
        for (q, a), p in self.delta.items():
            if q not in sset or p not in sset or a not in self.alphabet:
                raise AutomatonError("bad transition (%r, %r) -> %r" % (q, a, p))
        if self.start is not None:
            if self.start not in sset:
                raise AutomatonError("start state missing")
            if sset - self.reachable_from(self.start):
                raise AutomatonError("automaton is not trim")
        if self.final - sset:
            raise AutomatonError("final states missing")
        self._index = {q: i for i, q in enumerate(self.states)}
        self._tm = None

    def index(self, q) -> int:
        return self._index[q]

    def step(self, q, a):
        return self.delta.get((q, a))

    def run(self, q, word):
        for a in word:
            if q is None:
                return None
            q = self.delta.get((q, a))
        return q

    def reachable_from(self, q) -> set:
        seen = {q}
        frontier = [q]
        while frontier:
            p = frontier.pop()
            for a in self.alphabet:
                r = self.delta.get((p, a))
                if r is not None and r not in seen:
                    seen.add(r)
                    frontier.append(r)
        return seen

    def start_unreturnable(self) -> bool:
        if self.start is None:
            return False
        return all(p != self.start for (q, a), p in self.delta.items())

    def edges(self):
        for q in self.states:
            for a in self.alphabet:
                p = self.delta.get((q, a))
                if p is not None:
                    yield (q, a, p)


def _tarjan_sccs(states, succ):
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]

    def strong(v):
        work = [(v, iter(succ(v)))]
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                elif w in on_stack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == node:
                        break
                sccs.append(frozenset(comp))

    for v in states:
        if v not in index:
            strong(v)
    return sccs


@dataclass
class ReachStructure:
    """Reachability classes of an automaton and their order."""
    automaton: Automaton
    classes: tuple[frozenset, ...]
    # (i, j) present iff class i is reachable from class j  (i <= j)
    leq: frozenset[tuple[int, int]]
    is_tree: bool

    def class_index(self, q) -> int:
        for i, c in enumerate(self.classes):
            if q in c:
                return i
        raise AutomatonError("state %r not found" % (q,))

    def class_of(self, q) -> frozenset:
        return self.classes[self.class_index(q)]

    def lt(self, i, j) -> bool:
        return i != j and (i, j) in self.leq


def reach_structure(a: Automaton) -> ReachStructure:
    def succ(q):
        for letter in a.alphabet:
            p = a.delta.get((q, letter))
            if p is not None:
                yield p

    sccs = _tarjan_sccs(a.states, succ)
    order = {q: a.index(q) for q in a.states}
    classes = tuple(sorted(sccs, key=lambda c: min(order[q] for q in c)))
    idx = {}
    for i, c in enumerate(classes):
        for q in c:
            idx[q] = i
    n = len(classes)
    leq = {(i, i) for i in range(n)}
    for (q, _l, p) in a.edges():
        if idx[p] != idx[q]:
            leq.add((idx[p], idx[q]))
    # transitive closure over the class DAG
    changed = True
    while changed:
        changed = False
        for (i, j) in list(leq):
            for (k, i2) in list(leq):
                if i2 == i and (k, j) not in leq:
                    leq.add((k, j))
                    changed = True
    maxima = [i for i in range(n)
              if not any((i, j) in leq and i != j for j in range(n))]
    tree = len(maxima) == 1
    if tree:
        for i in range(n):
            above = [j for j in range(n) if (i, j) in leq and i != j]
            for x in above:
                for y in above:
                    if (x, y) not in leq and (y, x) not in leq:
                        tree = False
    return ReachStructure(a, classes, frozenset(leq), tree)


class TransitionMonoid:
    """State transformations generated by letter actions, plus the identity.

    Elements 0..n-1 index transformations; element 0 is the identity map.
    `proper` holds the images of nonempty words (the syntactic semigroup).
    """

    def __init__(self, automaton: Automaton):
        a = automaton
        self.automaton = a
        nq = len(a.states)
        ident = tuple(range(nq))
        transforms = [ident]
        rep_words = [""]
        lookup = {ident: 0}
        letter_tf = {}
        for letter in a.alphabet:
            tf = tuple(None if (t := a.delta.get((q, letter))) is None
                       else a.index(t) for q in a.states)
            if tf not in lookup:
                lookup[tf] = len(transforms)
                transforms.append(tf)
                rep_words.append(letter)
            letter_tf[letter] = lookup[tf]
        proper = set(letter_tf.values())
        frontier = sorted(proper)
        while frontier:
            x = frontier.pop(0)
            for letter in a.alphabet:
                tf = tuple(None if transforms[x][q] is None
                           else transforms[letter_tf[letter]][transforms[x][q]]
                           for q in range(nq))
                if tf not in lookup:
                    lookup[tf] = len(transforms)
                    transforms.append(tf)
                    rep_words.append(rep_words[x] + letter)
                if lookup[tf] not in proper:
                    proper.add(lookup[tf])
                    frontier.append(lookup[tf])
        n = len(transforms)
        table = []
        for x in range(n):
            row = []
            for y in range(n):
                tf = tuple(None if transforms[x][q] is None
                           else transforms[y][transforms[x][q]]
                           for q in range(nq))
                row.append(lookup[tf])
            table.append(tuple(row))
        names = tuple(w if w else "1" for w in rep_words)
        self.monoid = FiniteSemigroup(names, tuple(table), 0)
        self.transforms = tuple(transforms)
        self.rep_words = tuple(rep_words)
        self.letter_action = dict(letter_tf)
        self.proper = frozenset(proper)

    def word(self, w) -> int:
        x = 0
        for letter in w:
            if letter not in self.letter_action:
                raise AutomatonError("no letter %r" % letter)
            x = self.monoid.table[x][self.letter_action[letter]]
        return x

    def act(self, state, elt):
        q = self.transforms[elt][self.automaton.index(state)]
        return None if q is None else self.automaton.states[q]

    def generated(self) -> GeneratedSemigroup:
        """The syntactic semigroup as an A-generated semigroup."""
        idx = sorted(self.proper)
        pos = {x: i for i, x in enumerate(idx)}
        sub = self.monoid.subsemigroup(idx)
        sigma = tuple(pos[self.letter_action[a]]
                      for a in self.automaton.alphabet)
        return GeneratedSemigroup.build(sub, self.automaton.alphabet, sigma)


def transition_monoid(a: Automaton) -> TransitionMonoid:
    if a._tm is None:
        a._tm = TransitionMonoid(a)
    return a._tm


@dataclass
class AutMorphism:
    """A state map commuting with the action and preserving the start."""
    source: Automaton
    target: Automaton
    mapping: dict

    def __post_init__(self):
        src, tgt = self.source, self.target
        if src.alphabet != tgt.alphabet:
            raise AutomatonError("alphabet mismatch")
        if set(self.mapping) != set(src.states):
            raise AutomatonError("morphism must be total on states")
        if src.start is not None:
            if tgt.start is None or self.mapping[src.start] != tgt.start:
                raise AutomatonError("morphism must preserve the start state")
        for q in src.states:
            for a in src.alphabet:
                p = src.delta.get((q, a))
                img = tgt.delta.get((self.mapping[q], a))
                if p is not None:
                    if img is None or img != self.mapping[p]:
                        raise AutomatonError(
                            "morphism does not commute at (%r, %r)" % (q, a))

    def __call__(self, q):
        return self.mapping[q]

    @property
    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.states)

    def compose(self, other: "AutMorphism") -> "AutMorphism":
        """self after other (other first)."""
        return AutMorphism(other.source, self.target,
                           {q: self.mapping[v] for q, v in other.mapping.items()})


def identity_morphism(a: Automaton) -> AutMorphism:
    return AutMorphism(a, a, {q: q for q in a.states})


def find_morphism(b: Automaton, a: Automaton) -> AutMorphism | None:
    """The unique morphism b -> a, or None.

    Both automata must carry start states; the map sends I_b.w to I_a.w,
    and is a morphism iff that assignment is consistent and letter-complete.
    """
    if b.start is None or a.start is None:
        raise AutomatonError("find_morphism needs start states")
    if b.alphabet != a.alphabet:
        return None
    mapping = {b.start: a.start}
    frontier = [b.start]
    while frontier:
        q = frontier.pop(0)
        for letter in b.alphabet:
            p = b.delta.get((q, letter))
            if p is None:
                continue
            img = a.delta.get((mapping[q], letter))
            if img is None:
                return None
            if p in mapping:
                if mapping[p] != img:
                    return None
            else:
                mapping[p] = img
                frontier.append(p)
    try:
        return AutMorphism(b, a, mapping)
    except AutomatonError:
        return None


def direct_product(a1: Automaton, a2: Automaton) -> Automaton:
    """The reachable pair automaton; the join of a1 and a2 over a common image."""
    if a1.alphabet != a2.alphabet:
        raise AutomatonError("alphabet mismatch")
    if a1.start is None or a2.start is None:
        raise AutomatonError("direct_product needs start states")
    start = (a1.start, a2.start)
    states = [start]
    seen = {start}
    delta = {}
    frontier = [start]
    while frontier:
        (p, q) = frontier.pop(0)
        for letter in a1.alphabet:
            p2 = a1.delta.get((p, letter))
            q2 = a2.delta.get((q, letter))
            if p2 is None or q2 is None:
                continue
            nxt = (p2, q2)
            delta[((p, q), letter)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)
                frontier.append(nxt)
    final = frozenset((p, q) for (p, q) in states
                      if p in a1.final and q in a2.final)
    return Automaton(tuple(states), a1.alphabet, delta, start, final)


def product_projections(prod: Automaton, a1: Automaton,
                        a2: Automaton) -> tuple[AutMorphism, AutMorphism]:
    p1 = AutMorphism(prod, a1, {q: q[0] for q in prod.states})
    p2 = AutMorphism(prod, a2, {q: q[1] for q in prod.states})
    return p1, p2


# ---------------------------------------------------------------------------
# injectivity on reachability classes

def induced_monoid_map(phi: AutMorphism) -> dict[int, int]:
    """Source transition-monoid element -> its action on the target."""
    tm_s = transition_monoid(phi.source)
    tm_t = transition_monoid(phi.target)
    return {x: tm_t.word(tm_s.rep_words[x])
            for x in range(len(tm_s.monoid))}


def regular_classes(a: Automaton) -> set[int]:
    """Indices of regular reachability classes.

    A class C is regular iff some nonempty word w has start.w in C and
    (start.w).w = start.w; on Cayley graphs this is exactly regularity of
    the corresponding R-class of the semigroup.
    """
    if a.start is None:
        raise AutomatonError("regularity needs a start state")
    rs = reach_structure(a)
    tm = transition_monoid(a)
    start_idx = a.index(a.start)
    regular = set()
    for m in tm.proper:
        tf = tm.transforms[m]
        q = tf[start_idx]
        if q is not None and tf[q] == q:
            regular.add(rs.class_index(a.states[q]))
    return regular


def injectivity_check(phi: AutMorphism, mode: str = "R"):
    """Injectivity of phi on reachability classes.

    mode "R": injective on every class; "regR": on regular classes only;
    "fullyR": 1:1R and, restricted to any source class, onto the full
    target class of its image.
    Returns (ok, witness) where witness names the offending class or pair.
    """
    rs = reach_structure(phi.source)
    if mode == "regR":
        wanted = regular_classes(phi.source)
    elif mode in ("R", "fullyR"):
        wanted = set(range(len(rs.classes)))
    else:
        raise AutomatonError("unknown injectivity mode %r" % mode)
    for i in sorted(wanted):
        seen = {}
        for q in sorted(rs.classes[i], key=phi.source.index):
            img = phi.mapping[q]
            if img in seen:
                return False, ("collision", q, seen[img])
            seen[img] = q
    if mode == "fullyR":
        rt = reach_structure(phi.target)
        for i, c in enumerate(rs.classes):
            images = {phi.mapping[q] for q in c}
            tgt_class = rt.class_of(next(iter(images)))
            if images != tgt_class:
                missing = sorted(tgt_class - images, key=phi.target.index)
                return False, ("not onto class", i, missing[0])
    return True, None


def rank_condition_check(phi: AutMorphism):
    """No state of the source refuses a loop of rank it already achieves.

    For every source state q and every transformation beta fixing the image
    of q in the target: if some alpha fixes q with rank(alpha) >= rank(beta),
    beta's source action must fix q as well.  Transformations range over the
    transition monoid of the source (which determines the joint action on
    the source x target product), ranks over the target's syntactic monoid.
    """
    tm_s = transition_monoid(phi.source)
    tm_t = transition_monoid(phi.target)
    rho = induced_monoid_map(phi)
    ranks = {m: algebraic_rank(tm_t.monoid, m) for m in range(len(tm_t.monoid))}
    for q in phi.source.states:
        qi = phi.source.index(q)
        fi = phi.target.index(phi.mapping[q])
        own = [ranks[rho[m]] for m in tm_s.proper
               if tm_s.transforms[m][qi] == qi]
        if not own:
            continue
        best = max(own)
        for m in sorted(tm_s.proper):
            mt = rho[m]
            if tm_t.transforms[mt][fi] == fi and ranks[mt] <= best:
                if tm_s.transforms[m][qi] != qi:
                    return False, ("refused loop", q, tm_s.rep_words[m])
    return True, None


# ---------------------------------------------------------------------------
# right congruences and the interval [a, b]

@dataclass(frozen=True)
class RightCongruence:
    """A transition-closed partition of b's states refining ker(phi)."""
    partition: tuple[frozenset, ...]

    def class_of(self, q):
        for c in self.partition:
            if q in c:
                return c
        raise AutomatonError("state %r not in partition" % (q,))

    def refines(self, other: "RightCongruence") -> bool:
        return all(any(c <= d for d in other.partition) for c in self.partition)


def _sorted_partition(b, blocks):
    return tuple(sorted((frozenset(c) for c in blocks),
                        key=lambda c: min(b.index(q) for q in c)))


def _close_pairs(b, fiber_of, pairs):
    """Smallest right congruence merging the pairs; None if it would cross
    a ker(phi) fiber or break definedness agreement."""
    parent = {q: q for q in b.states}
    # consolidated per-class transition: root -> {letter: target state or
    # absence}; members of one class must agree on definedness
    out = {q: {a: b.delta.get((q, a)) for a in b.alphabet} for q in b.states}

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
        if fiber_of[rx] != fiber_of[ry]:
            return None
        parent[ry] = rx
        ox, oy = out[rx], out[ry]
        for a in b.alphabet:
            px, py = ox[a], oy[a]
            if (px is None) != (py is None):
                return None
            if px is not None:
                work.append((px, py))
    blocks = {}
    for q in b.states:
        blocks.setdefault(find(q), set()).add(q)
    return _sorted_partition(b, blocks.values())


def _join(b, fiber_of, p1, p2):
    pairs = []
    for part in (p1, p2):
        for c in part:
            members = sorted(c, key=b.index)
            pairs.extend((members[0], q) for q in members[1:])
    return _close_pairs(b, fiber_of, pairs)


def quotient(b: Automaton, cong: RightCongruence):
    """The quotient automaton and the projection morphism b -> b/cong."""
    label = {}
    for c in cong.partition:
        rep = min(c, key=b.index)
        for q in c:
            label[q] = rep
    states = tuple(min(c, key=b.index) for c in cong.partition)
    delta = {}
    for c in cong.partition:
        rep = min(c, key=b.index)
        for a in b.alphabet:
            defined = [b.delta.get((q, a)) for q in c]
            if any(v is not None for v in defined):
                if any(v is None for v in defined):
                    raise AutomatonError("partition is not transition-closed")
                targets = {label[v] for v in defined}
                if len(targets) != 1:
                    raise AutomatonError("partition is not a right congruence")
                delta[(rep, a)] = targets.pop()
    start = None if b.start is None else label[b.start]
    final = frozenset(label[q] for q in b.final)
    x = Automaton(states, b.alphabet, delta, start, final)
    return x, AutMorphism(b, x, label)


def enumerate_interval(b: Automaton, phi: AutMorphism, limit: int = 12):
    """All right congruences on b refining ker(phi), coarsest join lattice.

    Returns a list of (RightCongruence, quotient X, phi1: b->X, phi2: X->a)
    covering the whole interval [a, b].  Raises ResourceLimitError past the
    configured state limit.
    """
    if phi.source is not b and phi.source != b:
        raise AutomatonError("phi must map b onto its image")
    if len(b.states) > limit:
        raise ResourceLimitError(
            "interval enumeration limited to %d states (got %d)"
            % (limit, len(b.states)))
    a = phi.target
    fiber_of = {q: phi.mapping[q] for q in b.states}
    bottom = _sorted_partition(b, [{q} for q in b.states])
    principals = []
    for f in a.states:
        fiber = sorted((q for q in b.states if fiber_of[q] == f), key=b.index)
        for i in range(len(fiber)):
            for j in range(i + 1, len(fiber)):
                p = _close_pairs(b, fiber_of, [(fiber[i], fiber[j])])
                if p is not None and p not in principals:
                    principals.append(p)
    lattice = {bottom}
    frontier = [bottom]
    while frontier:
        cur = frontier.pop()
        for pr in principals:
            j = _join(b, fiber_of, cur, pr)
            if j is not None and j not in lattice:
                lattice.add(j)
                frontier.append(j)
    out = []
    for part in sorted(lattice, key=lambda p: (len(p), p and sorted(
            tuple(sorted(map(b.index, c))) for c in p))):
        cong = RightCongruence(part)
        x, phi1 = quotient(b, cong)
        phi2 = AutMorphism(x, a, {q: fiber_of[q] for q in x.states})
        out.append((cong, x, phi1, phi2))
    return out


# ---------------------------------------------------------------------------
# canonical forms

def canonical_form(a: Automaton):
    """BFS renumbering from the start, letters in alphabet order.

    Start-free automata must be strongly connected; the minimum over all
    base states is taken.
    """
    if a.start is not None:
        return _bfs_form(a, a.start)
    forms = []
    for q in a.states:
        if a.reachable_from(q) != set(a.states):
            raise AutomatonError(
                "start-free canonical form needs strong connectivity")
        forms.append(_bfs_form(a, q))
    return min(forms)


def _bfs_form(a, root):
    order = {root: 0}
    queue = [root]
    while queue:
        q = queue.pop(0)
        for letter in a.alphabet:
            p = a.delta.get((q, letter))
            if p is not None and p not in order:
                order[p] = len(order)
                queue.append(p)
    if len(order) != len(a.states):
        raise AutomatonError("automaton is not trim from %r" % (root,))
    edges = tuple(sorted((order[q], li, order[p])
                         for (q, letter), p in a.delta.items()
                         for li in [a.alphabet.index(letter)]))
    final = tuple(sorted(order[q] for q in a.final))
    return (len(a.states), a.alphabet, edges, 0 if a.start is not None else None,
            final)


def isomorphic(a1: Automaton, a2: Automaton) -> bool:
    return canonical_form(a1) == canonical_form(a2)


# ---------------------------------------------------------------------------
# Cayley graphs

def cayley_graph(gs: GeneratedSemigroup, start_name: str = "I") -> Automaton:
    """The right Cayley graph of an A-generated semigroup, fresh start added.

    States are element names plus a fresh start; the action of a letter is
    right multiplication by its generator.
    """
    s = gs.base
    name = start_name
    while name in s.elements:
        name += "'"
    states = (name,) + s.elements
    delta = {}
    for a, g in zip(gs.alphabet, gs.sigma):
        delta[(name, a)] = s.elements[g]
        for x in range(len(s)):
            delta[(s.elements[x], a)] = s.elements[s.table[x][g]]
    return Automaton(states, gs.alphabet, delta, name)


def cayley_morphism(dom: GeneratedSemigroup, cod: GeneratedSemigroup,
                    phi=None) -> AutMorphism:
    """The induced morphism of Cayley graphs for a generator-respecting
    surmorphism of A-generated semigroups."""
    b = cayley_graph(dom)
    a = cayley_graph(cod)
    m = find_morphism(b, a)
    if m is None:
        raise AutomatonError("no induced Cayley morphism")
    return m


# ---------------------------------------------------------------------------
# .aut text format
#
#   states: q0 q1 ...
#   alphabet: a b
#   start: q0
#   final: q2 q3          (optional)
#   trans: q a q'         (one line per transition)

def parse_aut(text: str) -> Automaton:
    states = alphabet = None
    start = None
    final = frozenset()
    trans = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if ":" not in ln:
            raise AutomatonError("bad .aut line %r" % ln)
        key, rest = ln.split(":", 1)
        key = key.strip()
        parts = rest.split()
        if key == "states":
            states = tuple(parts)
        elif key == "alphabet":
            alphabet = tuple(parts)
        elif key == "start":
            if len(parts) != 1:
                raise AutomatonError("start takes one state")
            start = parts[0]
        elif key == "final":
            final = frozenset(parts)
        elif key == "trans":
            if len(parts) != 3:
                raise AutomatonError("trans takes: q a q'")
            trans.append(tuple(parts))
        else:
            raise AutomatonError("unknown .aut key %r" % key)
    if states is None or alphabet is None:
        raise AutomatonError("missing states / alphabet")
    delta = {}
    for (q, a, p) in trans:
        if (q, a) in delta:
            raise AutomatonError("nondeterministic at (%s, %s)" % (q, a))
        delta[(q, a)] = p
    return Automaton(states, alphabet, delta, start, final)


def serialize_aut(a: Automaton) -> str:
    lines = ["states: " + " ".join(str(q) for q in a.states),
             "alphabet: " + " ".join(a.alphabet)]
    if a.start is not None:
        lines.append("start: %s" % (a.start,))
    if a.final:
        lines.append("final: " + " ".join(
            str(q) for q in sorted(a.final, key=a.index)))
    for q in a.states:
        for letter in a.alphabet:
            p = a.delta.get((q, letter))
            if p is not None:
                lines.append("trans: %s %s %s" % (q, letter, p))
    return "\n".join(lines) + "\n"
