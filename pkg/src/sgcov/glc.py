"""Greatest locally-trivial covers between an automaton and a cover of it.

Two routes compute the same object under the stabilizer hypotheses: the
join of all qualifying members of the interval [a, b], and a bottom-up
staged construction working outward from the start state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .semigroups import GeneratedSemigroup, SemigroupError, variety_check
from .automata import (Automaton, AutMorphism, AutomatonError,
                       RightCongruence, canonical_form, cayley_graph,
                       enumerate_interval, find_morphism, injectivity_check,
                       isomorphic, _sorted_partition, quotient,
                       rank_condition_check, reach_structure,
                       transition_monoid)
from .ranks import (RankContext, RankError, class_edges, edge_rank,
                    rank_of_class, stabilizer_hypotheses, word_rank)
from .expansions import (ExpansionError, SgExpansion, apply_pipeline,
                         backwards_k_check, maltsev_expansion, parse_pipeline,
                         rhodes_r)


class GlcError(ValueError):
    pass


@dataclass
class GlcOptions:
    use_rank_condition: bool = True
    injectivity_mode: str = "R"
    interval_limit: int = 12


@dataclass
class GlcResult:
    cover: Automaton            # the glc automaton X
    phi1: AutMorphism           # b -> X
    phi2: AutMorphism           # X -> a
    method: str
    options: GlcOptions
    qualifying: int | None = None
    # the morphism from phi1.source onto the base actually used; differs
    # from the input when bottom-up pre-applied the R expansion
    base_phi: AutMorphism | None = None

    def classes_report(self) -> str:
        """One line per class: representative <- members."""
        lines = []
        groups: dict = {}
        for q, v in self.phi1.mapping.items():
            groups.setdefault(v, []).append(q)
        for v in self.cover.states:
            members = sorted(groups.get(v, []), key=self.phi1.source.index)
            lines.append("class: %s <- %s"
                         % (v, " ".join(str(m) for m in members)))
        return "\n".join(lines) + "\n"


def _qualifies(phi2: AutMorphism, options: GlcOptions) -> bool:
    ok, _ = injectivity_check(phi2, options.injectivity_mode)
    if not ok:
        return False
    if options.use_rank_condition:
        ok, _ = rank_condition_check(phi2)
        if not ok:
            return False
    return True


def glc_join(phi: AutMorphism, options: GlcOptions | None = None) -> GlcResult:
    """The join of all interval members whose map to the base qualifies."""
    options = options or GlcOptions()
    b, a = phi.source, phi.target
    entries = enumerate_interval(b, phi, options.interval_limit)
    qualifying = [(cong, x, p1, p2) for (cong, x, p1, p2) in entries
                  if _qualifies(p2, options)]
    if not qualifying:
        raise GlcError("no qualifying member; the base itself should qualify")
    # the join is the quotient by the intersection of qualifying congruences
    sig = {q: tuple(id(cong.class_of(q)) for (cong, _x, _p1, _p2) in qualifying)
           for q in b.states}
    blocks: dict = {}
    for q in b.states:
        blocks.setdefault(sig[q], set()).add(q)
    part = _sorted_partition(b, blocks.values())
    cong = RightCongruence(part)
    x, phi1 = quotient(b, cong)
    phi2 = AutMorphism(x, a, {q: phi.mapping[q] for q in x.states})
    return GlcResult(x, phi1, phi2, "join", options, len(qualifying), phi)


# ---------------------------------------------------------------------------
# bottom-up construction

def _stages(b: Automaton, phi: AutMorphism, ctx: RankContext,
            sources, letter):
    """The staged (n_i, P_i) computation for the class `sources` read by
    `letter`; returns the list of stages, last one stable."""
    a = phi.target
    rs_b = reach_structure(b)
    entry_states = [b.delta[(q, letter)] for q in sources
                    if (q, letter) in b.delta]
    if not entry_states:
        raise GlcError("letter undefined on the whole class")
    r = phi.mapping[entry_states[0]]
    r_class = ctx.reach.class_of(r)

    def cover_class_rank(states):
        ranks = []
        seen_classes = set()
        for q in states:
            ci = rs_b.class_index(q)
            if ci in seen_classes:
                continue
            seen_classes.add(ci)
            for (p, let, t) in class_edges(b, rs_b.classes[ci]):
                ranks.append(edge_rank(ctx, phi.mapping[p], let))
        return max(ranks, default=-1)

    def low_walk(n):
        seen = set(entry_states)
        frontier = list(entry_states)
        while frontier:
            p = frontier.pop()
            for let in b.alphabet:
                t = b.delta.get((p, let))
                if (t is not None and t not in seen
                        and phi.mapping[t] in r_class
                        and edge_rank(ctx, phi.mapping[p], let) <= n):
                    seen.add(t)
                    frontier.append(t)
        return seen

    stages = []
    n = cover_class_rank(entry_states)
    p_bar = frozenset(low_walk(n))
    stages.append((n, p_bar))
    while True:
        n2 = cover_class_rank(p_bar)
        reach2 = low_walk(n2)
        p2 = set()
        for q in reach2:
            p2 |= rs_b.class_of(q)
        p2 = frozenset(p2)
        if (n2, p2) == (n, p_bar):
            break
        n, p_bar = n2, p2
        stages.append((n, p_bar))
    return stages


def glc_bottom_up(phi: AutMorphism,
                  options: GlcOptions | None = None) -> GlcResult:
    """Build the congruence outward from the start, one class at a time.

    Requires the cover's reachability order to be a tree; otherwise the R
    expansion is applied first and the morphism composed through it.
    """
    options = options or GlcOptions()
    b, a = phi.source, phi.target
    if not reach_structure(b).is_tree:
        b_exp, eta = rhodes_r(b)
        phi = phi.compose(eta)
        b = b_exp
    ctx = RankContext.identity(a)
    # process down the reachability order: a state is classified only after
    # every class strictly above it has been handled, so cross-class edges
    # that skip a level cannot pre-empt the staged grouping from the parent
    rs_order = reach_structure(b)

    def depth(q):
        i = rs_order.class_index(q)
        return sum(1 for j in range(len(rs_order.classes))
                   if rs_order.lt(i, j))

    order = sorted(b.states, key=lambda q: (depth(q), b.index(q)))
    class_of: dict = {b.start: 0}
    classes: dict = {0: {b.start}}
    while len(class_of) < len(b.states):
        # next target: minimal depth among unclassified states entered by an
        # edge from an already classified state
        pick = None
        target = None
        for t in order:
            if t in class_of:
                continue
            for q in order:
                if q not in class_of:
                    continue
                for letter in b.alphabet:
                    if b.delta.get((q, letter)) == t:
                        pick = (q, letter)
                        break
                if pick:
                    break
            if pick:
                target = t
                break
        if pick is None:
            raise GlcError("unclassified states are unreachable")
        q0, letter = pick
        sources = sorted(classes[class_of[q0]], key=b.index)
        stages = _stages(b, phi, ctx, sources, letter)
        _n, p_inf = stages[-1]
        fresh = [p for p in sorted(p_inf, key=b.index) if p not in class_of]
        fibers: dict = {}
        for p in fresh:
            fibers.setdefault(phi.mapping[p], []).append(p)
        for f, members in fibers.items():
            cid = len(classes)
            classes[cid] = set(members)
            for p in members:
                class_of[p] = cid
    part = _sorted_partition(b, classes.values())
    cong = RightCongruence(part)
    try:
        x, phi1 = quotient(b, cong)
    except AutomatonError as e:
        raise GlcError("staged partition is not a right congruence: %s" % e)
    phi2 = AutMorphism(x, a, {q: phi.mapping[q] for q in x.states})
    return GlcResult(x, phi1, phi2, "bottom-up", options, None, phi)


@dataclass
class GlcComparison:
    equal: bool
    hypotheses_ok: bool
    detail: str
    join: GlcResult | None = None
    bottom_up: GlcResult | None = None


def check_glc_equality(phi: AutMorphism,
                       options: GlcOptions | None = None) -> GlcComparison:
    """Run both routes and compare canonical forms; reports whether the
    stabilizer/tree hypotheses held so failures outside them are visible
    but not conflated with lemma violations."""
    options = options or GlcOptions()
    hyp_ok, hyp_msg = stabilizer_hypotheses(phi.source)
    if not reach_structure(phi.source).is_tree:
        hyp_ok = False
        hyp_msg += "; reachability order is not a tree"
    join = glc_join(phi, options)
    try:
        bu = glc_bottom_up(phi, options)
    except GlcError as e:
        return GlcComparison(False, hyp_ok, "bottom-up failed: %s" % e, join)
    equal = isomorphic(join.cover, bu.cover)
    detail = hyp_msg if equal else "routes disagree (%d vs %d states); %s" % (
        len(join.cover.states), len(bu.cover.states), hyp_msg)
    return GlcComparison(equal, hyp_ok, detail, join, bu)


# ---------------------------------------------------------------------------
# string automata and the key lemma

@dataclass
class StringAutomaton:
    """A walk through pairwise distinct, strictly descending classes.

    walk: tuple of (letter, entry, exit) triples; entry_i = exit_{i-1}.letter
    with exit_0 the start state.
    """
    base: Automaton
    walk: tuple
    classes: tuple[frozenset, ...]

    @property
    def depth(self) -> int:
        return len(self.walk)


def build_string_automaton(a: Automaton, letters, exits) -> StringAutomaton:
    """letters a_1..a_n and chosen exit states v_1..v_n (v_i in the class
    entered by a_i); validates strict descent and pairwise distinctness."""
    if a.start is None:
        raise GlcError("string automata need a start state")
    letters = tuple(letters)
    exits = tuple(exits)
    if len(letters) != len(exits) or not letters:
        raise GlcError("need as many exits as letters")
    rs = reach_structure(a)
    walk = []
    classes = []
    cur = a.start
    seen = {rs.class_index(a.start)}
    for letter, exit_q in zip(letters, exits):
        entry = a.delta.get((cur, letter))
        if entry is None:
            raise GlcError("undefined step (%r, %r)" % (cur, letter))
        ci = rs.class_index(entry)
        if ci in seen:
            raise GlcError("classes along the walk must be pairwise distinct")
        seen.add(ci)
        if exit_q not in rs.classes[ci]:
            raise GlcError("exit %r not in the entered class" % (exit_q,))
        walk.append((letter, entry, exit_q))
        classes.append(rs.classes[ci])
        cur = exit_q
    return StringAutomaton(a, tuple(walk), tuple(classes))


def enumerate_string_automata(a: Automaton, depth: int):
    """All string automata of exactly the given depth."""
    rs = reach_structure(a)
    out = []

    def extend(cur, seen, letters, exits):
        if len(letters) == depth:
            out.append(build_string_automaton(a, letters, exits))
            return
        for letter in a.alphabet:
            entry = a.delta.get((cur, letter))
            if entry is None:
                continue
            ci = rs.class_index(entry)
            if ci in seen:
                continue
            for exit_q in sorted(rs.classes[ci], key=a.index):
                extend(exit_q, seen | {ci}, letters + [letter],
                       exits + [exit_q])

    extend(a.start, {rs.class_index(a.start)}, [], [])
    return out


def _path_within(a: Automaton, members, src, dst):
    """Shortest word from src to dst along edges inside `members`."""
    if src == dst:
        return ()
    frontier = [(src, ())]
    seen = {src}
    while frontier:
        q, w = frontier.pop(0)
        for letter in a.alphabet:
            p = a.delta.get((q, letter))
            if p is None or p not in members or p in seen:
                continue
            if p == dst:
                return w + (letter,)
            seen.add(p)
            frontier.append((p, w + (letter,)))
    raise GlcError("no path %r -> %r inside the class" % (src, dst))


def _covering_loop(a: Automaton, members, anchor):
    """A closed walk at anchor traversing every edge inside `members`."""
    word = ()
    cur = anchor
    for (q, letter, p) in sorted(class_edges(a, members),
                                 key=lambda e: (a.index(e[0]), str(e[1]))):
        word += _path_within(a, members, cur, q) + (letter,)
        cur = p
    word += _path_within(a, members, cur, anchor)
    if not word:
        raise GlcError("class has no internal edges to cover")
    return word


@dataclass
class KeyLemmaWitness:
    w: tuple                    # a_1 d_1 ... a_n d_n
    d_n: tuple
    loop: tuple                 # l_n, closed at the end state of w
    r_n: int
    w_prime: tuple
    pieces: tuple               # t_k ... t_1 as words, left to right


@dataclass
class GlcPipeline:
    """A base automaton, an expanded cover of it, and the glc between."""
    base: Automaton
    cover: Automaton
    phi: AutMorphism            # cover -> base
    glc: GlcResult
    gates: dict
    # clause-3 equalities are checked in mid_base when present (k1/k2 form)
    mid_base: GeneratedSemigroup | None = None


def make_pipeline(gs: GeneratedSemigroup, steps,
                  options: GlcOptions | None = None,
                  k_for_gate: int = 1,
                  gate_bound: int | None = None) -> GlcPipeline:
    """Expand an A-generated semigroup by the steps, take Cayley graphs,
    compute the glc and record the hypothesis gates."""
    expanded = apply_pipeline(steps, gs)
    base = cayley_graph(gs)
    cover = cayley_graph(expanded)
    phi = find_morphism(cover, base)
    if phi is None:
        raise GlcError("expansion does not project onto its base")
    glc = glc_bottom_up(phi, options)
    hyp_ok, hyp_msg = stabilizer_hypotheses(cover)
    bk = backwards_k_check(expanded, gs, k_for_gate, gate_bound)
    gates = {
        "stabilizers": hyp_ok,
        "stabilizers_detail": hyp_msg,
        "tree": reach_structure(cover).is_tree,
        "backwards_k": bk.ok,
        "backwards_k_bound": bk.bound,
    }
    return GlcPipeline(base, cover, phi, glc, gates)


def preff_pipeline(gs: GeneratedSemigroup, k1: int, k2: int,
                   plugged: dict | None = None,
                   options: GlcOptions | None = None) -> GlcPipeline:
    """The assembled cover pipeline with pluggable slots.

    plugged maps slot names "pointlike" and "inevitable" to SgExpansion
    instances; missing slots default to the identity (their intended
    occupants are out of scope and must be supplied to claims gated on
    them).  The fixed slots are Maltsev RB expansions.
    """
    from .expansions import identity_expansion, _maltsev_step
    plugged = plugged or {}
    point = plugged.get("pointlike", identity_expansion())
    inev = plugged.get("inevitable", identity_expansion())
    rb = _maltsev_step("rb")
    mid_steps = [point, rb]
    mid = apply_pipeline(mid_steps, gs)
    steps = [point, rb, inev, rb]
    pipe = make_pipeline(gs, steps, options, k_for_gate=max(1, k2))
    pipe.mid_base = mid
    pipe.gates["k1"] = k1
    pipe.gates["k2"] = k2
    return pipe


def string_automaton_in_scope(sa: StringAutomaton) -> bool:
    """r_n maximizes over the edge-set of the walk's last class; automata
    whose last class has no internal edges fall outside the premises."""
    for _e in class_edges(sa.base, sa.classes[-1]):
        return True
    return False


def key_lemma_witness(sa: StringAutomaton, pipe: GlcPipeline,
                      k: int) -> KeyLemmaWitness:
    """Construct the witness data for a string automaton over the pipeline.

    Follows the staged construction: read the walk in the cover, find the
    class where the staged rank stabilizes, close a loop through all its
    edges, and cut the resulting word backwards into k pieces.
    """
    glc_aut = pipe.glc.cover
    base_ctx = RankContext.identity(pipe.base)
    # map the string automaton's walk (over the glc automaton) if given over
    # glc; sa.base must be the glc automaton
    if sa.base is not glc_aut and canonical_form(sa.base) != canonical_form(glc_aut):
        raise GlcError("string automaton must live over the pipeline's glc")
    rs_glc = reach_structure(sa.base)
    # d_i: within-class connectors; w1 = a1 d1 a2 d2 ... an
    w1 = ()
    for i, (letter, entry, exit_q) in enumerate(sa.walk):
        w1 += (letter,)
        if i < len(sa.walk) - 1:
            w1 += _path_within(sa.base, sa.classes[i], entry, exit_q)
    last_letter = sa.walk[-1][0]
    w2 = w1[:-1]
    b = pipe.glc.phi1.source
    phi_b = pipe.glc.base_phi
    q_bar = b.run(b.start, w2)
    if q_bar is None:
        raise GlcError("walk undefined in the cover")
    cls_id = pipe.glc.phi1.mapping[q_bar]
    sources = sorted((p for p in b.states
                      if pipe.glc.phi1.mapping[p] == cls_id), key=b.index)
    ctx = RankContext.identity(pipe.base)
    stages = _stages(b, phi_b, ctx, sources, last_letter)
    n_inf, p_inf = stages[-1]
    rs_b = reach_structure(b)
    entry = b.delta[(q_bar, last_letter)]
    # r_n: max rank over the edges of the walk's last class, image ranks
    phi2 = pipe.glc.phi2
    r_n = max((edge_rank(base_ctx, phi2.mapping[q], let)
               for (q, let, _p) in class_edges(sa.base, sa.classes[-1])),
              default=-1)
    # candidate anchor classes: cover classes inside P_inf of maximal rank
    trace = []
    for anchor_cls in _ranked_classes(b, rs_b, p_inf, phi_b, base_ctx, n_inf):
        for anchor in sorted(anchor_cls, key=b.index):
            try:
                d_n = _path_within(b, p_inf | anchor_cls, entry, anchor) \
                    if entry != anchor else ()
                loop = _covering_loop(b, anchor_cls, anchor)
            except GlcError as e:
                trace.append(str(e))
                continue
            w = w1 + d_n
            witness = _finish_witness(pipe, sa, w, d_n, loop, r_n, k)
            if witness is not None:
                return witness
            trace.append("candidate at %r failed verification" % (anchor,))
    raise GlcError("no witness found within bounds; tried: %s"
                   % ("; ".join(trace) or "nothing"))


def _ranked_classes(b, rs_b, p_inf, phi, base_ctx, n_inf):
    seen = set()
    out = []
    for q in sorted(p_inf, key=b.index):
        ci = rs_b.class_index(q)
        if ci in seen:
            continue
        seen.add(ci)
        cls = rs_b.classes[ci]
        r = max((edge_rank(base_ctx, phi.mapping[p], let)
                 for (p, let, _t) in class_edges(b, cls)), default=-1)
        if r == n_inf:
            out.append(cls)
    return out


def _finish_witness(pipe, sa, w, d_n, loop, r_n, k):
    import itertools
    base_tm = transition_monoid(pipe.base)
    cov_tm = transition_monoid(pipe.cover)
    mid = pipe.mid_base
    base_ctx = RankContext.identity(pipe.base)
    # clause 1: w.loop = w in the expansion
    if cov_tm.word(w + loop) != cov_tm.word(w):
        return None
    # clause 2
    if word_rank(base_ctx, loop) != r_n:
        return None
    rank_dn = word_rank(base_ctx, d_n) if d_n else -1
    if not rank_dn < r_n:
        return None
    # clause 3: backwards factorization of w
    eq_sem = mid if mid is not None else None
    if eq_sem is not None:
        def val(word):
            return eq_sem.eval_word(word)
    else:
        def val(word):
            return base_tm.word(word)
    vw = val(w)
    vl = val(loop)
    suffix = (sa.walk[-1][0],) + tuple(d_n)
    n = len(w)
    for cuts in itertools.combinations(range(1, n), k):
        marks = (0,) + cuts + (n,)
        w_prime = w[:marks[1]]
        pieces = [w[marks[i]:marks[i + 1]] for i in range(1, k + 1)]
        if not w_prime or any(not p for p in pieces):
            continue
        if val(w_prime) != vw:
            continue
        if any(val(p) != vl for p in pieces):
            continue
        t1 = pieces[-1]
        if len(t1) < len(suffix) or tuple(t1[-len(suffix):]) != suffix:
            continue
        return KeyLemmaWitness(w, tuple(d_n), tuple(loop), r_n,
                               tuple(w_prime), tuple(map(tuple, pieces)))
    return None


@dataclass
class KeyLemmaReport:
    ok: bool
    lines: tuple[str, ...]


def verify_key_lemma(witness: KeyLemmaWitness, sa: StringAutomaton,
                     pipe: GlcPipeline, k: int) -> KeyLemmaReport:
    """Independent re-check of the three clauses of a witness."""
    lines = []
    ok = True
    cov_tm = transition_monoid(pipe.cover)
    base_ctx = RankContext.identity(pipe.base)
    c1 = cov_tm.word(witness.w + witness.loop) == cov_tm.word(witness.w)
    lines.append("clause 1 (loop absorbed in the expansion): %s"
                 % ("PASS" if c1 else "FAIL"))
    ok &= c1
    rank_loop = word_rank(base_ctx, witness.loop)
    rank_dn = word_rank(base_ctx, witness.d_n) if witness.d_n else -1
    c2 = rank_loop == witness.r_n and rank_dn < witness.r_n
    lines.append("clause 2 (rank %d = r_n, d_n rank %d < r_n): %s"
                 % (rank_loop, rank_dn, "PASS" if c2 else "FAIL"))
    ok &= c2
    mid = pipe.mid_base
    if mid is not None:
        def val(word):
            return mid.eval_word(word)
    else:
        base_tm = transition_monoid(pipe.base)

        def val(word):
            return base_tm.word(word)
    joined = witness.w_prime + tuple(x for p in witness.pieces for x in p)
    c3 = (tuple(joined) == tuple(witness.w)
          and len(witness.pieces) == k
          and val(witness.w_prime) == val(witness.w)
          and all(val(p) == val(witness.loop) for p in witness.pieces))
    suffix = (sa.walk[-1][0],) + tuple(witness.d_n)
    c3 = c3 and tuple(witness.pieces[-1][-len(suffix):]) == suffix
    e = val(witness.loop)
    sem = mid.base if mid is not None else transition_monoid(pipe.base).monoid
    c3 = c3 and sem.table[e][e] == e
    lines.append("clause 3 (backwards-%d factorization): %s"
                 % (k, "PASS" if c3 else "FAIL"))
    ok &= c3
    return KeyLemmaReport(bool(ok), tuple(lines))
