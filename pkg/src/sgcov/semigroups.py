"""Finite semigroups given by multiplication tables.

Elements are indexed 0..n-1; all public outputs list classes and elements
in ascending index order so results are reproducible byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache


class SemigroupError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteSemigroup:
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    # index of a two-sided identity, or None; detected in from_table
    identity: int | None = None

    @classmethod
    def from_table(cls, names, table, check=True) -> "FiniteSemigroup":
        names = tuple(str(x) for x in names)
        table = tuple(tuple(row) for row in table)
        n = len(names)
        if len(set(names)) != n:
            raise SemigroupError("duplicate element names")
        if len(table) != n or any(len(row) != n for row in table):
            raise SemigroupError("table must be %d x %d" % (n, n))
        for row in table:
            for v in row:
                if not (0 <= v < n):
                    raise SemigroupError("table entry out of range: %r" % (v,))
        if check:
            _check_associative(table)
        ident = None
        for e in range(n):
            if all(table[e][x] == x and table[x][e] == x for x in range(n)):
                ident = e
                break
        return cls(names, table, ident)

    def __len__(self):
        return len(self.elements)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def prod(self, xs) -> int:
        it = iter(xs)
        try:
            acc = next(it)
        except StopIteration:
            raise SemigroupError("empty product")
        for x in it:
            acc = self.table[acc][x]
        return acc

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise SemigroupError("no element named %r" % name)

    def is_idempotent(self, x: int) -> bool:
        return self.table[x][x] == x

    def idempotents(self) -> tuple[int, ...]:
        return tuple(x for x in range(len(self)) if self.is_idempotent(x))

    def power(self, x: int, k: int) -> int:
        if k < 1:
            raise SemigroupError("power exponent must be >= 1")
        acc = x
        for _ in range(k - 1):
            acc = self.table[acc][x]
        return acc

    def subsemigroup(self, indices) -> "FiniteSemigroup":
        """The subsemigroup on the given (closed) element set."""
        idx = sorted(set(indices))
        pos = {x: i for i, x in enumerate(idx)}
        for x in idx:
            for y in idx:
                if self.table[x][y] not in pos:
                    raise SemigroupError("element set is not closed under product")
        names = tuple(self.elements[x] for x in idx)
        table = tuple(tuple(pos[self.table[x][y]] for y in idx) for x in idx)
        return FiniteSemigroup(names, table, None if self.identity not in pos
                               else pos[self.identity])


def _check_associative(table):
    n = len(table)
    for x in range(n):
        tx = table[x]
        for y in range(n):
            xy = tx[y]
            ty = table[y]
            for z in range(n):
                if table[xy][z] != tx[ty[z]]:
                    raise SemigroupError(
                        "not associative at (%d,%d,%d)" % (x, y, z))


def omega_power(s: FiniteSemigroup, x: int) -> int:
    """The unique idempotent power of x."""
    seen = {}
    acc = x
    k = 1
    while acc not in seen:
        seen[acc] = k
        acc = s.table[acc][x]
        k += 1
    # walk the cycle looking for the idempotent
    acc = x
    for _ in range(len(s) + 1):
        if s.is_idempotent(acc):
            return acc
        acc = s.table[acc][x]
    raise AssertionError("no idempotent power found")


def omega_exponent(s: FiniteSemigroup) -> int:
    """Least m >= 1 with x^m idempotent for every x."""
    max_index = 1
    lcm = 1
    for x in range(len(s)):
        powers = []
        acc = x
        while acc not in powers:
            powers.append(acc)
            acc = s.table[acc][x]
        index = powers.index(acc)  # 0-based: x^(index+1) starts the cycle
        period = len(powers) - index
        max_index = max(max_index, index + 1)
        g, a, b = lcm, lcm, period
        while b:
            a, b = b, a % b
        lcm = lcm // a * period
    m = lcm
    while m < max_index:
        m += lcm
    return m


@dataclass(frozen=True)
class GreenData:
    """Green's relations of a finite semigroup, via divisibility in S^1."""
    r_classes: tuple[frozenset[int], ...]
    l_classes: tuple[frozenset[int], ...]
    j_classes: tuple[frozenset[int], ...]
    h_classes: tuple[frozenset[int], ...]
    # (i, j) present iff J-class i <=_J J-class j
    j_leq: frozenset[tuple[int, int]]
    regular_j: frozenset[int]

    def r_class_of(self, x: int) -> frozenset[int]:
        return _class_of(self.r_classes, x)

    def l_class_of(self, x: int) -> frozenset[int]:
        return _class_of(self.l_classes, x)

    def j_class_of(self, x: int) -> frozenset[int]:
        return _class_of(self.j_classes, x)

    def j_index_of(self, x: int) -> int:
        for i, c in enumerate(self.j_classes):
            if x in c:
                return i
        raise SemigroupError("element %d out of range" % x)

    def j_lt(self, i: int, j: int) -> bool:
        return i != j and (i, j) in self.j_leq


def _class_of(classes, x):
    for c in classes:
        if x in c:
            return c
    raise SemigroupError("element %d out of range" % x)


def _sorted_classes(below):
    n = len(below)
    classes = []
    seen = set()
    for x in range(n):
        if x in seen:
            continue
        c = frozenset(y for y in range(n) if y in below[x] and x in below[y])
        seen |= c
        classes.append(c)
    return tuple(sorted(classes, key=min))


@lru_cache(maxsize=None)
def green_data(s: FiniteSemigroup) -> GreenData:
    n = len(s)
    t = s.table
    rng = range(n)
    # y is in r_below[x] iff y <=_R x, i.e. y in x.S^1; likewise for L and J
    r_below = []
    l_below = []
    j_below = []
    for x in rng:
        xs = {t[x][u] for u in rng}
        sx = {t[u][x] for u in rng}
        sxs = set()
        for w in sx:
            sxs.update(t[w][u] for u in rng)
        r_below.append(xs | {x})
        l_below.append(sx | {x})
        j_below.append(xs | sx | sxs | {x})
    r_classes = _sorted_classes(r_below)
    l_classes = _sorted_classes(l_below)
    j_classes = _sorted_classes(j_below)
    h_classes = []
    for rc in r_classes:
        for lc in l_classes:
            h = rc & lc
            if h:
                h_classes.append(h)
    h_classes = tuple(sorted(h_classes, key=min))
    j_leq = set()
    for i, ci in enumerate(j_classes):
        xi = min(ci)
        for j, cj in enumerate(j_classes):
            if xi in j_below[min(cj)]:
                j_leq.add((i, j))
    regular = frozenset(i for i, c in enumerate(j_classes)
                        if any(s.is_idempotent(x) for x in c))
    return GreenData(r_classes, l_classes, j_classes, h_classes,
                     frozenset(j_leq), regular)


def algebraic_rank(s: FiniteSemigroup, x: int) -> int:
    """Length of the longest strict chain of regular J-classes above x^omega."""
    gd = green_data(s)
    e = omega_power(s, x)
    start = gd.j_index_of(e)
    heights: dict[int, int] = {}

    def height(i):
        if i not in heights:
            heights[i] = max(
                (1 + height(j) for j in gd.regular_j if gd.j_lt(i, j)),
                default=0)
        return heights[i]

    return height(start)


def idempotent_leq(s: FiniteSemigroup, e: int, f: int) -> bool:
    """f <= e in the idempotent order: f = ef = fe."""
    if not s.is_idempotent(e) or not s.is_idempotent(f):
        raise SemigroupError("idempotent order needs idempotent arguments")
    return s.table[e][f] == f and s.table[f][e] == f


def idempotent_below(s: FiniteSemigroup, e: int, j_class) -> int | None:
    """An idempotent f in the given J-class with e > f, if one exists.

    For a regular J-class strictly below the class of the idempotent e such
    an f always exists; returns None otherwise.
    """
    if not s.is_idempotent(e):
        raise SemigroupError("idempotent_below needs an idempotent")
    for f in sorted(j_class):
        if s.is_idempotent(f) and f != e and idempotent_leq(s, e, f):
            return f
    return None


def right_stabilizer(s: FiniteSemigroup, r: int) -> frozenset[int]:
    """{t : rt = r}; closed under product."""
    return frozenset(t for t in range(len(s)) if s.table[r][t] == r)


def has_idempotent_stabilizers(s: FiniteSemigroup) -> bool:
    """Every right-stabilizing element is idempotent.

    When this holds in the base, a cover that guarantees the factorization
    clause gives the full backwards-k property: any stabilizing word projects
    to a stabilizing element, which is then idempotent.  When it fails, only
    the out-of-scope idempotent-stabilizer expansion slot can restore it."""
    for r in range(len(s)):
        for t in right_stabilizer(s, r):
            if not s.is_idempotent(t):
                return False
    return True


def _left_stabilizer(s, r):
    return frozenset(t for t in range(len(s)) if s.table[t][r] == r)


_TAG_RE = re.compile(r"^(dk|dkrev):(\d+)$")


def variety_check(s: FiniteSemigroup, tag: str) -> bool:
    """Decide membership of s in a named class of finite semigroups.

    Tags: r-trivial, lz, rz, rb, band, dk:<k>, dkrev:<k>,
    r-trivial-band-stabilizers, unambiguous-l-order.
    """
    tag = tag.strip().lower()
    n = len(s)
    rng = range(n)
    t = s.table
    if tag == "lz":
        return all(t[x][y] == x for x in rng for y in rng)
    if tag == "rz":
        return all(t[x][y] == y for x in rng for y in rng)
    if tag == "band":
        return all(s.is_idempotent(x) for x in rng)
    if tag == "rb":
        return (variety_check(s, "band")
                and all(t[t[x][y]][x] == x for x in rng for y in rng))
    if tag == "r-trivial":
        return all(len(c) == 1 for c in green_data(s).r_classes)
    m = _TAG_RE.match(tag)
    if m:
        k = int(m.group(2))
        if k < 1:
            raise SemigroupError("delay bound must be >= 1")
        prods = set(rng)
        for _ in range(k - 1):
            prods = {t[p][y] for p in prods for y in rng}
        if m.group(1) == "dkrev":
            return all(t[p][y] == p for p in prods for y in rng)
        return all(t[y][p] == p for p in prods for y in rng)
    if tag == "r-trivial-band-stabilizers":
        return all(_is_r_trivial_band(s, right_stabilizer(s, r)) for r in rng)
    if tag == "unambiguous-l-order":
        return _unambiguous_l_order(s, rng)
    raise SemigroupError("unknown variety tag %r" % tag)


def _is_r_trivial_band(s, members):
    if not all(s.is_idempotent(x) for x in members):
        return False
    if members:
        sub = s.subsemigroup(members)
        if not variety_check(sub, "r-trivial"):
            return False
    return True


def _unambiguous_l_order(s, members):
    gd = green_data(s)
    l_below = {x: frozenset(y for y in members
                            if gd.l_class_of(y) == gd.l_class_of(x)
                            or _l_leq(s, y, x))
               for x in members}

    def leq(a, b):
        return a in l_below[b]

    for a in members:
        above = [b for b in members if leq(a, b)]
        for b in above:
            for c in above:
                if not leq(b, c) and not leq(c, b):
                    return False
    return True


def _l_leq(s, a, b):
    # a <=_L b iff a in S^1 b
    if a == b:
        return True
    return any(s.table[u][b] == a for u in range(len(s)))


def unambiguous_l_order_within(s: FiniteSemigroup, members) -> bool:
    """Unambiguity of the L-order of s restricted to the given elements."""
    return _unambiguous_l_order(s, sorted(set(members)))


@dataclass(frozen=True)
class SgMorphism:
    domain: FiniteSemigroup
    codomain: FiniteSemigroup
    mapping: tuple[int, ...]

    @classmethod
    def build(cls, domain, codomain, mapping) -> "SgMorphism":
        mapping = tuple(mapping)
        if len(mapping) != len(domain):
            raise SemigroupError("mapping must cover every domain element")
        for x in range(len(domain)):
            for y in range(len(domain)):
                lhs = mapping[domain.table[x][y]]
                rhs = codomain.table[mapping[x]][mapping[y]]
                if lhs != rhs:
                    raise SemigroupError(
                        "not a homomorphism at (%s, %s)"
                        % (domain.elements[x], domain.elements[y]))
        return cls(domain, codomain, mapping)

    @property
    def is_surjective(self) -> bool:
        return set(self.mapping) == set(range(len(self.codomain)))

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def compose(self, other: "SgMorphism") -> "SgMorphism":
        """self after other (other first)."""
        if other.codomain is not self.domain and other.codomain != self.domain:
            raise SemigroupError("composition mismatch")
        return SgMorphism(other.domain, self.codomain,
                          tuple(self.mapping[v] for v in other.mapping))


def maltsev_kernel(phi: SgMorphism) -> tuple[FiniteSemigroup, ...]:
    """The subsemigroups e.phi^-1 for each idempotent e of the codomain."""
    if not phi.is_surjective:
        raise SemigroupError("maltsev_kernel needs a surmorphism")
    out = []
    for e in phi.codomain.idempotents():
        members = [x for x in range(len(phi.domain)) if phi.mapping[x] == e]
        out.append(phi.domain.subsemigroup(members))
    return tuple(out)


def kernel_in_variety(phi: SgMorphism, tag: str) -> bool:
    return all(variety_check(k, tag) for k in maltsev_kernel(phi))


@dataclass(frozen=True)
class GeneratedSemigroup:
    """A finite semigroup with a chosen generating map from an alphabet."""
    base: FiniteSemigroup
    alphabet: tuple[str, ...]
    sigma: tuple[int, ...]

    @classmethod
    def build(cls, base, alphabet, sigma) -> "GeneratedSemigroup":
        alphabet = tuple(alphabet)
        sigma = tuple(sigma)
        if len(alphabet) != len(sigma) or len(set(alphabet)) != len(alphabet):
            raise SemigroupError("bad alphabet / generator map")
        closure = set(sigma)
        frontier = list(closure)
        while frontier:
            x = frontier.pop()
            for g in sigma:
                y = base.table[x][g]
                if y not in closure:
                    closure.add(y)
                    frontier.append(y)
        missing = set(range(len(base))) - closure
        if missing and missing != {base.identity}:
            raise SemigroupError(
                "alphabet does not generate: missing %s"
                % sorted(base.elements[x] for x in missing))
        return cls(base, alphabet, sigma)

    def letter(self, a: str) -> int:
        try:
            return self.sigma[self.alphabet.index(a)]
        except ValueError:
            raise SemigroupError("no letter %r" % a)

    def eval_word(self, word) -> int:
        """Value of a nonempty word (iterable of letters)."""
        return self.base.prod(self.letter(a) for a in word)


def induced_morphism(dom: GeneratedSemigroup,
                     cod: GeneratedSemigroup) -> SgMorphism | None:
    """The generator-respecting surmorphism dom.base -> cod.base, if any."""
    if dom.alphabet != cod.alphabet:
        return None
    mapping: dict[int, int] = {}
    for g, h in zip(dom.sigma, cod.sigma):
        if mapping.setdefault(g, h) != h:
            return None
    frontier = list(mapping)
    while frontier:
        x = frontier.pop()
        for g, h in zip(dom.sigma, cod.sigma):
            y = dom.base.table[x][g]
            v = cod.base.table[mapping[x]][h]
            if y in mapping:
                if mapping[y] != v:
                    return None
            else:
                mapping[y] = v
                frontier.append(y)
    if dom.base.identity is not None and dom.base.identity not in mapping:
        if cod.base.identity is None:
            return None
        mapping[dom.base.identity] = cod.base.identity
    if set(mapping) != set(range(len(dom.base))):
        return None
    try:
        return SgMorphism.build(dom.base, cod.base,
                                tuple(mapping[x] for x in range(len(dom.base))))
    except SemigroupError:
        return None


# ---------------------------------------------------------------------------
# .sg text format
#
#   line 1:  n m            (element count, letter count)
#   line 2:  n element names
#   line 3:  m  letter=element  pairs
#   then n rows of n element names (row x, column y holds x.y)

def parse_sg(text: str) -> GeneratedSemigroup:
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if len(lines) < 3:
        raise SemigroupError("truncated .sg input")
    head = lines[0].split()
    if len(head) != 2:
        raise SemigroupError("first line must be: n m")
    n, m = int(head[0]), int(head[1])
    names = lines[1].split()
    if len(names) != n:
        raise SemigroupError("expected %d element names" % n)
    pairs = lines[2].split()
    if len(pairs) != m:
        raise SemigroupError("expected %d letter=element pairs" % m)
    alphabet = []
    sigma_names = []
    for p in pairs:
        if "=" not in p:
            raise SemigroupError("bad generator pair %r" % p)
        a, e = p.split("=", 1)
        alphabet.append(a)
        sigma_names.append(e)
    rows = lines[3:]
    if len(rows) != n:
        raise SemigroupError("expected %d table rows" % n)
    pos = {nm: i for i, nm in enumerate(names)}
    table = []
    for row in rows:
        cells = row.split()
        if len(cells) != n:
            raise SemigroupError("bad table row %r" % row)
        try:
            table.append(tuple(pos[c] for c in cells))
        except KeyError as k:
            raise SemigroupError("unknown element %s in table" % k)
    base = FiniteSemigroup.from_table(names, table)
    try:
        sigma = tuple(pos[e] for e in sigma_names)
    except KeyError as k:
        raise SemigroupError("unknown generator target %s" % k)
    return GeneratedSemigroup.build(base, alphabet, sigma)


def serialize_sg(gs: GeneratedSemigroup) -> str:
    s = gs.base
    lines = ["%d %d" % (len(s), len(gs.alphabet)),
             " ".join(s.elements),
             " ".join("%s=%s" % (a, s.elements[g])
                      for a, g in zip(gs.alphabet, gs.sigma))]
    for row in s.table:
        lines.append(" ".join(s.elements[v] for v in row))
    return "\n".join(lines) + "\n"
