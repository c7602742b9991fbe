"""Finite monoids, groups, and groupoids by table; reduced free-group words.

Structures are immutable and validated by exhaustive law checks.  The
catalog provides the corpus for the iff-group property sweeps: an
exhaustive-by-brute-force list up to order 3 (deduplicated up to
isomorphism) plus curated larger entries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Optional, Sequence

from .errors import CapabilityError, InputError, PreconditionError


@dataclass(frozen=True)
class FinMonoid:
    """A finite monoid given by its composition table; elements are 0..order-1."""

    order: int
    table: tuple  # tuple of row tuples; table[a][b] = a*b
    identity: int
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise InputError("order must be positive")
        if len(self.table) != self.order or any(len(r) != self.order for r in self.table):
            raise InputError("table must be order x order")
        if not all(0 <= v < self.order for row in self.table for v in row):
            raise InputError("table entries must be element indices")
        if not 0 <= self.identity < self.order:
            raise InputError("identity must be an element index")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def mul_all(self, elems: Iterable[int]) -> int:
        out = self.identity
        for e in elems:
            out = self.table[out][e]
        return out

    def is_commutative(self) -> bool:
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(self.order))

    def is_cancellative(self) -> bool:
        rng = range(self.order)
        rows = all(len({self.table[a][b] for b in rng}) == self.order for a in rng)
        cols = all(len({self.table[a][b] for a in rng}) == self.order for b in rng)
        return rows and cols

    def inverse_table(self) -> Optional[tuple]:
        """Two-sided inverses for every element, or None if some are missing."""
        inv = []
        for a in range(self.order):
            found = None
            for b in range(self.order):
                if (self.table[a][b] == self.identity
                        and self.table[b][a] == self.identity):
                    found = b
                    break
            if found is None:
                return None
            inv.append(found)
        return tuple(inv)

    def __repr__(self):
        return f"FinMonoid({self.name or self.table}, e={self.identity})"


@dataclass(frozen=True)
class FinGroup:
    monoid: FinMonoid
    inverse: tuple

    def __post_init__(self):
        if len(self.inverse) != self.monoid.order:
            raise InputError("inverse table must cover every element")

    @staticmethod
    def from_monoid(monoid: FinMonoid) -> "FinGroup":
        inv = monoid.inverse_table()
        if inv is None:
            raise PreconditionError(f"{monoid!r} has no inverses")
        return FinGroup(monoid, inv)

    @property
    def order(self):
        return self.monoid.order

    @property
    def identity(self):
        return self.monoid.identity

    @property
    def name(self):
        return self.monoid.name

    def mul(self, a, b):
        return self.monoid.mul(a, b)

    def inv(self, a):
        return self.inverse[a]

    def __repr__(self):
        return f"FinGroup({self.monoid.name or self.monoid.table})"


@dataclass(frozen=True)
class FinGroupoid:
    """A finite groupoid: objects, hom-sets by size, composition and inverses.

    Morphisms are keyed ``(x, y, i)`` for the i-th element of hom(x, y).
    ``compose_table[(x, y, z)][g][f]`` is the index of g o f in hom(x, z)
    for f in hom(x, y) and g in hom(y, z).
    """

    objects: tuple
    hom_sizes: dict  # (x, y) -> int
    compose_table: dict  # (x, y, z) -> tuple of rows indexed [g][f]
    identities: dict  # x -> index in hom(x, x)
    inverses: dict  # (x, y) -> tuple of indices into hom(y, x)

    def hom(self, x, y) -> list:
        return [(x, y, i) for i in range(self.hom_sizes.get((x, y), 0))]

    def identity(self, x):
        return (x, x, self.identities[x])

    def compose(self, g, f):
        (y1, z, gi), (x, y, fi) = g, f
        if y1 != y:
            raise PreconditionError("morphisms not composable")
        return (x, z, self.compose_table[(x, y, z)][gi][fi])

    def inv(self, f):
        x, y, fi = f
        return (y, x, self.inverses[(x, y)][fi])


def indiscrete_groupoid(objects: Sequence) -> FinGroupoid:
    """The groupoid with exactly one morphism between any ordered pair of objects."""
    objs = tuple(objects)
    hom_sizes = {(x, y): 1 for x in objs for y in objs}
    compose_table = {(x, y, z): ((0,),) for x in objs for y in objs for z in objs}
    identities = {x: 0 for x in objs}
    inverses = {(x, y): (0,) for x in objs for y in objs}
    return FinGroupoid(objs, hom_sizes, compose_table, identities, inverses)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    passed: bool
    failures: list

    def __bool__(self):
        return self.passed


def validate(structure) -> ValidationReport:
    """Law check with witnesses: associativity, identities, inverses, category laws."""
    failures = []
    if isinstance(structure, FinGroup):
        inner = validate(structure.monoid)
        failures.extend(inner.failures)
        for a in range(structure.order):
            b = structure.inverse[a]
            if (structure.mul(a, b) != structure.identity
                    or structure.mul(b, a) != structure.identity):
                failures.append({"law": "inverse", "witness": (a, b)})
    elif isinstance(structure, FinMonoid):
        M, n, e = structure.table, structure.order, structure.identity
        for a in range(n):
            if M[e][a] != a or M[a][e] != a:
                failures.append({"law": "identity", "witness": a})
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if M[M[a][b]][c] != M[a][M[b][c]]:
                        failures.append({"law": "associativity", "witness": (a, b, c)})
    elif isinstance(structure, FinGroupoid):
        failures.extend(_validate_groupoid(structure))
    else:
        raise InputError(f"cannot validate {type(structure).__name__}")
    return ValidationReport(not failures, failures)


def _validate_groupoid(G: FinGroupoid) -> list:
    failures = []
    for x in G.objects:
        idx = G.identity(x)
        for y in G.objects:
            for f in G.hom(x, y):
                if G.compose(f, idx) != f:
                    failures.append({"law": "right-identity", "witness": f})
            for f in G.hom(y, x):
                if G.compose(idx, f) != f:
                    failures.append({"law": "left-identity", "witness": f})
    for x in G.objects:
        for y in G.objects:
            for z in G.objects:
                for w in G.objects:
                    for f in G.hom(x, y):
                        for g in G.hom(y, z):
                            for h in G.hom(z, w):
                                if (G.compose(h, G.compose(g, f))
                                        != G.compose(G.compose(h, g), f)):
                                    failures.append(
                                        {"law": "associativity", "witness": (f, g, h)})
    for x in G.objects:
        for y in G.objects:
            for f in G.hom(x, y):
                g = G.inv(f)
                if (G.compose(g, f) != G.identity(x)
                        or G.compose(f, g) != G.identity(y)):
                    failures.append({"law": "inverse", "witness": f})
    return failures


# ---------------------------------------------------------------------------
# free words


@dataclass(frozen=True)
class FreeWord:
    """A reduced word over n generators; letters are (generator, +/-1) pairs."""

    generator_count: int
    letters: tuple

    def __post_init__(self):
        for g, s in self.letters:
            if not 0 <= g < self.generator_count:
                raise InputError(f"generator {g} out of range")
            if s not in (1, -1):
                raise InputError("exponents must be +1 or -1")
        for (g1, s1), (g2, s2) in zip(self.letters, self.letters[1:]):
            if g1 == g2 and s1 == -s2:
                raise InputError("word is not reduced")

    @property
    def length(self) -> int:
        return len(self.letters)

    def __repr__(self):
        if not self.letters:
            return "1"
        names = "xyzuvw"
        out = []
        for g, s in self.letters:
            sym = names[g] if self.generator_count <= len(names) else f"x{g}"
            out.append(sym if s == 1 else sym + "'")
        return "".join(out)


def word_reduce(generator_count: int, letters: Iterable) -> FreeWord:
    """Reduce a raw letter sequence by cancelling adjacent inverse pairs."""
    stack = []
    for g, s in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return FreeWord(generator_count, tuple(stack))


def word_multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    if u.generator_count != v.generator_count:
        raise InputError("words over different free groups")
    return word_reduce(u.generator_count, u.letters + v.letters)


def word_invert(u: FreeWord) -> FreeWord:
    return FreeWord(u.generator_count, tuple((g, -s) for g, s in reversed(u.letters)))


def word_power(n: int, generator: int, exponent: int) -> FreeWord:
    """The word generator^exponent over n generators."""
    sign = 1 if exponent >= 0 else -1
    return FreeWord(n, ((generator, sign),) * abs(exponent))


def empty_word(n: int) -> FreeWord:
    return FreeWord(n, ())


def word_substitute(w: FreeWord, replacements: Sequence[FreeWord]) -> FreeWord:
    """Substitute a word for each generator of w (all over the same target group)."""
    if len(replacements) != w.generator_count:
        raise InputError("need one replacement word per generator")
    n = replacements[0].generator_count if replacements else 0
    out = empty_word(n)
    for g, s in w.letters:
        factor = replacements[g] if s == 1 else word_invert(replacements[g])
        out = word_multiply(out, factor)
    return out


def evaluate_word(w: FreeWord, group: FinGroup, args: Sequence[int]) -> int:
    """Substitute group elements for generators; needs len(args) = generator_count."""
    if len(args) != w.generator_count:
        raise InputError("argument tuple has wrong length")
    out = group.identity
    for g, s in w.letters:
        e = args[g] if s == 1 else group.inv(args[g])
        out = group.mul(out, e)
    return out


@dataclass(frozen=True)
class TheoryHom:
    """A theory morphism: an m-tuple of words over n generators.

    Evaluates on any finite group G as the induced map G^n -> G^m.
    """

    n: int
    words: tuple

    def __post_init__(self):
        for w in self.words:
            if w.generator_count != self.n:
                raise InputError("all words must live over n generators")

    @property
    def m(self) -> int:
        return len(self.words)

    def evaluate(self, group: FinGroup, args: Sequence[int]) -> tuple:
        return tuple(evaluate_word(w, group, args) for w in self.words)

    def then(self, other: "TheoryHom") -> "TheoryHom":
        """Composite substituting self's words into other's generators."""
        if other.n != self.m:
            raise InputError("theory morphisms not composable")
        return TheoryHom(self.n, tuple(word_substitute(w, self.words)
                                       for w in other.words))


def theory_hom(n: int, m: int, words: Sequence[FreeWord]) -> TheoryHom:
    if len(words) != m:
        raise InputError(f"expected {m} words, got {len(words)}")
    return TheoryHom(n, tuple(words))


# ---------------------------------------------------------------------------
# catalog

_CATALOG_KINDS = ("monoids", "abelian_monoids", "groups", "abelian_groups")
_CURATED_MAX_ORDER = 6


def _iso_representative(table: tuple) -> tuple:
    """Canonical form of a table with identity 0 under identity-fixing bijections."""
    n = len(table)
    best = None
    for perm in permutations(range(1, n)):
        p = (0,) + perm
        inv = [0] * n
        for i, v in enumerate(p):
            inv[v] = i
        relabeled = tuple(
            tuple(inv[table[p[a]][p[b]]] for b in range(n)) for a in range(n)
        )
        if best is None or relabeled < best:
            best = relabeled
    return best


def canonical_form(monoid: FinMonoid) -> tuple:
    """Table canonical under all bijections, with the identity relabeled to 0."""
    n, e = monoid.order, monoid.identity
    swap = list(range(n))
    swap[0], swap[e] = e, 0
    table = tuple(
        tuple(swap.index(monoid.table[swap[a]][swap[b]]) for b in range(n))
        for a in range(n)
    )
    return _iso_representative(table)


def monoids_isomorphic(a: FinMonoid, b: FinMonoid) -> bool:
    if isinstance(a, FinGroup):
        a = a.monoid
    if isinstance(b, FinGroup):
        b = b.monoid
    return a.order == b.order and canonical_form(a) == canonical_form(b)


def _brute_force_monoids(order: int) -> list:
    """All monoids of the given order with identity 0, up to isomorphism."""
    n = order
    reps = set()
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]
    for fill in product(range(n), repeat=len(cells)):
        table = [[0] * n for _ in range(n)]
        for a in range(n):
            table[0][a] = a
            table[a][0] = a
        for (a, b), v in zip(cells, fill):
            table[a][b] = v
        T = tuple(tuple(r) for r in table)
        ok = all(
            T[T[a][b]][c] == T[a][T[b][c]]
            for a in range(n) for b in range(n) for c in range(n)
        )
        if ok:
            reps.add(_iso_representative(T))
    return [FinMonoid(n, t, 0, name=f"monoid{n}_{i}")
            for i, t in enumerate(sorted(reps))]


def cyclic_group_table(n: int) -> tuple:
    return tuple(tuple((a + b) % n for b in range(n)) for a in range(n))


def _curated_monoids() -> list:
    """Named entries of order 4..6 (plus the 2-element absorber for reference)."""
    z4 = FinMonoid(4, cyclic_group_table(4), 0, name="z4")
    klein_table = tuple(tuple(a ^ b for b in range(4)) for a in range(4))
    klein = FinMonoid(4, klein_table, 0, name="klein")
    # symmetric group on 3 letters, elements as permutation tuples
    perms = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    s3_table = tuple(
        tuple(index[tuple(p[q[i]] for i in range(3))] for q in perms) for p in perms
    )
    s3 = FinMonoid(6, s3_table, index[(0, 1, 2)], name="s3")
    # saturating addition on {0..3}: commutative, identity 0, not cancellative
    sat4 = FinMonoid(
        4, tuple(tuple(min(a + b, 3) for b in range(4)) for a in range(4)),
        0, name="sat4")
    return [z4, klein, s3, sat4]


def bool_or_monoid() -> FinMonoid:
    """The two-element monoid with an absorber ({0,1} under max)."""
    return FinMonoid(2, ((0, 1), (1, 1)), 0, name="bool_or")


def catalog(kind: str, max_order: int) -> list:
    """Structure corpus: exhaustive up to order 3, curated above.

    Groups are returned as FinGroup; monoid kinds as FinMonoid.
    """
    if kind not in _CATALOG_KINDS:
        raise InputError(f"unknown catalog kind {kind!r}")
    if max_order > _CURATED_MAX_ORDER:
        raise CapabilityError(
            f"catalog supports orders up to {_CURATED_MAX_ORDER}, got {max_order}")
    monoids = []
    for order in range(1, min(max_order, 3) + 1):
        monoids.extend(_brute_force_monoids(order))
    if max_order >= 4:
        monoids.extend(m for m in _curated_monoids() if m.order <= max_order)
    if kind == "monoids":
        return monoids
    if kind == "abelian_monoids":
        return [m for m in monoids if m.is_commutative()]
    groups = [FinGroup.from_monoid(m) for m in monoids if m.inverse_table() is not None]
    if kind == "groups":
        return groups
    return [g for g in groups if g.monoid.is_commutative()]


def named_structure(name: str):
    """Look up a structure by its catalog name (e.g. 'z3', 's3', 'bool_or')."""
    specials = {m.name: m for m in _curated_monoids()}
    specials["bool_or"] = bool_or_monoid()
    specials["trivial"] = FinMonoid(1, ((0,),), 0, name="trivial")
    specials["z2"] = FinMonoid(2, cyclic_group_table(2), 0, name="z2")
    specials["z3"] = FinMonoid(3, cyclic_group_table(3), 0, name="z3")
    if name not in specials:
        raise InputError(f"unknown structure name {name!r}")
    m = specials[name]
    return FinGroup.from_monoid(m) if m.inverse_table() is not None else m


# ---------------------------------------------------------------------------
# JSON input schema

# {"kind": "monoid"|"group", "order": n, "table": [[...]], "identity": e}
# groups may include "inverse": [...]; it is derived if absent.
# {"kind": "groupoid", "objects": [...], "homs": {"x,y": size},
#  "compose": {"x,y,z": [[...]]}, "identities": {"x": i}, "inverses": {"x,y": [...]}}


def structure_from_json(data) -> object:
    if not isinstance(data, dict):
        raise InputError("structure document must be a JSON object")
    kind = data.get("kind")
    if kind in ("monoid", "group"):
        for key in ("order", "table", "identity"):
            if key not in data:
                raise InputError(f"missing field {key!r}")
        try:
            m = FinMonoid(int(data["order"]),
                          tuple(tuple(int(v) for v in row) for row in data["table"]),
                          int(data["identity"]),
                          name=str(data.get("name", "")))
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed table: {exc}") from exc
        report = validate(m)
        if not report:
            raise InputError(f"structure fails laws: {report.failures[0]}")
        if kind == "monoid":
            return m
        if "inverse" in data:
            g = FinGroup(m, tuple(int(v) for v in data["inverse"]))
            if not validate(g):
                raise InputError("declared inverse table is wrong")
            return g
        return FinGroup.from_monoid(m)
    if kind == "groupoid":
        try:
            objects = tuple(data["objects"])
            hom_sizes = {_pair(k): int(v) for k, v in data["homs"].items()}
            compose_table = {
                _triple(k): tuple(tuple(int(x) for x in row) for row in v)
                for k, v in data["compose"].items()}
            identities = {_one(k): int(v) for k, v in data["identities"].items()}
            inverses = {_pair(k): tuple(int(x) for x in v)
                        for k, v in data["inverses"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed groupoid document: {exc}") from exc
        G = FinGroupoid(objects, hom_sizes, compose_table, identities, inverses)
        report = validate(G)
        if not report:
            raise InputError(f"groupoid fails laws: {report.failures[0]}")
        return G
    raise InputError(f"unknown structure kind {kind!r}")


def _one(key: str):
    return int(key) if key.lstrip("-").isdigit() else key


def _pair(key: str):
    a, b = key.split(",")
    return (_one(a), _one(b))


def _triple(key: str):
    a, b, c = key.split(",")
    return (_one(a), _one(b), _one(c))


def structure_to_json(structure) -> dict:
    if isinstance(structure, FinGroup):
        return {"kind": "group", "order": structure.order,
                "table": [list(r) for r in structure.monoid.table],
                "identity": structure.identity,
                "inverse": list(structure.inverse),
                "name": structure.name}
    if isinstance(structure, FinMonoid):
        return {"kind": "monoid", "order": structure.order,
                "table": [list(r) for r in structure.table],
                "identity": structure.identity, "name": structure.name}
    raise InputError(f"cannot serialize {type(structure).__name__}")


def load_structure(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in {path}: {exc}") from exc
    return structure_from_json(data)
