"""Truncated set-valued diagrams on the index categories.

A :class:`TruncatedDiagram` stores finite level sets for every object of
rank <= N and an action for every index morphism between stored ranks.
Actions are memoized from a construction rule; a diagram truncated at N
refuses to answer questions about rank N+1 rather than silently
extending.  Contravariant diagrams (presheaves) send ``f: a -> b`` to a
function ``level[b] -> level[a]``; covariant ones go the other way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Optional

from .errors import (
    PreconditionError,
    RankError,
    ReductionError,
    InvalidSpineError,
)
from .index_categories import (
    DELTA,
    IDELTA,
    IndexCategory,
    compose,
    projection_family,
)


class _Basepoint:
    """Singleton marker for the collapsed point of a reduced diagram."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"


BASEPOINT = _Basepoint()


def element_str(x) -> str:
    """Stable printable form of a level element."""
    if isinstance(x, tuple):
        return "(" + "|".join(element_str(v) for v in x) + ")"
    return repr(x)


class TruncatedDiagram:
    """A finite diagram with lazily materialized, memoized actions."""

    def __init__(self, category: IndexCategory, truncation: int, levels: dict,
                 action_rule: Callable, contravariant: bool = True, name: str = ""):
        self.category = category
        self.truncation = truncation
        self.levels = {k: tuple(v) for k, v in levels.items()}
        self.contravariant = contravariant
        self.name = name
        self._action_rule = action_rule
        self._actions: dict = {}
        self._level_sets = {k: frozenset(v) for k, v in self.levels.items()}

    # -- keys and actions --------------------------------------------------

    def level_keys(self) -> list:
        return list(self.levels.keys())

    def level(self, key) -> tuple:
        if key not in self.levels:
            raise RankError(f"{self.name or 'diagram'} has no level {key!r}")
        return self.levels[key]

    def action_domain_key(self, f):
        cat = self.category
        return cat.target_key(f) if self.contravariant else cat.source_key(f)

    def action_codomain_key(self, f):
        cat = self.category
        return cat.source_key(f) if self.contravariant else cat.target_key(f)

    def act(self, f) -> dict:
        """The action of one index morphism as an element mapping."""
        cached = self._actions.get(f)
        if cached is None:
            dom = self.action_domain_key(f)
            cod = self.action_codomain_key(f)
            if dom not in self.levels or cod not in self.levels:
                raise RankError(f"morphism {f!r} leaves the truncation")
            cached = self._action_rule(f)
            for x, y in cached.items():
                if y not in self._level_sets[cod]:
                    raise PreconditionError(
                        f"action of {f!r} sends {x!r} outside level {cod!r}")
            if set(cached) != set(self._level_sets[dom]):
                raise PreconditionError(f"action of {f!r} is not total")
            self._actions[f] = cached
        return cached

    def apply(self, f, x):
        return self.act(f)[x]

    def morphisms_within(self) -> list:
        """Every index morphism between stored level keys, deterministic order."""
        keys = self.level_keys()
        out = []
        for a in keys:
            for b in keys:
                out.extend(self.category.hom(a, b))
        return out

    def size(self) -> int:
        return sum(len(v) for v in self.levels.values())

    def __repr__(self):
        sizes = {k: len(v) for k, v in self.levels.items()}
        return f"<{self.name or 'diagram'} on {self.category.name} levels={sizes}>"


def diagram_from_tables(category, truncation, levels, actions, contravariant=True,
                        name=""):
    """Build a diagram from fully materialized action tables."""
    d = TruncatedDiagram(category, truncation, levels,
                         lambda f: dict(actions[f]), contravariant, name)
    return d


@dataclass
class DiagramMorphism:
    """Levelwise map between diagrams, commuting with every action."""

    source: TruncatedDiagram
    target: TruncatedDiagram
    components: dict  # key -> dict elem -> elem

    def component(self, key) -> dict:
        return self.components[key]

    def naturality_failures(self, morphisms=None) -> list:
        out = []
        ms = self.source.morphisms_within() if morphisms is None else morphisms
        for f in ms:
            dom = self.source.action_domain_key(f)
            cod = self.source.action_codomain_key(f)
            for x in self.source.level(dom):
                lhs = self.components[cod][self.source.apply(f, x)]
                rhs = self.target.apply(f, self.components[dom][x])
                if lhs != rhs:
                    out.append({"morphism": repr(f), "element": element_str(x)})
        return out


def identity_morphism(d: TruncatedDiagram) -> DiagramMorphism:
    return DiagramMorphism(d, d, {k: {x: x for x in v} for k, v in d.levels.items()})


# ---------------------------------------------------------------------------
# functoriality audit


@dataclass
class FunctorialityReport:
    identity_failures: list
    composition_failures: list
    pairs_checked: int

    @property
    def passed(self):
        return not self.identity_failures and not self.composition_failures


def audit_functoriality(d: TruncatedDiagram, max_failures: int = 5) -> FunctorialityReport:
    """Check action(id) = id and action(g o f) = the composite of actions.

    Exhaustive over all composable pairs within the truncation; meant for
    desk-scale diagrams.
    """
    id_fail, comp_fail = [], []
    for key in d.level_keys():
        ident = d.category.identity(key)
        act = d.act(ident)
        for x in d.level(key):
            if act[x] != x:
                id_fail.append({"key": key, "element": element_str(x)})
    by_keys = {}
    for f in d.morphisms_within():
        src = d.category.source_key(f)
        dst = d.category.target_key(f)
        by_keys.setdefault((src, dst), []).append(f)
    pairs = 0
    keys = d.level_keys()
    for a in keys:
        for b in keys:
            for c in keys:
                fs = by_keys.get((a, b), ())
                gs = by_keys.get((b, c), ())
                if not fs or not gs:
                    continue
                for g in gs:
                    act_g = d.act(g)
                    for f in fs:
                        pairs += 1
                        act_f = d.act(f)
                        act_gf = d.act(d.category.compose(g, f))
                        if d.contravariant:
                            # level[c] -> level[a]
                            ok = all(act_f[act_g[x]] == act_gf[x] for x in act_g)
                        else:
                            ok = all(act_g[act_f[x]] == act_gf[x] for x in act_f)
                        if not ok and len(comp_fail) < max_failures:
                            comp_fail.append({"f": repr(f), "g": repr(g)})
    return FunctorialityReport(id_fail, comp_fail, pairs)


# ---------------------------------------------------------------------------
# representables and reduction


def representable(category: IndexCategory, n: int, N: int,
                  name: str = "") -> TruncatedDiagram:
    """The diagram with level k = hom(k, n), acting by precomposition."""
    if category not in (DELTA, IDELTA):
        raise PreconditionError("representables are built over Delta or IDelta")
    levels = {k: tuple(category.hom(k, n)) for k in range(N + 1)}

    def rule(f):
        dom = f.target_rank
        return {x: compose(x, f) for x in levels[dom]}

    return TruncatedDiagram(category, N, levels, rule, True,
                            name or f"{category.name}[{n}]")


def is_reduced(d: TruncatedDiagram) -> bool:
    return all(len(d.level(k)) == 1 for k in d.level_keys()
               if d.category.rank_of(k) == 0)


def reduce_diagram(d: TruncatedDiagram) -> TruncatedDiagram:
    """Collapse the subdiagram generated by level zero to a single basepoint."""
    if not d.contravariant or not isinstance(d.level_keys()[0], int):
        raise PreconditionError("reduction is defined for plain presheaf diagrams")
    if 0 not in d.levels or not d.level(0):
        raise ReductionError("cannot reduce a diagram with empty level zero")
    collapsed = {}
    for k in d.level_keys():
        hit = set()
        for c in d.category.hom(k, 0):
            act = d.act(c)
            hit.update(act[v] for v in d.level(0))
        collapsed[k] = hit
    levels = {
        k: (BASEPOINT,) + tuple(x for x in d.level(k) if x not in collapsed[k])
        for k in d.level_keys()
    }

    def rule(f):
        dom = f.target_rank
        cod = f.source_rank
        act = d.act(f)
        out = {BASEPOINT: BASEPOINT}
        for x in levels[dom]:
            if x is BASEPOINT:
                continue
            y = act[x]
            out[x] = BASEPOINT if y in collapsed[cod] else y
        return out

    return TruncatedDiagram(d.category, d.truncation, levels, rule, True,
                            f"reduce({d.name})" if d.name else "reduced")


def terminal_diagram(category: IndexCategory, N: int) -> TruncatedDiagram:
    levels = {k: (BASEPOINT,) for k in category.objects_upto(N)}
    return TruncatedDiagram(category, N, levels,
                            lambda f: {BASEPOINT: BASEPOINT}, True, "point")


# ---------------------------------------------------------------------------
# subdiagrams


@dataclass
class SubDiagram:
    """An action-closed selection of elements of a parent diagram."""

    parent: TruncatedDiagram
    selected: dict  # key -> frozenset

    def __post_init__(self):
        self.selected = {k: frozenset(v) for k, v in self.selected.items()}
        for k in self.parent.level_keys():
            self.selected.setdefault(k, frozenset())
        bad = closure_violations(self.parent, self.selected)
        if bad:
            raise PreconditionError(f"selection is not action-closed: {bad[0]}")

    def level(self, key):
        return tuple(x for x in self.parent.level(key) if x in self.selected[key])

    def contains(self, key, x) -> bool:
        return x in self.selected[key]

    def issubset(self, other: "SubDiagram") -> bool:
        return all(self.selected[k] <= other.selected[k]
                   for k in self.parent.level_keys())

    def as_diagram(self, name: str = "") -> TruncatedDiagram:
        levels = {k: self.level(k) for k in self.parent.level_keys()}
        parent = self.parent

        def rule(f):
            act = parent.act(f)
            dom = parent.action_domain_key(f)
            return {x: act[x] for x in levels[dom]}

        return TruncatedDiagram(parent.category, parent.truncation, levels,
                                rule, parent.contravariant, name or "sub")

    def size(self):
        return sum(len(v) for v in self.selected.values())


def closure_violations(parent: TruncatedDiagram, selected: dict) -> list:
    out = []
    for f in parent.morphisms_within():
        dom = parent.action_domain_key(f)
        cod = parent.action_codomain_key(f)
        act = parent.act(f)
        for x in selected[dom]:
            if act[x] not in selected[cod]:
                out.append({"morphism": repr(f), "element": element_str(x)})
                if len(out) >= 3:
                    return out
    return out


def close_selection(parent: TruncatedDiagram, selected: dict):
    """Smallest action-closed selection containing the given one.

    Returns (closed, added) where added records what closure contributed.
    """
    closed = {k: set(v) for k, v in selected.items()}
    for k in parent.level_keys():
        closed.setdefault(k, set())
    queue = [(k, x) for k, xs in closed.items() for x in xs]
    by_domain = {}
    for f in parent.morphisms_within():
        by_domain.setdefault(parent.action_domain_key(f), []).append(f)
    added = {k: set() for k in closed}
    while queue:
        k, x = queue.pop()
        for f in by_domain.get(k, ()):
            cod = parent.action_codomain_key(f)
            y = parent.apply(f, x)
            if y not in closed[cod]:
                closed[cod].add(y)
                added[cod].add(y)
                queue.append((cod, y))
    return ({k: frozenset(v) for k, v in closed.items()},
            {k: frozenset(v) for k, v in added.items() if v})


# ---------------------------------------------------------------------------
# spines


def spine(kind: str, n: int, N: int, reduced: bool = False) -> SubDiagram:
    """The union of the distinguished edge inclusions in a representable.

    ``G``  -- alpha edges in Delta[n];
    ``IG`` -- beta edges in IDelta[n];
    ``H``  -- gamma edges in Delta[k] (one per initial segment).
    """
    if kind in ("G", "IG"):
        if n < 2:
            raise InvalidSpineError(f"spine {kind}({n}) needs n >= 2")
        category = DELTA if kind == "G" else IDELTA
        edges = projection_family("alpha" if kind == "G" else "beta", n)
    elif kind == "H":
        if n < 2:
            raise InvalidSpineError(f"spine H({n}) needs k >= 2")
        category = DELTA
        edges = projection_family("gamma", n)
    else:
        raise InvalidSpineError(f"unknown spine kind {kind!r}")
    amb = representable(category, n, N)
    if reduced:
        amb = reduce_diagram(amb)
    selected = {}
    for t in range(N + 1):
        hit = set()
        for e in edges:
            for u in category.hom(t, 1):
                x = compose(e, u)
                if reduced:
                    hit.add(x if x in amb._level_sets[t] else BASEPOINT)
                else:
                    hit.add(x)
        selected[t] = frozenset(hit)
    return SubDiagram(amb, selected)


# ---------------------------------------------------------------------------
# coproducts and pushouts


def coproduct(diagrams: list, name: str = "coproduct"):
    """Disjoint union; returns (diagram, injections)."""
    if not diagrams:
        raise PreconditionError("coproduct needs at least one summand for its shape")
    base = diagrams[0]
    keys = base.level_keys()
    levels = {k: tuple((i, x) for i, d in enumerate(diagrams) for x in d.level(k))
              for k in keys}

    def rule(f):
        out = {}
        for i, d in enumerate(diagrams):
            act = d.act(f)
            for x, y in act.items():
                out[(i, x)] = (i, y)
        return out

    total = TruncatedDiagram(base.category, base.truncation, levels, rule,
                             base.contravariant, name)
    injections = [
        DiagramMorphism(d, total, {k: {x: (i, x) for x in d.level(k)} for k in keys})
        for i, d in enumerate(diagrams)
    ]
    return total, injections


def empty_like(d: TruncatedDiagram) -> TruncatedDiagram:
    """The empty diagram on the same index data (empty coproduct)."""
    levels = {k: () for k in d.level_keys()}
    return TruncatedDiagram(d.category, d.truncation, levels,
                            lambda f: {}, d.contravariant, "empty")


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


@dataclass
class PushoutResult:
    diagram: TruncatedDiagram
    left_injection: DiagramMorphism   # B -> pushout
    right_injection: DiagramMorphism  # C -> pushout


def pushout_with_injections(f: DiagramMorphism, g: DiagramMorphism) -> PushoutResult:
    """Levelwise pushout of B <- A -> C along f: A->B and g: A->C."""
    if f.source is not g.source:
        raise PreconditionError("pushout legs must share their source")
    A, B, C = f.source, f.target, g.target
    keys = A.level_keys()
    uf = _UnionFind()
    order = {}
    for k in keys:
        for pos, x in enumerate(B.level(k)):
            order[(k, ("B", x))] = (0, pos)
        for pos, x in enumerate(C.level(k)):
            order[(k, ("C", x))] = (1, pos)
        for a in A.level(k):
            uf.union(("B", f.components[k][a]), ("C", g.components[k][a]))

    def rep(k, tagged):
        root = uf.find(tagged)
        members = [t for t in uf.parent if uf.find(t) == root and (k, t) in order]
        return min(members, key=lambda t: order[(k, t)])

    # representative lookup per level (classes never mix levels)
    reps = {}
    for k in keys:
        classes = {}
        for tagged in ([("B", x) for x in B.level(k)] + [("C", x) for x in C.level(k)]):
            classes.setdefault(uf.find(tagged), []).append(tagged)
        for members in classes.values():
            r = min(members, key=lambda t: order[(k, t)])
            for t in members:
                reps[(k, t)] = r
    levels = {}
    for k in keys:
        seen, out = set(), []
        for tagged in ([("B", x) for x in B.level(k)] + [("C", x) for x in C.level(k)]):
            r = reps[(k, tagged)]
            if r not in seen:
                seen.add(r)
                out.append(r)
        levels[k] = tuple(out)

    def rule(h):
        dom = B.action_domain_key(h)
        cod = B.action_codomain_key(h)
        act_b, act_c = B.act(h), C.act(h)
        out = {}
        for r in levels[dom]:
            side, x = r
            y = act_b[x] if side == "B" else act_c[x]
            out[r] = reps[(cod, (side, y))]
        return out

    P = TruncatedDiagram(B.category, B.truncation, levels, rule,
                         B.contravariant, "pushout")
    left = DiagramMorphism(B, P, {k: {x: reps[(k, ("B", x))] for x in B.level(k)}
                                  for k in keys})
    right = DiagramMorphism(C, P, {k: {x: reps[(k, ("C", x))] for x in C.level(k)}
                                   for k in keys})
    return PushoutResult(P, left, right)


def pushout(f: DiagramMorphism, g: DiagramMorphism) -> TruncatedDiagram:
    result = pushout_with_injections(f, g)
    report = audit_functoriality(result.diagram)
    if not report.passed:
        raise PreconditionError(
            f"pushout lost functoriality: {report.composition_failures[:1]}")
    return result.diagram


# ---------------------------------------------------------------------------
# map enumeration and isomorphism checking


def _propagate(d1, d2, assignment, key, x, by_domain):
    """Force naturality consequences of one assignment; return new items or None."""
    stack = [(key, x)]
    added = []
    while stack:
        k, e = stack.pop()
        y = assignment[(k, e)]
        for f in by_domain.get(k, ()):
            cod = d1.action_codomain_key(f)
            e2 = d1.apply(f, e)
            y2 = d2.apply(f, y)
            prev = assignment.get((cod, e2))
            if prev is None:
                assignment[(cod, e2)] = y2
                added.append((cod, e2))
                stack.append((cod, e2))
            elif prev != y2:
                return None
    return added


def _injective_per_level(assignment) -> bool:
    seen = set()
    for (k, _x), y in assignment.items():
        if (k, y) in seen:
            return False
        seen.add((k, y))
    return True


def _search_maps(d1, d2, injective: bool, limit: Optional[int]) -> list:
    by_domain = _actions_by_domain(d1)
    todo = [(k, x) for k in d1.level_keys() for x in d1.level(k)]
    solutions = []

    def search(assignment) -> bool:
        if limit is not None and len(solutions) >= limit:
            return True
        pending = next(((k, x) for (k, x) in todo if (k, x) not in assignment), None)
        if pending is None:
            solutions.append(dict(assignment))
            return limit is not None and len(solutions) >= limit
        k, x = pending
        for y in _candidates(d2, k, x):
            assignment[(k, x)] = y
            added = _propagate(d1, d2, assignment, k, x, by_domain)
            if added is not None:
                if not injective or _injective_per_level(assignment):
                    if search(assignment):
                        return True
                for kx in added:
                    del assignment[kx]
            del assignment[(k, x)]
        return False

    search({})
    out = []
    for sol in solutions:
        components = {k: {} for k in d1.level_keys()}
        for (k, x), y in sol.items():
            components[k][x] = y
        out.append(DiagramMorphism(d1, d2, components))
    return out


def enumerate_maps(d1: TruncatedDiagram, d2: TruncatedDiagram,
                   limit: Optional[int] = None) -> list:
    """All diagram morphisms d1 -> d2 (complete backtracking enumeration)."""
    _check_comparable(d1, d2)
    return _search_maps(d1, d2, injective=False, limit=limit)


def _check_comparable(d1, d2):
    if d1.category.name != d2.category.name or d1.contravariant != d2.contravariant:
        raise RankError("diagrams live on different index categories")
    if set(d1.level_keys()) != set(d2.level_keys()):
        raise RankError("diagrams have different truncations")


def _actions_by_domain(d):
    by_domain = {}
    for f in d.morphisms_within():
        by_domain.setdefault(d.action_domain_key(f), []).append(f)
    return by_domain


def _candidates(d2, k, x):
    lvl = d2.level(k)
    if x in d2._level_sets[k]:
        return [x] + [y for y in lvl if y != x]
    return list(lvl)


@dataclass
class IsoResult:
    isomorphic: bool
    witness: Optional[DiagramMorphism]
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def iso_check(d1: TruncatedDiagram, d2: TruncatedDiagram) -> IsoResult:
    """Levelwise bijection commuting with all actions, or a certified failure."""
    _check_comparable(d1, d2)
    for k in d1.level_keys():
        if len(d1.level(k)) != len(d2.level(k)):
            return IsoResult(False, None,
                             f"level {k!r} sizes differ: "
                             f"{len(d1.level(k))} vs {len(d2.level(k))}")
    found = _search_maps(d1, d2, injective=True, limit=1)
    if not found:
        return IsoResult(False, None, "exhaustive search found no natural bijection")
    return IsoResult(True, found[0])


# ---------------------------------------------------------------------------
# fiber powers


def _vertex_maps(category):
    if category is DELTA:
        return category.hom(0, 1)  # values (0,) then (1,)
    if category is IDELTA:
        return tuple(f for f in category.hom(0, 1))[:2]
    raise PreconditionError("fiber powers need a simplicial-shaped category")


def fiber_power(X: TruncatedDiagram, n: int) -> list:
    """The n-fold fiber product of level 1 over level 0 (matching endpoints)."""
    if n < 1:
        raise PreconditionError("fiber power needs n >= 1")
    if 0 not in X.levels or 1 not in X.levels:
        raise RankError("fiber power needs levels 0 and 1")
    v0, v1 = _vertex_maps(X.category)
    src, tgt = X.act(v0), X.act(v1)
    edges = X.level(1)
    out = [(e,) for e in edges]
    for _ in range(n - 1):
        out = [chain + (e,) for chain in out for e in edges
               if tgt[chain[-1]] == src[e]]
    return out


def fiber_power_decorated(X: TruncatedDiagram, decoration: tuple) -> list:
    """Composable edge tuples along a decoration (x_0, ..., x_n)."""
    from .index_categories import DecoratedMap, MonotoneMap, InvMonotoneMap

    base = X.category.base
    n = len(decoration) - 1
    if n < 1:
        raise PreconditionError("need at least one edge slot")
    v0u, v1u = _vertex_maps(base)
    chains = [()]
    for i in range(n):
        x, y = decoration[i], decoration[i + 1]
        key = (1, (x, y))
        edges = X.level(key)
        v0 = DecoratedMap(v0u, (x,), (x, y))
        v1 = DecoratedMap(v1u, (y,), (x, y))
        src, tgt = X.act(v0), X.act(v1)
        new = []
        for chain in chains:
            for e in edges:
                if chain:
                    prev_key = (1, (decoration[i - 1], x))
                    prev_v1 = DecoratedMap(v1u, (x,), (decoration[i - 1], x))
                    if X.apply(prev_v1, chain[-1]) != src[e]:
                        continue
                new.append(chain + (e,))
        chains = new
    return chains


# ---------------------------------------------------------------------------
# nondegeneracy and dumps


def nondegenerate(d: TruncatedDiagram, k: int) -> list:
    """Level-k elements not in the image of any action from a lower level."""
    degenerate = set()
    for j in range(k):
        for f in d.category.hom(k, j):
            act = d.act(f)
            degenerate.update(act.values())
    return [x for x in d.level(k) if x not in degenerate]


def generator_morphisms(d: TruncatedDiagram) -> list:
    """Cofaces, codegeneracies (and flips) within the truncation; all maps otherwise."""
    from .index_categories import (
        DELTA as D, IDELTA as ID, coface, codegeneracy, flip,
    )
    cat = d.category
    if cat is D or cat is ID:
        inv = cat is ID
        out = []
        for n in range(1, d.truncation + 1):
            for i in range(n + 1):
                out.append(coface(i, n, invertible=inv))
        for n in range(d.truncation):
            for i in range(n + 1):
                out.append(codegeneracy(i, n, invertible=inv))
        if inv:
            out.extend(flip(n) for n in range(d.truncation + 1))
        return out
    return d.morphisms_within()


def dump_diagram(d: TruncatedDiagram) -> dict:
    """Diffable JSON form: levels, elements, generator action tables."""
    levels = {str(k): [element_str(x) for x in d.level(k)] for k in d.level_keys()}
    actions = {}
    for f in generator_morphisms(d):
        act = d.act(f)
        dom = d.action_domain_key(f)
        actions[repr(f)] = {element_str(x): element_str(act[x])
                            for x in d.level(dom)}
    return {
        "category": d.category.name,
        "truncation": d.truncation,
        "contravariant": d.contravariant,
        "levels": levels,
        "actions": {k: actions[k] for k in sorted(actions)},
    }
