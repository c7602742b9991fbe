"""Segal-type comparison maps and their strict (bijectivity) checks.

Each checker builds the comparison map at every level from the stored
diagram actions (never from shortcut formulas), decides bijectivity, and
returns a report carrying a collision or unhit-tuple witness on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import RankError
from .index_categories import (
    DELTA,
    IDELTA,
    GAMMA_OP,
    DecoratedCategory,
    DecoratedMap,
    PointedMap,
    gamma_to_pointed,
    projection_family,
)
from .presheaves import (
    TruncatedDiagram,
    element_str,
    fiber_power,
    fiber_power_decorated,
)


@dataclass
class LevelVerdict:
    level: object
    verdict: str  # "pass" | "fail"
    witness: dict | None = None

    def to_json(self):
        out = {"level": str(self.level), "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = {
                k: (element_str(v) if not isinstance(v, (str, int)) else v)
                for k, v in self.witness.items()
            }
        return out


@dataclass
class ConditionReport:
    condition: str
    n_max: int
    verdicts: list
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.verdict == "pass" for v in self.verdicts)

    @property
    def witness(self):
        for v in self.verdicts:
            if v.witness is not None:
                return v.witness
        return None

    def to_json(self):
        return {
            "condition": self.condition,
            "n_max": self.n_max,
            "verdict": "pass" if self.passed else "fail",
            "levels": [v.to_json() for v in self.verdicts],
            "notes": {k: str(v) for k, v in self.notes.items()},
        }


def _bijectivity_verdict(level, mapping: dict, target: list) -> LevelVerdict:
    """Decide whether mapping (domain elem -> target elem) is a bijection onto target."""
    images = {}
    for x, t in mapping.items():
        if t in images:
            return LevelVerdict(level, "fail", {
                "kind": "collision", "first": images[t], "second": x, "image": t})
        images[t] = x
    target_set = set(target)
    for x, t in mapping.items():
        if t not in target_set:
            return LevelVerdict(level, "fail",
                                {"kind": "outside-target", "element": x, "image": t})
    unhit = [t for t in target if t not in images]
    if unhit:
        return LevelVerdict(level, "fail", {"kind": "unhit", "target": unhit[0]})
    return LevelVerdict(level, "pass")


# ---------------------------------------------------------------------------
# simplicial checks


def segal_tuple(X: TruncatedDiagram, n: int):
    """The comparison map at level n as {simplex: alpha-edge tuple}."""
    edges = projection_family("alpha", n)
    acts = [X.act(e) for e in edges]
    return {x: tuple(a[x] for a in acts) for x in X.level(n)}


def segal_map(X: TruncatedDiagram, n: int):
    if X.truncation < n:
        raise RankError(f"Segal map at n={n} needs truncation >= {n}")
    return segal_tuple(X, n)


def strict_segal_check(X: TruncatedDiagram, n_max: int,
                       require_reduced: bool = False) -> ConditionReport:
    """Bijectivity of the alpha-edge tuple map for 2 <= n <= n_max."""
    if X.truncation < n_max:
        raise RankError(f"truncation {X.truncation} < n_max {n_max}")
    verdicts = [_level0_verdict(X, require_reduced)]
    for n in range(2, n_max + 1):
        verdicts.append(_bijectivity_verdict(n, segal_tuple(X, n), fiber_power(X, n)))
    return ConditionReport("segal", n_max, verdicts,
                           {"diagram": X.name, "level0_size": len(X.level(0))})


def _level0_verdict(X, require_reduced):
    if require_reduced and len(X.level(0)) != 1:
        return LevelVerdict(0, "fail", {"kind": "not-reduced",
                                        "size": len(X.level(0))})
    return LevelVerdict(0, "pass")


def bousfield_tuple(X: TruncatedDiagram, n: int):
    """The comparison map at level n as {simplex: gamma-edge tuple}."""
    edges = projection_family("gamma", n)
    acts = [X.act(e) for e in edges]
    return {x: tuple(a[x] for a in acts) for x in X.level(n)}


def bousfield_segal_map(X: TruncatedDiagram, n: int):
    if X.truncation < n:
        raise RankError(f"Bousfield map at n={n} needs truncation >= {n}")
    return bousfield_tuple(X, n)


def strict_bousfield_check(X: TruncatedDiagram, n_max: int) -> ConditionReport:
    """Bijectivity of the gamma-edge (initial segment) tuple map onto (X_1)^n.

    The plain product target is the reduced form of the condition, so the
    check also requires a single point in level zero.
    """
    if X.truncation < n_max:
        raise RankError(f"truncation {X.truncation} < n_max {n_max}")
    verdicts = [_level0_verdict(X, require_reduced=True)]
    for n in range(2, n_max + 1):
        target = list(product(X.level(1), repeat=n))
        verdicts.append(_bijectivity_verdict(n, bousfield_tuple(X, n), target))
    return ConditionReport("bousfield", n_max, verdicts,
                           {"diagram": X.name, "level0_size": len(X.level(0))})


# ---------------------------------------------------------------------------
# invertible checks


def xi_tuple(X: TruncatedDiagram, n: int):
    edges = projection_family("beta", n)
    acts = [X.act(e) for e in edges]
    return {x: tuple(a[x] for a in acts) for x in X.level(n)}


def xi_map(X: TruncatedDiagram, n: int):
    if X.truncation < n:
        raise RankError(f"xi map at n={n} needs truncation >= {n}")
    return xi_tuple(X, n)


def strict_xi_check(X: TruncatedDiagram, n_max: int,
                    require_reduced: bool = False) -> ConditionReport:
    """The invertible-category Segal condition, over IDelta or its decorated form."""
    if isinstance(X.category, DecoratedCategory):
        return _strict_xi_decorated(X, n_max)
    if X.truncation < n_max:
        raise RankError(f"truncation {X.truncation} < n_max {n_max}")
    verdicts = [_level0_verdict(X, require_reduced)]
    for n in range(2, n_max + 1):
        verdicts.append(_bijectivity_verdict(n, xi_tuple(X, n), fiber_power(X, n)))
    return ConditionReport("xi", n_max, verdicts,
                           {"diagram": X.name, "discrete_level0": True,
                            "level0_size": len(X.level(0))})


def _strict_xi_decorated(X: TruncatedDiagram, n_max: int) -> ConditionReport:
    base = X.category.base
    verdicts = []
    for n in range(2, n_max + 1):
        for key in X.level_keys():
            rank, decoration = key
            if rank != n:
                continue
            edges = [
                DecoratedMap(e, (decoration[k], decoration[k + 1]), decoration)
                for k, e in enumerate(projection_family("beta", n))
            ]
            acts = [X.act(e) for e in edges]
            mapping = {x: tuple(a[x] for a in acts) for x in X.level(key)}
            target = fiber_power_decorated(X, decoration)
            verdicts.append(_bijectivity_verdict(key, mapping, target))
    return ConditionReport("xi", n_max, verdicts,
                           {"diagram": X.name, "decorated": True})


# ---------------------------------------------------------------------------
# Gamma checks (covariant diagrams on pointed maps)


def _pointed_projection_acts(X, n):
    return [X.act(p) for p in projection_family("p", n)]


def gamma_segal_tuple(X: TruncatedDiagram, n: int):
    acts = _pointed_projection_acts(X, n)
    return {x: tuple(a[x] for a in acts) for x in X.level(n)}


def _gamma_level0_verdict(X):
    if len(X.level(0)) != 1:
        return LevelVerdict(0, "fail",
                            {"kind": "not-strict", "size": len(X.level(0))})
    return LevelVerdict(0, "pass")


def gamma_segal_check(X: TruncatedDiagram, n_max: int) -> ConditionReport:
    """Bijectivity of the pointed-projection tuple maps X(n) -> X(1)^n."""
    if X.contravariant or X.category is not GAMMA_OP:
        raise RankError("gamma checks need a covariant diagram on pointed maps")
    if X.truncation < n_max:
        raise RankError(f"truncation {X.truncation} < n_max {n_max}")
    verdicts = [_gamma_level0_verdict(X)]
    for n in range(2, n_max + 1):
        target = list(product(X.level(1), repeat=n))
        verdicts.append(_bijectivity_verdict(n, gamma_segal_tuple(X, n), target))
    return ConditionReport("gamma-segal", n_max, verdicts, {"diagram": X.name})


def bousfield_gamma_tuple(X: TruncatedDiagram, n: int):
    maps = [gamma_to_pointed(j) for j in projection_family("j", n)]
    acts = [X.act(m) for m in maps]
    return {x: tuple(a[x] for a in acts) for x in X.level(n)}


def bousfield_gamma_check(X: TruncatedDiagram, n_max: int) -> ConditionReport:
    """Bijectivity of the initial-segment-sum tuple maps built from the j family."""
    if X.contravariant or X.category is not GAMMA_OP:
        raise RankError("gamma checks need a covariant diagram on pointed maps")
    if X.truncation < n_max:
        raise RankError(f"truncation {X.truncation} < n_max {n_max}")
    verdicts = [_gamma_level0_verdict(X)]
    for n in range(2, n_max + 1):
        target = list(product(X.level(1), repeat=n))
        verdicts.append(_bijectivity_verdict(n, bousfield_gamma_tuple(X, n), target))
    return ConditionReport("gamma-bousfield", n_max, verdicts, {"diagram": X.name})
