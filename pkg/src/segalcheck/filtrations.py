"""Word-length filtrations of free nerves and their pushout attachments.

The invertible variant filters Inerve(F_n) by total word length; those
stages are already closed under every face, degeneracy, and flip (length
never grows), which the constructor asserts.

The initial-segment (Bousfield) variant filters nerve(F_1) by the bounds
on the initial-segment exponents together with the length budget.  The
raw membership set is not face-closed (stage two admits a 2-simplex
whose first face is x^-1 before x^-1 itself qualifies), so stages are
defined as the smallest action-closed selection containing the raw set;
whatever closure adds is recorded on the stage.

``attachment_compare`` rebuilds a stage from the previous one by gluing
(copies of) reduced simplices along spine maps or characteristic-map
preimages, then compares the levelwise pushout against the directly
enumerated stage, reporting the comparison instead of asserting it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError, WordBoundError
from .index_categories import DELTA, IDELTA
from .nerve import inerve_free, nerve_free, total_length
from .presheaves import (
    BASEPOINT,
    DiagramMorphism,
    SubDiagram,
    TruncatedDiagram,
    audit_functoriality,
    close_selection,
    coproduct,
    element_str,
    enumerate_maps,
    pushout_with_injections,
    reduce_diagram,
    representable,
    spine,
)

INVERTIBLE = "invertible"
BOUSFIELD = "bousfield"


@dataclass
class FiltrationStage:
    variant: str
    generators: int
    k: int
    level_bound: int
    word_bound: int
    ambient: TruncatedDiagram
    stage: SubDiagram
    raw: dict
    closure_added: dict = field(default_factory=dict)

    def level(self, j):
        return self.stage.level(j)

    def contains(self, j, x):
        return self.stage.contains(j, x)

    def dump(self) -> dict:
        return {str(j): [element_str(x) for x in self.level(j)]
                for j in self.ambient.level_keys()}


def _check_bounds(k, J, K):
    if k > K:
        raise WordBoundError(f"stage index {k} exceeds word bound {K}")
    if J < 2:
        raise PreconditionError("level truncation must be at least 2")


def _word_exponent(w) -> int:
    return sum(s for _, s in w.letters)


def gamma_exponents(element) -> tuple:
    """Initial-segment exponents of a tuple of words over one generator."""
    out = []
    acc = 0
    for w in element:
        acc += _word_exponent(w)
        out.append(acc)
    return tuple(out)


def _bousfield_bounds(k: int) -> tuple:
    if k <= 2:
        return (0, 1)
    if k == 3:
        return (-1, 1)
    return (-k + 1, k - 2)


def _invertible_raw(ambient, k):
    return {j: frozenset(x for x in ambient.level(j) if total_length(x) <= k)
            for j in ambient.level_keys()}


def _bousfield_raw(ambient, k):
    lo, hi = _bousfield_bounds(k)
    out = {}
    for j in ambient.level_keys():
        members = []
        for x in ambient.level(j):
            if total_length(x) > k:
                continue
            if all(lo <= e <= hi for e in gamma_exponents(x)):
                members.append(x)
        out[j] = frozenset(members)
    return out


def _stage(ambient, variant, n, k, J, K) -> FiltrationStage:
    if variant == INVERTIBLE:
        raw = _invertible_raw(ambient, k)
        closed, added = close_selection(ambient, raw)
        # length only ever shrinks under the actions, so closure adds nothing
        assert not added, f"invertible stage {k} was not closed: {added}"
    elif variant == BOUSFIELD:
        raw = _bousfield_raw(ambient, k)
        closed, added = close_selection(ambient, raw)
    else:
        raise PreconditionError(f"unknown filtration variant {variant!r}")
    return FiltrationStage(variant, n, k, J, K, ambient,
                           SubDiagram(ambient, closed), raw, added)


def psi_invertible(n: int, k: int, J: int = 3, K: int = 4) -> FiltrationStage:
    """Stage k of the length filtration of the reduced invertible free nerve."""
    _check_bounds(k, J, K)
    return _stage(inerve_free(n, J, K), INVERTIBLE, n, k, J, K)


def psi_bousfield(k: int, J: int = 3, K: int = 4) -> FiltrationStage:
    """Stage k of the initial-segment filtration of nerve(F_1)."""
    _check_bounds(k, J, K)
    return _stage(nerve_free(1, J, K), BOUSFIELD, 1, k, J, K)


# ---------------------------------------------------------------------------
# chains


@dataclass
class ChainReport:
    variant: str
    k_max: int
    level_bound: int
    word_bound: int
    chain_ok: bool
    chain_failures: list
    exhaustion_k: dict  # level -> smallest k exhausting it, or None
    exhausted_at_word_bound: bool
    closure_added_stages: list

    def to_json(self):
        return {
            "variant": self.variant,
            "k_max": self.k_max,
            "chain": "pass" if self.chain_ok else "fail",
            "chain_failures": self.chain_failures,
            "exhaustion_k": {str(k): v for k, v in self.exhaustion_k.items()},
            "exhausted_at_word_bound": self.exhausted_at_word_bound,
            "stages_with_closure_additions": self.closure_added_stages,
        }


def stage_chain_report(variant: str, k_max: int, J: int = 3, K: int = 4,
                       n: int = 1) -> ChainReport:
    """Verify the stage inclusions and record where the stages exhaust the nerve."""
    if k_max > K:
        raise WordBoundError(f"k_max {k_max} exceeds word bound {K}")
    ambient = inerve_free(n, J, K) if variant == INVERTIBLE else nerve_free(1, J, K)
    stages = [_stage(ambient, variant, n, k, J, K) for k in range(k_max + 1)]
    failures = []
    for k in range(k_max):
        lower, upper = stages[k], stages[k + 1]
        for j in ambient.level_keys():
            extra = lower.stage.selected[j] - upper.stage.selected[j]
            if extra:
                failures.append({"k": k, "level": j,
                                 "element": element_str(sorted(
                                     extra, key=element_str)[0])})
    exhaustion = {}
    for j in ambient.level_keys():
        full = frozenset(ambient.level(j))
        found = None
        for stage in stages:
            if stage.stage.selected[j] == full:
                found = stage.k
                break
        exhaustion[j] = found
    exhausted = all(v is not None and v <= K for v in exhaustion.values())
    added = [s.k for s in stages if s.closure_added]
    return ChainReport(variant, k_max, J, K, not failures, failures,
                       exhaustion, exhausted, added)


def psi1_comparison(J: int = 3, K: int = 4) -> dict:
    """Both readings of "stage one coincides with Delta[1]": levelwise and as an iso."""
    from .presheaves import iso_check

    stage = psi_bousfield(1, J, K)
    rep = reduce_diagram(representable(DELTA, 1, J))
    level1 = {element_str(x) for x in stage.level(1)}
    iso = iso_check(stage.stage.as_diagram("psi1"), rep)
    return {
        "level1": sorted(level1),
        "level1_is_point_and_edge": len(stage.level(1)) == 2,
        "isomorphic_to_reduced_interval": iso.isomorphic,
        "closure_added": {str(k): len(v) for k, v in stage.closure_added.items()},
    }


# ---------------------------------------------------------------------------
# attachments


@dataclass
class AttachmentReport:
    variant: str
    k: int
    attaching_count: int
    well_defined: bool
    per_level: list
    notes: dict = field(default_factory=dict)

    @property
    def surjective(self) -> bool:
        return self.well_defined and all(row["surjective"] for row in self.per_level)

    @property
    def isomorphic(self) -> bool:
        return self.surjective and all(row["injective"] for row in self.per_level)

    def to_json(self):
        return {
            "variant": self.variant,
            "k": self.k,
            "attaching_maps": self.attaching_count,
            "well_defined": self.well_defined,
            "surjective": self.surjective,
            "isomorphic": self.isomorphic,
            "per_level": self.per_level,
            "notes": {key: str(v) for key, v in self.notes.items()},
        }


def _ambient_basepoint(ambient, j):
    """The identity-tuple element of the free nerve at level j."""
    for x in ambient.level(j):
        if total_length(x) == 0:
            return x
    raise PreconditionError(f"no basepoint at level {j}")


def _yoneda_value(ambient, sigma, template_element, j):
    """Image of a reduced-representable element under the map classified by sigma."""
    if template_element is BASEPOINT:
        return _ambient_basepoint(ambient, j)
    return ambient.apply(template_element, sigma)


def _spine_attachments(variant, ambient, stage_k, J):
    """Stage-one data: the reduced spine, all maps into the stage, glued top cells."""
    kind = "IG" if variant == INVERTIBLE else "H"
    partial = spine(kind, 2, J, reduced=True)
    partial_diagram = partial.as_diagram("spine")
    maps = enumerate_maps(partial_diagram, stage_k.stage.as_diagram("stage"))
    template = reduce_diagram(representable(
        IDELTA if variant == INVERTIBLE else DELTA, 2, J))
    copies = []
    from .algebra import word_invert, word_multiply

    for phi in maps:
        comp1 = phi.components[1]
        if variant == INVERTIBLE:
            e01 = next(x for x in partial_diagram.level(1)
                       if x is not BASEPOINT and x.values == (0, 1))
            e12 = next(x for x in partial_diagram.level(1)
                       if x is not BASEPOINT and x.values == (1, 2))
            u, v = comp1[e01], comp1[e12]
            sigma = (u[0], v[0])
        else:
            g0 = next(x for x in partial_diagram.level(1)
                      if x is not BASEPOINT and x.values == (0, 1))
            g1 = next(x for x in partial_diagram.level(1)
                      if x is not BASEPOINT and x.values == (0, 2))
            a, b = comp1[g0], comp1[g1]
            sigma = (a[0], word_multiply(word_invert(a[0]), b[0]))
        copies.append((partial, template, sigma))
    return copies


def _characteristic_attachments(ambient, stage_k, stage_k1, k, J, variant):
    """Higher-stage data: one copy per new top simplex, glued along its preimage."""
    category = IDELTA if variant == INVERTIBLE else DELTA
    template = reduce_diagram(representable(category, k + 1, J))
    new_tops = [x for x in stage_k1.level(k + 1) if not stage_k.contains(k + 1, x)]
    copies = []
    for sigma in new_tops:
        selected = {}
        for j in template.level_keys():
            keep = {BASEPOINT}
            for f in template.level(j):
                if f is BASEPOINT:
                    continue
                if stage_k.contains(j, ambient.apply(f, sigma)):
                    keep.add(f)
            selected[j] = frozenset(keep)
        copies.append((SubDiagram(template, selected), template, sigma))
    return copies


def attachment_compare(variant: str, k: int, J: int = 3, K: int = 4,
                       max_attachments: int | None = None) -> AttachmentReport:
    """Glue simplices onto stage k and compare the pushout with stage k+1.

    Reports (never asserts) whether the canonical comparison map is
    surjective or an isomorphism per level; extra identifications are the
    difference between the pushout size and the image size.
    """
    if k < 1:
        raise PreconditionError("attachments start at k = 1")
    _check_bounds(k + 1, J, K)
    if k + 1 > J:
        raise PreconditionError(
            f"attachment at k={k} needs level truncation >= {k + 1}")
    ambient = inerve_free(1, J, K) if variant == INVERTIBLE else nerve_free(1, J, K)
    stage_k = _stage(ambient, variant, 1, k, J, K)
    stage_k1 = _stage(ambient, variant, 1, k + 1, J, K)
    if k == 1:
        copies = _spine_attachments(variant, ambient, stage_k, J)
    else:
        copies = _characteristic_attachments(ambient, stage_k, stage_k1, k, J, variant)
    if max_attachments is not None:
        copies = copies[:max_attachments]

    stage_diag = stage_k.stage.as_diagram("stage")
    if not copies:
        per_level = _compare_levels(
            {j: {x: x for x in stage_diag.level(j)} for j in stage_diag.level_keys()},
            stage_k1)
        return AttachmentReport(variant, k, 0, True, per_level,
                                {"trivial": "empty coproduct, pushout = stage"})

    partial_diagrams = [c[0].as_diagram(f"partial{i}") for i, c in enumerate(copies)]
    template_diagrams = [c[1] for c in copies]
    a_total, _ = coproduct(partial_diagrams, "attach-src")
    b_total, _ = coproduct(template_diagrams, "attach-cells")
    keys = a_total.level_keys()
    f_ab = DiagramMorphism(a_total, b_total, {
        j: {(i, x): (i, x) for (i, x) in a_total.level(j)} for j in keys})
    g_ac = DiagramMorphism(a_total, stage_diag, {
        j: {(i, x): _yoneda_value(ambient, copies[i][2], x, j)
            for (i, x) in a_total.level(j)}
        for j in keys})
    result = pushout_with_injections(f_ab, g_ac)
    P = result.diagram
    audit = audit_functoriality(P) if P.size() <= 400 else None

    # canonical comparison with stage k+1, defined on tagged representatives
    def value(tagged, j):
        side, payload = tagged
        if side == "C":
            return payload
        i, x = payload
        return _yoneda_value(ambient, copies[i][2], x, j)

    well_defined = True
    comparison = {}
    for j in keys:
        comparison[j] = {}
        for side, payload in ([("B", x) for x in b_total.level(j)]
                              + [("C", x) for x in stage_diag.level(j)]):
            rep = (result.left_injection.components[j][payload] if side == "B"
                   else result.right_injection.components[j][payload])
            v = value((side, payload), j)
            prev = comparison[j].get(rep)
            if prev is None:
                comparison[j][rep] = v
            elif prev != v:
                well_defined = False
    per_level = _compare_levels(comparison, stage_k1)
    notes = {"new_top_cells": len(copies)}
    if audit is not None:
        notes["pushout_functorial"] = audit.passed
    return AttachmentReport(variant, k, len(copies), well_defined, per_level, notes)


def _compare_levels(comparison, stage_k1) -> list:
    per_level = []
    for j in sorted(comparison):
        values = list(comparison[j].values())
        target = set(stage_k1.level(j))
        image = set(values)
        per_level.append({
            "level": j,
            "pushout_size": len(comparison[j]),
            "stage_size": len(target),
            "inside_stage": image <= target,
            "surjective": image >= target,
            "injective": len(image) == len(values),
            "extra_identifications": len(values) - len(image),
        })
    return per_level
