"""The acceptance suite: every top-level claim checked exhaustively at desk scale.

Each criterion function returns a :class:`CriterionResult`; ``run_all``
drives the whole battery.  The same code backs ``tests/test_acceptance``
and the ``segalcheck sweep`` command, so the shipped binary and the test
suite cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import algebra, filtrations, gamma_bridge, nerve, presheaves, segal_conditions
from .algebra import FinGroup, catalog, indiscrete_groupoid, monoids_isomorphic
from .index_categories import (
    DELTA,
    GAMMA,
    IDELTA,
    MonotoneMap,
    category_laws,
    compose,
    delta_to_gamma,
    dictionary_agreement,
    flip,
    verify_generated_closure,
)
from .presheaves import (
    element_str,
    iso_check,
    nondegenerate,
    reduce_diagram,
    representable,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_json(self):
        return {
            "criterion": self.number,
            "title": self.title,
            "verdict": "pass" if self.passed else "fail",
            "details": {k: str(v) for k, v in sorted(self.details.items())},
            "failures": [str(f) for f in self.failures[:10]],
        }


def criterion_1_category_laws() -> CriterionResult:
    failures = []
    details = {}
    for cat, bound in ((DELTA, 4), (IDELTA, 4), (GAMMA, 3)):
        report = category_laws(cat, bound)
        details[f"{cat.name}_triples"] = report.triples_checked
        if not report.passed:
            failures.extend(report.counterexamples[:3])
    mismatches = dictionary_agreement(3)
    details["dictionary_pairs_ok"] = not mismatches
    failures.extend(mismatches[:3])
    return CriterionResult(1, "category laws and Gamma/pointed dictionary",
                           not failures, details, failures)


def criterion_2_generator_closure() -> CriterionResult:
    report = verify_generated_closure(4, 4)
    details = {
        "pairs_checked": len(report.closure_sizes),
        "witness_excluded": report.witness_excluded,
        "hom_22": report.hom_sizes[(2, 2)],
    }
    return CriterionResult(2, "generator closure equals monotone hom-sets",
                           report.passed, details, report.discrepancies)


def criterion_3_representable_counts() -> CriterionResult:
    failures = []
    amb = representable(IDELTA, 1, 5)
    red = reduce_diagram(amb)
    for j in range(6):
        got, want = len(amb.level(j)), 2 * j + 2
        if got != want:
            failures.append(f"|IDelta[1]|_{j} = {got}, expected {want}")
        got_r, want_r = len(red.level(j)), 2 * j + 1
        if got_r != want_r:
            failures.append(f"|reduce(IDelta[1])|_{j} = {got_r}, expected {want_r}")
    nondeg = nondegenerate(amb, 1)
    if len(nondeg) != 2:
        failures.append(f"nondegenerate 1-simplices: {len(nondeg)}, expected 2")
    return CriterionResult(3, "invertible interval simplex counts",
                           not failures, {"nondegenerate_1": len(nondeg)}, failures)


def criterion_4_segal_on_nerves(n_max: int = 4) -> CriterionResult:
    failures = []
    corpus = catalog("monoids", 6)
    for M in corpus:
        report = segal_conditions.strict_segal_check(nerve.nerve(M, n_max), n_max)
        if not report.passed:
            failures.append(f"{M.name}: {report.witness}")
    return CriterionResult(4, "strict Segal condition on all nerves",
                           not failures, {"corpus_size": len(corpus)}, failures)


def criterion_5_bousfield_iff_group(n_max: int = 4) -> CriterionResult:
    failures = []
    corpus = catalog("monoids", 6)
    groups = 0
    for M in corpus:
        is_group = M.inverse_table() is not None
        groups += is_group
        report = segal_conditions.strict_bousfield_check(nerve.nerve(M, n_max), n_max)
        if report.passed != is_group:
            failures.append(f"{M.name}: passed={report.passed}, group={is_group}")
        if not report.passed and report.witness is None:
            failures.append(f"{M.name}: failure carries no witness")
    return CriterionResult(5, "Bousfield condition passes exactly on groups",
                           not failures,
                           {"corpus_size": len(corpus), "groups": groups}, failures)


def criterion_6_invertible_nerve(n_max: int = 4) -> CriterionResult:
    failures = []
    groups = catalog("groups", 6)
    for G in groups:
        X = nerve.inerve(G, n_max)
        report = segal_conditions.strict_xi_check(X, n_max)
        if not report.passed:
            failures.append(f"xi fails on {G.name}: {report.witness}")
        for k in range(n_max + 1):
            ff = compose(flip(k), flip(k))
            act = X.act(ff)
            if any(act[x] != x for x in X.level(k)):
                failures.append(f"flip o flip != id on {G.name} level {k}")
        act2 = X.act(flip(2))
        for g1 in range(G.order):
            for g2 in range(G.order):
                want = (G.inv(g2), G.inv(g1))
                if act2[(g1, g2)] != want:
                    failures.append(f"flip formula fails on {G.name} at {(g1, g2)}")
    decorated = nerve.inerve(indiscrete_groupoid(("a", "b")), 3)
    report = segal_conditions.strict_xi_check(decorated, 3)
    if not report.passed:
        failures.append(f"xi fails on decorated indiscrete nerve: {report.witness}")
    return CriterionResult(6, "invertible nerve: xi condition and flip laws",
                           not failures,
                           {"groups": [g.name for g in groups],
                            "max_order": max(g.order for g in groups)}, failures)


def _abelian_corpus():
    return catalog("abelian_monoids", 4)


def criterion_7_gamma_roundtrip(N: int = 3) -> CriterionResult:
    failures = []
    corpus = _abelian_corpus()
    for A in corpus:
        X = gamma_bridge.t_construct(A, N)
        extracted = gamma_bridge.extract_monoid(X)
        if not monoids_isomorphic(extracted, A):
            failures.append(f"extract(t({A.name})) is not isomorphic to {A.name}")
        report = gamma_bridge.roundtrip_check(X)
        if not report.passed:
            failures.append(f"roundtrip fails on {A.name}: {report.reason}")
    return CriterionResult(7, "Gamma-space round trip recovers the monoid",
                           not failures, {"corpus_size": len(corpus)}, failures)


def criterion_8_bousfield_gamma_iff_group(N: int = 3) -> CriterionResult:
    failures = []
    corpus = _abelian_corpus()
    for A in corpus:
        is_group = A.inverse_table() is not None
        X = gamma_bridge.t_construct(A, N)
        report = segal_conditions.bousfield_gamma_check(X, N)
        if report.passed != is_group:
            failures.append(f"{A.name}: passed={report.passed}, group={is_group}")
            continue
        if is_group:
            G = gamma_bridge.bousfield_group_extract(X)
            if G.inverse != A.inverse_table():
                failures.append(f"{A.name}: extracted inverses {G.inverse}")
        else:
            try:
                gamma_bridge.bousfield_group_extract(X)
                failures.append(f"{A.name}: extraction was not refused")
            except ExtractionRefused:
                pass
    return CriterionResult(8, "Bousfield Gamma condition passes exactly on groups",
                           not failures, {"corpus_size": len(corpus)}, failures)


def criterion_9_restriction(N: int = 3) -> CriterionResult:
    failures = []
    corpus = _abelian_corpus()
    for A in corpus:
        R = gamma_bridge.restrict_to_simplicial(gamma_bridge.t_construct(A, N))
        NA = nerve.nerve(A, N)
        if any(R.level(k) != NA.level(k) for k in range(N + 1)):
            failures.append(f"{A.name}: restricted levels differ")
            continue
        for f in NA.morphisms_within():
            if R.act(f) != NA.act(f):
                failures.append(f"{A.name}: action of {f!r} differs")
                break
    # functoriality of the window functor itself
    for b in range(4):
        for a in range(4):
            for c in range(4):
                for g in DELTA.hom(a, b):
                    dg = delta_to_gamma(g)
                    for f in DELTA.hom(b, c):
                        lhs = delta_to_gamma(compose(f, g))
                        rhs = compose(delta_to_gamma(f), dg)
                        if lhs != rhs:
                            failures.append(f"delta_to_gamma({f!r} o {g!r})")
    return CriterionResult(9, "restriction along Delta -> Gamma equals the nerve",
                           not failures, {"corpus_size": len(corpus)}, failures)


def criterion_10_filtrations(J: int = 3, K: int = 4) -> CriterionResult:
    failures = []
    details = {}
    stage1 = filtrations.psi_invertible(1, 1, J, K)
    iso = iso_check(stage1.stage.as_diagram("psi1"),
                    reduce_diagram(representable(IDELTA, 1, J)))
    details["psi1_iso_reduced_interval"] = iso.isomorphic
    if not iso.isomorphic:
        failures.append(f"psi1 vs reduce(IDelta[1]): {iso.reason}")
    chain = filtrations.stage_chain_report(filtrations.INVERTIBLE, K, J, K)
    details["invertible_chain"] = chain.chain_ok
    details["invertible_exhausts"] = chain.exhausted_at_word_bound
    if not chain.chain_ok or not chain.exhausted_at_word_bound:
        failures.append(f"invertible chain: {chain.to_json()}")
    bchain = filtrations.stage_chain_report(filtrations.BOUSFIELD, K, J, K)
    details["bousfield_chain"] = bchain.chain_ok
    if not bchain.chain_ok:
        failures.append(f"bousfield chain: {bchain.to_json()}")
    stage2 = filtrations.psi_bousfield(2, J, K)
    level1 = {element_str(x) for x in stage2.level(1)}
    if "(x')" not in level1:
        failures.append(f"psi2 level 1 misses x^-1: {sorted(level1)}")
    level2 = {tuple(filtrations.gamma_exponents(x)) for x in stage2.level(2)}
    wanted = {(0, 0), (0, 1), (1, 1), (1, 0)}
    if not wanted <= level2:
        failures.append(f"psi2 level 2 misses gamma-bars {wanted - level2}")
    details["psi2_level2_gamma_bars"] = sorted(wanted & level2)
    for variant in (filtrations.INVERTIBLE, filtrations.BOUSFIELD):
        for k in range(1, min(J, K)):
            report = filtrations.attachment_compare(variant, k, J, K)
            key = f"attach_{variant}_{k}"
            details[key] = "surjective" if report.surjective else "NOT surjective"
            if not report.well_defined or not report.surjective:
                failures.append(f"{key}: {report.to_json()}")
    return CriterionResult(10, "filtration stages, chains, and attachments",
                           not failures, details, failures)


CRITERIA = [
    criterion_1_category_laws,
    criterion_2_generator_closure,
    criterion_3_representable_counts,
    criterion_4_segal_on_nerves,
    criterion_5_bousfield_iff_group,
    criterion_6_invertible_nerve,
    criterion_7_gamma_roundtrip,
    criterion_8_bousfield_gamma_iff_group,
    criterion_9_restriction,
    criterion_10_filtrations,
]


def run_all() -> list:
    return [fn() for fn in CRITERIA]
