"""Entailment rules, obligation checking, refinement, and export."""
from __future__ import annotations

import pytest

from gdol import (
    And,
    ClassAssertion,
    DifferentIndividuals,
    DisjointClasses,
    Domain,
    EquivalentClasses,
    ExpansionEnv,
    Functional,
    InverseProps,
    MapKindMismatch,
    Name,
    Named,
    PropAssertion,
    PropExpr,
    Range,
    RuleEngineConfig,
    SubClassOf,
    SubPropertyChain,
    SubPropertyOf,
    Transitive,
    check_obligations,
    check_refinement,
    entails,
    export_obligations,
    parse_document,
    parse_manchester_fragment,
    run_deep,
)
from gdol.model import union


def N(s: str) -> Named:
    return Named(Name(s))


def P(s: str, inverse: bool = False) -> PropExpr:
    return PropExpr(Name(s), inverse)


def proven(theory_text: str, goal, **cfg) -> bool:
    config = RuleEngineConfig(**cfg) if cfg else RuleEngineConfig()
    return entails(parse_manchester_fragment(theory_text), goal, config).proven


# --- subsumption ----------------------------------------------------------

SUBCLASS_THEORY = "Class: A SubClassOf: B\nClass: B SubClassOf: C\nClass: C\n"


def test_subclass_reachability_is_reflexive_and_transitive():
    assert proven(SUBCLASS_THEORY, SubClassOf(N("A"), N("C")))
    assert proven(SUBCLASS_THEORY, SubClassOf(N("A"), N("A")))
    assert not proven(SUBCLASS_THEORY, SubClassOf(N("C"), N("A")))


def test_equivalence_contributes_edges_both_ways():
    t = "Class: A EquivalentTo: B\nClass: B SubClassOf: C\nClass: C\n"
    assert proven(t, SubClassOf(N("B"), N("A")))
    assert proven(t, SubClassOf(N("A"), N("C")))
    assert proven(t, EquivalentClasses(N("A"), N("B")))
    assert not proven(t, EquivalentClasses(N("A"), N("C")))


def test_intersection_introduction_and_elimination():
    intro = "Class: A SubClassOf: B\nClass: A SubClassOf: C\nClass: B\nClass: C\n"
    assert proven(intro, SubClassOf(N("A"), And((N("B"), N("C")))))
    elim = "Class: A SubClassOf: B and (C)\nClass: B\nClass: C\n"
    assert proven(elim, SubClassOf(N("A"), N("B")))
    assert proven(elim, SubClassOf(N("A"), N("C")))


def test_disjointness_lifts_through_subclasses():
    t = ("Class: C DisjointWith: D\nClass: A SubClassOf: C\n"
         "Class: B SubClassOf: D\n")
    assert proven(t, DisjointClasses(N("A"), N("B")))
    assert proven(t, DisjointClasses(N("B"), N("A")))
    assert not proven(t, DisjointClasses(N("A"), N("C")))


# --- property hierarchy -----------------------------------------------------

PROP_THEORY = ("ObjectProperty: r SubPropertyOf: s\n"
               "ObjectProperty: s SubPropertyOf: t\nObjectProperty: t\n"
               "ObjectProperty: rinv InverseOf: r\n")


def test_subproperty_reachability():
    assert proven(PROP_THEORY, SubPropertyOf(P("r"), P("t")))
    assert not proven(PROP_THEORY, SubPropertyOf(P("t"), P("r")))


def test_inverse_declarations_transfer_the_hierarchy():
    assert proven(PROP_THEORY, SubPropertyOf(P("rinv"), P("s", inverse=True)))
    assert proven(PROP_THEORY, InverseProps(Name("rinv"), Name("r")))
    assert proven(PROP_THEORY, InverseProps(Name("r"), Name("rinv")))


def test_domain_and_range_lift_through_both_hierarchies():
    t = ("ObjectProperty: p Domain: C Range: R\n"
         "ObjectProperty: q SubPropertyOf: p\n"
         "Class: C SubClassOf: D\nClass: D\n"
         "Class: R SubClassOf: S\nClass: S\n"
         "ObjectProperty: pinv InverseOf: p\n")
    assert proven(t, Domain(Name("q"), N("D")))
    assert proven(t, Range(Name("q"), N("S")))
    assert proven(t, Domain(Name("pinv"), N("S")))
    assert proven(t, Range(Name("pinv"), N("D")))
    assert not proven(t, Domain(Name("p"), N("R")))


def test_scoped_axioms_do_not_yield_global_domains():
    t = ("Class: D SubClassOf: p some R and p only R\n"
         "Class: R\nObjectProperty: p\n")
    assert not proven(t, Domain(Name("p"), N("D")))
    assert not proven(t, Range(Name("p"), N("R")))


# --- individuals -------------------------------------------------------------

def test_facts_lift_through_subproperties_and_inverses():
    t = ("Individual: a Facts: r b\nIndividual: b\n"
         "ObjectProperty: r SubPropertyOf: s\nObjectProperty: s\n"
         "ObjectProperty: rinv InverseOf: r\n")
    assert proven(t, PropAssertion(Name("r"), Name("a"), Name("b")))
    assert proven(t, PropAssertion(Name("s"), Name("a"), Name("b")))
    assert proven(t, PropAssertion(Name("rinv"), Name("b"), Name("a")))
    assert not proven(t, PropAssertion(Name("s"), Name("b"), Name("a")))


def test_class_membership_via_enumerations():
    t = ("Class: C EquivalentTo: {a, b}\nClass: C SubClassOf: D\nClass: D\n"
         "Individual: a\nIndividual: b\n")
    assert proven(t, ClassAssertion(N("C"), Name("a")))
    assert proven(t, ClassAssertion(N("D"), Name("b")))
    assert not proven(t, ClassAssertion(N("C"), Name("C")))


def test_functional_lifts_but_transitive_does_not():
    t = ("ObjectProperty: q Characteristics: Functional, Transitive\n"
         "ObjectProperty: p SubPropertyOf: q\n")
    assert proven(t, Functional(Name("p")))
    assert proven(t, Transitive(Name("q")))
    assert not proven(t, Transitive(Name("p")))


def test_chains_match_exactly():
    t = "ObjectProperty: same SubPropertyChain: f o inverse f\nObjectProperty: f\n"
    assert proven(t, SubPropertyChain(Name("same"), (P("f"), P("f", inverse=True))))
    assert not proven(t, SubPropertyChain(Name("same"), (P("f"), P("f"))))


def test_distinctness_holds_for_subsets():
    t = ("Individual: a\nIndividual: b\nIndividual: c\nIndividual: d\n"
         "DifferentIndividuals: a, b, c\n")
    assert proven(t, DifferentIndividuals((Name("a"), Name("c"))))
    assert not proven(t, DifferentIndividuals((Name("a"), Name("d"))))


# --- engine mechanics ---------------------------------------------------------

def test_goals_over_undeclared_names_are_rejected_with_a_diagnostic():
    res = entails(parse_manchester_fragment("Class: A SubClassOf: B\nClass: B\n"),
                  SubClassOf(N("A"), N("Zzz")))
    assert not res.proven
    assert "Zzz" in res.reason
    assert not res.step_limited


def test_step_limit_is_reported():
    res = entails(parse_manchester_fragment(SUBCLASS_THEORY),
                  SubClassOf(N("A"), N("C")),
                  RuleEngineConfig(step_limit=1))
    assert not res.proven
    assert res.step_limited


def test_rules_can_be_disabled_individually():
    others = frozenset({"R2", "R3", "R4", "R5", "R6", "R7"})
    assert not proven(SUBCLASS_THEORY, SubClassOf(N("A"), N("C")), rules=others)
    no_r4 = frozenset({"R1", "R2", "R3", "R5", "R6", "R7"})
    assert not proven(PROP_THEORY, SubPropertyOf(P("r"), P("t")), rules=no_r4)


def test_entailment_is_monotone_under_union(env):
    theory = parse_manchester_fragment(SUBCLASS_THEORY)
    goal = SubClassOf(N("A"), N("C"))
    bigger = union(theory, run_deep(lambda: env.expand_named("Driver_log")))
    assert entails(theory, goal).proven
    assert entails(bigger, goal).proven


# --- obligations over the corpus ---------------------------------------------

FROZEN_ROLES_UNPROVEN = {
    Domain(Name("isDriverRoleOf"), N("Driver")),
    Range(Name("hasLicence"), N("DrivingLicence")),
    Domain(Name("hasLicence"), N("PotentialDriver")),
    Range(Name("hasTemporalExtent"), N("TemporalExtent")),
    Domain(Name("isPotentialDriverRoleOf"), N("PotentialDriver")),
    Range(Name("isPotentialDriverRoleOf"), N("Person")),
}


def test_role_log_obligations_all_fail_without_global_declarations(env):
    obs = run_deep(lambda: env.obligations("Roles_Driver_log"))
    checked = check_obligations(obs)
    assert len(checked) == 6
    assert all(ob.status == "unproven" for ob in checked)
    assert {ob.axiom for ob in checked} == FROZEN_ROLES_UNPROVEN


def test_driver_log_obligations(env):
    checked = check_obligations(run_deep(lambda: env.obligations("Driver_log")))
    assert len(checked) == 47
    unproven = {ob.axiom for ob in checked if ob.status == "unproven"}
    assert unproven == {
        Domain(Name("licencedAs"), N("Person")),
        Range(Name("licencedAs"), N("LicencedPerson")),
        Domain(Name("mightDrive"), N("PotentialDriver")),
        Range(Name("mightDrive"), N("RoadVehicle")),
        Domain(Name("licencedFor"), N("PotentialDriver")),
        Range(Name("licencedFor"), N("RoadVehicle")),
    }
    # table cells produce per-element membership obligations that do prove
    assert ClassAssertion(N("DrivingLicence"), Name("D1LightBus")) in {
        ob.axiom for ob in checked if ob.status == "proven"}


def test_data_log_discharges_everything_including_the_precondition(env):
    checked = check_obligations(run_deep(lambda: env.obligations("Data_Driver_log")))
    assert len(checked) == 11
    assert all(ob.status == "proven" for ob in checked)
    precondition = PropAssertion(Name("licencedFor_le_BMotorVehicle"),
                                 Name("bkb_PotentialDriver"), Name("bkbs_VWBus"))
    assert precondition in {ob.axiom for ob in checked}


def test_ontologies_without_constraints_have_no_obligations(env):
    assert run_deep(lambda: env.obligations("TEMPORAL_Extent_Vehicle_log")) == ()


def test_obligations_reference_their_own_ontology(env):
    obs = run_deep(lambda: env.obligations("Data_Driver_log"))
    assert {ob.ontology for ob in obs} == {"Data_Driver_log"}
    assert {ob.pattern for ob in obs} == {"DATA_Role", "DATA_Driver_Role"}


def test_le_chain_is_derivable_from_the_expanded_log(env):
    driver = run_deep(lambda: env.expand_named("Driver_log"))
    goal = SubPropertyOf(P("licencedFor_le_DBus"), P("licencedFor_BMotorVehicle"))
    assert entails(driver, goal).proven


# --- refinement -------------------------------------------------------------

def test_refinement_chain_holds(corpus_docs, env):
    refs = {}
    for d in corpus_docs:
        refs.update(d.refinement_defs())
    assert len(refs) == 3
    for name, refdef in refs.items():
        report = check_refinement(refdef, env)
        assert report.ok, f"{name}: {report.unproven}"


def test_weakened_target_fails_on_exactly_the_dropped_axiom(corpus_docs):
    weak = parse_document(
        "refinement Weak = TotalRELATION_Scoped[D; p; R]\n"
        "  refined to TotalRELATION_ScopedRange[D; p; R]\n")
    env = ExpansionEnv.from_documents(list(corpus_docs) + [weak])
    report = check_refinement(weak.refinement_defs()["Weak"], env)
    assert len(report.results) == 2
    assert len(report.unproven) == 1
    assert isinstance(report.unproven[0], EquivalentClasses)


def test_symbol_maps_must_preserve_kinds(corpus_docs):
    bad = parse_document(
        "refinement M = CLOSED_Scope[Class: D; Class: R; ObjectProperty: p]\n"
        "  refined to CLOSED_Scope[Class: D2; Class: R2; ObjectProperty: p2]\n"
        "  with D |-> p2\n")
    env = ExpansionEnv.from_documents(list(corpus_docs) + [bad])
    with pytest.raises(MapKindMismatch):
        check_refinement(bad.refinement_defs()["M"], env)


def test_symbol_maps_rename_the_source(corpus_docs):
    ref = parse_document(
        "refinement R = CLOSED_Scope[Class: D; Class: R; ObjectProperty: p]\n"
        "  refined to CLOSED_Scope[Class: D2; Class: R2; ObjectProperty: p2]\n"
        "  with D |-> D2, R |-> R2, p |-> p2\n")
    env = ExpansionEnv.from_documents(list(corpus_docs) + [ref])
    report = check_refinement(ref.refinement_defs()["R"], env)
    assert report.ok


# --- export -------------------------------------------------------------------

def test_export_writes_one_file_per_obligation(env, tmp_path):
    checked = check_obligations(run_deep(lambda: env.obligations("Data_Driver_log")))
    paths = export_obligations(checked, tmp_path)
    assert len(paths) == 11
    assert len({p.name for p in paths}) == 11
    names = {p.name for p in paths}
    assert "Data_Driver_log__DATA_Role__performs__0.omn" in names
    assert "Data_Driver_log__DATA_Role__performs__1.omn" in names
    body = (tmp_path / "Data_Driver_log__DATA_Role__performs__0.omn").read_text()
    assert "%% goal:" in body and "%% from: Data_Driver_log :: DATA_Role/performs#0" in body
    # the context theory is embedded in full
    assert "ObjectProperty: licencedAs" in body
