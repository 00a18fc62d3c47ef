//! The software-pipelining equivalence problem: constrained pairing over
//! polyhedra reaches a clause set without constrained facts, plain pairing
//! does not.

use std::collections::BTreeMap;

use hornpair::chc::{parse_clp, system_to_string, ChcSystem};
use hornpair::domains::{AbstractValue, DomainTag};
use hornpair::transform::{transform_system, unfold, Outcome, StrategyConfig};
use hornpair_testkit::{derives_false, same_clause};

fn fixture(name: &str) -> ChcSystem {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_clp(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn app(s: &ChcSystem, tag: DomainTag) -> Outcome {
    transform_system(s, &StrategyConfig::app(tag)).unwrap()
}

/// Our predicate name for each expected one, found by the body conjunction.
fn renaming(out: &Outcome) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for d in &out.definitions {
        let key: Vec<&str> = d.key.iter().map(String::as_str).collect();
        let name = match key.as_slice() {
            ["s12", "s22"] => "pp1",
            ["s12", "s23"] => "pp2",
            _ => continue,
        };
        assert!(map.insert(d.pred.clone(), name.to_string()).is_none(), "two definitions for {name}");
    }
    map
}

fn rename_with(map: &BTreeMap<String, String>) -> impl Fn(&str) -> String + '_ {
    move |p| map.get(p).cloned().unwrap_or_else(|| p.to_string())
}

#[test]
fn polyhedra_pairing_matches_the_derivation() {
    let out = app(&fixture("pipelining_f1.clp"), DomainTag::Poly);
    let text = system_to_string(&out.system);
    let map = renaming(&out);
    let rename = rename_with(&map);

    let defs = fixture("expected/pipelining_definitions.clp");
    for want in &defs.clauses {
        let found = out.definitions.iter().filter(|d| same_clause(&d.clause, want, &rename)).count();
        assert_eq!(found, 1, "definition {want} not introduced\n{text}");
    }
    let path = format!("{}/../../fixtures/expected/pipelining_definitions.clp", env!("CARGO_MANIFEST_DIR"));
    let weaker = std::fs::read_to_string(path).unwrap().replace("K = A+C", "K =< A+C");
    for other in &parse_clp(&weaker).unwrap().clauses[1..] {
        assert!(!out.definitions.iter().any(|d| same_clause(&d.clause, other, &rename)));
    }

    let expected = fixture("expected/pipelining_clauses.clp");
    assert_eq!(out.system.clauses.len(), 3, "{text}");
    for want in &expected.clauses {
        let found = out.system.clauses.iter().filter(|c| same_clause(c, want, &rename)).count();
        assert_eq!(found, 1, "clause {want} missing\n{text}");
    }
    let preds: Vec<&String> = out.system.sigs.keys().collect();
    assert_eq!(preds.len(), 2, "{text}");
    assert!(out.system.constrained_facts().is_empty(), "{text}");
}

#[test]
fn both_goals_pair_to_a_fact_free_system() {
    let s = fixture("pipelining_f1f2.clp");
    assert_eq!(s.goals().count(), 2);
    let out = app(&s, DomainTag::Poly);
    let text = system_to_string(&out.system);
    assert_eq!(out.system.goals().count(), 2, "{text}");
    assert!(out.system.constrained_facts().is_empty(), "{text}");
}

#[test]
fn unconstrained_pairing_keeps_constrained_facts() {
    for name in ["pipelining_f1.clp", "pipelining_f1f2.clp"] {
        let out = app(&fixture(name), DomainTag::Universe);
        assert!(!out.system.constrained_facts().is_empty(), "{name}");
        for d in &out.definitions {
            assert!(d.clause.constraint.is_true(), "{}", d.clause);
        }
    }
}

#[test]
fn template_domains_lose_the_three_variable_relation() {
    // Only polyhedra keep K = A + C, which refutes the exit combination.
    for tag in [DomainTag::Box, DomainTag::Bds, DomainTag::Oct] {
        let out = app(&fixture("pipelining_f1.clp"), tag);
        assert!(!out.system.constrained_facts().is_empty(), "{tag}");
    }
}

#[test]
fn input_clause_count_is_nine() {
    let s = fixture("pipelining_f1.clp");
    assert_eq!(s.clauses.len(), 9);
    assert_eq!(fixture("pipelining_f1f2.clp").clauses.len(), 10);
}

#[test]
fn unfolding_the_goal_reaches_the_loop_predicate() {
    let s = fixture("pipelining_f1.clp");
    let goal = s.goals().next().unwrap();
    let s11 = goal.body.iter().position(|a| a.pred == "s11").unwrap();
    let out = unfold(goal, s11, &s);
    assert_eq!(out.len(), 1);
    let mut preds: Vec<&str> = out[0].body.iter().map(|a| a.pred.as_str()).collect();
    preds.sort();
    assert_eq!(preds, ["s12", "s21"]);
}

#[test]
fn fixture_outcomes_hold_in_the_bounded_model() {
    // Both programs compute the same x, so no bounded run refutes the goal.
    let s = fixture("pipelining_f1f2.clp");
    assert!(!derives_false(&s, 0, 3));
    let out = app(&s, DomainTag::Poly);
    assert!(!derives_false(&out.system, 0, 3));
}

#[test]
fn definition_values_are_closed_under_alpha() {
    for tag in DomainTag::ALL {
        for d in app(&fixture("pipelining_f1f2.clp"), tag).definitions {
            let again = AbstractValue::alpha(tag, &d.value.to_constraint(), d.value.dims()).unwrap();
            assert!(again.equivalent(&d.value).unwrap(), "{tag}: {}", d.clause);
        }
    }
}
