//! Structural invariants of strategy runs on generated systems, plus the
//! worked operation examples.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use hornpair::chc::{parse_clp, system_to_string, ChcSystem};
use hornpair::domains::{AbstractValue, DomainTag};
use hornpair::linear::Var;
use hornpair::lp;
use hornpair::transform::{delete_unsat, run_strategy, transform_system, unfold, Definition, Outcome, StrategyConfig};
use hornpair::Error;
use hornpair_testkit::{random_system, SystemShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn configs(tag: DomainTag) -> [StrategyConfig; 2] {
    [StrategyConfig::asp(tag), StrategyConfig::app(tag)]
}

/// Every fold is justified: the clause constraint entails the folded
/// definition's constraint on the atom's arguments.
fn check_folds(out: &Outcome, defs: &BTreeMap<&str, &Definition>) {
    for c in &out.system.clauses {
        for a in &c.body {
            let Some(d) = defs.get(a.pred.as_str()) else { continue };
            let dims = d.value.dims();
            let at: BTreeMap<Var, Var> = dims.iter().copied().zip(a.args.iter().copied()).collect();
            let e = d.value.to_constraint().rename(&|v| at[&v]);
            assert!(lp::entails(&c.constraint, &e), "{c} does not entail the constraint of {}", d.clause);
        }
    }
}

/// Every predicate is an input predicate or a definition with clauses.
fn check_no_dangling(input: &ChcSystem, out: &Outcome, defs: &BTreeMap<&str, &Definition>) {
    let heads: BTreeSet<&str> = out.system.clauses.iter().filter_map(|c| c.head.pred()).collect();
    for c in &out.system.clauses {
        for p in c.head.pred().into_iter().chain(c.body.iter().map(|a| a.pred.as_str())) {
            assert!(out.system.sigs.contains_key(p), "{p} undeclared");
            if input.sigs.contains_key(p) {
                continue;
            }
            assert!(defs.contains_key(p), "{p} is neither input nor defined");
            assert!(heads.contains(p), "{p} has no clauses");
        }
    }
}

#[test]
fn strategy_outputs_satisfy_the_structural_invariants() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(30_000 + seed);
        let s = parse_clp(&random_system(&mut rng, SystemShape::default())).unwrap();
        for tag in DomainTag::ALL {
            for cfg in configs(tag) {
                let out = transform_system(&s, &cfg).unwrap();
                let again = transform_system(&s, &cfg).unwrap();
                let text = system_to_string(&out.system);
                assert_eq!(text, system_to_string(&again.system), "seed {seed}: nondeterministic");

                let defs: BTreeMap<&str, &Definition> = out.definitions.iter().map(|d| (d.pred.as_str(), d)).collect();
                for d in &out.definitions {
                    assert!(d.clause.body.len() <= cfg.partition.bound(), "{}", d.clause);
                    assert!(!s.sigs.contains_key(&d.pred));
                    assert_eq!(d.value.tag(), tag);
                    let again = AbstractValue::alpha(tag, &d.value.to_constraint(), d.value.dims()).unwrap();
                    let same = again.equivalent(&d.value).unwrap() && again.to_constraint() == d.value.to_constraint();
                    assert!(same, "seed {seed}: {} is not a {tag} value", d.clause);
                    if tag == DomainTag::Universe {
                        assert!(d.clause.constraint.is_true(), "{}", d.clause);
                    }
                }
                check_folds(&out, &defs);
                check_no_dangling(&s, &out, &defs);
                for g in out.system.goals() {
                    for a in &g.body {
                        assert!(defs.contains_key(a.pred.as_str()), "goal uses input predicate {}", a.pred);
                    }
                }
            }
        }
    }
}

#[test]
fn specialization_definitions_have_one_atom() {
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + seed);
        let shape = SystemShape {
            max_body: 3,
            ..SystemShape::default()
        };
        let s = parse_clp(&random_system(&mut rng, shape)).unwrap();
        for tag in DomainTag::ALL {
            let out = transform_system(&s, &StrategyConfig::asp(tag)).unwrap();
            for d in &out.definitions {
                assert_eq!(d.clause.body.len(), 1, "{}", d.clause);
            }
        }
    }
}

const COUNTER: &str = "
:- pred q(int).
:- pred w(int).
false :- X >= 0, X =< 1, w(X).
w(X) :- q(X).
q(X) :- X =< Y, Y =< X + 1, q(Y).
q(X) :- X >= 5.
";

#[test]
fn repeated_conjunction_on_a_path_is_widened() {
    let s = parse_clp(COUNTER).unwrap();
    let out = transform_system(&s, &StrategyConfig::asp(DomainTag::Box)).unwrap();
    assert_eq!(out.definitions.len(), 2, "{}", system_to_string(&out.system));
    assert_eq!(out.widened, 1);
    let x = [Var(0)];
    let first = parse_clp(":- pred t(int).\nt(X) :- X >= 0, X =< 1.").unwrap();
    let want0 = AbstractValue::alpha(DomainTag::Box, &first.clauses[0].constraint, &x).unwrap();
    let second = parse_clp(":- pred t(int).\nt(X) :- X >= 0.").unwrap();
    let want1 = AbstractValue::alpha(DomainTag::Box, &second.clauses[0].constraint, &x).unwrap();
    assert!(out.definitions[0].value.equivalent(&want0).unwrap());
    assert!(out.definitions[1].value.equivalent(&want1).unwrap());
}

#[test]
fn refolding_introduces_nothing_new() {
    let s = parse_clp(COUNTER).unwrap();
    let out = transform_system(&s, &StrategyConfig::asp(DomainTag::Box)).unwrap();
    // The widened definition folds its own unfolding: one recursive clause.
    let last = &out.definitions[1].pred;
    let recursive = out
        .system
        .clauses_for(last)
        .filter(|c| c.body.iter().any(|a| &a.pred == last))
        .count();
    assert_eq!(recursive, 1);
}

#[test]
fn goal_predicate_must_be_new() {
    let s = parse_clp(":- pred p(int).\np(X) :- X =< 0.\np(X) :- p(X).").unwrap();
    let goal = s.clauses[0].clone();
    let err = run_strategy(&s, &[goal], &StrategyConfig::asp(DomainTag::Poly)).unwrap_err();
    assert_eq!(err, Error::GoalPredicateInProgram("p".into()));
}

#[test]
fn zero_timeout_aborts() {
    let s = parse_clp(COUNTER).unwrap();
    let mut cfg = StrategyConfig::app(DomainTag::Poly);
    cfg.timeout = Some(Duration::ZERO);
    assert!(matches!(transform_system(&s, &cfg), Err(Error::Timeout(_))));
}

#[test]
fn definition_cap_is_enforced() {
    let s = parse_clp(COUNTER).unwrap();
    let mut cfg = StrategyConfig::asp(DomainTag::Box);
    cfg.max_definitions = Some(1);
    assert_eq!(transform_system(&s, &cfg).unwrap_err(), Error::DefinitionLimit(1));
}

#[test]
fn unfolding_substitutes_the_single_clause() {
    let s = parse_clp(":- pred p(int).\n:- pred q(int).\np(X) :- q(X).\nq(Y) :- Y =< 0.").unwrap();
    let out = unfold(&s.clauses[0], 0, &s);
    assert_eq!(out.len(), 1);
    assert!(out[0].body.is_empty());
    let head = out[0].head.atom().unwrap().args[0];
    let got = AbstractValue::abstract_onto(DomainTag::Poly, &out[0].constraint, &[head]).unwrap();
    let want = parse_clp(":- pred t(int).\nt(X) :- X =< 0.").unwrap();
    let want = AbstractValue::alpha(DomainTag::Poly, &want.clauses[0].constraint, &[Var(0)]).unwrap();
    assert!(got.rename(&[Var(0)]).unwrap().equivalent(&want).unwrap());
}

#[test]
fn contradictory_exit_and_entry_are_deleted() {
    let s = parse_clp(
        ":- pred r(int,int).\nr(A,B) :- A >= B, A =< B - 1.\nr(A,B) :- A >= B.\nr(A,B) :- true.",
    )
    .unwrap();
    let kept = delete_unsat(s.clauses.clone());
    assert_eq!(kept.len(), 2);
}
