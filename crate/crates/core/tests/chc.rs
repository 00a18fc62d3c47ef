//! Parsing, printing, normalization and disequality splitting against
//! brute-force ground semantics.

use std::collections::BTreeSet;

use hornpair::chc::{
    is_normalized, normalize_clause, parse_clp, parse_surface, system_to_string, Atom, Clause, Head, VarInfo,
};
use hornpair::linear::{Constraint, Sort, Var};
use hornpair_testkit::ground::Instance;
use hornpair_testkit::{bounded_least_model, ground_instances, random_constraint, random_system, same_clause};
use hornpair_testkit::{DenseSystem, SystemShape};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn printed_systems_parse_back_to_the_same_clauses() {
    for seed in 0..300 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = parse_clp(&random_system(&mut rng, SystemShape::default())).unwrap();
        let text = system_to_string(&s);
        let back = parse_clp(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(system_to_string(&back), text, "seed {seed}");
        assert_eq!(back.sigs, s.sigs);
        assert_eq!(back.clauses.len(), s.clauses.len());
        for (a, b) in s.clauses.iter().zip(&back.clauses) {
            assert!(same_clause(a, b, &str::to_string), "seed {seed}: {a} vs {b}");
        }
    }
}

/// A clause over a pool of three variables with repeated and shared
/// arguments.
fn raw_clause(rng: &mut ChaCha8Rng) -> Clause {
    let pool = 3;
    let vars = (0..pool)
        .map(|i| VarInfo {
            name: format!("X{i}"),
            sort: Sort::Int,
        })
        .collect();
    let args = |rng: &mut ChaCha8Rng| -> Vec<Var> {
        let n = rng.gen_range(1..=2);
        (0..n).map(|_| Var(rng.gen_range(0..pool))).collect()
    };
    let head = if rng.gen_bool(0.3) {
        Head::False
    } else {
        Head::Atom(Atom::new("p", args(rng)))
    };
    let body = (0..rng.gen_range(0..=2)).map(|k| Atom::new(format!("q{k}"), args(rng))).collect();
    let natoms = rng.gen_range(0..=3);
    let mut constraint = random_constraint(rng, pool as usize, natoms, false);
    if natoms == 0 {
        constraint = Constraint::truth();
    }
    Clause {
        head,
        constraint,
        body,
        vars,
    }
}

#[test]
fn normalization_preserves_ground_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let c = raw_clause(&mut rng);
        let n = normalize_clause(&c);
        assert!(is_normalized(&n), "{n}");
        assert_eq!(ground_instances(&c, &[], -2, 3), ground_instances(&n, &[], -2, 3), "{c}\n{n}");
        let again = normalize_clause(&n);
        assert_eq!(again.to_string(), n.to_string(), "not idempotent on {c}");
    }
}

/// Adds one or two disequalities between variables of the goal.
fn with_disequalities(rng: &mut ChaCha8Rng, text: &str) -> String {
    let (defs, goal) = text.trim_end().rsplit_once('\n').unwrap();
    let names: BTreeSet<&str> = goal
        .split(|ch: char| !ch.is_ascii_alphanumeric())
        .filter(|t| t.starts_with('X'))
        .collect();
    let names: Vec<&str> = names.into_iter().collect();
    let mut extra = String::new();
    for _ in 0..rng.gen_range(1..=2) {
        let x = names.choose(rng).unwrap();
        let y = names.choose(rng).unwrap();
        if x != y {
            extra.push_str(&format!(", {x} =\\= {y}"));
        } else {
            extra.push_str(&format!(", {x} =\\= {}", rng.gen_range(0..=3)));
        }
    }
    let goal = goal.trim_end_matches('.');
    format!("{defs}\n{goal}{extra}.\n")
}

/// Body instances of the goals whose atoms all hold in the model.
fn violations(goals: &[(Clause, Vec<hornpair::linear::LinExpr>)], model: &hornpair_testkit::bounded::Model) -> BTreeSet<Instance> {
    let mut out = BTreeSet::new();
    for (g, diseqs) in goals {
        for inst in ground_instances(g, diseqs, 0, 3) {
            let holds = g
                .body
                .iter()
                .zip(&inst[1..])
                .all(|(a, t)| model.get(&a.pred).is_some_and(|m| m.contains(t)));
            if holds {
                out.insert(inst);
            }
        }
    }
    out
}

#[test]
fn disequality_splitting_preserves_goal_violations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nonempty = 0;
    for _ in 0..300 {
        let base = random_system(&mut rng, SystemShape::default());
        let text = with_disequalities(&mut rng, &base);
        let surface = parse_surface(&text).unwrap();
        let split = parse_clp(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        let (model, _) = bounded_least_model(&split, 0, 3);
        let before: Vec<_> = surface
            .clauses
            .iter()
            .filter(|c| c.clause.is_goal())
            .map(|c| (c.clause.clone(), c.disequalities.clone()))
            .collect();
        let after: Vec<_> = split.goals().map(|g| (g.clone(), Vec::new())).collect();
        let want = 1 << before[0].1.len();
        assert_eq!(after.len(), want, "{text}");
        let v = violations(&before, &model);
        nonempty += !v.is_empty() as usize;
        assert_eq!(v, violations(&after, &model), "{text}");
    }
    assert!(nonempty > 30, "only {nonempty} inputs violate their goal");
}

fn rationally_satisfiable(c: &Clause) -> bool {
    let vars: Vec<Var> = (0..c.vars.len() as u32).map(Var).collect();
    !DenseSystem::from_constraint(&c.constraint, &vars).is_empty()
}

#[test]
fn constrained_facts_are_the_satisfiable_bodiless_clauses() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut empty, mut nonempty) = (0, 0);
    for _ in 0..500 {
        let mut s = hornpair::chc::ChcSystem::new();
        let arity = rng.gen_range(1..=3);
        s.declare("p", vec![Sort::Int; arity]);
        for _ in 0..rng.gen_range(1..=3) {
            let vars = (0..arity)
                .map(|i| VarInfo {
                    name: format!("X{i}"),
                    sort: Sort::Int,
                })
                .collect();
            let natoms = rng.gen_range(1..=4);
            s.push(&Clause {
                head: Head::Atom(Atom::new("p", (0..arity as u32).map(Var).collect())),
                constraint: random_constraint(&mut rng, arity, natoms, false),
                body: Vec::new(),
                vars,
            });
        }
        let facts: Vec<&Clause> = s.constrained_facts();
        let expected: Vec<&Clause> = s.clauses.iter().filter(|c| rationally_satisfiable(c)).collect();
        assert_eq!(facts, expected);
        // No satisfiable fact means the all-false interpretation is a model.
        let all_false_is_model = s.clauses.iter().all(|c| !c.body.is_empty() || !rationally_satisfiable(c));
        assert_eq!(facts.is_empty(), all_false_is_model);
        if facts.is_empty() {
            empty += 1;
        } else {
            nonempty += 1;
        }
    }
    assert!(empty > 20 && nonempty > 20, "{empty} fact-free, {nonempty} with facts");
}

#[test]
fn generated_systems_have_facts_exactly_when_some_fact_is_satisfiable() {
    for seed in 0..300 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let s = parse_clp(&random_system(&mut rng, SystemShape::default())).unwrap();
        let expected: Vec<&Clause> = s
            .clauses
            .iter()
            .filter(|c| !c.is_goal() && c.body.is_empty() && rationally_satisfiable(c))
            .collect();
        assert_eq!(s.constrained_facts(), expected, "seed {seed}");
    }
}

#[test]
fn spec_parse_examples() {
    let s = parse_clp("p(X) :- true.").unwrap();
    assert_eq!(s.constrained_facts().len(), 1);
    let s = parse_clp(":- pred p(int,int).\n:- pred q(int,int).\np(X,Y) :- X < Y, q(X,Y).").unwrap();
    let c = &s.clauses[0];
    let vars: Vec<Var> = (0..c.vars.len() as u32).map(Var).collect();
    let sys = DenseSystem::from_constraint(&c.constraint, &vars);
    // X − Y ≤ −1 after renaming apart: X − Y is at most −1 and reaches it.
    let x = c.head.atom().unwrap().args[0];
    let y = c.head.atom().unwrap().args[1];
    let obj: Vec<_> = vars
        .iter()
        .map(|v| hornpair::linear::rat(i64::from(*v == x) - i64::from(*v == y)))
        .collect();
    assert_eq!(sys.sup(&obj), Some(Some(hornpair::linear::rat(-1))));
}
