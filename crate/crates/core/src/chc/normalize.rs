//! Clause normalization: every atom (head included) gets distinct variables
//! and atoms are pairwise variable-disjoint; identifications become
//! equalities in the constraint.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::chc::clause::{Atom, Clause, Head, VarInfo};
use crate::linear::{AtomicConstraint, Constraint, Sort, Var};

pub fn normalize_clause(c: &Clause) -> Clause {
    let mut out = Clause {
        head: Head::False,
        constraint: Constraint::truth(),
        body: Vec::new(),
        vars: Vec::new(),
    };
    // original var -> var of its first occurrence in the output
    let mut first: BTreeMap<Var, Var> = BTreeMap::new();
    let mut equalities = Vec::new();
    let mut names = Names::default();

    let mut fresh_for = |out: &mut Clause, v: Var, first: &mut BTreeMap<Var, Var>| -> Var {
        let info = c.vars.get(v.index()).cloned().unwrap_or(VarInfo {
            name: format!("V{}", v.0),
            sort: Default::default(),
        });
        let nv = names.fresh(out, &info.name, info.sort);
        match first.get(&v) {
            None => {
                first.insert(v, nv);
            }
            Some(&prev) => equalities.push(AtomicConstraint::var_eq(prev, nv)),
        }
        nv
    };

    if let Head::Atom(h) = &c.head {
        let args = h.args.iter().map(|v| fresh_for(&mut out, *v, &mut first)).collect();
        out.head = Head::Atom(Atom::new(h.pred.clone(), args));
    }
    for a in &c.body {
        let args = a.args.iter().map(|v| fresh_for(&mut out, *v, &mut first)).collect();
        out.body.push(Atom::new(a.pred.clone(), args));
    }
    for v in c.constraint.vars() {
        if !first.contains_key(&v) {
            fresh_for(&mut out, v, &mut first);
        }
    }
    let map = |v: Var| first[&v];
    let mut constraint = c.constraint.rename(&map);
    for e in equalities {
        constraint.push(e);
    }
    out.constraint = constraint;
    out
}

/// Same naming as [`Clause::fresh_var`] without rescanning the clause.
#[derive(Default)]
struct Names {
    taken: HashSet<String>,
    next_suffix: HashMap<String, usize>,
}

impl Names {
    fn fresh(&mut self, out: &mut Clause, name: &str, sort: Sort) -> Var {
        let mut candidate = name.to_string();
        if self.taken.contains(&candidate) {
            let k = self.next_suffix.entry(name.to_string()).or_insert(1);
            loop {
                candidate = format!("{name}_{k}");
                *k += 1;
                if !self.taken.contains(&candidate) {
                    break;
                }
            }
        }
        self.taken.insert(candidate.clone());
        let v = Var(out.vars.len() as u32);
        out.vars.push(VarInfo { name: candidate, sort });
        v
    }
}

/// True iff the clause already satisfies the normalization contract.
pub fn is_normalized(c: &Clause) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    c.head
        .atom()
        .into_iter()
        .chain(c.body.iter())
        .flat_map(|a| a.args.iter())
        .all(|v| seen.insert(*v))
}
