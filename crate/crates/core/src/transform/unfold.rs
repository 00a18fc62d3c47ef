//! Unfolding, clause deletion and equality simplification.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::chc::{normalize_clause, Atom, ChcSystem, Clause, Head};
use crate::linear::{AtomicConstraint, Constraint, Rel, Var};
use crate::lp;

/// Resolves body atom `at` of `c` with every clause of `p` for its
/// predicate. Each result is normalized; an atom without clauses yields no
/// result.
pub fn unfold(c: &Clause, at: usize, p: &ChcSystem) -> Vec<Clause> {
    let pred = &c.body[at].pred;
    p.clauses_for(pred).map(|d| resolve(c, at, d)).collect()
}

fn resolve(c: &Clause, at: usize, d: &Clause) -> Clause {
    let off = c.vars.len() as u32;
    let shift = |v: Var| Var(v.0 + off);
    let mut out = c.clone();
    out.vars.extend(d.vars.iter().cloned());
    let selected = &c.body[at];
    let head = d.head.atom().expect("unfolding uses definite clauses");
    for (a, h) in selected.args.iter().zip(&head.args) {
        out.constraint.push(AtomicConstraint::var_eq(*a, shift(*h)));
    }
    out.constraint.extend(&d.constraint.rename(&shift));
    let inserted: Vec<Atom> = d.body.iter().map(|b| b.rename(&shift)).collect();
    out.body.splice(at..=at, inserted);
    normalize_clause(&out)
}

/// One simultaneous round: every body atom at `positions` (indices into
/// `c.body`) is unfolded once, left to right.
pub fn unfold_positions(c: &Clause, positions: &[usize], p: &ChcSystem) -> Vec<Clause> {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::new();
    cascade(c, &sorted, 0, p, &mut out);
    out
}

/// `shift` is how far atoms after the already-unfolded ones have moved.
fn cascade(c: &Clause, todo: &[usize], shift: isize, p: &ChcSystem, out: &mut Vec<Clause>) {
    let Some((&first, rest)) = todo.split_first() else {
        out.push(c.clone());
        return;
    };
    let at = (first as isize + shift) as usize;
    for d in p.clauses_for(&c.body[at].pred) {
        let r = resolve(c, at, d);
        let grown = d.body.len() as isize - 1;
        cascade(&r, rest, shift + grown, p, out);
    }
}

/// Unfolds every body atom once.
pub fn unfold_all(c: &Clause, p: &ChcSystem) -> Vec<Clause> {
    let all: Vec<usize> = (0..c.body.len()).collect();
    unfold_positions(c, &all, p)
}

/// Keeps the clauses whose constraint is satisfiable over the rationals.
pub fn delete_unsat(cs: Vec<Clause>) -> Vec<Clause> {
    cs.into_iter().filter(|c| lp::is_satisfiable(&c.constraint)).collect()
}

/// Substitutes away `X = Y` equalities where one side occurs only in the
/// constraint, then drops unused variables. The result is normalized and
/// has exactly the same solutions projected on the surviving variables.
pub fn simplify(c: &Clause) -> Clause {
    let in_atoms: BTreeSet<Var> = c
        .head
        .atom()
        .into_iter()
        .chain(c.body.iter())
        .flat_map(|a| a.args.iter().copied())
        .collect();
    // Classes of variables joined by same-sort `X = Y` equalities.
    let mut parent: BTreeMap<Var, Var> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<Var, Var>, x: Var) -> Var {
        let mut r = x;
        while let Some(&p) = parent.get(&r) {
            if p == r {
                break;
            }
            r = p;
        }
        parent.insert(x, r);
        r
    }
    let mut joined = vec![false; c.constraint.atoms().len()];
    for (k, a) in c.constraint.atoms().iter().enumerate() {
        if let Some((x, y)) = simple_equality(a) {
            if c.sort_of(x) == c.sort_of(y) {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent.insert(rx.max(ry), rx.min(ry));
                }
                joined[k] = true;
            }
        }
    }
    if !joined.contains(&true) {
        return compact(c);
    }
    // Each class keeps its smallest atom variable, or its smallest variable
    // when none occurs in an atom; other atom variables stay equal to it.
    let members: Vec<Var> = parent.keys().copied().collect();
    let mut classes: BTreeMap<Var, Vec<Var>> = BTreeMap::new();
    for v in members {
        let r = find(&mut parent, v);
        classes.entry(r).or_default().push(v);
    }
    let mut rep: BTreeMap<Var, Var> = BTreeMap::new();
    let mut out = Constraint::truth();
    for vs in classes.values() {
        let keep = vs.iter().copied().find(|v| in_atoms.contains(v)).unwrap_or(vs[0]);
        for &v in vs {
            if v == keep {
                continue;
            }
            if in_atoms.contains(&v) {
                out.push(AtomicConstraint::var_eq(v, keep));
            } else {
                rep.insert(v, keep);
            }
        }
    }
    let to = |v: Var| *rep.get(&v).unwrap_or(&v);
    for (a, j) in c.constraint.atoms().iter().zip(&joined) {
        if !j {
            out.push(a.rename(&to));
        }
    }
    let mut c = c.clone();
    c.constraint = out;
    compact(&c)
}

fn simple_equality(a: &AtomicConstraint) -> Option<(Var, Var)> {
    if a.rel() != Rel::Eq || !a.bound().is_zero() || a.coeffs().len() != 2 {
        return None;
    }
    let mut it = a.coeffs().iter();
    let (x, cx) = it.next()?;
    let (y, cy) = it.next()?;
    ((cx + cy).is_zero() && (cx.is_one() || cy.is_one())).then_some((*x, *y))
}

/// Renumbers occurring variables densely in head, body, constraint order.
fn compact(c: &Clause) -> Clause {
    let mut map: BTreeMap<Var, Var> = BTreeMap::new();
    let mut order: Vec<Var> = Vec::new();
    let mut visit = |v: Var| {
        if let std::collections::btree_map::Entry::Vacant(e) = map.entry(v) {
            e.insert(Var(order.len() as u32));
            order.push(v);
        }
    };
    if let Some(h) = c.head.atom() {
        h.args.iter().copied().for_each(&mut visit);
    }
    for a in &c.body {
        a.args.iter().copied().for_each(&mut visit);
    }
    for v in c.constraint.vars() {
        visit(v);
    }
    let f = |v: Var| map[&v];
    Clause {
        head: match &c.head {
            Head::False => Head::False,
            Head::Atom(a) => Head::Atom(a.rename(&f)),
        },
        constraint: c.constraint.rename(&f),
        body: c.body.iter().map(|a| a.rename(&f)).collect(),
        vars: order.iter().map(|v| c.vars[v.index()].clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chc::parse_clp;

    #[test]
    fn unfold_single_clause_substitutes() {
        let s = parse_clp("p(X) :- q(X).\nq(Y) :- Y =< 0.").unwrap();
        let c = &s.clauses[0];
        let out = unfold(c, 0, &s);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].to_string(), "p(X) :- X = X_1, X_1 = Y, Y =< 0.");
        assert_eq!(simplify(&out[0]).to_string(), "p(X) :- X =< 0.");
    }

    #[test]
    fn unfold_missing_predicate_is_empty() {
        let s = parse_clp(":- pred q(int).\np(X) :- q(X).").unwrap();
        assert!(unfold(&s.clauses[0], 0, &s).is_empty());
    }

    #[test]
    fn unfold_all_is_product() {
        let s = parse_clp(
            "p(X,Y) :- q(X), r(Y).\nq(X) :- X = 0.\nq(X) :- X = 1.\nr(Y) :- Y = 0.\nr(Y) :- Y = 1.\nr(Y) :- Y = 2.",
        )
        .unwrap();
        let out = unfold_all(&s.clauses[0], &s);
        assert_eq!(out.len(), 6);
        assert!(out.iter().all(|c| c.body.is_empty()));
        let c = parse_clp("p :- true.").unwrap();
        assert_eq!(unfold_all(&c.clauses[0], &c), vec![c.clauses[0].clone()]);
    }

    #[test]
    fn cascade_tracks_shifted_positions() {
        let s = parse_clp("g :- a(X), b(Y).\na(X) :- c(X), c(Z).\nb(Y) :- Y = 1.\nc(X) :- X = 0.").unwrap();
        let out = unfold_all(&s.clauses[0], &s);
        assert_eq!(out.len(), 1);
        let preds: Vec<&str> = out[0].body.iter().map(|a| a.pred.as_str()).collect();
        assert_eq!(preds, ["c", "c"]);
    }

    #[test]
    fn delete_unsat_filters() {
        let s = parse_clp("p(X) :- X =< 0, X >= 1.\np(X) :- true.").unwrap();
        let kept = delete_unsat(s.clauses.clone());
        assert_eq!(kept.len(), 1);
        assert!(kept[0].constraint.is_true());
    }
}
