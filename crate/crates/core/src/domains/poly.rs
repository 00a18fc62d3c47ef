//! Convex polyhedra as constraint lists.
//!
//! A polyhedron is kept in a canonical minimized form: equalities in reduced
//! row-echelon form (pivot on the largest variable), every inequality
//! rewritten over the non-pivot variables, no implicit equalities, no
//! redundant inequalities, everything primitive and sorted.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::linear::{AtomicConstraint, LinExpr, Rat, Rel, Var};
use crate::lp::Region;

/// Largest intermediate system Fourier–Motzkin may produce.
pub const FM_CAP: usize = 2000;

/// Canonical form of the conjunction, or `None` if it is unsatisfiable.
pub fn minimize(cons: &[AtomicConstraint]) -> Option<Vec<AtomicConstraint>> {
    let region = Region::from_atoms(cons, false);
    if region.is_empty() {
        return None;
    }
    let (equal, mut le): (Vec<AtomicConstraint>, Vec<AtomicConstraint>) =
        cons.iter().cloned().partition(|a| a.rel() == Rel::Eq);
    let region = if le.len() > PREFILTER {
        le = prefilter(&equal, le);
        Region::from_atoms(&[equal.clone(), le.clone()].concat(), false)
    } else {
        region
    };
    let mut eqs: Vec<LinExpr> = equal.iter().map(|a| a.as_expr()).collect();
    let mut ineqs: Vec<AtomicConstraint> = Vec::new();
    for a in le {
        let tight = matches!(region.sup_neg(&a.lhs()), Some(Ext::Finite(ref m)) if -m >= *a.bound());
        if tight {
            eqs.push(a.as_expr());
        } else {
            ineqs.push(a);
        }
    }

    let solved = row_echelon(&eqs);
    let reduce = |e: &LinExpr| -> LinExpr {
        let mut out = LinExpr::constant(e.constant_part().clone());
        for (v, c) in e.terms() {
            match solved.get(v) {
                Some(s) => out.add_scaled(s, c),
                None => out.add_term(*v, c.clone()),
            }
        }
        out
    };

    let mut by_lhs: BTreeMap<BTreeMap<Var, Rat>, Rat> = BTreeMap::new();
    for a in &ineqs {
        let r = AtomicConstraint::from_expr(&reduce(&a.as_expr()), Rel::Le).primitive();
        if r.is_ground() {
            continue;
        }
        by_lhs
            .entry(r.coeffs().clone())
            .and_modify(|b| {
                if r.bound() < b {
                    *b = r.bound().clone();
                }
            })
            .or_insert_with(|| r.bound().clone());
    }
    let mut kept: Vec<AtomicConstraint> = by_lhs
        .into_iter()
        .map(|(coeffs, b)| AtomicConstraint::new(coeffs, Rel::Le, b))
        .collect();
    let mut i = 0;
    while i < kept.len() {
        // If some variable can grow along `kept[i]` without any other
        // inequality noticing, the others leave it unbounded.
        let unbounded_dir = kept[i].coeffs().iter().any(|(v, c)| {
            kept.iter()
                .enumerate()
                .all(|(j, b)| j == i || (b.coeff(*v) * c).is_negative() || b.coeff(*v).is_zero())
        });
        if unbounded_dir {
            i += 1;
            continue;
        }
        let others: Vec<AtomicConstraint> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, a)| a.clone())
            .collect();
        if Region::from_atoms(&others, false).entails(&kept[i]) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }

    let mut out: Vec<AtomicConstraint> = solved
        .iter()
        .map(|(pivot, expr)| AtomicConstraint::eq(&LinExpr::var(*pivot), expr).primitive())
        .collect();
    out.extend(kept);
    out.sort();
    Some(out)
}

/// Above this many inequalities `minimize` first drops the ones entailed by
/// a growing kept subset, which keeps the exact passes small.
const PREFILTER: usize = 24;

/// An equivalent subset of `le` given `eqs`: each inequality, simplest
/// first, is kept unless the equalities and the ones kept before it entail it.
fn prefilter(eqs: &[AtomicConstraint], mut le: Vec<AtomicConstraint>) -> Vec<AtomicConstraint> {
    let size = |a: &AtomicConstraint| -> u64 {
        a.coeffs()
            .values()
            .chain(std::iter::once(a.bound()))
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum()
    };
    le.sort_by_cached_key(|a| (size(a), a.clone()));
    let mut kept: Vec<AtomicConstraint> = eqs.to_vec();
    for a in le {
        if kept.len() < 2 || !Region::from_atoms(&kept, false).entails(&a) {
            kept.push(a);
        }
    }
    kept.split_off(eqs.len())
}

/// Reduced row-echelon form of `e = 0` for each `e`: maps each pivot to its
/// value over the remaining variables. Assumes the system is consistent.
fn row_echelon(eqs: &[LinExpr]) -> BTreeMap<Var, LinExpr> {
    let mut solved: BTreeMap<Var, LinExpr> = BTreeMap::new();
    for e in eqs {
        let mut r = LinExpr::constant(e.constant_part().clone());
        for (v, c) in e.terms() {
            match solved.get(v) {
                Some(s) => r.add_scaled(s, c),
                None => r.add_term(*v, c.clone()),
            }
        }
        let Some(pivot) = r.terms().keys().next_back().copied() else {
            continue;
        };
        let k = r.coeff(pivot);
        let mut rest = r.clone();
        rest.add_term(pivot, -k.clone());
        let expr = rest.scaled(&(-Rat::one() / k));
        for other in solved.values_mut() {
            *other = other.substitute(pivot, &expr);
        }
        solved.insert(pivot, expr);
    }
    solved
}

/// Existentially quantifies `elim` away. Returns `Ok(None)` for an empty
/// polyhedron.
pub fn eliminate(cons: &[AtomicConstraint], elim: &BTreeSet<Var>) -> Result<Option<Vec<AtomicConstraint>>> {
    let Some(mut cur) = minimize(cons) else {
        return Ok(None);
    };
    loop {
        let present: BTreeSet<Var> = cur.iter().flat_map(|a| a.vars()).filter(|v| elim.contains(v)).collect();
        if present.is_empty() {
            break;
        }
        // Equalities eliminate a variable without growth.
        let eq = cur
            .iter()
            .position(|a| a.rel() == Rel::Eq && a.vars().any(|v| present.contains(&v)));
        if let Some(k) = eq {
            let a = cur.remove(k);
            let v = a.vars().filter(|v| present.contains(v)).last().unwrap();
            let coef = a.coeff(v);
            let mut rest = a.as_expr();
            rest.add_term(v, -coef.clone());
            let by = rest.scaled(&(-Rat::one() / coef));
            cur = cur
                .iter()
                .map(|b| b.substitute(v, &by).primitive())
                .filter(|b| !b.is_ground())
                .collect();
            continue;
        }
        let v = *present
            .iter()
            .min_by_key(|v| {
                let pos = cur.iter().filter(|a| a.coeff(**v).is_positive()).count();
                let neg = cur.iter().filter(|a| a.coeff(**v).is_negative()).count();
                (pos * neg) as isize - (pos + neg) as isize
            })
            .unwrap();
        cur = fm_step(&cur, v)?;
        if cur.len() > 16 {
            cur = minimize(&cur).expect("projection of a nonempty polyhedron is nonempty");
        }
    }
    Ok(minimize(&cur))
}

/// The constraints connected to `keep` through shared variables. On a
/// nonempty polyhedron the others do not affect the projection onto `keep`.
pub fn linked_to(cons: &[AtomicConstraint], keep: &BTreeSet<Var>) -> Vec<AtomicConstraint> {
    let mut reached = keep.clone();
    let mut taken = vec![false; cons.len()];
    loop {
        let mut grew = false;
        for (a, t) in cons.iter().zip(taken.iter_mut()) {
            if !*t && a.vars().any(|v| reached.contains(&v)) {
                *t = true;
                grew = true;
                reached.extend(a.vars());
            }
        }
        if !grew {
            break;
        }
    }
    cons.iter().zip(&taken).filter(|(_, t)| **t).map(|(a, _)| a.clone()).collect()
}

/// One Fourier–Motzkin step on an equality-free (in `v`) system.
fn fm_step(cons: &[AtomicConstraint], v: Var) -> Result<Vec<AtomicConstraint>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out: BTreeSet<AtomicConstraint> = BTreeSet::new();
    for a in cons {
        let c = a.coeff(v);
        if c.is_positive() {
            pos.push((a, c));
        } else if c.is_negative() {
            neg.push((a, -c));
        } else {
            out.insert(a.clone());
        }
    }
    for (p, cp) in &pos {
        for (n, cn) in &neg {
            let mut e = p.as_expr().scaled(cn);
            e.add_scaled(&n.as_expr(), cp);
            let r = AtomicConstraint::from_expr(&e, Rel::Le).primitive();
            if r.ground_truth() == Some(true) {
                continue;
            }
            out.insert(r);
            if out.len() > FM_CAP {
                return Err(Error::FmBlowup { cap: FM_CAP });
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Does `a` entail every constraint of `b`?
pub fn entails(a: &[AtomicConstraint], b: &[AtomicConstraint]) -> bool {
    let region = Region::from_atoms(a, false);
    b.iter().all(|c| region.entails(c))
}

/// Closed convex hull of two nonempty polyhedra over `dims`.
pub fn hull(a: &[AtomicConstraint], b: &[AtomicConstraint], dims: &[Var]) -> Result<Vec<AtomicConstraint>> {
    if entails(a, b) {
        return Ok(b.to_vec());
    }
    if entails(b, a) {
        return Ok(a.to_vec());
    }
    let base = a
        .iter()
        .chain(b)
        .flat_map(|c| c.vars())
        .chain(dims.iter().copied())
        .map(|v| v.0 + 1)
        .max()
        .unwrap_or(0);
    let lifted: BTreeMap<Var, Var> = dims
        .iter()
        .enumerate()
        .map(|(k, d)| (*d, Var(base + k as u32)))
        .collect();
    let lambda = Var(base + dims.len() as u32);
    let mut sys: Vec<AtomicConstraint> = Vec::new();
    // a over y, scaled by λ
    for c in a {
        let coeffs = c
            .coeffs()
            .iter()
            .map(|(v, k)| (lifted[v], k.clone()))
            .chain(std::iter::once((lambda, -c.bound().clone())));
        sys.push(AtomicConstraint::new(coeffs, c.rel(), Rat::zero()));
    }
    // b over x − y, scaled by 1 − λ
    for c in b {
        let coeffs = c
            .coeffs()
            .iter()
            .flat_map(|(v, k)| [(*v, k.clone()), (lifted[v], -k.clone())])
            .chain(std::iter::once((lambda, c.bound().clone())));
        sys.push(AtomicConstraint::new(coeffs, c.rel(), c.bound().clone()));
    }
    sys.push(AtomicConstraint::new([(lambda, -Rat::one())], Rel::Le, Rat::zero()));
    sys.push(AtomicConstraint::new([(lambda, Rat::one())], Rel::Le, Rat::one()));
    let elim: BTreeSet<Var> = lifted.values().copied().chain(std::iter::once(lambda)).collect();
    Ok(eliminate(&sys, &elim)?.expect("hull of nonempty polyhedra is nonempty"))
}

/// Halves of `a` that `b` entails, minimized. `a` and `b` nonempty.
pub fn widen(a: &[AtomicConstraint], b: &[AtomicConstraint]) -> Vec<AtomicConstraint> {
    let region = Region::from_atoms(b, false);
    let kept: Vec<AtomicConstraint> = a
        .iter()
        .flat_map(|c| c.halves())
        .filter(|h| region.entails(h))
        .collect();
    minimize(&kept).expect("weakening of a nonempty polyhedron is nonempty")
}
