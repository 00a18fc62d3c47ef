//! Exact rational linear programming.
//!
//! Equalities are eliminated by Gaussian substitution first; the remaining
//! inequalities over free variables go through a dense two-phase simplex
//! with Bland's rule, so every run is deterministic and cycle-free. A
//! [`Region`] keeps the feasible tableau after phase 1 and answers any
//! number of objectives against it.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use simplex::{AnyTableau, Overflow, Tableau};

use crate::ext::Ext;
use crate::linear::{AtomicConstraint, Constraint, LinExpr, Rat, Rel, Var};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    pub constraints: Constraint,
    pub objective: LinExpr,
    pub sense: Sense,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LpOutcome {
    Optimum(Rat),
    Unbounded,
    Infeasible,
}

pub fn lp_solve(p: &LpProblem) -> LpOutcome {
    let region = Region::new(&p.constraints);
    if region.is_empty() {
        return LpOutcome::Infeasible;
    }
    let objective = match p.sense {
        Sense::Max => p.objective.clone(),
        Sense::Min => p.objective.scaled(&-Rat::one()),
    };
    match region.sup(&objective) {
        Some(Ext::Inf) => LpOutcome::Unbounded,
        Some(Ext::Finite(v)) => LpOutcome::Optimum(match p.sense {
            Sense::Max => v,
            Sense::Min => -v,
        }),
        None => LpOutcome::Infeasible,
    }
}

/// A convex polyhedron prepared for repeated optimization.
#[derive(Clone, Debug)]
pub struct Region {
    /// Eliminated variables, each expressed over the free columns.
    solved: BTreeMap<Var, LinExpr>,
    /// Free variables, one simplex column pair each.
    columns: Vec<Var>,
    /// Inequality rows over `columns`, kept for exact re-solving.
    rows: Vec<(LinExpr, Rat)>,
    tableau: Option<AnyTableau>,
}

impl Region {
    pub fn new(c: &Constraint) -> Region {
        Self::from_atoms(c.atoms(), c.is_false_literal())
    }

    pub fn from_atoms(atoms: &[AtomicConstraint], falsum: bool) -> Region {
        let mut region = Region {
            solved: BTreeMap::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            tableau: None,
        };
        if falsum {
            return region;
        }
        // Gaussian elimination of equalities.
        for a in atoms.iter().filter(|a| a.rel() == Rel::Eq) {
            let e = region.reduce(&a.as_expr());
            match e.terms().keys().next_back().copied() {
                None => {
                    if !e.constant_part().is_zero() {
                        return region;
                    }
                }
                Some(pivot) => {
                    let k = e.coeff(pivot);
                    let mut rest = e.clone();
                    rest.add_term(pivot, -k.clone());
                    let expr = rest.scaled(&(-Rat::one() / k));
                    for other in region.solved.values_mut() {
                        *other = other.substitute(pivot, &expr);
                    }
                    region.solved.insert(pivot, expr);
                }
            }
        }
        let mut rows: Vec<(LinExpr, Rat)> = Vec::new();
        for a in atoms.iter().filter(|a| a.rel() == Rel::Le) {
            let e = region.reduce(&a.as_expr());
            if e.is_constant() {
                if e.constant_part().is_positive() {
                    return region;
                }
                continue;
            }
            let bound = -e.constant_part().clone();
            let lhs = LinExpr::from_terms(e.terms().clone(), Rat::zero());
            rows.push((lhs, bound));
        }
        let mut cols: Vec<Var> = rows.iter().flat_map(|(e, _)| e.vars()).collect();
        cols.sort();
        cols.dedup();
        region.columns = cols;
        region.tableau = AnyTableau::feasible(&rows, &region.columns);
        region.rows = rows;
        region
    }

    fn reduce(&self, e: &LinExpr) -> LinExpr {
        let mut out = LinExpr::constant(e.constant_part().clone());
        for (v, c) in e.terms() {
            match self.solved.get(v) {
                Some(s) => out.add_scaled(s, c),
                None => out.add_term(*v, c.clone()),
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.tableau.is_none()
    }

    /// Supremum of `e` over the region; `None` when the region is empty.
    pub fn sup(&self, e: &LinExpr) -> Option<Ext> {
        let tab = self.tableau.as_ref()?;
        let reduced = self.reduce(e);
        let mut obj: Vec<Rat> = Vec::with_capacity(self.columns.len());
        for v in &self.columns {
            obj.push(reduced.coeff(*v));
        }
        if reduced.vars().any(|v| !self.columns.contains(&v)) {
            // A variable the constraints never mention is unbounded.
            return Some(Ext::Inf);
        }
        let best = match tab {
            AnyTableau::Small(t) => match t.maximize(&obj) {
                Ok(r) => r,
                Err(Overflow) => self.exact_tableau().maximize(&obj).ok().flatten(),
            },
            AnyTableau::Big(t) => t.maximize(&obj).ok().flatten(),
        };
        Some(match best {
            Some(v) => Ext::Finite(v + reduced.constant_part()),
            None => Ext::Inf,
        })
    }

    fn exact_tableau(&self) -> Tableau<Rat> {
        match Tableau::<Rat>::feasible(&self.rows, &self.columns) {
            Ok(Some(t)) => t,
            _ => unreachable!("region was feasible"),
        }
    }

    /// Supremum of `−e`, i.e. the negated infimum of `e`.
    pub fn sup_neg(&self, e: &LinExpr) -> Option<Ext> {
        self.sup(&e.scaled(&-Rat::one()))
    }

    /// Does every point of the region satisfy `a`? An empty region entails
    /// everything.
    pub fn entails(&self, a: &AtomicConstraint) -> bool {
        if self.is_empty() {
            return true;
        }
        a.halves().iter().all(|h| match self.sup(&h.lhs()) {
            Some(Ext::Finite(v)) => &v <= h.bound(),
            Some(Ext::Inf) => false,
            None => true,
        })
    }

    pub fn entails_all(&self, c: &Constraint) -> bool {
        if c.is_false_literal() {
            return self.is_empty();
        }
        c.atoms().iter().all(|a| self.entails(a))
    }
}

pub fn is_satisfiable(c: &Constraint) -> bool {
    !Region::new(c).is_empty()
}

/// `c ⊑ d` over the rationals.
pub fn entails(c: &Constraint, d: &Constraint) -> bool {
    Region::new(c).entails_all(d)
}

/// Dense two-phase simplex over a pluggable scalar type.
mod simplex {
    use num::rational::Ratio;
    use num::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive};

    use super::*;

    /// Tableau entries: exact rationals, or machine-word rationals whose
    /// operations report overflow as `None`.
    pub(super) trait Scalar: Clone + PartialOrd + Sized {
        fn from_rat(r: &Rat) -> Option<Self>;
        fn to_rat(&self) -> Rat;
        fn zero() -> Self;
        fn one() -> Self;
        fn is_zero(&self) -> bool;
        fn is_negative(&self) -> bool;
        fn is_positive(&self) -> bool;
        fn add(&self, o: &Self) -> Option<Self>;
        fn sub(&self, o: &Self) -> Option<Self>;
        fn mul(&self, o: &Self) -> Option<Self>;
        fn div(&self, o: &Self) -> Option<Self>;
        fn neg(&self) -> Option<Self> {
            Self::zero().sub(self)
        }
    }

    impl Scalar for Rat {
        fn from_rat(r: &Rat) -> Option<Self> {
            Some(r.clone())
        }
        fn to_rat(&self) -> Rat {
            self.clone()
        }
        fn zero() -> Self {
            Zero::zero()
        }
        fn one() -> Self {
            One::one()
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn is_negative(&self) -> bool {
            Signed::is_negative(self)
        }
        fn is_positive(&self) -> bool {
            Signed::is_positive(self)
        }
        fn add(&self, o: &Self) -> Option<Self> {
            Some(self + o)
        }
        fn sub(&self, o: &Self) -> Option<Self> {
            Some(self - o)
        }
        fn mul(&self, o: &Self) -> Option<Self> {
            Some(self * o)
        }
        fn div(&self, o: &Self) -> Option<Self> {
            Some(self / o)
        }
    }

    type Small = Ratio<i64>;

    impl Scalar for Small {
        fn from_rat(r: &Rat) -> Option<Self> {
            Some(Ratio::new_raw(r.numer().to_i64()?, r.denom().to_i64()?))
        }
        fn to_rat(&self) -> Rat {
            Rat::new((*self.numer()).into(), (*self.denom()).into())
        }
        fn zero() -> Self {
            Zero::zero()
        }
        fn one() -> Self {
            One::one()
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn is_negative(&self) -> bool {
            *self.numer() < 0
        }
        fn is_positive(&self) -> bool {
            *self.numer() > 0
        }
        fn add(&self, o: &Self) -> Option<Self> {
            self.checked_add(o)
        }
        fn sub(&self, o: &Self) -> Option<Self> {
            self.checked_sub(o)
        }
        fn mul(&self, o: &Self) -> Option<Self> {
            self.checked_mul(o)
        }
        fn div(&self, o: &Self) -> Option<Self> {
            self.checked_div(o)
        }
    }

    /// Arithmetic overflowed the scalar type.
    pub(super) struct Overflow;

    type Step<T> = std::result::Result<T, Overflow>;

    fn ok<T>(x: Option<T>) -> Step<T> {
        x.ok_or(Overflow)
    }

    /// A phase-1 tableau, machine-word when everything fits.
    #[derive(Clone, Debug)]
    pub(super) enum AnyTableau {
        Small(Tableau<Small>),
        Big(Tableau<Rat>),
    }

    impl AnyTableau {
        /// `None` if infeasible.
        pub(super) fn feasible(rows: &[(LinExpr, Rat)], cols: &[Var]) -> Option<AnyTableau> {
            match Tableau::<Small>::feasible(rows, cols) {
                Ok(t) => t.map(AnyTableau::Small),
                Err(Overflow) => match Tableau::<Rat>::feasible(rows, cols) {
                    Ok(t) => t.map(AnyTableau::Big),
                    Err(Overflow) => unreachable!("exact arithmetic does not overflow"),
                },
            }
        }
    }

    /// Dense simplex tableau over columns `[u (n) | v (n) | slack (m)]` where
    /// the original free variable is `u − v`.
    #[derive(Clone, Debug)]
    pub(super) struct Tableau<T> {
        rows: Vec<Vec<T>>,
        basis: Vec<usize>,
        n: usize,
        width: usize,
    }

    impl<T: Scalar> Tableau<T> {
        /// Builds the standard form and runs phase 1. `Ok(None)` if infeasible.
        pub(super) fn feasible(rows: &[(LinExpr, Rat)], cols: &[Var]) -> Step<Option<Tableau<T>>> {
            let n = cols.len();
            let m = rows.len();
            let index: BTreeMap<Var, usize> = cols.iter().enumerate().map(|(i, v)| (*v, i)).collect();
            let n_art = rows.iter().filter(|(_, b)| Signed::is_negative(b)).count();
            let width = 2 * n + m;
            let total = width + n_art;
            let mut tab = Vec::with_capacity(m);
            let mut basis = Vec::with_capacity(m);
            let mut next_art = width;
            for (i, (lhs, b)) in rows.iter().enumerate() {
                let mut row = vec![T::zero(); total + 1];
                let flip = Signed::is_negative(b);
                let signed = |r: &Rat| ok(T::from_rat(&if flip { -r } else { r.clone() }));
                for (v, c) in lhs.terms() {
                    let j = index[v];
                    row[j] = signed(c)?;
                    row[n + j] = ok(row[j].neg())?;
                }
                row[2 * n + i] = if flip { ok(T::one().neg())? } else { T::one() };
                row[total] = signed(b)?;
                if flip {
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                } else {
                    basis.push(2 * n + i);
                }
                tab.push(row);
            }
            let mut t = Tableau {
                rows: tab,
                basis,
                n,
                width: total,
            };
            if n_art > 0 {
                // maximize −Σ artificials
                let mut obj = vec![T::zero(); total + 1];
                for o in &mut obj[width..total] {
                    *o = T::one();
                }
                for i in 0..m {
                    if t.basis[i] >= width {
                        for (o, r) in obj.iter_mut().zip(t.rows[i].iter()) {
                            *o = ok(o.sub(r))?;
                        }
                    }
                }
                let bounded = t.optimize(&mut obj, total)?;
                debug_assert!(bounded);
                if obj[total].is_negative() {
                    return Ok(None);
                }
                // Drive zero-valued artificials out of the basis.
                let mut i = 0;
                while i < t.rows.len() {
                    if t.basis[i] >= width {
                        match (0..width).find(|&j| !t.rows[i][j].is_zero()) {
                            Some(j) => {
                                t.pivot(i, j, &mut obj)?;
                                i += 1;
                            }
                            None => {
                                t.rows.remove(i);
                                t.basis.remove(i);
                            }
                        }
                    } else {
                        i += 1;
                    }
                }
                for row in &mut t.rows {
                    let rhs = row[total].clone();
                    row.truncate(width);
                    row.push(rhs);
                }
                t.width = width;
            }
            Ok(Some(t))
        }

        fn pivot(&mut self, r: usize, c: usize, obj: &mut [T]) -> Step<()> {
            let p = self.rows[r][c].clone();
            if p != T::one() {
                for x in self.rows[r].iter_mut() {
                    *x = ok(x.div(&p))?;
                }
            }
            let prow = self.rows[r].clone();
            let eliminate = |row: &mut [T]| -> Step<()> {
                if row[c].is_zero() {
                    return Ok(());
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    if !y.is_zero() {
                        *x = ok(x.sub(&ok(f.mul(y))?))?;
                    }
                }
                Ok(())
            };
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r {
                    eliminate(row)?;
                }
            }
            eliminate(obj)?;
            self.basis[r] = c;
            Ok(())
        }

        /// Primal simplex on reduced-cost row `obj` (entering when negative),
        /// considering only columns `< allowed`. `Ok(false)` if unbounded.
        fn optimize(&mut self, obj: &mut [T], allowed: usize) -> Step<bool> {
            let rhs = self.width;
            loop {
                let Some(enter) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                    return Ok(true);
                };
                let mut leave: Option<(usize, T)> = None;
                for i in 0..self.rows.len() {
                    let a = &self.rows[i][enter];
                    if !a.is_positive() {
                        continue;
                    }
                    let ratio = ok(self.rows[i][rhs].div(a))?;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
                match leave {
                    None => return Ok(false),
                    Some((r, _)) => self.pivot(r, enter, obj)?,
                }
            }
        }

        /// Maximize `Σ coeffs[j]·y_j` from the current feasible basis.
        pub(super) fn maximize(&self, coeffs: &[Rat]) -> Step<Option<Rat>> {
            let n = self.n;
            let width = self.width;
            let coeffs: Vec<T> = coeffs.iter().map(|c| ok(T::from_rat(c))).collect::<Step<_>>()?;
            let mut obj = vec![T::zero(); width + 1];
            for (j, c) in coeffs.iter().enumerate() {
                obj[j] = ok(c.neg())?;
                obj[n + j] = c.clone();
            }
            for (i, &b) in self.basis.iter().enumerate() {
                let cb = if b < n {
                    coeffs[b].clone()
                } else if b < 2 * n {
                    ok(coeffs[b - n].neg())?
                } else {
                    continue;
                };
                if cb.is_zero() {
                    continue;
                }
                for (o, r) in obj.iter_mut().zip(self.rows[i].iter()) {
                    *o = ok(o.add(&ok(cb.mul(r))?))?;
                }
            }
            let mut t = self.clone();
            Ok(if t.optimize(&mut obj, width)? {
                Some(obj[width].to_rat())
            } else {
                None
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{rat, ratio};

    fn v(i: u32) -> Var {
        Var(i)
    }

    fn le(terms: &[(u32, i64)], b: i64) -> AtomicConstraint {
        AtomicConstraint::new(terms.iter().map(|&(i, c)| (v(i), rat(c))), Rel::Le, rat(b))
    }

    fn eq(terms: &[(u32, i64)], b: i64) -> AtomicConstraint {
        AtomicConstraint::new(terms.iter().map(|&(i, c)| (v(i), rat(c))), Rel::Eq, rat(b))
    }

    fn lin(terms: &[(u32, i64)]) -> LinExpr {
        LinExpr::from_terms(terms.iter().map(|&(i, c)| (v(i), rat(c))), Rat::zero())
    }

    fn max(cs: Vec<AtomicConstraint>, obj: &[(u32, i64)]) -> LpOutcome {
        lp_solve(&LpProblem {
            constraints: Constraint::from_atoms(cs),
            objective: lin(obj),
            sense: Sense::Max,
        })
    }

    #[test]
    fn bounded_single_variable() {
        assert_eq!(max(vec![le(&[(0, 1)], 3)], &[(0, 1)]), LpOutcome::Optimum(rat(3)));
    }

    #[test]
    fn no_constraints_is_unbounded() {
        assert_eq!(max(vec![], &[(0, 1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn vertex_of_triangle() {
        // max x+y s.t. x<=1, y<=1, x+y<=1 -> 1 (vertex enumeration: (1,0),(0,1))
        let cs = vec![le(&[(0, 1)], 1), le(&[(1, 1)], 1), le(&[(0, 1), (1, 1)], 1)];
        assert_eq!(max(cs, &[(0, 1), (1, 1)]), LpOutcome::Optimum(rat(1)));
    }

    #[test]
    fn infeasible_and_minimum() {
        let cs = vec![le(&[(0, 1)], 0), le(&[(0, -1)], -1)];
        assert_eq!(max(cs, &[(0, 1)]), LpOutcome::Infeasible);
        let p = LpProblem {
            constraints: Constraint::from_atoms([le(&[(0, -2)], -3)]),
            objective: lin(&[(0, 1)]),
            sense: Sense::Min,
        };
        assert_eq!(lp_solve(&p), LpOutcome::Optimum(ratio(3, 2)));
    }

    #[test]
    fn equalities_are_substituted() {
        // x = y + 1, y <= 2, max x -> 3 ; max y - x -> -1
        let cs = vec![eq(&[(0, 1), (1, -1)], 1), le(&[(1, 1)], 2)];
        assert_eq!(max(cs.clone(), &[(0, 1)]), LpOutcome::Optimum(rat(3)));
        assert_eq!(max(cs.clone(), &[(1, 1), (0, -1)]), LpOutcome::Optimum(rat(-1)));
        let bad = vec![eq(&[(0, 1)], 1), eq(&[(0, 1)], 2)];
        assert_eq!(max(bad, &[(0, 1)]), LpOutcome::Infeasible);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Many constraints through the origin.
        let cs = vec![
            le(&[(0, 1), (1, 1)], 0),
            le(&[(0, 1), (1, -1)], 0),
            le(&[(0, -1), (1, 1)], 0),
            le(&[(0, -1), (1, -1)], 0),
            le(&[(0, 2), (1, 1)], 0),
            le(&[(0, 1), (1, 2)], 0),
        ];
        assert_eq!(max(cs, &[(0, 1), (1, 3)]), LpOutcome::Optimum(rat(0)));
    }

    #[test]
    fn region_entailment() {
        let r = Region::new(&Constraint::from_atoms([le(&[(0, 1)], 1), le(&[(1, 1)], 1)]));
        assert!(r.entails(&le(&[(0, 1), (1, 1)], 2)));
        assert!(!r.entails(&le(&[(0, 1), (1, 1)], 1)));
        assert!(!r.entails(&eq(&[(0, 1)], 1)));
        let empty = Region::new(&Constraint::falsity());
        assert!(empty.is_empty());
        assert!(empty.entails(&le(&[(0, 1)], -100)));
    }
}
