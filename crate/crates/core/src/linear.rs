//! Linear arithmetic over exact rationals: variables, linear expressions,
//! atomic constraints `Σ aᵢ·xᵢ ≤ a` / `Σ aᵢ·xᵢ = a`, and conjunctions of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Exact rational number used for every coefficient and bound.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A clause-local variable. The index points into the owning clause's
/// variable table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub enum Sort {
    #[default]
    Int,
    Real,
}

impl Sort {
    pub fn name(self) -> &'static str {
        match self {
            Sort::Int => "int",
            Sort::Real => "real",
        }
    }
}

/// `Σ coeffs[x]·x + constant`, zero coefficients never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LinExpr {
    terms: BTreeMap<Var, Rat>,
    constant: Rat,
}

impl LinExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        let mut e = Self::zero();
        e.add_term(v, Rat::one());
        e
    }

    pub fn constant(c: Rat) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Var, Rat)>, constant: Rat) -> Self {
        let mut e = Self::constant(constant);
        for (v, c) in terms {
            e.add_term(v, c);
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<Var, Rat> {
        &self.terms
    }

    pub fn constant_part(&self) -> &Rat {
        &self.constant
    }

    pub fn coeff(&self, v: Var) -> Rat {
        self.terms.get(&v).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, v: Var, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(v).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add_constant(&mut self, c: &Rat) {
        self.constant += c;
    }

    pub fn add_scaled(&mut self, other: &LinExpr, k: &Rat) {
        if k.is_zero() {
            return;
        }
        for (v, c) in &other.terms {
            self.add_term(*v, c * k);
        }
        self.constant += &other.constant * k;
    }

    pub fn plus(&self, other: &LinExpr) -> LinExpr {
        let mut e = self.clone();
        e.add_scaled(other, &Rat::one());
        e
    }

    pub fn minus(&self, other: &LinExpr) -> LinExpr {
        let mut e = self.clone();
        e.add_scaled(other, &-Rat::one());
        e
    }

    pub fn scaled(&self, k: &Rat) -> LinExpr {
        let mut e = LinExpr::zero();
        e.add_scaled(self, k);
        e
    }

    /// Replace `v` by `by` everywhere.
    pub fn substitute(&self, v: Var, by: &LinExpr) -> LinExpr {
        match self.terms.get(&v) {
            None => self.clone(),
            Some(c) => {
                let c = c.clone();
                let mut e = self.clone();
                e.terms.remove(&v);
                e.add_scaled(by, &c);
                e
            }
        }
    }

    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> LinExpr {
        LinExpr::from_terms(
            self.terms.iter().map(|(v, c)| (f(*v), c.clone())),
            self.constant.clone(),
        )
    }

    pub fn eval(&self, value: &impl Fn(Var) -> Rat) -> Rat {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            acc += c * value(*v);
        }
        acc
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.keys().copied()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rel {
    Le,
    Eq,
}

/// `Σ coeffs[x]·x  rel  bound`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AtomicConstraint {
    coeffs: BTreeMap<Var, Rat>,
    rel: Rel,
    bound: Rat,
}

impl AtomicConstraint {
    pub fn new(coeffs: impl IntoIterator<Item = (Var, Rat)>, rel: Rel, bound: Rat) -> Self {
        let coeffs = coeffs
            .into_iter()
            .fold(BTreeMap::new(), |mut m: BTreeMap<Var, Rat>, (v, c)| {
                *m.entry(v).or_insert_with(Rat::zero) += c;
                m
            })
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        AtomicConstraint { coeffs, rel, bound }
    }

    /// `e rel 0`.
    pub fn from_expr(e: &LinExpr, rel: Rel) -> Self {
        AtomicConstraint {
            coeffs: e.terms.clone(),
            rel,
            bound: -e.constant.clone(),
        }
    }

    /// `lhs ≤ rhs`.
    pub fn le(lhs: &LinExpr, rhs: &LinExpr) -> Self {
        Self::from_expr(&lhs.minus(rhs), Rel::Le)
    }

    /// `lhs = rhs`.
    pub fn eq(lhs: &LinExpr, rhs: &LinExpr) -> Self {
        Self::from_expr(&lhs.minus(rhs), Rel::Eq)
    }

    pub fn var_eq(a: Var, b: Var) -> Self {
        Self::eq(&LinExpr::var(a), &LinExpr::var(b))
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Rat> {
        &self.coeffs
    }

    pub fn coeff(&self, v: Var) -> Rat {
        self.coeffs.get(&v).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn rel(&self) -> Rel {
        self.rel
    }

    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    /// The left-hand side as an expression with no constant part.
    pub fn lhs(&self) -> LinExpr {
        LinExpr::from_terms(self.coeffs.clone(), Rat::zero())
    }

    /// `lhs − bound`, so the constraint reads `expr rel 0`.
    pub fn as_expr(&self) -> LinExpr {
        LinExpr::from_terms(self.coeffs.clone(), -self.bound.clone())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truth value of a variable-free constraint.
    pub fn ground_truth(&self) -> Option<bool> {
        if !self.coeffs.is_empty() {
            return None;
        }
        Some(match self.rel {
            Rel::Le => !self.bound.is_negative(),
            Rel::Eq => self.bound.is_zero(),
        })
    }

    /// The `≤` halves: one for an inequality, two for an equality.
    pub fn halves(&self) -> Vec<AtomicConstraint> {
        match self.rel {
            Rel::Le => vec![self.clone()],
            Rel::Eq => vec![
                AtomicConstraint {
                    coeffs: self.coeffs.clone(),
                    rel: Rel::Le,
                    bound: self.bound.clone(),
                },
                self.negated_le(),
            ],
        }
    }

    /// `−lhs ≤ −bound`.
    pub fn negated_le(&self) -> AtomicConstraint {
        AtomicConstraint {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, -c.clone())).collect(),
            rel: Rel::Le,
            bound: -self.bound.clone(),
        }
    }

    pub fn holds(&self, value: &impl Fn(Var) -> Rat) -> bool {
        let lhs = self.lhs().eval(value);
        match self.rel {
            Rel::Le => lhs <= self.bound,
            Rel::Eq => lhs == self.bound,
        }
    }

    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> AtomicConstraint {
        AtomicConstraint::new(
            self.coeffs.iter().map(|(v, c)| (f(*v), c.clone())),
            self.rel,
            self.bound.clone(),
        )
    }

    pub fn substitute(&self, v: Var, by: &LinExpr) -> AtomicConstraint {
        AtomicConstraint::from_expr(&self.as_expr().substitute(v, by), self.rel)
    }

    /// Scale by a positive factor so all coefficients and the bound are
    /// coprime integers. Equalities additionally get a positive leading
    /// coefficient.
    pub fn primitive(&self) -> AtomicConstraint {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in self.coeffs.values().chain(std::iter::once(&self.bound)) {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.coeffs.values().chain(std::iter::once(&self.bound)) {
            let n = c.numer() * (&den / c.denom());
            g = g.gcd(&n);
        }
        let mut k = Rat::new(den, g);
        if self.rel == Rel::Eq && self.coeffs.values().next().is_some_and(|c| c.is_negative()) {
            k = -k;
        }
        AtomicConstraint {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * &k)).collect(),
            rel: self.rel,
            bound: &self.bound * &k,
        }
    }

    /// True iff every coefficient and the bound are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer()) && self.bound.is_integer()
    }

    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(Var) -> String) -> impl fmt::Display + 'a {
        AtomDisplay { atom: self, names }
    }
}

impl PartialOrd for AtomicConstraint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic lexicographic order: variables and coefficients first,
/// then relation, then bound.
impl Ord for AtomicConstraint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .iter()
            .cmp(other.coeffs.iter())
            .then(self.rel.cmp(&other.rel))
            .then(self.bound.cmp(&other.bound))
    }
}

struct AtomDisplay<'a> {
    atom: &'a AtomicConstraint,
    names: &'a dyn Fn(Var) -> String,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.atom;
        if a.coeffs.is_empty() {
            return write!(f, "0 {} {}", rel_symbol(a.rel), fmt_rat(&a.bound));
        }
        write_sum(f, &a.coeffs, self.names)?;
        write!(f, " {} {}", rel_symbol(a.rel), fmt_rat(&a.bound))
    }
}

fn rel_symbol(rel: Rel) -> &'static str {
    match rel {
        Rel::Le => "=<",
        Rel::Eq => "=",
    }
}

pub(crate) fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn write_sum(
    f: &mut fmt::Formatter<'_>,
    coeffs: &BTreeMap<Var, Rat>,
    names: &dyn Fn(Var) -> String,
) -> fmt::Result {
    for (i, (v, c)) in coeffs.iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if mag.is_one() {
            write!(f, "{}", names(*v))?;
        } else {
            write!(f, "{}*{}", fmt_rat(&mag), names(*v))?;
        }
    }
    Ok(())
}

/// A conjunction of atomic constraints. `false` is a distinguished flag;
/// `true` is the empty conjunction.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Constraint {
    atoms: Vec<AtomicConstraint>,
    falsum: bool,
}

impl Constraint {
    pub fn truth() -> Self {
        Self::default()
    }

    pub fn falsity() -> Self {
        Constraint {
            atoms: Vec::new(),
            falsum: true,
        }
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = AtomicConstraint>) -> Self {
        let mut c = Self::truth();
        for a in atoms {
            c.push(a);
        }
        c
    }

    /// Conjoin one atom. Ground atoms are folded into the truth flags and
    /// exact duplicates are skipped.
    pub fn push(&mut self, a: AtomicConstraint) {
        if self.falsum {
            return;
        }
        match a.ground_truth() {
            Some(true) => {}
            Some(false) => {
                self.atoms.clear();
                self.falsum = true;
            }
            None => {
                if !self.atoms.contains(&a) {
                    self.atoms.push(a);
                }
            }
        }
    }

    pub fn and(&self, other: &Constraint) -> Constraint {
        let mut c = self.clone();
        c.extend(other);
        c
    }

    pub fn extend(&mut self, other: &Constraint) {
        if other.falsum {
            *self = Self::falsity();
            return;
        }
        for a in &other.atoms {
            self.push(a.clone());
        }
    }

    pub fn atoms(&self) -> &[AtomicConstraint] {
        &self.atoms
    }

    pub fn is_false_literal(&self) -> bool {
        self.falsum
    }

    pub fn is_true(&self) -> bool {
        !self.falsum && self.atoms.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.atoms.iter().flat_map(|a| a.vars()).collect()
    }

    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> Constraint {
        if self.falsum {
            return Self::falsity();
        }
        Constraint::from_atoms(self.atoms.iter().map(|a| a.rename(f)))
    }

    pub fn holds(&self, value: &impl Fn(Var) -> Rat) -> bool {
        !self.falsum && self.atoms.iter().all(|a| a.holds(value))
    }

    /// Every atom split into `≤` halves.
    pub fn inequalities(&self) -> Vec<AtomicConstraint> {
        self.atoms.iter().flat_map(|a| a.halves()).collect()
    }

    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(Var) -> String) -> impl fmt::Display + 'a {
        ConstraintDisplay { c: self, names }
    }
}

struct ConstraintDisplay<'a> {
    c: &'a Constraint,
    names: &'a dyn Fn(Var) -> String,
}

impl fmt::Display for ConstraintDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.falsum {
            return write!(f, "false");
        }
        if self.c.atoms.is_empty() {
            return write!(f, "true");
        }
        for (i, a) in self.c.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", a.display_with(self.names))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Var {
        Var(i)
    }

    #[test]
    fn primitive_scales_to_coprime_integers() {
        let a = AtomicConstraint::new([(x(0), ratio(1, 2)), (x(1), ratio(-3, 4))], Rel::Le, ratio(5, 2));
        let p = a.primitive();
        assert_eq!(p.coeff(x(0)), rat(2));
        assert_eq!(p.coeff(x(1)), rat(-3));
        assert_eq!(p.bound(), &rat(10));

        let e = AtomicConstraint::new([(x(0), rat(-2)), (x(1), rat(4))], Rel::Eq, rat(6));
        let p = e.primitive();
        assert_eq!(p.coeff(x(0)), rat(1));
        assert_eq!(p.coeff(x(1)), rat(-2));
        assert_eq!(p.bound(), &rat(-3));
    }

    #[test]
    fn ground_atoms_fold_into_truth_flags() {
        let mut c = Constraint::truth();
        c.push(AtomicConstraint::new([], Rel::Le, rat(0)));
        assert!(c.is_true());
        c.push(AtomicConstraint::new([], Rel::Eq, rat(1)));
        assert!(c.is_false_literal());
        c.push(AtomicConstraint::var_eq(x(0), x(1)));
        assert!(c.is_false_literal());
        assert!(c.atoms().is_empty());
    }

    #[test]
    fn equality_halves() {
        let e = AtomicConstraint::var_eq(x(0), x(1));
        let hs = e.halves();
        assert_eq!(hs.len(), 2);
        assert_eq!(hs[0].coeff(x(0)), rat(1));
        assert_eq!(hs[1].coeff(x(0)), rat(-1));
        assert!(hs.iter().all(|h| h.rel() == Rel::Le));
    }

    #[test]
    fn substitution_and_eval() {
        // x0 - x1 <= -1 with x1 := x2 + 3
        let a = AtomicConstraint::le(&LinExpr::var(x(0)), &LinExpr::var(x(1)).plus(&LinExpr::constant(rat(-1))));
        let b = a.substitute(x(1), &LinExpr::var(x(2)).plus(&LinExpr::constant(rat(3))));
        assert_eq!(b.bound(), &rat(2));
        let val = |v: Var| if v == x(0) { rat(4) } else { rat(2) };
        assert!(b.holds(&val));
        let val = |v: Var| if v == x(0) { rat(5) } else { rat(2) };
        assert!(!b.holds(&val));
    }

    #[test]
    fn display_uses_clp_operators() {
        let a = AtomicConstraint::new([(x(0), rat(1)), (x(1), rat(-2))], Rel::Le, rat(-1));
        let names = |v: Var| format!("X{}", v.0);
        assert_eq!(a.display_with(&names).to_string(), "X0 - 2*X1 =< -1");
    }
}
