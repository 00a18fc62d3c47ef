//! Difference-bound matrices for Bounded Differences and Octagons.
//!
//! Entry `m[i][j]` bounds `vᵢ − vⱼ`.
//!
//! * BDS over `n` variables: `n + 1` nodes, node 0 is the constant zero and
//!   node `k + 1` is `xₖ`.
//! * Octagon over `n` variables: `2n` nodes, `v₂ₖ = xₖ` and `v₂ₖ₊₁ = −xₖ`.
//!   Entries `(i, j)` and `(j̄, ī)` (with `ī = i ^ 1`) always agree.

use std::collections::BTreeMap;

use num::Zero;

use crate::ext::Ext;
use crate::linear::{AtomicConstraint, Rat, Rel, Var};
use crate::lp::Region;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DbmKind {
    Bds,
    Oct,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dbm {
    kind: DbmKind,
    vars: usize,
    m: Vec<Ext>,
    /// False only for results of widening, whose dropped entries are not
    /// re-tightened.
    closed: bool,
}

impl Dbm {
    pub fn top(kind: DbmKind, vars: usize) -> Dbm {
        let size = Self::size_for(kind, vars);
        let mut m = vec![Ext::Inf; size * size];
        for i in 0..size {
            m[i * size + i] = Ext::Finite(Rat::zero());
        }
        Dbm {
            kind,
            vars,
            m,
            closed: true,
        }
    }

    fn size_for(kind: DbmKind, vars: usize) -> usize {
        match kind {
            DbmKind::Bds => vars + 1,
            DbmKind::Oct => 2 * vars,
        }
    }

    pub fn kind(&self) -> DbmKind {
        self.kind
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn size(&self) -> usize {
        Self::size_for(self.kind, self.vars)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn get(&self, i: usize, j: usize) -> &Ext {
        &self.m[i * self.size() + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Ext) {
        let s = self.size();
        self.m[i * s + j] = v;
    }

    /// Tighten entry `(i, j)` (and its coherent twin for octagons).
    pub fn tighten(&mut self, i: usize, j: usize, v: Ext) {
        if &v < self.get(i, j) {
            self.set(i, j, v.clone());
            if self.kind == DbmKind::Oct {
                self.set(j ^ 1, i ^ 1, v);
            }
            self.closed = false;
        }
    }

    /// Coefficients of the form bounded by entry `(i, j)`, indexed by
    /// variable position.
    pub fn entry_form(&self, i: usize, j: usize) -> BTreeMap<usize, Rat> {
        let mut form: BTreeMap<usize, Rat> = BTreeMap::new();
        let mut add = |node: usize, sign: i64| {
            let (var, s) = match self.kind {
                DbmKind::Bds => {
                    if node == 0 {
                        return;
                    }
                    (node - 1, sign)
                }
                DbmKind::Oct => (node / 2, if node.is_multiple_of(2) { sign } else { -sign }),
            };
            *form.entry(var).or_insert_with(Rat::zero) += Rat::from_integer(s.into());
        };
        add(i, 1);
        add(j, -1);
        form.retain(|_, c| !c.is_zero());
        form
    }

    /// Off-diagonal entries, one representative per coherent pair.
    pub fn template_entries(&self) -> Vec<(usize, usize)> {
        let s = self.size();
        let mut out = Vec::new();
        for i in 0..s {
            for j in 0..s {
                if i == j {
                    continue;
                }
                if self.kind == DbmKind::Oct {
                    let twin = (j ^ 1, i ^ 1);
                    if twin < (i, j) {
                        continue;
                    }
                }
                out.push((i, j));
            }
        }
        out
    }

    /// Best abstraction of a polyhedron: every template bounded by its
    /// exact supremum. `vars` gives the clause variable at each position.
    pub fn from_region(kind: DbmKind, region: &Region, vars: &[Var]) -> Dbm {
        let mut d = Dbm::top(kind, vars.len());
        for (i, j) in d.template_entries() {
            let form = d.entry_form(i, j);
            let e = crate::linear::LinExpr::from_terms(form.iter().map(|(k, c)| (vars[*k], c.clone())), Rat::zero());
            if let Some(sup) = region.sup(&e) {
                d.set(i, j, sup.clone());
                if kind == DbmKind::Oct {
                    d.set(j ^ 1, i ^ 1, sup);
                }
            }
        }
        d.closed = false;
        d
    }

    /// Shortest-path closure (plus the octagon strengthening step).
    /// Returns `None` when the matrix has no solution.
    pub fn close(&self) -> Option<Dbm> {
        if self.closed {
            return if self.has_negative_diagonal() { None } else { Some(self.clone()) };
        }
        let s = self.size();
        let mut d = self.clone();
        for k in 0..s {
            for i in 0..s {
                let ik = d.m[i * s + k].clone();
                if !ik.is_finite() {
                    continue;
                }
                for j in 0..s {
                    let via = &ik + &d.m[k * s + j];
                    if via < d.m[i * s + j] {
                        d.m[i * s + j] = via;
                    }
                }
            }
        }
        if d.has_negative_diagonal() {
            return None;
        }
        if d.kind == DbmKind::Oct {
            for i in 0..s {
                for j in 0..s {
                    let via = (&d.m[i * s + (i ^ 1)] + &d.m[(j ^ 1) * s + j]).half();
                    if via < d.m[i * s + j] {
                        d.m[i * s + j] = via;
                    }
                }
            }
            if d.has_negative_diagonal() {
                return None;
            }
        }
        for i in 0..s {
            d.m[i * s + i] = Ext::Finite(Rat::zero());
        }
        d.closed = true;
        Some(d)
    }

    fn has_negative_diagonal(&self) -> bool {
        let s = self.size();
        (0..s).any(|i| self.m[i * s + i] < Ext::Finite(Rat::zero()))
    }

    /// Entailment against any `other`; `self` must be closed and nonempty.
    pub fn leq_closed(&self, other: &Dbm) -> bool {
        debug_assert!(self.closed);
        self.m.iter().zip(&other.m).all(|(a, b)| a <= b)
    }

    /// Entrywise max of two closed matrices.
    pub fn join_closed(&self, other: &Dbm) -> Dbm {
        Dbm {
            kind: self.kind,
            vars: self.vars,
            m: self.m.iter().zip(&other.m).map(|(a, b)| Ext::max_of(a, b)).collect(),
            closed: true,
        }
    }

    /// Entrywise min; the caller closes the result.
    pub fn meet_raw(&self, other: &Dbm) -> Dbm {
        Dbm {
            kind: self.kind,
            vars: self.vars,
            m: self.m.iter().zip(&other.m).map(|(a, b)| Ext::min_of(a, b)).collect(),
            closed: false,
        }
    }

    /// Keeps the entries of `self` that still bound the closed `other`;
    /// the rest become `+∞`. Kept entries are mutually consistent so no
    /// re-tightening is performed.
    pub fn widen_with_closed(&self, other: &Dbm) -> Dbm {
        let s = self.size();
        let mut m = Vec::with_capacity(s * s);
        for i in 0..s {
            for j in 0..s {
                let a = self.get(i, j);
                m.push(if i == j || other.get(i, j) <= a { a.clone() } else { Ext::Inf });
            }
        }
        let unchanged = m == self.m;
        Dbm {
            kind: self.kind,
            vars: self.vars,
            m,
            closed: self.closed && unchanged,
        }
    }

    /// Restrict a closed matrix to the given variable positions, in order.
    pub fn select(&self, positions: &[usize]) -> Dbm {
        let nodes: Vec<usize> = match self.kind {
            DbmKind::Bds => std::iter::once(0).chain(positions.iter().map(|p| p + 1)).collect(),
            DbmKind::Oct => positions.iter().flat_map(|p| [2 * p, 2 * p + 1]).collect(),
        };
        let mut d = Dbm::top(self.kind, positions.len());
        let s = d.size();
        for (a, &i) in nodes.iter().enumerate() {
            for (b, &j) in nodes.iter().enumerate() {
                d.m[a * s + b] = self.get(i, j).clone();
            }
        }
        d.closed = self.closed;
        d
    }

    /// Finite entries as atomic constraints over `vars`.
    pub fn constraints(&self, vars: &[Var]) -> Vec<AtomicConstraint> {
        let mut out = Vec::new();
        for (i, j) in self.template_entries() {
            if let Ext::Finite(b) = self.get(i, j) {
                let form = self.entry_form(i, j);
                out.push(
                    AtomicConstraint::new(form.iter().map(|(k, c)| (vars[*k], c.clone())), Rel::Le, b.clone())
                        .primitive(),
                );
            }
        }
        out
    }

    /// Makes every finite entry of the matrix an element of the stored
    /// representation, for tests that build matrices directly.
    pub fn from_entries(kind: DbmKind, vars: usize, entries: &[(usize, usize, Rat)]) -> Dbm {
        let mut d = Dbm::top(kind, vars);
        for (i, j, v) in entries {
            d.tighten(*i, *j, Ext::Finite(v.clone()));
        }
        d
    }
}
