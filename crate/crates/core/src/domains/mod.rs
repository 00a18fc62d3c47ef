//! Numeric abstract domains over a fixed, ordered list of dimensions.
//!
//! Every value carries its [`DomainTag`] and the clause variables it
//! constrains. Binary operations require equal tags and equal dimension
//! lists.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linear::{AtomicConstraint, Constraint, Var};
use crate::lp::Region;

pub mod boxes;
pub mod dbm;
pub mod poly;

pub use boxes::Intervals;
pub use dbm::{Dbm, DbmKind};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DomainTag {
    Universe,
    Box,
    Bds,
    Oct,
    Poly,
}

impl DomainTag {
    pub const ALL: [DomainTag; 5] = [
        DomainTag::Universe,
        DomainTag::Box,
        DomainTag::Bds,
        DomainTag::Oct,
        DomainTag::Poly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DomainTag::Universe => "universe",
            DomainTag::Box => "box",
            DomainTag::Bds => "bds",
            DomainTag::Oct => "oct",
            DomainTag::Poly => "poly",
        }
    }

    fn dbm_kind(self) -> Option<DbmKind> {
        match self {
            DomainTag::Bds => Some(DbmKind::Bds),
            DomainTag::Oct => Some(DbmKind::Oct),
            _ => None,
        }
    }
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "universe" | "true" => Ok(DomainTag::Universe),
            "box" | "interval" | "intervals" => Ok(DomainTag::Box),
            "bds" => Ok(DomainTag::Bds),
            "oct" | "octagon" | "octagons" => Ok(DomainTag::Oct),
            "poly" | "polyhedra" => Ok(DomainTag::Poly),
            other => Err(format!("unknown domain `{other}`")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Body {
    Bottom,
    Universe,
    Box(Intervals),
    Dbm(Dbm),
    /// Always minimized.
    Poly(Vec<AtomicConstraint>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AbstractValue {
    tag: DomainTag,
    dims: Vec<Var>,
    body: Body,
}

impl AbstractValue {
    pub fn top(tag: DomainTag, dims: &[Var]) -> AbstractValue {
        let n = dims.len();
        let body = match tag {
            DomainTag::Universe => Body::Universe,
            DomainTag::Box => Body::Box(Intervals::top(n)),
            DomainTag::Bds => Body::Dbm(Dbm::top(DbmKind::Bds, n)),
            DomainTag::Oct => Body::Dbm(Dbm::top(DbmKind::Oct, n)),
            DomainTag::Poly => Body::Poly(Vec::new()),
        };
        AbstractValue {
            tag,
            dims: dims.to_vec(),
            body,
        }
    }

    pub fn bottom(tag: DomainTag, dims: &[Var]) -> AbstractValue {
        AbstractValue {
            tag,
            dims: dims.to_vec(),
            body: Body::Bottom,
        }
    }

    pub fn tag(&self) -> DomainTag {
        self.tag
    }

    pub fn dims(&self) -> &[Var] {
        &self.dims
    }

    /// Best abstraction of `c`, whose variables must all be dimensions.
    pub fn alpha(tag: DomainTag, c: &Constraint, dims: &[Var]) -> Result<AbstractValue> {
        let dimset: BTreeSet<Var> = dims.iter().copied().collect();
        if !c.vars().is_subset(&dimset) {
            return Err(Error::DimsNotCovered);
        }
        Self::abstract_onto(tag, c, dims)
    }

    /// Best abstraction of `∃(vars(c) ∖ keep). c` over `keep`. Equal to
    /// abstracting over all variables and projecting, without building the
    /// larger value.
    pub fn abstract_onto(tag: DomainTag, c: &Constraint, keep: &[Var]) -> Result<AbstractValue> {
        let region = Region::new(c);
        if region.is_empty() {
            return Ok(Self::bottom(tag, keep));
        }
        let body = match tag {
            DomainTag::Universe => Body::Universe,
            DomainTag::Box => Body::Box(Intervals::from_region(&region, keep)),
            DomainTag::Bds | DomainTag::Oct => {
                let kind = tag.dbm_kind().unwrap();
                let d = Dbm::from_region(kind, &region, keep);
                Body::Dbm(d.close().expect("abstraction of a nonempty region is nonempty"))
            }
            DomainTag::Poly => {
                let keepset: BTreeSet<Var> = keep.iter().copied().collect();
                let linked = poly::linked_to(c.atoms(), &keepset);
                let elim: BTreeSet<Var> = linked.iter().flat_map(|a| a.vars()).filter(|v| !keepset.contains(v)).collect();
                match poly::eliminate(&linked, &elim)? {
                    Some(p) => Body::Poly(p),
                    None => Body::Bottom,
                }
            }
        };
        Ok(AbstractValue {
            tag,
            dims: keep.to_vec(),
            body,
        })
    }

    /// Concretization as a constraint over the dimensions.
    pub fn to_constraint(&self) -> Constraint {
        match &self.body {
            Body::Bottom => Constraint::falsity(),
            Body::Universe => Constraint::truth(),
            Body::Box(b) => {
                if b.is_empty() {
                    Constraint::falsity()
                } else {
                    Constraint::from_atoms(b.constraints(&self.dims))
                }
            }
            Body::Dbm(d) => Constraint::from_atoms(d.constraints(&self.dims)),
            Body::Poly(p) => Constraint::from_atoms(p.iter().cloned()),
        }
    }

    /// Semantic emptiness.
    pub fn is_bottom(&self) -> bool {
        match &self.body {
            Body::Bottom => true,
            Body::Universe | Body::Poly(_) => false,
            Body::Box(b) => b.is_empty(),
            Body::Dbm(d) => d.close().is_none(),
        }
    }

    /// A representation where emptiness is explicit and matrices are closed.
    fn normalized(&self) -> AbstractValue {
        let body = match &self.body {
            Body::Box(b) if b.is_empty() => Body::Bottom,
            Body::Dbm(d) if !d.is_closed() => match d.close() {
                Some(c) => Body::Dbm(c),
                None => Body::Bottom,
            },
            other => other.clone(),
        };
        AbstractValue {
            tag: self.tag,
            dims: self.dims.clone(),
            body,
        }
    }

    fn check_compatible(&self, other: &AbstractValue) -> Result<()> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch(self.tag, other.tag));
        }
        if self.dims != other.dims {
            return Err(Error::DimsMismatch);
        }
        Ok(())
    }

    fn with_body(&self, body: Body) -> AbstractValue {
        AbstractValue {
            tag: self.tag,
            dims: self.dims.clone(),
            body,
        }
    }

    /// Inclusion of concretizations.
    pub fn leq(&self, other: &AbstractValue) -> Result<bool> {
        self.check_compatible(other)?;
        let a = self.normalized();
        Ok(match (&a.body, &other.body) {
            (Body::Bottom, _) => true,
            (_, Body::Bottom) => false,
            (Body::Universe, Body::Universe) => true,
            (Body::Box(x), Body::Box(y)) => x.leq(y),
            (Body::Dbm(x), Body::Dbm(y)) => x.leq_closed(y),
            (Body::Poly(x), Body::Poly(y)) => poly::entails(x, y),
            _ => unreachable!("bodies follow the tag"),
        })
    }

    pub fn equivalent(&self, other: &AbstractValue) -> Result<bool> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// Least upper bound (closed convex hull for polyhedra).
    pub fn lub(&self, other: &AbstractValue) -> Result<AbstractValue> {
        self.check_compatible(other)?;
        let (a, b) = (self.normalized(), other.normalized());
        Ok(match (&a.body, &b.body) {
            (Body::Bottom, _) => b,
            (_, Body::Bottom) => a,
            (Body::Universe, Body::Universe) => a,
            (Body::Box(x), Body::Box(y)) => a.with_body(Body::Box(x.join(y))),
            (Body::Dbm(x), Body::Dbm(y)) => a.with_body(Body::Dbm(x.join_closed(y))),
            (Body::Poly(x), Body::Poly(y)) => a.with_body(Body::Poly(poly::hull(x, y, &a.dims)?)),
            _ => unreachable!("bodies follow the tag"),
        })
    }

    /// Greatest lower bound.
    pub fn meet(&self, other: &AbstractValue) -> Result<AbstractValue> {
        self.check_compatible(other)?;
        let body = match (&self.body, &other.body) {
            (Body::Bottom, _) | (_, Body::Bottom) => Body::Bottom,
            (Body::Universe, Body::Universe) => Body::Universe,
            (Body::Box(x), Body::Box(y)) => Body::Box(x.meet(y)),
            (Body::Dbm(x), Body::Dbm(y)) => match x.meet_raw(y).close() {
                Some(d) => Body::Dbm(d),
                None => Body::Bottom,
            },
            (Body::Poly(x), Body::Poly(y)) => {
                let both: Vec<AtomicConstraint> = x.iter().chain(y).cloned().collect();
                match poly::minimize(&both) {
                    Some(p) => Body::Poly(p),
                    None => Body::Bottom,
                }
            }
            _ => unreachable!("bodies follow the tag"),
        };
        Ok(self.with_body(body).normalized())
    }

    /// Widening: keeps the constraints of `self` that `other` satisfies.
    /// The result is above both arguments and increasing chains of the
    /// form `aₖ₊₁ = aₖ ∇ (aₖ ⊔ dₖ)` stabilize.
    pub fn widen(&self, other: &AbstractValue) -> Result<AbstractValue> {
        self.check_compatible(other)?;
        let b = other.normalized();
        if self.is_bottom() {
            return Ok(b);
        }
        Ok(match (&self.body, &b.body) {
            (_, Body::Bottom) => self.clone(),
            (Body::Universe, Body::Universe) => self.clone(),
            (Body::Box(x), Body::Box(y)) => self.with_body(Body::Box(x.widen(y))),
            (Body::Dbm(x), Body::Dbm(y)) => self.with_body(Body::Dbm(x.widen_with_closed(y))),
            (Body::Poly(x), Body::Poly(y)) => self.with_body(Body::Poly(poly::widen(x, y))),
            _ => unreachable!("bodies follow the tag"),
        })
    }

    /// Existential projection onto `keep`, which must be a subset of the
    /// dimensions; the result has dimensions in `keep` order.
    pub fn project(&self, keep: &[Var]) -> Result<AbstractValue> {
        let positions: Vec<usize> = keep
            .iter()
            .map(|v| self.dims.iter().position(|d| d == v).ok_or(Error::NotSubset))
            .collect::<Result<_>>()?;
        let a = self.normalized();
        let body = match &a.body {
            Body::Bottom => Body::Bottom,
            Body::Universe => Body::Universe,
            Body::Box(b) => Body::Box(b.select(&positions)),
            Body::Dbm(d) => Body::Dbm(d.select(&positions)),
            Body::Poly(p) => {
                let keepset: BTreeSet<Var> = keep.iter().copied().collect();
                let elim: BTreeSet<Var> = self.dims.iter().filter(|v| !keepset.contains(v)).copied().collect();
                match poly::eliminate(p, &elim)? {
                    Some(p) => Body::Poly(p),
                    None => Body::Bottom,
                }
            }
        };
        Ok(AbstractValue {
            tag: self.tag,
            dims: keep.to_vec(),
            body,
        })
    }

    /// The same value over new dimension variables, positionally.
    pub fn rename(&self, to: &[Var]) -> Result<AbstractValue> {
        if to.len() != self.dims.len() {
            return Err(Error::DimsMismatch);
        }
        let body = match &self.body {
            Body::Poly(p) => {
                let map = |v: Var| {
                    let k = self.dims.iter().position(|d| *d == v).expect("poly constraints range over dims");
                    to[k]
                };
                let renamed: Vec<AtomicConstraint> = p.iter().map(|a| a.rename(&map)).collect();
                Body::Poly(poly::minimize(&renamed).expect("renaming preserves satisfiability"))
            }
            other => other.clone(),
        };
        Ok(AbstractValue {
            tag: self.tag,
            dims: to.to_vec(),
            body,
        })
    }
}

impl fmt::Display for AbstractValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|v| v.to_string()).collect();
        let names = |v: Var| v.to_string();
        let c = self.to_constraint();
        let text = c.display_with(&names).to_string();
        write!(f, "{}[{}]: {}", self.tag, dims.join(","), text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{rat, Rel};

    fn x(i: u32) -> Var {
        Var(i)
    }

    fn le(terms: &[(u32, i64)], b: i64) -> AtomicConstraint {
        AtomicConstraint::new(terms.iter().map(|(v, c)| (x(*v), rat(*c))), Rel::Le, rat(b))
    }

    fn c(atoms: &[AtomicConstraint]) -> Constraint {
        Constraint::from_atoms(atoms.iter().cloned())
    }

    #[test]
    fn octagon_abstraction_of_triangle() {
        // x >= 0, y >= 0, x + 2y <= 4
        let t = c(&[le(&[(0, -1)], 0), le(&[(1, -1)], 0), le(&[(0, 1), (1, 2)], 4)]);
        let o = AbstractValue::alpha(DomainTag::Oct, &t, &[x(0), x(1)]).unwrap();
        let expect = c(&[
            le(&[(0, -1)], 0),
            le(&[(1, -1)], 0),
            le(&[(0, 1)], 4),
            le(&[(1, 1)], 2),
            le(&[(0, 1), (1, 1)], 4),
            le(&[(0, 1), (1, -1)], 4),
            le(&[(0, -1), (1, 1)], 2),
        ]);
        assert!(crate::lp::entails(&o.to_constraint(), &expect));
        assert!(crate::lp::entails(&expect, &o.to_constraint()));
    }

    #[test]
    fn universe_forgets_everything() {
        let t = c(&[le(&[(0, 1)], 0)]);
        let u = AbstractValue::alpha(DomainTag::Universe, &t, &[x(0)]).unwrap();
        assert!(u.to_constraint().is_true());
        let bad = c(&[le(&[(0, 1)], 0), le(&[(0, -1)], -1)]);
        assert!(AbstractValue::alpha(DomainTag::Universe, &bad, &[x(0)]).unwrap().is_bottom());
    }

    #[test]
    fn tag_and_dims_checks() {
        let a = AbstractValue::top(DomainTag::Box, &[x(0)]);
        let b = AbstractValue::top(DomainTag::Oct, &[x(0)]);
        assert_eq!(a.leq(&b), Err(Error::TagMismatch(DomainTag::Box, DomainTag::Oct)));
        let d = AbstractValue::top(DomainTag::Box, &[x(1)]);
        assert_eq!(a.lub(&d), Err(Error::DimsMismatch));
        assert_eq!(a.project(&[x(2)]), Err(Error::NotSubset));
        assert_eq!(
            AbstractValue::alpha(DomainTag::Box, &c(&[le(&[(3, 1)], 0)]), &[x(0)]),
            Err(Error::DimsNotCovered)
        );
    }

    #[test]
    fn widening_of_growing_interval_stabilizes() {
        for tag in DomainTag::ALL {
            let mut a = AbstractValue::alpha(tag, &c(&[le(&[(0, -1)], 0), le(&[(0, 1)], 0)]), &[x(0)]).unwrap();
            let mut steps = 0;
            for k in 1..20 {
                let d = AbstractValue::alpha(tag, &c(&[le(&[(0, -1)], 0), le(&[(0, 1)], k)]), &[x(0)]).unwrap();
                let next = a.widen(&a.lub(&d).unwrap()).unwrap();
                if next.equivalent(&a).unwrap() {
                    break;
                }
                a = next;
                steps += 1;
            }
            assert!(steps <= 2, "{tag}: {steps}");
        }
    }
}
