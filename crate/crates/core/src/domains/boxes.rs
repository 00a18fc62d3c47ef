//! Interval vectors.

use num::One;

use crate::ext::Ext;
use crate::linear::{AtomicConstraint, LinExpr, Rat, Rel, Var};
use crate::lp::Region;

/// Per-variable `(sup xᵢ, sup −xᵢ)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Intervals {
    bounds: Vec<(Ext, Ext)>,
}

impl Intervals {
    pub fn top(vars: usize) -> Intervals {
        Intervals {
            bounds: vec![(Ext::Inf, Ext::Inf); vars],
        }
    }

    pub fn from_region(region: &Region, vars: &[Var]) -> Intervals {
        let bounds = vars
            .iter()
            .map(|v| {
                let up = region.sup(&LinExpr::var(*v)).unwrap_or(Ext::Inf);
                let down = region.sup_neg(&LinExpr::var(*v)).unwrap_or(Ext::Inf);
                (up, down)
            })
            .collect();
        Intervals { bounds }
    }

    pub fn bounds(&self) -> &[(Ext, Ext)] {
        &self.bounds
    }

    /// True iff some interval has its lower bound above its upper bound.
    pub fn is_empty(&self) -> bool {
        self.bounds.iter().any(|(u, d)| match (u, d) {
            (Ext::Finite(u), Ext::Finite(d)) => -d > *u,
            _ => false,
        })
    }

    pub fn leq(&self, other: &Intervals) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .all(|((u1, d1), (u2, d2))| u1 <= u2 && d1 <= d2)
    }

    pub fn join(&self, other: &Intervals) -> Intervals {
        self.zip_with(other, Ext::max_of)
    }

    pub fn meet(&self, other: &Intervals) -> Intervals {
        self.zip_with(other, Ext::min_of)
    }

    /// Keeps the bounds of `self` that `other` satisfies.
    pub fn widen(&self, other: &Intervals) -> Intervals {
        self.zip_with(other, |a, b| if b <= a { a.clone() } else { Ext::Inf })
    }

    fn zip_with(&self, other: &Intervals, f: impl Fn(&Ext, &Ext) -> Ext) -> Intervals {
        Intervals {
            bounds: self
                .bounds
                .iter()
                .zip(&other.bounds)
                .map(|((u1, d1), (u2, d2))| (f(u1, u2), f(d1, d2)))
                .collect(),
        }
    }

    pub fn select(&self, positions: &[usize]) -> Intervals {
        Intervals {
            bounds: positions.iter().map(|p| self.bounds[*p].clone()).collect(),
        }
    }

    pub fn constraints(&self, vars: &[Var]) -> Vec<AtomicConstraint> {
        let mut out = Vec::new();
        for (v, (up, down)) in vars.iter().zip(&self.bounds) {
            if let (Ext::Finite(u), Ext::Finite(d)) = (up, down) {
                if -d == *u {
                    out.push(AtomicConstraint::new([(*v, Rat::one())], Rel::Eq, u.clone()));
                    continue;
                }
            }
            if let Ext::Finite(u) = up {
                out.push(AtomicConstraint::new([(*v, Rat::one())], Rel::Le, u.clone()));
            }
            if let Ext::Finite(d) = down {
                out.push(AtomicConstraint::new([(*v, -Rat::one())], Rel::Le, d.clone()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{rat, Constraint};

    #[test]
    fn region_bounds() {
        let c = Constraint::from_atoms([
            AtomicConstraint::new([(Var(0), rat(1)), (Var(1), rat(1))], Rel::Le, rat(4)),
            AtomicConstraint::new([(Var(0), rat(-1))], Rel::Le, rat(0)),
            AtomicConstraint::new([(Var(1), rat(-1))], Rel::Le, rat(-1)),
        ]);
        let b = Intervals::from_region(&Region::new(&c), &[Var(0), Var(1)]);
        assert_eq!(b.bounds()[0], (Ext::Finite(rat(3)), Ext::Finite(rat(0))));
        assert_eq!(b.bounds()[1], (Ext::Finite(rat(4)), Ext::Finite(rat(-1))));
    }
}
