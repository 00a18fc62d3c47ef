//! Dense Fourier–Motzkin over ℚ: suprema, emptiness and projection by
//! brute-force elimination. Exponential, for small systems only.

use std::collections::BTreeMap;

use hornpair::linear::{AtomicConstraint, Constraint, Rat, Rel, Var};
use num::{One, Signed, Zero};

/// Rows `a·x ≤ b` over `n` columns.
#[derive(Clone, Debug)]
pub struct DenseSystem {
    pub n: usize,
    pub rows: Vec<(Vec<Rat>, Rat)>,
    /// Set by a `false` literal.
    pub falsum: bool,
}

impl DenseSystem {
    /// Columns follow `vars`; every variable of `c` must be listed.
    pub fn from_constraint(c: &Constraint, vars: &[Var]) -> DenseSystem {
        let mut rows = Vec::new();
        for a in c.atoms() {
            let mut halves = vec![(a.clone(), Rat::one())];
            if a.rel() == Rel::Eq {
                halves.push((a.clone(), -Rat::one()));
            }
            for (h, sign) in halves {
                let coeffs = vars.iter().map(|v| h.coeff(*v) * &sign).collect();
                rows.push((coeffs, h.bound() * &sign));
            }
        }
        DenseSystem {
            n: vars.len(),
            rows,
            falsum: c.is_false_literal(),
        }
    }

    /// Removes column `k` (the remaining columns keep their order).
    pub fn eliminate(&self, k: usize) -> DenseSystem {
        // Tightest bound per normalized direction.
        let mut out: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
        let mut insert = |(a, b): (Vec<Rat>, Rat)| match out.get(&a) {
            Some(old) if *old <= b => {}
            _ => {
                out.insert(a, b);
            }
        };
        let drop = |r: &Vec<Rat>| -> Vec<Rat> { r.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect() };
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (a, b) in &self.rows {
            if a[k].is_positive() {
                pos.push((a, b));
            } else if a[k].is_negative() {
                neg.push((a, b));
            } else {
                insert(scale(drop(a), b.clone()));
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                let cp = pa[k].clone();
                let cn = -na[k].clone();
                let a: Vec<Rat> = pa.iter().zip(na.iter()).map(|(x, y)| x * &cn + y * &cp).collect();
                let b = *pb * &cn + *nb * &cp;
                insert(scale(drop(&a), b));
            }
        }
        DenseSystem {
            n: self.n - 1,
            rows: out.into_iter().collect(),
            falsum: self.falsum,
        }
    }

    pub fn is_empty(&self) -> bool {
        let mut s = self.clone();
        while s.n > 0 {
            s = s.eliminate(s.n - 1);
        }
        s.falsum || s.rows.iter().any(|(_, b)| b.is_negative())
    }

    /// `None` when empty, `Some(None)` when unbounded.
    pub fn sup(&self, obj: &[Rat]) -> Option<Option<Rat>> {
        // Extra column t with obj·x − t = 0, then eliminate x.
        let mut rows: Vec<(Vec<Rat>, Rat)> = self
            .rows
            .iter()
            .map(|(a, b)| {
                let mut a = a.clone();
                a.push(Rat::zero());
                (a, b.clone())
            })
            .collect();
        let mut eq: Vec<Rat> = obj.to_vec();
        eq.push(-Rat::one());
        rows.push((eq.clone(), Rat::zero()));
        rows.push((eq.iter().map(|x| -x.clone()).collect(), Rat::zero()));
        let mut s = DenseSystem {
            n: self.n + 1,
            rows,
            falsum: self.falsum,
        };
        while s.n > 1 {
            s = s.eliminate(0);
        }
        if s.falsum {
            return None;
        }
        let mut best: Option<Rat> = None;
        for (a, b) in &s.rows {
            let c = &a[0];
            if c.is_zero() {
                if b.is_negative() {
                    return None;
                }
            } else if c.is_positive() {
                let v = b / c;
                best = Some(match best {
                    Some(cur) if cur <= v => cur,
                    _ => v,
                });
            }
        }
        // Lower bounds above the upper bound mean emptiness.
        for (a, b) in &s.rows {
            let c = &a[0];
            if c.is_negative() {
                let lo = b / c;
                if let Some(up) = &best {
                    if &lo > up {
                        return None;
                    }
                }
            }
        }
        Some(best)
    }

    /// Does the system imply `a`? Columns follow `vars`.
    pub fn entails(&self, a: &AtomicConstraint, vars: &[Var]) -> bool {
        let halves = if a.rel() == Rel::Eq {
            vec![(Rat::one(), a.bound().clone()), (-Rat::one(), -a.bound().clone())]
        } else {
            vec![(Rat::one(), a.bound().clone())]
        };
        halves.into_iter().all(|(sign, bound)| {
            let obj: Vec<Rat> = vars.iter().map(|v| a.coeff(*v) * &sign).collect();
            match self.sup(&obj) {
                None => true,
                Some(None) => false,
                Some(Some(v)) => v <= bound,
            }
        })
    }

    /// Keeps columns `keep` (indices, ascending) by eliminating the rest.
    pub fn project(&self, keep: &[usize]) -> DenseSystem {
        let mut s = self.clone();
        for k in (0..self.n).rev() {
            if !keep.contains(&k) {
                s = s.eliminate(k);
            }
        }
        s
    }

    /// As a constraint over `vars` (one per remaining column).
    pub fn to_constraint(&self, vars: &[Var]) -> Constraint {
        if self.falsum {
            return Constraint::falsity();
        }
        Constraint::from_atoms(
            self.rows
                .iter()
                .map(|(a, b)| AtomicConstraint::new(vars.iter().copied().zip(a.iter().cloned()), Rel::Le, b.clone())),
        )
    }
}

/// Divides by the largest absolute coefficient so duplicates coincide.
fn scale(a: Vec<Rat>, b: Rat) -> (Vec<Rat>, Rat) {
    let m = a.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero);
    if m.is_zero() {
        let b = if b.is_negative() { -Rat::one() } else { Rat::zero() };
        return (a, b);
    }
    (a.iter().map(|x| x / &m).collect(), b / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hornpair::linear::rat;

    #[test]
    fn triangle() {
        let v = [Var(0), Var(1)];
        let c = Constraint::from_atoms([
            AtomicConstraint::new([(v[0], rat(-1))], Rel::Le, rat(0)),
            AtomicConstraint::new([(v[1], rat(-1))], Rel::Le, rat(0)),
            AtomicConstraint::new([(v[0], rat(1)), (v[1], rat(2))], Rel::Le, rat(4)),
        ]);
        let s = DenseSystem::from_constraint(&c, &v);
        assert_eq!(s.sup(&[rat(1), rat(1)]), Some(Some(rat(4))));
        assert_eq!(s.sup(&[rat(-1), rat(1)]), Some(Some(rat(2))));
        assert_eq!(s.sup(&[rat(-1), rat(-1)]), Some(Some(rat(0))));
        assert!(!s.is_empty());
        let mut bad = c.clone();
        bad.push(AtomicConstraint::new([(v[0], rat(1))], Rel::Le, rat(-1)));
        assert!(DenseSystem::from_constraint(&bad, &v).is_empty());
        let open = Constraint::from_atoms([AtomicConstraint::new([(v[0], rat(-1))], Rel::Le, rat(0))]);
        assert_eq!(DenseSystem::from_constraint(&open, &v).sup(&[rat(1), rat(0)]), Some(None));
    }
}
