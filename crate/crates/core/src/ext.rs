//! Upper bounds in ℚ ∪ {+∞}. Arithmetic is total with `+∞` absorbing.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::linear::{fmt_rat, Rat};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Ext {
    Finite(Rat),
    Inf,
}

impl Ext {
    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Ext::Finite(r) => Some(r),
            Ext::Inf => None,
        }
    }

    pub fn half(&self) -> Ext {
        match self {
            Ext::Finite(r) => Ext::Finite(r / Rat::from_integer(2.into())),
            Ext::Inf => Ext::Inf,
        }
    }

    pub fn double(&self) -> Ext {
        match self {
            Ext::Finite(r) => Ext::Finite(r + r),
            Ext::Inf => Ext::Inf,
        }
    }

    pub fn min_of(a: &Ext, b: &Ext) -> Ext {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &Ext, b: &Ext) -> Ext {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl From<Rat> for Ext {
    fn from(r: Rat) -> Self {
        Ext::Finite(r)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.cmp(b),
            (Ext::Finite(_), Ext::Inf) => Ordering::Less,
            (Ext::Inf, Ext::Finite(_)) => Ordering::Greater,
            (Ext::Inf, Ext::Inf) => Ordering::Equal,
        }
    }
}

impl Add for &Ext {
    type Output = Ext;

    fn add(self, rhs: &Ext) -> Ext {
        match (self, rhs) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            _ => Ext::Inf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(r) => write!(f, "{}", fmt_rat(r)),
            Ext::Inf => write!(f, "+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rat;

    #[test]
    fn infinity_absorbs_and_orders_last() {
        let one = Ext::Finite(rat(1));
        assert_eq!(&one + &Ext::Inf, Ext::Inf);
        assert_eq!(&one + &one, Ext::Finite(rat(2)));
        assert!(one < Ext::Inf);
        assert_eq!(Ext::min_of(&one, &Ext::Inf), one);
        assert_eq!(Ext::Inf.half(), Ext::Inf);
    }
}
