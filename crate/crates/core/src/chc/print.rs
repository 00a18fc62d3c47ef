//! CLP-syntax printer; its output is accepted by [`parse_clp`](super::parse_clp).

use std::fmt::{self, Write as _};

use num::{One, Signed, Zero};

use crate::chc::clause::{Atom, Clause, Head};
use crate::chc::system::ChcSystem;
use crate::linear::{fmt_rat, AtomicConstraint, Rel, Sort, Var};

pub(crate) fn write_clause(f: &mut fmt::Formatter<'_>, c: &Clause) -> fmt::Result {
    f.write_str(&clause_to_string(c))
}

pub fn clause_to_string(c: &Clause) -> String {
    let names = c.printable_names();
    let name = |v: Var| names.get(v.index()).cloned().unwrap_or_else(|| format!("V{}", v.0));
    let mut s = String::new();
    match &c.head {
        Head::False => s.push_str("false"),
        Head::Atom(a) => write_atom(&mut s, a, &name),
    }
    s.push_str(" :- ");
    let mut items: Vec<String> = Vec::new();
    if c.constraint.is_false_literal() {
        items.push("false".into());
    }
    for a in c.constraint.atoms() {
        items.push(atomic_to_string(a, &name));
    }
    for a in &c.body {
        let mut t = String::new();
        write_atom(&mut t, a, &name);
        items.push(t);
    }
    if items.is_empty() {
        items.push("true".into());
    }
    s.push_str(&items.join(", "));
    s.push('.');
    s
}

fn write_atom(s: &mut String, a: &Atom, name: &impl Fn(Var) -> String) {
    s.push_str(&a.pred);
    if !a.args.is_empty() {
        s.push('(');
        for (i, v) in a.args.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&name(*v));
        }
        s.push(')');
    }
}

fn atomic_to_string(a: &AtomicConstraint, name: &impl Fn(Var) -> String) -> String {
    // `X = Y` reads better than `X - Y = 0`.
    if a.rel() == Rel::Eq && a.bound().is_zero() && a.coeffs().len() == 2 {
        let mut it = a.coeffs().iter();
        let (v1, c1) = it.next().unwrap();
        let (v2, c2) = it.next().unwrap();
        if c1.is_one() && (-c2).is_one() {
            return format!("{} = {}", name(*v1), name(*v2));
        }
    }
    let mut s = String::new();
    for (i, (v, c)) in a.coeffs().iter().enumerate() {
        let mag = c.abs();
        match (i, c.is_negative()) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if mag.is_one() {
            s.push_str(&name(*v));
        } else {
            let _ = write!(s, "{}*{}", fmt_rat(&mag), name(*v));
        }
    }
    let op = match a.rel() {
        Rel::Le => "=<",
        Rel::Eq => "=",
    };
    let _ = write!(s, " {op} {}", fmt_rat(a.bound()));
    s
}

/// Prints a whole system: group directives, signatures, then clauses.
pub fn system_to_string(s: &ChcSystem) -> String {
    let mut out = String::new();
    let mut groups: std::collections::BTreeMap<&str, Vec<&str>> = Default::default();
    for (p, g) in &s.provenance {
        groups.entry(g.as_str()).or_default().push(p);
    }
    for preds in groups.values() {
        let _ = writeln!(out, "%% group {}", preds.join(" "));
    }
    for (p, sorts) in &s.sigs {
        if sorts.is_empty() {
            let _ = writeln!(out, ":- pred {p}.");
        } else {
            let ss: Vec<&str> = sorts.iter().map(|s: &Sort| s.name()).collect();
            let _ = writeln!(out, ":- pred {p}({}).", ss.join(","));
        }
    }
    for c in &s.clauses {
        out.push_str(&clause_to_string(c));
        out.push('\n');
    }
    out
}
