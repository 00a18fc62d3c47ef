//! SMT-LIB 2.6 emitter for the HORN logic.

use std::fmt::Write as _;

use num::{BigInt, Integer, One, Signed};

use crate::chc::clause::{Atom, Clause, Head};
use crate::chc::system::ChcSystem;
use crate::linear::{AtomicConstraint, Rat, Rel, Sort, Var};

/// Renders `s` as a HORN script: one `declare-fun` per predicate (sorted by
/// name), one universally quantified implication per clause in input order,
/// then `(check-sat)`.
pub fn emit_smtlib(s: &ChcSystem) -> String {
    let mut out = String::from("(set-logic HORN)\n");
    for (p, sorts) in &s.sigs {
        let ss: Vec<&str> = sorts.iter().map(|s| smt_sort(*s)).collect();
        let _ = writeln!(out, "(declare-fun {} ({}) Bool)", symbol(p), ss.join(" "));
    }
    for c in &s.clauses {
        let _ = writeln!(out, "(assert {})", clause_formula(c));
    }
    out.push_str("(check-sat)\n");
    out
}

fn smt_sort(s: Sort) -> &'static str {
    match s {
        Sort::Int => "Int",
        Sort::Real => "Real",
    }
}

fn symbol(name: &str) -> String {
    let simple = name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c))
        && !name.chars().next().is_some_and(|c| c.is_ascii_digit());
    if simple {
        name.to_string()
    } else {
        format!("|{}|", name.replace('|', "_"))
    }
}

fn clause_formula(c: &Clause) -> String {
    let names = c.printable_names();
    let name = |v: Var| names[v.index()].clone();
    let vars = c.occurring_vars();
    let mut premises: Vec<String> = Vec::new();
    if c.constraint.is_false_literal() {
        premises.push("false".into());
    }
    for a in c.constraint.atoms() {
        premises.push(atomic(c, a, &name));
    }
    for a in &c.body {
        premises.push(atom(a, &name));
    }
    let premise = match premises.len() {
        0 => "true".to_string(),
        1 => premises.pop().unwrap(),
        _ => format!("(and {})", premises.join(" ")),
    };
    let conclusion = match &c.head {
        Head::False => "false".to_string(),
        Head::Atom(a) => atom(a, &name),
    };
    let body = format!("(=> {premise} {conclusion})");
    if vars.is_empty() {
        return body;
    }
    let binders: Vec<String> = vars
        .iter()
        .map(|v| format!("({} {})", name(*v), smt_sort(c.sort_of(*v))))
        .collect();
    format!("(forall ({}) {})", binders.join(" "), body)
}

fn atom(a: &Atom, name: &impl Fn(Var) -> String) -> String {
    if a.args.is_empty() {
        return symbol(&a.pred);
    }
    let args: Vec<String> = a.args.iter().map(|v| name(*v)).collect();
    format!("({} {})", symbol(&a.pred), args.join(" "))
}

/// Integer-scaled so Int-sorted terms never need division.
fn atomic(c: &Clause, a: &AtomicConstraint, name: &impl Fn(Var) -> String) -> String {
    let real = a.vars().any(|v| c.sort_of(v) == Sort::Real);
    let mut den = BigInt::one();
    for r in a.coeffs().values().chain(std::iter::once(a.bound())) {
        den = den.lcm(r.denom());
    }
    let k = Rat::from_integer(den);
    let lit = |r: &Rat| -> String {
        let n = (r * &k).to_integer();
        let digits = if real { format!("{}.0", n.abs()) } else { n.abs().to_string() };
        if n.is_negative() {
            format!("(- {digits})")
        } else {
            digits
        }
    };
    let terms: Vec<String> = a
        .coeffs()
        .iter()
        .map(|(v, coef)| {
            let scaled = coef * &k;
            if scaled.is_one() {
                name(*v)
            } else if (-&scaled).is_one() {
                format!("(- {})", name(*v))
            } else {
                format!("(* {} {})", lit(coef), name(*v))
            }
        })
        .collect();
    let lhs = if terms.len() == 1 {
        terms[0].clone()
    } else {
        format!("(+ {})", terms.join(" "))
    };
    let op = match a.rel() {
        Rel::Le => "<=",
        Rel::Eq => "=",
    };
    format!("({op} {lhs} {})", lit(a.bound()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chc::parse::parse_clp;

    #[test]
    fn single_fact() {
        let s = parse_clp("p(X) :- X =< 0.").unwrap();
        assert_eq!(
            emit_smtlib(&s),
            "(set-logic HORN)\n(declare-fun p (Int) Bool)\n(assert (forall ((X Int)) (=> (<= X 0) (p X))))\n(check-sat)\n"
        );
    }

    #[test]
    fn empty_system() {
        assert_eq!(emit_smtlib(&ChcSystem::new()), "(set-logic HORN)\n(check-sat)\n");
    }

    #[test]
    fn goal_and_rational_coefficients() {
        let s = parse_clp("false :- X/2 - Y =< -1/3, p(X,Y).\np(X,Y) :- true.").unwrap();
        let out = emit_smtlib(&s);
        assert!(out.contains("(assert (forall ((X Int) (Y Int)) (=> (and (<= (+ (* 3 X) (* (- 6) Y)) (- 2)) (p X Y)) false)))"), "{out}");
    }
}
