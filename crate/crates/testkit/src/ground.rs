//! Ground instances of a single clause over a small integer range.

use std::collections::BTreeSet;

use hornpair::chc::Clause;
use hornpair::linear::{AtomicConstraint, LinExpr, Rat, Var};
use num::Zero;

/// Argument tuples of the head (empty for `false`) followed by those of the
/// body atoms.
pub type Instance = Vec<Vec<i64>>;

/// Every instance of `c` with all variables in `lo..=hi` that satisfies the
/// constraint and the disequalities `e ≠ 0`.
pub fn ground_instances(c: &Clause, diseqs: &[LinExpr], lo: i64, hi: i64) -> BTreeSet<Instance> {
    let n = c.vars.len();
    // Each check runs once its largest variable is assigned.
    let mut atoms_at: Vec<Vec<&AtomicConstraint>> = vec![Vec::new(); n + 1];
    for a in c.constraint.atoms() {
        atoms_at[a.vars().map(|v| v.index() + 1).max().unwrap_or(0)].push(a);
    }
    let mut diseqs_at: Vec<Vec<&LinExpr>> = vec![Vec::new(); n + 1];
    for e in diseqs {
        diseqs_at[e.vars().map(|v| v.index() + 1).max().unwrap_or(0)].push(e);
    }
    let mut out = BTreeSet::new();
    if c.constraint.is_false_literal() {
        return out;
    }
    let mut value = vec![0i64; n];
    search(c, &atoms_at, &diseqs_at, lo, hi, 0, &mut value, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    c: &Clause,
    atoms_at: &[Vec<&AtomicConstraint>],
    diseqs_at: &[Vec<&LinExpr>],
    lo: i64,
    hi: i64,
    k: usize,
    value: &mut Vec<i64>,
    out: &mut BTreeSet<Instance>,
) {
    let ok = {
        let val = |v: Var| Rat::from_integer(value[v.index()].into());
        atoms_at[k].iter().all(|a| a.holds(&val)) && diseqs_at[k].iter().all(|e| !e.eval(&val).is_zero())
    };
    if !ok {
        return;
    }
    if k == value.len() {
        let tuple = |args: &[Var]| args.iter().map(|v| value[v.index()]).collect::<Vec<i64>>();
        let mut inst = vec![c.head.atom().map_or(Vec::new(), |a| tuple(&a.args))];
        inst.extend(c.body.iter().map(|a| tuple(&a.args)));
        out.insert(inst);
        return;
    }
    for x in lo..=hi {
        value[k] = x;
        search(c, atoms_at, diseqs_at, lo, hi, k + 1, value, out);
    }
}
