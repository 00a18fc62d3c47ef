//! Clause comparison up to variable and predicate renaming.

use std::collections::BTreeMap;

use hornpair::chc::{normalize_clause, Clause};
use hornpair::domains::{AbstractValue, DomainTag};
use hornpair::linear::Var;

/// Predicates of the head (`None` for `false`) and body, in order.
pub fn shape(c: &Clause) -> (Option<String>, Vec<String>) {
    (
        c.head.pred().map(str::to_string),
        c.body.iter().map(|a| a.pred.clone()).collect(),
    )
}

/// The argument variables of the head and the body atoms, in order.
pub fn interface(c: &Clause) -> Vec<Var> {
    c.head
        .atom()
        .into_iter()
        .chain(c.body.iter())
        .flat_map(|a| a.args.iter().copied())
        .collect()
}

/// The constraint of the normalized clause projected onto its interface,
/// with the `i`-th interface variable renamed to `Var(i)`.
pub fn interface_constraint(c: &Clause) -> AbstractValue {
    let c = &normalize_clause(c);
    let iface = interface(c);
    let mut map: BTreeMap<Var, Var> = BTreeMap::new();
    for (i, v) in iface.iter().enumerate() {
        assert!(map.insert(*v, Var(i as u32)).is_none(), "repeated interface variable");
    }
    let mut next = iface.len() as u32;
    for v in c.constraint.vars() {
        map.entry(v).or_insert_with(|| {
            next += 1;
            Var(next - 1)
        });
    }
    let renamed = c.constraint.rename(&|v| map[&v]);
    let keep: Vec<Var> = (0..iface.len() as u32).map(Var).collect();
    AbstractValue::abstract_onto(DomainTag::Poly, &renamed, &keep).expect("projection within the FM cap")
}

/// Same predicates (after `rename` on `a`'s names) in the same positions
/// and equivalent interface constraints.
pub fn same_clause(a: &Clause, b: &Clause, rename: &dyn Fn(&str) -> String) -> bool {
    let (ha, ba) = shape(a);
    let (hb, bb) = shape(b);
    if ha.map(|p| rename(&p)) != hb || ba.iter().map(|p| rename(p)).collect::<Vec<_>>() != bb {
        return false;
    }
    interface_constraint(a)
        .equivalent(&interface_constraint(b))
        .expect("same dimensions")
}
