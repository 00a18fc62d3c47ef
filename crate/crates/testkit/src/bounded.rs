//! Least model of a clause set when every variable ranges over a small
//! integer interval. Brute force with equality propagation, solving the
//! independent parts of each clause body separately.

use std::collections::{BTreeMap, BTreeSet};

use hornpair::chc::{Atom, ChcSystem, Clause};
use hornpair::linear::{AtomicConstraint, Rat, Rel};
use num::{Integer, ToPrimitive};

pub type Model = BTreeMap<String, BTreeSet<Vec<i64>>>;

/// Integer-scaled `Σ cᵢ·x_{vᵢ} rel b`.
struct Row {
    terms: Vec<(usize, i64)>,
    eq: bool,
    bound: i64,
}

fn int_row(a: &AtomicConstraint) -> Row {
    let mut den = num::BigInt::from(1);
    for r in a.coeffs().values().chain(std::iter::once(a.bound())) {
        den = den.lcm(r.denom());
    }
    let k = Rat::from_integer(den);
    let int = |r: &Rat| (r * &k).to_integer().to_i64().expect("small coefficients");
    Row {
        terms: a.coeffs().iter().map(|(v, c)| (v.index(), int(c))).collect(),
        eq: a.rel() == Rel::Eq,
        bound: int(a.bound()),
    }
}

fn row_ok(r: &Row, a: &[Option<i64>]) -> Option<bool> {
    let mut s = 0i64;
    for (v, c) in &r.terms {
        s += c * a[*v]?;
    }
    Some(if r.eq { s == r.bound } else { s <= r.bound })
}

/// Rows and body atoms sharing no variable with the rest of the clause
/// body, plus the head variables among them.
#[derive(Default)]
struct Part<'a> {
    rows: Vec<&'a Row>,
    atoms: Vec<&'a Atom>,
    /// Head variables of the part, in the order results are reported.
    report: Vec<usize>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

/// Every head variable lands in exactly one part; the head itself links
/// nothing.
fn split<'a>(c: &'a Clause, rows: &'a [Row], nvars: usize) -> Vec<Part<'a>> {
    let mut parent: Vec<usize> = (0..nvars).collect();
    let groups = rows
        .iter()
        .map(|r| r.terms.iter().map(|(v, _)| *v).collect::<Vec<_>>())
        .chain(c.body.iter().map(|a| a.args.iter().map(|v| v.index()).collect()));
    for g in groups {
        for w in g.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    // Ground rows and nullary atoms get parts of their own.
    let mut parts: BTreeMap<usize, Part> = BTreeMap::new();
    for r in rows {
        let root = r.terms.first().map_or(usize::MAX, |(v, _)| find(&mut parent, *v));
        parts.entry(root).or_default().rows.push(r);
    }
    for a in &c.body {
        let root = a.args.first().map_or(usize::MAX - 1, |v| find(&mut parent, v.index()));
        parts.entry(root).or_default().atoms.push(a);
    }
    for v in c.head.atom().into_iter().flat_map(|h| h.args.iter().map(|v| v.index())) {
        let p = parts.entry(find(&mut parent, v)).or_default();
        if !p.report.contains(&v) {
            p.report.push(v);
        }
    }
    parts.into_values().collect()
}

struct Search<'a> {
    part: &'a Part<'a>,
    lo: i64,
    hi: i64,
    /// Variables some row mentions.
    constrained: Vec<bool>,
    /// Per body atom, the argument positions whose values matter: those in
    /// a row, the head, or another atom.
    relevant: Vec<Vec<usize>>,
    /// Per body atom, its model tuples restricted to `relevant`.
    projected: Vec<BTreeSet<Vec<i64>>>,
}

impl<'a> Search<'a> {
    fn new(part: &'a Part<'a>, model: &Model, nvars: usize, lo: i64, hi: i64) -> Self {
        let mut constrained = vec![false; nvars];
        for r in &part.rows {
            for (v, _) in &r.terms {
                constrained[*v] = true;
            }
        }
        let mut uses = vec![0usize; nvars];
        for atom in &part.atoms {
            for v in &atom.args {
                uses[v.index()] += 1;
            }
        }
        let relevant: Vec<Vec<usize>> = part
            .atoms
            .iter()
            .map(|atom| {
                (0..atom.args.len())
                    .filter(|i| {
                        let v = atom.args[*i].index();
                        constrained[v] || part.report.contains(&v) || uses[v] > 1
                    })
                    .collect()
            })
            .collect();
        let projected = part
            .atoms
            .iter()
            .zip(&relevant)
            .map(|(atom, positions)| {
                model.get(&atom.pred).map_or_else(BTreeSet::new, |tuples| {
                    tuples.iter().map(|t| positions.iter().map(|i| t[*i]).collect()).collect()
                })
            })
            .collect();
        Search {
            part,
            lo,
            hi,
            constrained,
            relevant,
            projected,
        }
    }

    fn consistent(&self, a: &[Option<i64>]) -> bool {
        self.part.rows.iter().all(|r| row_ok(r, a) != Some(false))
    }

    /// Values of the reported variables that have a witness; only the
    /// first one when `first`.
    fn solutions(&self, nvars: usize, first: bool) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        let mut a = vec![None; nvars];
        self.atoms(0, &mut a, &mut |a| {
            out.insert(self.part.report.iter().map(|v| a[*v].unwrap()).collect());
            first
        });
        out
    }

    /// Matches body atoms against the model, then the reported variables.
    /// `emit` returns true to stop.
    fn atoms(&self, k: usize, a: &mut Vec<Option<i64>>, emit: &mut dyn FnMut(&[Option<i64>]) -> bool) -> bool {
        if k == self.part.atoms.len() {
            return self.reported(a, emit);
        }
        let atom = self.part.atoms[k];
        for t in &self.projected[k] {
            let saved = a.clone();
            let mut ok = true;
            for (i, x) in self.relevant[k].iter().zip(t) {
                let v = atom.args[*i].index();
                match a[v] {
                    Some(y) if y != *x => {
                        ok = false;
                        break;
                    }
                    _ => a[v] = Some(*x),
                }
            }
            if ok && self.consistent(a) && self.atoms(k + 1, a, emit) {
                return true;
            }
            *a = saved;
        }
        false
    }

    /// Assigns single-unknown equalities. False on a conflict.
    fn propagate(&self, a: &mut [Option<i64>]) -> bool {
        loop {
            let mut progress = false;
            for r in self.part.rows.iter().filter(|r| r.eq) {
                let mut unknown = r.terms.iter().filter(|(v, _)| a[*v].is_none());
                let (Some(&(v, c)), None) = (unknown.next(), unknown.next()) else {
                    continue;
                };
                let known: i64 = r.terms.iter().filter_map(|(w, d)| a[*w].map(|x| x * d)).sum();
                let rhs = r.bound - known;
                if rhs % c != 0 || !(self.lo..=self.hi).contains(&(rhs / c)) {
                    return false;
                }
                a[v] = Some(rhs / c);
                progress = true;
            }
            if !progress {
                return true;
            }
            if !self.consistent(a) {
                return false;
            }
        }
    }

    fn reported(&self, a: &mut Vec<Option<i64>>, emit: &mut dyn FnMut(&[Option<i64>]) -> bool) -> bool {
        let saved = a.clone();
        let stop = self.propagate(a)
            && match self.part.report.iter().copied().find(|v| a[*v].is_none()) {
                Some(v) => (self.lo..=self.hi).any(|x| {
                    let before = a.clone();
                    a[v] = Some(x);
                    let stop = self.consistent(a) && self.reported(a, emit);
                    *a = before;
                    stop
                }),
                None => self.witness(a) && emit(a),
            };
        *a = saved;
        stop
    }

    /// Can the constrained unassigned variables be completed?
    fn witness(&self, a: &mut Vec<Option<i64>>) -> bool {
        let saved = a.clone();
        let found = self.propagate(a)
            && match (0..a.len()).find(|v| a[*v].is_none() && self.constrained[*v]) {
                None => self.consistent(a),
                Some(v) => (self.lo..=self.hi).any(|x| {
                    let before = a.clone();
                    a[v] = Some(x);
                    let ok = self.consistent(a) && self.witness(a);
                    *a = before;
                    ok
                }),
            };
        *a = saved;
        found
    }
}

struct Prepared<'a> {
    clause: &'a Clause,
    rows: Vec<Row>,
    nvars: usize,
}

impl Prepared<'_> {
    /// Head tuples derivable from `model`; for a goal, `{[]}` when it fires.
    fn derive(&self, model: &Model, lo: i64, hi: i64) -> BTreeSet<Vec<i64>> {
        if self.clause.constraint.is_false_literal() {
            return BTreeSet::new();
        }
        let parts = split(self.clause, &self.rows, self.nvars);
        let mut per_part = Vec::with_capacity(parts.len());
        for p in &parts {
            let sols = Search::new(p, model, self.nvars, lo, hi).solutions(self.nvars, p.report.is_empty());
            if sols.is_empty() {
                return BTreeSet::new();
            }
            per_part.push(sols);
        }
        let Some(head) = self.clause.head.atom() else {
            return BTreeSet::from([Vec::new()]);
        };
        let mut out = BTreeSet::new();
        product(&parts, &per_part, &mut BTreeMap::new(), &mut |value| {
            out.insert(head.args.iter().map(|v| value[&v.index()]).collect());
        });
        out
    }
}

/// Every combination of one solution per part.
fn product(
    parts: &[Part],
    sols: &[BTreeSet<Vec<i64>>],
    value: &mut BTreeMap<usize, i64>,
    emit: &mut dyn FnMut(&BTreeMap<usize, i64>),
) {
    let Some((part, rest)) = parts.split_first() else {
        emit(value);
        return;
    };
    for s in &sols[0] {
        for (v, x) in part.report.iter().zip(s) {
            value.insert(*v, *x);
        }
        product(rest, &sols[1..], value, emit);
    }
}

fn prepare(c: &Clause) -> Prepared<'_> {
    let nvars = c
        .occurring_vars()
        .iter()
        .map(|v| v.index() + 1)
        .max()
        .unwrap_or(0)
        .max(c.vars.len());
    Prepared {
        clause: c,
        rows: c.constraint.atoms().iter().map(int_row).collect(),
        nvars,
    }
}

/// Least model restricted to values in `lo..=hi`, and whether some goal
/// clause has a solution in it.
pub fn bounded_least_model(s: &ChcSystem, lo: i64, hi: i64) -> (Model, bool) {
    let prepared: Vec<Prepared> = s.clauses.iter().map(prepare).collect();
    let mut model: Model = BTreeMap::new();
    loop {
        let mut changed = false;
        for p in prepared.iter().filter(|p| !p.clause.is_goal()) {
            let found = p.derive(&model, lo, hi);
            let head = p.clause.head.atom().unwrap();
            let entry = model.entry(head.pred.clone()).or_default();
            for t in found {
                changed |= entry.insert(t);
            }
        }
        if !changed {
            break;
        }
    }
    let unsafe_goal = prepared
        .iter()
        .filter(|p| p.clause.is_goal())
        .any(|p| !p.derive(&model, lo, hi).is_empty());
    (model, unsafe_goal)
}

/// Is `false` derivable when all variables range over `lo..=hi`?
pub fn derives_false(s: &ChcSystem, lo: i64, hi: i64) -> bool {
    bounded_least_model(s, lo, hi).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use hornpair::chc::parse_clp;

    #[test]
    fn counts_to_three() {
        let s = parse_clp("p(X) :- X = 0.\np(Y) :- Y = X + 1, p(X).\nfalse :- X >= 3, p(X).").unwrap();
        let (m, bad) = bounded_least_model(&s, 0, 3);
        assert_eq!(m["p"].len(), 4);
        assert!(bad);
        let s = parse_clp("p(X) :- X = 0.\np(Y) :- Y = X + 2, p(X).\nfalse :- X = 1, p(X).").unwrap();
        assert!(!derives_false(&s, 0, 3));
    }

    #[test]
    fn existential_variables_range_too() {
        // Needs Z = 5, outside the range.
        let s = parse_clp("p(X) :- X = 1, Z = X + 4.\nfalse :- p(X).").unwrap();
        assert!(!derives_false(&s, 0, 3));
    }

    #[test]
    fn independent_parts_multiply() {
        let s = parse_clp("q(X) :- X =< 1.\np(X,Y) :- Y >= 3, q(Z).\nfalse :- p(X,Y), X = 2.").unwrap();
        let (m, bad) = bounded_least_model(&s, 0, 3);
        assert_eq!(m["p"].len(), 4);
        assert!(bad);
        let s = parse_clp(":- pred q(int).\np(X,Y) :- Y >= 3, q(Z).\nfalse :- p(X,Y).").unwrap();
        assert!(!derives_false(&s, 0, 3));
    }
}
