use std::collections::{BTreeMap, BTreeSet};

use crate::chc::clause::{Clause, Head};
use crate::chc::normalize::normalize_clause;
use crate::error::Error;
use crate::linear::Sort;
use crate::lp;

/// A set of constrained Horn clauses with its predicate signatures and the
/// provenance tag of each predicate (which source program it came from).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ChcSystem {
    pub clauses: Vec<Clause>,
    pub sigs: BTreeMap<String, Vec<Sort>>,
    pub provenance: BTreeMap<String, String>,
}

impl ChcSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, pred: impl Into<String>, sorts: Vec<Sort>) {
        self.sigs.insert(pred.into(), sorts);
    }

    /// Normalizes and appends a clause.
    pub fn push(&mut self, c: &Clause) {
        self.clauses.push(normalize_clause(c));
    }

    pub fn goals(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.is_goal())
    }

    pub fn definite(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.is_goal())
    }

    pub fn clauses_for<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| c.head.pred() == Some(pred))
    }

    /// Checks the signature invariants: every predicate is declared and
    /// used with its declared arity.
    pub fn validate(&self) -> Result<(), Error> {
        for c in &self.clauses {
            for a in c.head.atom().into_iter().chain(c.body.iter()) {
                match self.sigs.get(&a.pred) {
                    None => return Err(Error::UndeclaredPredicate(a.pred.clone())),
                    Some(s) if s.len() != a.args.len() => {
                        return Err(Error::ArityMismatch {
                            pred: a.pred.clone(),
                            expected: s.len(),
                            found: a.args.len(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Predicate dependency edges `head → body predicate`.
    pub fn dependencies(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut deps: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for p in self.sigs.keys() {
            deps.entry(p.clone()).or_default();
        }
        for c in &self.clauses {
            if let Some(h) = c.head.pred() {
                let e = deps.entry(h.to_string()).or_default();
                for a in &c.body {
                    e.insert(a.pred.clone());
                }
            }
        }
        deps
    }

    /// Predicates lying on a dependency cycle.
    pub fn recursive_predicates(&self) -> BTreeSet<String> {
        let deps = self.dependencies();
        deps.keys()
            .filter(|p| {
                let mut stack: Vec<&String> = deps[*p].iter().collect();
                let mut seen = BTreeSet::new();
                while let Some(q) = stack.pop() {
                    if q == *p {
                        return true;
                    }
                    if seen.insert(q) {
                        if let Some(next) = deps.get(q) {
                            stack.extend(next.iter());
                        }
                    }
                }
                false
            })
            .cloned()
            .collect()
    }

    /// Predicates reachable from `roots` through clause bodies.
    pub fn reachable_from<'a>(&self, roots: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
        let deps = self.dependencies();
        let mut seen = BTreeSet::new();
        let mut stack: Vec<String> = roots.into_iter().map(String::from).collect();
        while let Some(p) = stack.pop() {
            if seen.insert(p.clone()) {
                if let Some(next) = deps.get(&p) {
                    stack.extend(next.iter().cloned());
                }
            }
        }
        seen
    }

    /// Clauses with a non-false head, no body atoms and a satisfiable
    /// constraint.
    pub fn constrained_facts(&self) -> Vec<&Clause> {
        self.clauses
            .iter()
            .filter(|c| !c.is_goal() && c.body.is_empty() && lp::is_satisfiable(&c.constraint))
            .collect()
    }

    /// Removes clauses that cannot contribute to a derivation of `false`:
    /// clauses whose body uses a predicate without any defining clause
    /// (iterated to a fixpoint), then clauses for predicates unreachable
    /// from the goals. Signatures and provenance are trimmed to match.
    pub fn prune_useless(&mut self) {
        loop {
            let defined: BTreeSet<&str> = self.clauses.iter().filter_map(|c| c.head.pred()).collect();
            let before = self.clauses.len();
            let keep: Vec<bool> = self
                .clauses
                .iter()
                .map(|c| c.body.iter().all(|a| defined.contains(a.pred.as_str())))
                .collect();
            let mut it = keep.into_iter();
            self.clauses.retain(|_| it.next().unwrap());
            if self.clauses.len() == before {
                break;
            }
        }
        let roots: BTreeSet<String> = self
            .goals()
            .flat_map(|g| g.body.iter().map(|a| a.pred.clone()))
            .collect();
        let live = self.reachable_from(roots.iter().map(String::as_str));
        self.clauses.retain(|c| match &c.head {
            Head::False => true,
            Head::Atom(a) => live.contains(&a.pred),
        });
        self.sigs.retain(|p, _| live.contains(p));
        self.provenance.retain(|p, _| live.contains(p));
    }

    /// Provenance tag of a predicate: the declared group, or else the
    /// position of the first goal atom from which it is reachable.
    pub fn provenance_tags(&self) -> BTreeMap<String, String> {
        let mut tags = self.provenance.clone();
        for g in self.goals() {
            for (i, a) in g.body.iter().enumerate() {
                for p in self.reachable_from([a.pred.as_str()]) {
                    tags.entry(p).or_insert_with(|| format!("arg{i}"));
                }
            }
        }
        tags
    }
}
