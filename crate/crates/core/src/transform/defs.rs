//! The tree of definitions introduced by a strategy run.

use std::collections::BTreeMap;

use crate::chc::{Atom, Clause};
use crate::domains::AbstractValue;
use crate::error::Result;

/// `newp(V) ← value, G` where `V` lists the variables of `G` in canonical
/// order and `value` ranges over local variables `0..|V|`.
#[derive(Clone, Debug)]
pub struct Definition {
    pub pred: String,
    /// Predicate names of `G` in canonical order.
    pub key: Vec<String>,
    pub value: AbstractValue,
    pub clause: Clause,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub clause: Clause,
    /// `None` for goal roots.
    pub def: Option<Definition>,
    pub parent: Option<usize>,
}

/// A forest rooted at the goal clauses.
#[derive(Clone, Debug, Default)]
pub struct DefsTree {
    nodes: Vec<Node>,
    by_key: BTreeMap<Vec<String>, Vec<usize>>,
}

impl DefsTree {
    pub fn add_root(&mut self, clause: Clause) -> usize {
        self.nodes.push(Node {
            clause,
            def: None,
            parent: None,
        });
        self.nodes.len() - 1
    }

    pub fn add_child(&mut self, parent: usize, def: Definition) -> usize {
        let id = self.nodes.len();
        self.by_key.entry(def.key.clone()).or_default().push(id);
        self.nodes.push(Node {
            clause: def.clause.clone(),
            def: Some(def),
            parent: Some(parent),
        });
        id
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    /// `id` and its ancestors, nearest first.
    pub fn ancestors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(Some(id), move |i| self.nodes[*i].parent)
    }

    pub fn definitions(&self) -> impl Iterator<Item = &Definition> {
        self.nodes.iter().filter_map(|n| n.def.as_ref())
    }

    pub fn definition_count(&self) -> usize {
        self.by_key.values().map(Vec::len).sum()
    }

    pub fn with_key(&self, key: &[String]) -> impl Iterator<Item = &Definition> {
        self.by_key
            .get(key)
            .into_iter()
            .flatten()
            .filter_map(|i| self.nodes[*i].def.as_ref())
    }

    /// The oldest definition for `key` whose constraint contains `value`.
    pub fn lookup(&self, key: &[String], value: &AbstractValue) -> Result<Option<&Definition>> {
        for d in self.with_key(key) {
            if value.leq(&d.value)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// Nearest definition for `key` on the path from `id` to its root.
    pub fn nearest_ancestor(&self, id: usize, key: &[String]) -> Option<&Definition> {
        self.ancestors(id)
            .filter_map(|i| self.nodes[i].def.as_ref())
            .find(|d| d.key == key)
    }
}

/// Sorts atoms by predicate name, ties kept in body order.
pub fn canonical_order(atoms: &[Atom]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..atoms.len()).collect();
    idx.sort_by(|a, b| atoms[*a].pred.cmp(&atoms[*b].pred).then(a.cmp(b)));
    idx
}
