//! The unfold / define / fold loop, parametric in the abstract domain and
//! the partition operator.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use crate::chc::{normalize_clause, Atom, ChcSystem, Clause, Head};
use crate::domains::{AbstractValue, DomainTag};
use crate::error::{Error, Result};
use crate::linear::Var;
use crate::transform::defs::{canonical_order, Definition, DefsTree};
use crate::transform::partition::{partition, PartitionOp};
use crate::transform::unfold::{delete_unsat, simplify, unfold_positions};

/// Which body atoms a worklist clause unfolds in one step.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnfoldPolicy {
    /// Every atom, once.
    AllAtoms,
    /// Only atoms of non-recursive predicates when there are any,
    /// otherwise every atom.
    NonRecursiveFirst,
}

#[derive(Clone, Debug)]
pub struct StrategyConfig {
    pub domain: DomainTag,
    pub partition: PartitionOp,
    pub unfold: UnfoldPolicy,
    pub timeout: Option<Duration>,
    /// Hard cap on introduced definitions; `None` means ten per input
    /// clause.
    pub max_definitions: Option<usize>,
    /// Definitions per conjunction before new ones are forced to widen.
    pub sibling_cap: usize,
    /// Prefix of new predicate names.
    pub prefix: String,
}

impl StrategyConfig {
    pub fn asp(domain: DomainTag) -> Self {
        StrategyConfig {
            domain,
            partition: PartitionOp::Singleton,
            unfold: UnfoldPolicy::NonRecursiveFirst,
            timeout: None,
            max_definitions: None,
            sibling_cap: 8,
            prefix: "sp".into(),
        }
    }

    pub fn app(domain: DomainTag) -> Self {
        StrategyConfig {
            partition: PartitionOp::Pairing,
            prefix: "pp".into(),
            ..Self::asp(domain)
        }
    }
}

/// Result of a strategy run.
#[derive(Clone, Debug)]
pub struct Outcome {
    /// The transformed clauses, restricted to what the goals can use.
    pub system: ChcSystem,
    /// Every introduced definition, in creation order.
    pub definitions: Vec<Definition>,
    /// Definitions whose constraint came from widening an ancestor.
    pub widened: usize,
    /// Definitions whose constraint was widened because the per-conjunction
    /// cap was reached.
    pub forced: usize,
}

struct State<'a> {
    cfg: &'a StrategyConfig,
    defs: DefsTree,
    incls: VecDeque<usize>,
    tags: BTreeMap<String, String>,
    sigs: BTreeMap<String, Vec<crate::linear::Sort>>,
    recursive: BTreeSet<String>,
    next_name: usize,
    limit: usize,
    widened: usize,
    forced: usize,
}

/// Transforms `goals ∪ p`. Goal clauses must have a `false` head or a
/// predicate that `p` does not mention.
pub fn run_strategy(p: &ChcSystem, goals: &[Clause], cfg: &StrategyConfig) -> Result<Outcome> {
    let start = Instant::now();
    for g in goals {
        if let Some(h) = g.head.pred() {
            let used = p
                .clauses
                .iter()
                .any(|c| c.head.pred() == Some(h) || c.body.iter().any(|a| a.pred == h));
            if used {
                return Err(Error::GoalPredicateInProgram(h.to_string()));
            }
        }
    }
    let mut whole = p.clone();
    whole.clauses.extend(goals.iter().cloned());
    let mut st = State {
        cfg,
        defs: DefsTree::default(),
        incls: VecDeque::new(),
        tags: whole.provenance_tags(),
        sigs: whole.sigs.clone(),
        recursive: p.recursive_predicates(),
        next_name: 1,
        limit: cfg.max_definitions.unwrap_or(10 * p.clauses.len().max(1)),
        widened: 0,
        forced: 0,
    };
    for g in goals {
        let id = st.defs.add_root(normalize_clause(g));
        st.incls.push_back(id);
    }

    let mut transf: Vec<Clause> = p.clauses.clone();
    while let Some(id) = st.incls.pop_front() {
        if let Some(t) = cfg.timeout {
            if start.elapsed() > t {
                return Err(Error::Timeout(t));
            }
        }
        let c = st.defs.node(id).clause.clone();
        let positions = st.unfold_positions(&c);
        let unfolded = unfold_positions(&c, &positions, p);
        let kept = delete_unsat(unfolded.iter().map(simplify).collect());
        for e in kept {
            if e.body.is_empty() {
                transf.push(e.with_generic_names());
            } else {
                let folded = st.define_and_fold(&e, id)?;
                transf.push(folded.with_generic_names());
            }
        }
    }

    let mut system = ChcSystem {
        clauses: transf,
        sigs: st.sigs,
        provenance: st.tags,
    };
    system.prune_useless();
    log::debug!(
        "{} definitions ({} widened, {} forced), {} clauses",
        st.defs.definition_count(),
        st.widened,
        st.forced,
        system.clauses.len()
    );
    Ok(Outcome {
        system,
        definitions: st.defs.definitions().cloned().collect(),
        widened: st.widened,
        forced: st.forced,
    })
}

impl State<'_> {
    fn unfold_positions(&self, c: &Clause) -> Vec<usize> {
        let all: Vec<usize> = (0..c.body.len()).collect();
        match self.cfg.unfold {
            UnfoldPolicy::AllAtoms => all,
            UnfoldPolicy::NonRecursiveFirst => {
                let flat: Vec<usize> = all
                    .iter()
                    .copied()
                    .filter(|i| !self.recursive.contains(&c.body[*i].pred))
                    .collect();
                if flat.is_empty() {
                    all
                } else {
                    flat
                }
            }
        }
    }

    /// Replaces each subconjunction of `e`'s body by an atom for a new or
    /// existing definition.
    fn define_and_fold(&mut self, e: &Clause, current: usize) -> Result<Clause> {
        let tags = &self.tags;
        let groups = partition(self.cfg.partition, &e.body, |p| tags.get(p).cloned().unwrap_or_default());
        let mut body = Vec::with_capacity(groups.len());
        for g in groups {
            let sub: Vec<Atom> = g.iter().map(|i| e.body[*i].clone()).collect();
            let atoms: Vec<Atom> = canonical_order(&sub).into_iter().map(|i| sub[i].clone()).collect();
            let dims: Vec<Var> = atoms.iter().flat_map(|a| a.args.iter().copied()).collect();
            let key: Vec<String> = atoms.iter().map(|a| a.pred.clone()).collect();
            let local: Vec<Var> = (0..dims.len() as u32).map(Var).collect();
            let d = AbstractValue::abstract_onto(self.cfg.domain, &e.constraint, &dims)?.rename(&local)?;

            let pred = match self.defs.lookup(&key, &d)? {
                Some(def) => def.pred.clone(),
                None => self.introduce(e, &atoms, &dims, key, d, current)?,
            };
            body.push(Atom::new(pred, dims));
        }
        Ok(normalize_clause(&Clause {
            head: e.head.clone(),
            constraint: e.constraint.clone(),
            body,
            vars: e.vars.clone(),
        }))
    }

    fn introduce(
        &mut self,
        e: &Clause,
        atoms: &[Atom],
        dims: &[Var],
        key: Vec<String>,
        d: AbstractValue,
        current: usize,
    ) -> Result<String> {
        if self.defs.definition_count() >= self.limit {
            return Err(Error::DefinitionLimit(self.limit));
        }
        let value = if let Some(f) = self.defs.nearest_ancestor(current, &key) {
            self.widened += 1;
            f.value.widen(&f.value.lub(&d)?)?
        } else if self.defs.with_key(&key).count() >= self.cfg.sibling_cap {
            self.forced += 1;
            let f = self.defs.with_key(&key).last().unwrap();
            f.value.widen(&f.value.lub(&d)?)?
        } else {
            d
        };

        let pred = self.fresh_name();
        let mut clause = Clause {
            head: Head::False,
            constraint: value.to_constraint(),
            body: Vec::new(),
            vars: Vec::new(),
        };
        let mut local = BTreeMap::new();
        for v in dims {
            let nv = clause.fresh_var("V", e.sort_of(*v));
            local.insert(*v, nv);
        }
        clause.head = Head::Atom(Atom::new(pred.clone(), (0..dims.len() as u32).map(Var).collect()));
        clause.body = atoms.iter().map(|a| a.rename(&|v| local[&v])).collect();
        let clause = clause.with_generic_names();

        self.sigs
            .insert(pred.clone(), dims.iter().map(|v| e.sort_of(*v)).collect());
        let group: BTreeSet<String> = atoms
            .iter()
            .map(|a| self.tags.get(&a.pred).cloned().unwrap_or_default())
            .collect();
        self.tags
            .insert(pred.clone(), group.into_iter().collect::<Vec<_>>().join("+"));

        let id = self.defs.add_child(
            current,
            Definition {
                pred: pred.clone(),
                key,
                value,
                clause,
            },
        );
        log::debug!("{}", self.defs.node(id).def.as_ref().unwrap().clause);
        self.incls.push_back(id);
        Ok(pred)
    }

    fn fresh_name(&mut self) -> String {
        loop {
            let name = format!("{}{}", self.cfg.prefix, self.next_name);
            self.next_name += 1;
            if !self.sigs.contains_key(&name) {
                return name;
            }
        }
    }
}

/// Splits `s` into goals and definite clauses and runs the strategy.
pub fn transform_system(s: &ChcSystem, cfg: &StrategyConfig) -> Result<Outcome> {
    let mut p = s.clone();
    p.clauses.retain(|c| !c.is_goal());
    let goals: Vec<Clause> = s.goals().cloned().collect();
    run_strategy(&p, &goals, cfg)
}

/// Specialization with one atom per definition.
pub fn asp(p: &ChcSystem, goals: &[Clause], tag: DomainTag) -> Result<ChcSystem> {
    Ok(run_strategy(p, goals, &StrategyConfig::asp(tag))?.system)
}

/// Predicate pairing with constrained definitions.
pub fn app(p: &ChcSystem, goals: &[Clause], tag: DomainTag) -> Result<ChcSystem> {
    Ok(run_strategy(p, goals, &StrategyConfig::app(tag))?.system)
}
