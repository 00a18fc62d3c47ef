use std::collections::BTreeSet;
use std::fmt;

use crate::linear::{Constraint, Sort, Var};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarInfo {
    pub name: String,
    pub sort: Sort,
}

/// `pred(args…)`. After normalization the arguments are pairwise distinct
/// variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Var>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Var>) -> Self {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|v| f(*v)).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Head {
    False,
    Atom(Atom),
}

impl Head {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Head::False => None,
            Head::Atom(a) => Some(a),
        }
    }

    pub fn pred(&self) -> Option<&str> {
        self.atom().map(|a| a.pred.as_str())
    }
}

/// `head ← constraint, body₁, …, bodyₙ` with its own variable table.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    pub head: Head,
    pub constraint: Constraint,
    pub body: Vec<Atom>,
    pub vars: Vec<VarInfo>,
}

impl Clause {
    pub fn is_goal(&self) -> bool {
        matches!(self.head, Head::False)
    }

    pub fn fresh_var(&mut self, name: &str, sort: Sort) -> Var {
        let v = Var(self.vars.len() as u32);
        let mut candidate = name.to_string();
        let mut k = 1;
        while self.vars.iter().any(|i| i.name == candidate) {
            candidate = format!("{name}_{k}");
            k += 1;
        }
        self.vars.push(VarInfo {
            name: candidate,
            sort,
        });
        v
    }

    pub fn sort_of(&self, v: Var) -> Sort {
        self.vars.get(v.index()).map(|i| i.sort).unwrap_or_default()
    }

    pub fn name_of(&self, v: Var) -> String {
        self.vars
            .get(v.index())
            .map(|i| i.name.clone())
            .unwrap_or_else(|| format!("V{}", v.0))
    }

    /// Variables occurring anywhere in the clause.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        let mut s = self.constraint.vars();
        if let Some(h) = self.head.atom() {
            s.extend(h.args.iter().copied());
        }
        for a in &self.body {
            s.extend(a.args.iter().copied());
        }
        s
    }

    /// Variables of the body atoms, in order of first occurrence.
    pub fn body_arg_vars(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        self.body
            .iter()
            .flat_map(|a| a.args.iter().copied())
            .filter(|v| seen.insert(*v))
            .collect()
    }

    /// The same clause with variables named `A`, `B`, …, `Z`, `A1`, … in
    /// index order.
    pub fn with_generic_names(&self) -> Clause {
        let mut c = self.clone();
        for (i, info) in c.vars.iter_mut().enumerate() {
            let letter = char::from(b'A' + (i % 26) as u8);
            info.name = match i / 26 {
                0 => letter.to_string(),
                k => format!("{letter}{k}"),
            };
        }
        c
    }

    /// Names safe to print: valid CLP/SMT-LIB variable identifiers and
    /// unique within the clause.
    pub fn printable_names(&self) -> Vec<String> {
        let mut used = BTreeSet::new();
        self.vars
            .iter()
            .enumerate()
            .map(|(i, info)| {
                let valid = info
                    .name
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_ascii_uppercase() || c == '_')
                    && info.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    && info.name != "_";
                let mut name = if valid {
                    info.name.clone()
                } else {
                    format!("V{i}")
                };
                if used.contains(&name) {
                    name = format!("{name}_{i}");
                }
                used.insert(name.clone());
                name
            })
            .collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::chc::print::write_clause(f, self)
    }
}
