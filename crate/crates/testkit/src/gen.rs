//! Random clause sets and constraints.

use hornpair::linear::{rat, AtomicConstraint, Constraint, Rel, Var};
use rand::seq::SliceRandom;
use rand::Rng;

/// Size knobs for [`random_system`].
#[derive(Clone, Copy, Debug)]
pub struct SystemShape {
    pub preds: usize,
    pub max_arity: usize,
    pub max_clauses_per_pred: usize,
    pub max_body: usize,
    /// Constants are drawn from `0..=max_const`.
    pub max_const: i64,
}

impl Default for SystemShape {
    fn default() -> Self {
        SystemShape {
            preds: 3,
            max_arity: 2,
            max_clauses_per_pred: 3,
            max_body: 2,
            max_const: 3,
        }
    }
}

/// A random system in CLP syntax: predicates `p0`, `p1`, …, int arguments,
/// and one goal clause with up to two body atoms.
pub fn random_system(rng: &mut impl Rng, shape: SystemShape) -> String {
    let npreds = rng.gen_range(1..=shape.preds);
    let arity: Vec<usize> = (0..npreds).map(|_| rng.gen_range(1..=shape.max_arity)).collect();
    let mut out = String::new();
    for (p, &ar) in arity.iter().enumerate() {
        out.push_str(&format!(":- pred p{p}({}).\n", vec!["int"; ar].join(",")));
    }
    for (p, &ar) in arity.iter().enumerate() {
        let nclauses = rng.gen_range(1..=shape.max_clauses_per_pred);
        for k in 0..nclauses {
            // The first clause of each predicate is a fact so models are not
            // trivially empty.
            let nbody = if k == 0 { 0 } else { rng.gen_range(0..=shape.max_body) };
            out.push_str(&random_clause(rng, Some((p, ar)), nbody, &arity, shape));
        }
    }
    let nbody = rng.gen_range(1..=shape.max_body.max(1));
    out.push_str(&random_clause(rng, None, nbody, &arity, shape));
    out
}

fn random_clause(
    rng: &mut impl Rng,
    head: Option<(usize, usize)>,
    nbody: usize,
    arity: &[usize],
    shape: SystemShape,
) -> String {
    let mut next = 0;
    let mut fresh = || {
        next += 1;
        format!("X{}", next - 1)
    };
    let head_text = match head {
        None => "false".to_string(),
        Some((p, ar)) => {
            let args: Vec<String> = (0..ar).map(|_| fresh()).collect();
            format!("p{p}({})", args.join(","))
        }
    };
    let mut vars: Vec<String> = (0..head.map_or(0, |h| h.1)).map(|i| format!("X{i}")).collect();
    let mut atoms = Vec::new();
    for _ in 0..nbody {
        let q = rng.gen_range(0..arity.len());
        let args: Vec<String> = (0..arity[q]).map(|_| fresh()).collect();
        vars.extend(args.iter().cloned());
        atoms.push(format!("p{q}({})", args.join(",")));
    }
    let mut items: Vec<String> = Vec::new();
    let ncons = rng.gen_range(0..=2 + vars.len() / 2);
    for _ in 0..ncons {
        if vars.is_empty() {
            break;
        }
        let x = vars.choose(rng).unwrap();
        let y = vars.choose(rng).unwrap();
        let c = rng.gen_range(0..=shape.max_const);
        let d = rng.gen_range(-1..=1);
        items.push(match rng.gen_range(0..6) {
            0 => format!("{x} =< {c}"),
            1 => format!("{x} >= {c}"),
            2 => format!("{x} = {c}"),
            3 => format!("{x} = {y} + {d}"),
            4 => format!("{x} =< {y} + {d}"),
            _ => format!("{x} + {y} =< {}", c + 1),
        });
    }
    items.extend(atoms);
    if items.is_empty() {
        items.push("true".into());
    }
    format!("{head_text} :- {}.\n", items.join(", "))
}

/// `natoms` random atomic constraints over `Var(0)..Var(nvars)` with
/// coefficients in −3..=3 and bounds in −4..=4, plus a bounding box
/// `−5 ≤ xᵢ ≤ 5` when `boxed`.
pub fn random_constraint(rng: &mut impl Rng, nvars: usize, natoms: usize, boxed: bool) -> Constraint {
    let mut c = Constraint::truth();
    for _ in 0..natoms {
        let k = rng.gen_range(1..=nvars.min(3));
        let mut vars: Vec<usize> = (0..nvars).collect();
        vars.shuffle(rng);
        let coeffs: Vec<(Var, _)> = vars[..k]
            .iter()
            .map(|v| {
                let mut a = rng.gen_range(-3..=3);
                if a == 0 {
                    a = 1;
                }
                (Var(*v as u32), rat(a))
            })
            .collect();
        let rel = if rng.gen_ratio(1, 6) { Rel::Eq } else { Rel::Le };
        c.push(AtomicConstraint::new(coeffs, rel, rat(rng.gen_range(-4..=4))));
    }
    if boxed {
        for v in 0..nvars {
            c.push(AtomicConstraint::new([(Var(v as u32), rat(1))], Rel::Le, rat(5)));
            c.push(AtomicConstraint::new([(Var(v as u32), rat(-1))], Rel::Le, rat(5)));
        }
    }
    c
}
