//! Seeded property suites shared by the library tests and the acceptance
//! report. Each check panics with a counterexample on the first failure.
//!
//! Domain operators are compared with the dense Fourier–Motzkin oracle;
//! transformations with the bounded least model.

use hornpair::chc::{parse_clp, system_to_string, ChcSystem};
use hornpair::domains::{AbstractValue, Dbm, DbmKind, DomainTag};
use hornpair::ext::Ext;
use hornpair::linear::{rat, ratio, Constraint, Rat, Var};
use hornpair::transform::{transform_system, StrategyConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{derives_false, random_constraint, random_system, DenseSystem, SystemShape};
pub fn dims(n: usize) -> Vec<Var> {
    (0..n as u32).map(Var).collect()
}

/// `c ⊨ d` by the oracle.
pub fn oracle_entails(c: &Constraint, d: &Constraint, vars: &[Var]) -> bool {
    let s = DenseSystem::from_constraint(c, vars);
    if s.is_empty() {
        return true;
    }
    if d.is_false_literal() {
        return false;
    }
    d.atoms().iter().all(|a| s.entails(a, vars))
}

pub fn oracle_equiv(c: &Constraint, d: &Constraint, vars: &[Var]) -> bool {
    oracle_entails(c, d, vars) && oracle_entails(d, c, vars)
}

/// Linear forms a domain bounds exactly: none for Universe, ±xᵢ for Box,
/// plus xᵢ − xⱼ for BDS, plus ±xᵢ ± xⱼ for Oct.
pub fn template_forms(tag: DomainTag, n: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    let unit = |i: usize, c: i64| {
        let mut v = vec![rat(0); n];
        v[i] = rat(c);
        v
    };
    if tag == DomainTag::Universe || tag == DomainTag::Poly {
        return out;
    }
    for i in 0..n {
        out.push(unit(i, 1));
        out.push(unit(i, -1));
    }
    if tag == DomainTag::Box {
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut v = unit(i, 1);
            v[j] = rat(-1);
            out.push(v);
            if tag == DomainTag::Oct && i < j {
                let mut p = unit(i, 1);
                p[j] = rat(1);
                out.push(p);
                let mut m = unit(i, -1);
                m[j] = rat(-1);
                out.push(m);
            }
        }
    }
    out
}

pub fn sup_in(v: &AbstractValue, form: &[Rat], vars: &[Var]) -> Option<Option<Rat>> {
    DenseSystem::from_constraint(&v.to_constraint(), vars).sup(form)
}

pub fn rng_for(tag: DomainTag, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(salt * 31 + tag as u64)
}

pub fn random_value(rng: &mut ChaCha8Rng, tag: DomainTag, n: usize) -> (Constraint, AbstractValue) {
    let natoms = rng.gen_range(1..=6);
    let boxed = rng.gen_bool(0.5);
    let c = random_constraint(rng, n, natoms, boxed);
    let v = AbstractValue::alpha(tag, &c, &dims(n)).unwrap();
    (c, v)
}

/// α is sound, and exact on every template form (all forms for polyhedra).
pub fn alpha_soundness(tag: DomainTag, instances: usize) {
    let mut rng = rng_for(tag, 1);
    for _ in 0..instances {
        let n = rng.gen_range(1..=4);
        let vars = dims(n);
        let (c, a) = random_value(&mut rng, tag, n);
        assert!(oracle_entails(&c, &a.to_constraint(), &vars), "{tag}: {a} does not contain {c:?}");
        let ac = a.to_constraint();
        for _ in 0..20 {
            let point: Vec<Rat> = (0..n).map(|_| ratio(rng.gen_range(-10..=10), 2)).collect();
            let value = |v: Var| point[v.index()].clone();
            if c.holds(&value) {
                assert!(ac.holds(&value), "{tag}: {point:?} in {c:?} but not in {a}");
            }
        }
        let sc = DenseSystem::from_constraint(&c, &vars);
        if sc.is_empty() {
            assert!(a.is_bottom(), "{tag}: empty input gave {a}");
            continue;
        }
        for form in template_forms(tag, n) {
            assert_eq!(sup_in(&a, &form, &vars), sc.sup(&form), "{tag}: form {form:?} of {c:?}");
        }
        if tag == DomainTag::Poly {
            assert!(oracle_equiv(&c, &a.to_constraint(), &vars), "{tag}: {a}");
        }
        if tag == DomainTag::Universe {
            assert!(a.to_constraint().is_true());
        }
    }
}

/// The join bounds both arguments and is exact on the template forms.
pub fn lub_bounds(tag: DomainTag, instances: usize) {
    let mut rng = rng_for(tag, 2);
    for _ in 0..instances {
        let n = rng.gen_range(1..=3);
        let vars = dims(n);
        let (_, a) = random_value(&mut rng, tag, n);
        let (_, b) = random_value(&mut rng, tag, n);
        let j = a.lub(&b).unwrap();
        assert!(oracle_entails(&a.to_constraint(), &j.to_constraint(), &vars), "{tag}: {a} ⋢ {j}");
        assert!(oracle_entails(&b.to_constraint(), &j.to_constraint(), &vars), "{tag}: {b} ⋢ {j}");
        assert!(a.leq(&j).unwrap() && b.leq(&j).unwrap());
        // Template joins are exact on every template form; the hull is
        // exact in every direction.
        let mut forms = template_forms(tag, n);
        if tag == DomainTag::Poly {
            forms.extend((0..6).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()));
        }
        for form in forms {
            let expect = match (sup_in(&a, &form, &vars), sup_in(&b, &form, &vars)) {
                (None, x) | (x, None) => x,
                (Some(None), _) | (_, Some(None)) => Some(None),
                (Some(Some(x)), Some(Some(y))) => Some(Some(if x > y { x } else { y })),
            };
            assert_eq!(sup_in(&j, &form, &vars), expect, "{tag}: {a} ⊔ {b} = {j}");
        }
    }
}

/// Widening along increasing chains of length 50 climbs at most once per
/// droppable bound.
pub fn widening_stabilizes(tag: DomainTag, instances: usize) {
    let mut rng = rng_for(tag, 3);
    for _ in 0..instances {
        let n = rng.gen_range(1..=3);
        let mut y = random_value(&mut rng, tag, n).1;
        while y.is_bottom() {
            y = random_value(&mut rng, tag, n).1;
        }
        let mut x = y.clone();
        // Each strict step drops a bound of a template domain, or a
        // constraint half of a polyhedron.
        let bound = match tag {
            DomainTag::Poly => x.to_constraint().atoms().iter().map(|a| a.halves().len()).sum::<usize>() + 1,
            _ => template_forms(tag, n).len() + 1,
        };
        let mut climbs = 0;
        for _ in 0..50 {
            let (_, d) = random_value(&mut rng, tag, n);
            let next_y = y.lub(&d).unwrap();
            assert!(y.leq(&next_y).unwrap());
            y = next_y;
            let next = x.widen(&y).unwrap();
            assert!(x.leq(&next).unwrap(), "{tag}: widening not increasing");
            assert!(y.leq(&next).unwrap(), "{tag}: widening lost the chain element");
            if !next.equivalent(&x).unwrap() {
                climbs += 1;
            }
            x = next;
        }
        assert!(climbs <= bound, "{tag}: {climbs} strict steps, bound {bound}");
    }
}

/// Projection equals exact elimination followed by α.
pub fn projection(tag: DomainTag, instances: usize) {
    let mut rng = rng_for(tag, 4);
    for _ in 0..instances {
        let n = rng.gen_range(2..=3);
        let vars = dims(n);
        let (c, a) = random_value(&mut rng, tag, n);
        let keep_idx: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let keep: Vec<Var> = keep_idx.iter().map(|i| vars[*i]).collect();
        let p = a.project(&keep).unwrap();
        // Oracle: project the exact input, then abstract.
        let exact = DenseSystem::from_constraint(&c, &vars).project(&keep_idx).to_constraint(&keep);
        let expect = AbstractValue::alpha(tag, &exact, &keep).unwrap();
        assert!(p.equivalent(&expect).unwrap(), "{tag}: {a} ⇓ {keep:?} = {p}, expected {expect}");
        // Abstracting straight onto `keep` is the same thing.
        let direct = AbstractValue::abstract_onto(tag, &c, &keep).unwrap();
        assert!(direct.equivalent(&p).unwrap(), "{tag}: direct {direct} vs {p}");
        assert!(oracle_equiv(&direct.to_constraint(), &p.to_constraint(), &keep));
    }
}

/// ⊑ agrees with entailment decided by the oracle.
pub fn leq_vs_oracle(tag: DomainTag, instances: usize) {
    let mut rng = rng_for(tag, 7);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..instances {
        let n = rng.gen_range(1..=3);
        let vars = dims(n);
        let (_, a) = random_value(&mut rng, tag, n);
        let (_, mut b) = random_value(&mut rng, tag, n);
        if rng.gen_bool(0.3) {
            b = a.lub(&b).unwrap();
        }
        let expect = oracle_entails(&a.to_constraint(), &b.to_constraint(), &vars);
        assert_eq!(a.leq(&b).unwrap(), expect, "{tag}: {a} ⊑ {b}");
        if expect {
            yes += 1;
        } else {
            no += 1;
        }
    }
    if tag != DomainTag::Universe {
        assert!(yes > 100 && no > 100, "{tag}: unbalanced sample {yes}/{no}");
    }
}

/// Closure of random difference-bound matrices is idempotent, keeps the
/// solution set and makes every entry the supremum of its form.
pub fn dbm_closure(kind: DbmKind, instances: usize) {
    let salt = match kind {
        DbmKind::Bds => 5u64,
        DbmKind::Oct => 6,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(salt);
    let mut nonempty = 0;
    for _ in 0..instances {
        let n = rng.gen_range(1..=3);
        let size = match kind {
            DbmKind::Bds => n + 1,
            DbmKind::Oct => 2 * n,
        };
        let entries: Vec<(usize, usize, Rat)> = (0..rng.gen_range(1..=6))
            .map(|_| (rng.gen_range(0..size), rng.gen_range(0..size), rat(rng.gen_range(-3..=6))))
            .filter(|(i, j, _)| i != j)
            .collect();
        let m = Dbm::from_entries(kind, n, &entries);
        let vars = dims(n);
        let raw = Constraint::from_atoms(m.constraints(&vars));
        match m.close() {
            None => assert!(DenseSystem::from_constraint(&raw, &vars).is_empty(), "{kind:?}: {entries:?}"),
            Some(c) => {
                nonempty += 1;
                assert_eq!(c.close().unwrap(), c, "{kind:?}: closure not idempotent");
                let closed = Constraint::from_atoms(c.constraints(&vars));
                assert!(oracle_equiv(&raw, &closed, &vars));
                // Closed entries are the exact suprema of their forms.
                let sys = DenseSystem::from_constraint(&raw, &vars);
                for (i, j) in c.template_entries() {
                    let form = c.entry_form(i, j);
                    let obj: Vec<Rat> = (0..n).map(|k| form.get(&k).cloned().unwrap_or_else(|| rat(0))).collect();
                    let expect = match sys.sup(&obj).unwrap() {
                        None => Ext::Inf,
                        Some(v) => Ext::Finite(v),
                    };
                    assert_eq!(c.get(i, j), &expect, "{kind:?}: entry ({i},{j}) of {entries:?}");
                }
            }
        }
    }
    assert!(nonempty > instances / 4);
}

fn run_passes(s: &ChcSystem, passes: &[StrategyConfig]) -> ChcSystem {
    passes.iter().fold(s.clone(), |acc, cfg| {
        transform_system(&acc, cfg)
            .unwrap_or_else(|e| panic!("{e}\n{}", system_to_string(&acc)))
            .system
    })
}

/// For each seed's random system and every domain, `asp`, `app` and
/// `asp;app` outputs derive `false` in the 0..3 bounded model exactly when
/// the input does. Returns how many inputs derive `false`.
pub fn equisat(seeds: std::ops::Range<u64>, shape: SystemShape) -> usize {
    let mut unsafe_inputs = 0;
    for seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = random_system(&mut rng, shape);
        let s = parse_clp(&text).unwrap();
        let expected = derives_false(&s, 0, 3);
        unsafe_inputs += expected as usize;
        for tag in DomainTag::ALL {
            let pipelines = [
                vec![StrategyConfig::asp(tag)],
                vec![StrategyConfig::app(tag)],
                vec![StrategyConfig::asp(tag), StrategyConfig::app(tag)],
            ];
            for passes in &pipelines {
                let out = run_passes(&s, passes);
                assert_eq!(
                    derives_false(&out, 0, 3),
                    expected,
                    "seed {seed}, {tag}, {} passes\ninput:\n{text}\noutput:\n{}",
                    passes.len(),
                    system_to_string(&out)
                );
            }
        }
    }
    unsafe_inputs
}
