//! Domain operators against the dense Fourier–Motzkin oracle. Each property
//! runs over 500 seeded random instances per domain.

use hornpair::domains::{AbstractValue, DbmKind, DomainTag};
use hornpair::linear::{rat, Constraint, LinExpr, Var};
use hornpair_testkit::suites::{self, dims, oracle_equiv, random_value, rng_for};
use hornpair_testkit::{random_constraint, DenseSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INSTANCES: usize = 500;

#[test]
fn alpha_is_sound_and_best() {
    for tag in DomainTag::ALL {
        suites::alpha_soundness(tag, INSTANCES);
    }
}

#[test]
fn lub_is_an_upper_bound() {
    for tag in DomainTag::ALL {
        suites::lub_bounds(tag, INSTANCES);
    }
}

#[test]
fn widening_chains_stabilize_within_50_steps() {
    for tag in DomainTag::ALL {
        suites::widening_stabilizes(tag, INSTANCES);
    }
}

#[test]
fn strict_widening_chain_is_short() {
    // x ∈ [0, k] for growing k: the bound k is dropped in one step.
    for tag in DomainTag::ALL {
        let x = Var(0);
        let bounded = |k: i64| {
            Constraint::from_atoms([
                hornpair::linear::AtomicConstraint::new([(x, rat(-1))], hornpair::linear::Rel::Le, rat(0)),
                hornpair::linear::AtomicConstraint::new([(x, rat(1))], hornpair::linear::Rel::Le, rat(k)),
            ])
        };
        let mut a = AbstractValue::alpha(tag, &bounded(0), &[x]).unwrap();
        let mut climbs = 0;
        for k in 1..=50 {
            let d = AbstractValue::alpha(tag, &bounded(k), &[x]).unwrap();
            let next = a.widen(&a.lub(&d).unwrap()).unwrap();
            if !next.equivalent(&a).unwrap() {
                climbs += 1;
            }
            a = next;
        }
        assert!(climbs <= 1, "{tag}: {climbs}");
        let sup = DenseSystem::from_constraint(&a.to_constraint(), &[x]).sup(&[rat(1)]);
        if tag != DomainTag::Universe {
            assert_eq!(sup, Some(None));
            assert_eq!(DenseSystem::from_constraint(&a.to_constraint(), &[x]).sup(&[rat(-1)]), Some(Some(rat(0))));
        }
    }
}

#[test]
fn projection_matches_oracle() {
    for tag in DomainTag::ALL {
        suites::projection(tag, INSTANCES);
    }
}

#[test]
fn dbm_closure_is_idempotent_and_exact() {
    suites::dbm_closure(DbmKind::Bds, INSTANCES);
    suites::dbm_closure(DbmKind::Oct, INSTANCES);
}

#[test]
fn leq_agrees_with_oracle() {
    for tag in DomainTag::ALL {
        suites::leq_vs_oracle(tag, 1000);
    }
}

#[test]
fn meet_is_intersection() {
    for tag in DomainTag::ALL {
        let mut rng = rng_for(tag, 8);
        for _ in 0..INSTANCES {
            let n = rng.gen_range(1..=3);
            let vars = dims(n);
            let (_, a) = random_value(&mut rng, tag, n);
            let (_, b) = random_value(&mut rng, tag, n);
            let m = a.meet(&b).unwrap();
            let both = a.to_constraint().and(&b.to_constraint());
            assert!(oracle_equiv(&m.to_constraint(), &both, &vars), "{tag}: {a} ⊓ {b} = {m}");
        }
    }
}

#[test]
fn alpha_round_trips_its_own_output() {
    for tag in DomainTag::ALL {
        let mut rng = rng_for(tag, 9);
        for _ in 0..INSTANCES {
            let n = rng.gen_range(1..=3);
            let (_, a) = random_value(&mut rng, tag, n);
            let again = AbstractValue::alpha(tag, &a.to_constraint(), &dims(n)).unwrap();
            assert!(again.equivalent(&a).unwrap(), "{tag}: {a} vs {again}");
            if tag == DomainTag::Poly {
                assert_eq!(again, a);
            }
        }
    }
}

#[test]
fn sup_of_linear_forms_is_monotone_under_widening() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let c = random_constraint(&mut rng, 2, 3, true);
        let d = random_constraint(&mut rng, 2, 3, true);
        let a = AbstractValue::alpha(DomainTag::Oct, &c, &dims(2)).unwrap();
        let b = AbstractValue::alpha(DomainTag::Oct, &d, &dims(2)).unwrap();
        let w = a.widen(&a.lub(&b).unwrap()).unwrap();
        let e = LinExpr::var(Var(0)).plus(&LinExpr::var(Var(1)));
        let sup = |v: &AbstractValue| hornpair::lp::Region::new(&v.to_constraint()).sup(&e);
        if !a.is_bottom() {
            assert!(sup(&a) <= sup(&w));
        }
    }
}

#[test]
fn leq_is_a_partial_order() {
    for tag in DomainTag::ALL {
        let mut rng = rng_for(tag, 11);
        for _ in 0..INSTANCES {
            let n = rng.gen_range(1..=3);
            let (_, a) = random_value(&mut rng, tag, n);
            let (_, b) = random_value(&mut rng, tag, n);
            let (_, c) = random_value(&mut rng, tag, n);
            assert!(a.leq(&a).unwrap());
            let ab = a.lub(&b).unwrap();
            let abc = ab.lub(&c).unwrap();
            assert!(a.leq(&ab).unwrap() && ab.leq(&abc).unwrap() && a.leq(&abc).unwrap());
            if a.leq(&b).unwrap() && b.leq(&c).unwrap() {
                assert!(a.leq(&c).unwrap(), "{tag}: transitivity");
            }
            if a.leq(&b).unwrap() && b.leq(&a).unwrap() {
                assert!(oracle_equiv(&a.to_constraint(), &b.to_constraint(), &dims(n)), "{tag}: antisymmetry");
            }
        }
    }
}
