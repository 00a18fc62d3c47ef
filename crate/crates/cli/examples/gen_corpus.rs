//! Regenerates `fixtures/generated/`: small random problems and a manifest
//! of their expected outcomes under the bounded 0..3 semantics.
//!
//! `cargo run -p hornpair-cli --example gen_corpus`

use hornpair::chc::parse_clp;
use hornpair_cli::check_trivial_sat;
use hornpair_testkit::{derives_false, random_system, SystemShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const COUNT: u64 = 24;

#[derive(Serialize)]
struct Entry {
    file: String,
    seed: u64,
    clauses: usize,
    constrained_facts: usize,
    trivially_sat: bool,
    derives_false: bool,
}

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/generated");
    std::fs::create_dir_all(&dir).unwrap();
    let mut entries = Vec::new();
    for seed in 0..COUNT {
        let mut rng = ChaCha8Rng::seed_from_u64(90_000 + seed);
        let text = random_system(&mut rng, SystemShape::default());
        let s = parse_clp(&text).unwrap();
        let file = format!("gen_{seed:02}.clp");
        std::fs::write(dir.join(&file), &text).unwrap();
        entries.push(Entry {
            file,
            seed: 90_000 + seed,
            clauses: s.clauses.len(),
            constrained_facts: s.constrained_facts().len(),
            trivially_sat: check_trivial_sat(&s),
            derives_false: derives_false(&s, 0, 3),
        });
    }
    let json = serde_json::to_string_pretty(&entries).unwrap() + "\n";
    std::fs::write(dir.join("manifest.json"), json).unwrap();
}
