#![allow(dead_code)]

use std::path::PathBuf;

use defeasor_core::{parse_kb, Concept, KnowledgeBase};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_defa;
pub const CORPUS_SIZE: usize = 240;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn load(name: &str) -> KnowledgeBase {
    let path = data_dir().join(format!("{name}.dkb"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_kb(&text).unwrap()
}

pub const SAMPLE_KBS: [&str; 6] = ["student", "employed_student", "penguins", "weak", "ssn", "ssn_smart"];

/// The sample KBs with role subconcepts replaced by atoms.
pub const ROLE_FREE_SAMPLE_KBS: [&str; 6] =
    ["student", "employed_student", "penguins", "weak", "ssn_atomized", "ssn_smart_atomized"];

pub fn lit(atom: &str, positive: bool) -> Concept {
    let a = Concept::atom(atom);
    if positive {
        a
    } else {
        Concept::not(a)
    }
}

fn random_lit(rng: &mut impl Rng, atoms: &[&str]) -> Concept {
    lit(atoms.choose(rng).unwrap(), rng.gen())
}

fn random_pair(rng: &mut impl Rng, atoms: &[&str], or: bool) -> Concept {
    let picked: Vec<_> = atoms.choose_multiple(rng, 2).collect();
    let (l, r) = (lit(picked[0], rng.gen()), lit(picked[1], rng.gen()));
    if or {
        Concept::or(l, r)
    } else {
        Concept::and(l, r)
    }
}

/// A role-free KB over 2 to 4 atoms with 1 to 6 defaults and up to 2 strict axioms.
pub fn random_kb(rng: &mut impl Rng) -> KnowledgeBase {
    let all = ["A", "B", "C", "D"];
    let n = rng.gen_range(2..=4);
    random_kb_over(rng, &all[..n])
}

pub fn random_kb_over(rng: &mut impl Rng, atoms: &[&str]) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    for _ in 0..rng.gen_range(0..=2) {
        let lhs = if rng.gen_bool(0.7) { random_lit(rng, atoms) } else { random_pair(rng, atoms, false) };
        let rhs = if rng.gen_bool(0.7) { random_lit(rng, atoms) } else { random_pair(rng, atoms, true) };
        kb.add_strict(lhs, rhs);
    }
    for _ in 0..rng.gen_range(1..=6) {
        let lhs = match rng.gen_range(0..10) {
            0 => Concept::Top,
            1..=5 => random_lit(rng, atoms),
            _ => random_pair(rng, atoms, false),
        };
        let rhs = match rng.gen_range(0..10) {
            0..=5 => random_lit(rng, atoms),
            6 | 7 => random_pair(rng, atoms, false),
            _ => random_pair(rng, atoms, true),
        };
        kb.add_defeasible(lhs, rhs);
    }
    kb
}

pub fn corpus() -> Vec<KnowledgeBase> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..CORPUS_SIZE).map(|_| random_kb(&mut rng)).collect()
}

/// Signature literals plus conjunctions of two literals over distinct atoms.
pub fn query_concepts(kb: &KnowledgeBase) -> Vec<Concept> {
    defeasor_core::oracle::literal_probes(&kb.signature().atoms)
}
