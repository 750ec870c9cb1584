//! Knowledge-base generators for the benchmarks.

use defeasor_core::{Concept, KnowledgeBase};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn atom(name: String) -> Concept {
    Concept::atom(name)
}

/// `A0 ⊒ A1 ⊒ … ⊒ An` with alternating typical values of `P`: one rank per link.
pub fn exception_chain(n: usize) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    let p = Concept::atom("P");
    for i in 0..=n {
        let a = atom(format!("A{i}"));
        if i > 0 {
            kb.add_strict(a.clone(), atom(format!("A{}", i - 1)));
        }
        let rhs = if i % 2 == 0 { p.clone() } else { Concept::not(p.clone()) };
        kb.add_defeasible(a, rhs);
    }
    kb
}

/// Focus concept of [`exception_chain`]: its most specific class.
pub fn chain_focus(n: usize) -> Concept {
    atom(format!("A{n}"))
}

/// `n` independent conflicts `Cᵢ ~> Xᵢ`, `Dᵢ ~> ¬Xᵢ`, plus a defeasible
/// consequence `Cᵢ ~> Yᵢ` of each. The focus `⊓(Cᵢ ⊓ Dᵢ)` has `2ⁿ` MP bases.
pub fn conflict_fan(n: usize) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    for i in 0..n {
        let (c, d) = (atom(format!("C{i}")), atom(format!("D{i}")));
        let x = atom(format!("X{i}"));
        kb.add_defeasible(c.clone(), x.clone());
        kb.add_defeasible(c, atom(format!("Y{i}")));
        kb.add_defeasible(d, Concept::not(x));
    }
    kb
}

pub fn fan_focus(n: usize) -> Concept {
    Concept::conjunction((0..n).flat_map(|i| [atom(format!("C{i}")), atom(format!("D{i}"))]))
}

/// A seeded role-free KB over `atoms` atoms with `defaults` defaults.
pub fn random_kb(seed: u64, atoms: usize, defaults: usize) -> KnowledgeBase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..atoms).map(|i| format!("A{i}")).collect();
    let lit = |rng: &mut ChaCha8Rng| {
        let a = atom(names.choose(rng).unwrap().clone());
        if rng.gen() {
            a
        } else {
            Concept::not(a)
        }
    };
    let mut kb = KnowledgeBase::new();
    for _ in 0..atoms / 2 {
        let (l, r) = (lit(&mut rng), lit(&mut rng));
        kb.add_strict(l, r);
    }
    while kb.defeasible.len() < defaults {
        let lhs = if rng.gen_bool(0.5) { lit(&mut rng) } else { Concept::and(lit(&mut rng), lit(&mut rng)) };
        let rhs = lit(&mut rng);
        kb.add_defeasible(lhs, rhs);
    }
    kb
}

/// `∃r.(A0 ⊓ ∃r.(A1 ⊓ …))` of the given depth under `A_i ⊑ ∀r.B_i`.
pub fn role_chain(depth: usize) -> (KnowledgeBase, Concept) {
    let mut kb = KnowledgeBase::new();
    let mut c = Concept::Top;
    for i in (0..depth).rev() {
        let a = atom(format!("A{i}"));
        kb.add_strict(a.clone(), Concept::all("r", atom(format!("B{i}"))));
        c = Concept::some("r", Concept::and(a, c));
    }
    (kb, c)
}
