//! Brute-force semantics at desk scale, used to validate the closures.
//!
//! Two routes: explicit enumeration of small ranked interpretations
//! (refutation with roles, complete for tiny role-free signatures) and the
//! canonical route, which builds the least ranked model over valuations of a
//! role-free KB and derives the BP preference from it.

mod canonical;
mod checks;
mod interp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{Concept, Inclusion, KnowledgeBase};

pub use canonical::{BpOrder, CanonicalModel, DiSets};
pub use checks::{cross_check, literal_probes, Agreement, CheckReport, Countermodel, OracleCheck};
pub use interp::{check_ranked_model, enumerate_ranked_interpretations, RankedEnumerator, RankedInterpretation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBounds {
    pub max_atoms: usize,
    pub max_roles: usize,
    pub max_domain: usize,
    pub max_rank: usize,
    pub canonical_mode: bool,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { max_atoms: 3, max_roles: 1, max_domain: 6, max_rank: 3, canonical_mode: false }
    }
}

impl OracleBounds {
    /// Role-free canonical bounds: six atoms, every valuation, rank up to 8.
    pub fn desk() -> Self {
        OracleBounds { max_atoms: 6, max_roles: 0, max_domain: 64, max_rank: 8, canonical_mode: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Is `c` exceptional for `Strict(kb) ∪ level`?
///
/// In canonical mode the answer is exact for role-free input. Otherwise
/// interpretations are enumerated: a model with a rank-0 `c` element gives
/// `False`, and exhausting the search gives `True` only when the bounds
/// cover every valuation and enough ranks. A signature beyond the bounds
/// gives `Unknown`.
pub fn oracle_exceptional(
    kb: &KnowledgeBase,
    level: &BTreeSet<Inclusion>,
    c: &Concept,
    bounds: &OracleBounds,
) -> Result<Verdict> {
    let role_free = !c.has_roles()
        && kb.strict.iter().chain(level).all(|i| !i.lhs.has_roles() && !i.rhs.has_roles());
    let verdict = if bounds.canonical_mode && role_free {
        canonical::canonical_exceptional(&kb.strict, level, c, bounds)
    } else {
        interp::enumerate_exceptional(&kb.strict, level, c, bounds)
    };
    match verdict {
        Err(Error::BoundsExceeded(_) | Error::BoundsInsufficient(_)) => Ok(Verdict::Unknown),
        v => v,
    }
}

/// The minimal canonical ranked models of a role-free KB. Literal-level
/// canonicity makes the model unique up to duplicated elements, so one
/// representative is returned.
pub fn minimal_canonical_ranked_models(
    kb: &KnowledgeBase,
    bounds: &OracleBounds,
) -> Result<Vec<RankedInterpretation>> {
    let m = CanonicalModel::build(kb, &BTreeSet::new(), bounds)?;
    Ok(vec![m.as_interpretation()])
}

pub fn induce_bp_order(m: &CanonicalModel) -> BpOrder {
    m.induce_bp_order()
}

fn query_atoms(b: &Concept, d: &Concept) -> BTreeSet<String> {
    let mut atoms = BTreeSet::new();
    b.atoms(&mut atoms);
    d.atoms(&mut atoms);
    atoms
}

fn verdict(r: Result<bool>) -> Result<Verdict> {
    match r {
        Ok(b) => Ok(b.into()),
        Err(Error::NotRoleFree) => Ok(Verdict::Unknown),
        Err(e) => Err(e),
    }
}

/// `T(B) ⊑ D` in the minimal canonical ranked model.
pub fn ranked_min_entails(kb: &KnowledgeBase, b: &Concept, d: &Concept, bounds: &OracleBounds) -> Result<Verdict> {
    verdict(CanonicalModel::build(kb, &query_atoms(b, d), bounds).and_then(|m| m.ranked_entails(b, d)))
}

/// `T(B) ⊑ D` in the minimal canonical BP-model.
pub fn bp_min_entails(kb: &KnowledgeBase, b: &Concept, d: &Concept, bounds: &OracleBounds) -> Result<Verdict> {
    verdict(CanonicalModel::build(kb, &query_atoms(b, d), bounds).and_then(|m| {
        let order = m.induce_bp_order();
        m.bp_entails(&order, b, d)
    }))
}

pub fn di_sets(kb: &KnowledgeBase, b: &Concept, bounds: &OracleBounds) -> Result<DiSets> {
    let m = CanonicalModel::build(kb, &query_atoms(b, &Concept::Top), bounds)?;
    m.di_sets(&m.induce_bp_order(), b)
}

/// `Strict ∪ DI_Sk(B) ⊨ T(⊤) ⊑ ¬B ⊔ D`.
pub fn sk_semantic_entails(kb: &KnowledgeBase, b: &Concept, d: &Concept, bounds: &OracleBounds) -> Result<Verdict> {
    verdict(CanonicalModel::build(kb, &query_atoms(b, d), bounds).and_then(|m| {
        let order = m.induce_bp_order();
        m.sk_semantic_entails(&order, b, d)
    }))
}

/// Replaces every outermost quantified subconcept with a fresh atom.
/// The same subconcept always maps to the same atom.
#[derive(Clone, Debug, Default)]
pub struct Atomizer {
    names: BTreeMap<Concept, String>,
    taken: BTreeSet<String>,
}

impl Atomizer {
    pub fn new(kb: &KnowledgeBase) -> Self {
        Atomizer { names: BTreeMap::new(), taken: kb.signature().atoms }
    }

    pub fn concept(&mut self, c: &Concept) -> Concept {
        match c {
            Concept::Top | Concept::Bot | Concept::Atom(_) => c.clone(),
            Concept::Not(d) => Concept::not(self.concept(d)),
            Concept::And(l, r) => Concept::and(self.concept(l), self.concept(r)),
            Concept::Or(l, r) => Concept::or(self.concept(l), self.concept(r)),
            Concept::All(..) | Concept::Some(..) => {
                let key = c.normalize();
                if let Some(name) = self.names.get(&key) {
                    return Concept::atom(name.clone());
                }
                let base: String = key
                    .to_string()
                    .chars()
                    .map(|ch| if ch.is_ascii_alphanumeric() { ch } else { '_' })
                    .collect::<String>()
                    .split('_')
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join("_");
                let mut name = base.clone();
                while self.taken.contains(&name) {
                    name.push('_');
                }
                self.taken.insert(name.clone());
                self.names.insert(key, name.clone());
                Concept::atom(name)
            }
        }
    }

    pub fn kb(&mut self, kb: &KnowledgeBase) -> KnowledgeBase {
        let mut out = KnowledgeBase::new();
        for i in &kb.strict {
            out.add_strict(self.concept(&i.lhs), self.concept(&i.rhs));
        }
        for i in &kb.defeasible {
            out.add_defeasible(self.concept(&i.lhs), self.concept(&i.rhs));
        }
        for a in &kb.abox {
            out.add_assertion(a.clone());
        }
        out
    }

    pub fn names(&self) -> &BTreeMap<Concept, String> {
        &self.names
    }
}

/// Atomized copy of `kb` plus the atomizer, for translating queries.
pub fn atomize_roles(kb: &KnowledgeBase) -> (KnowledgeBase, Atomizer) {
    let mut a = Atomizer::new(kb);
    let out = a.kb(kb);
    (out, a)
}
