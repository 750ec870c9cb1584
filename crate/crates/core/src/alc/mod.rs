//! Classical ALC reasoning with respect to a set of strict inclusions.

mod tableau;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::Result;
use crate::syntax::{Assertion, Concept, Inclusion, KnowledgeBase};
use tableau::Search;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Strict inclusions together with their internalization
/// `⊓ nnf(¬C ⊔ D)`, and a memo of satisfiability results.
#[derive(Debug)]
pub struct StrictTheory {
    axioms: BTreeSet<Inclusion>,
    internalization: Concept,
    budget: u64,
    memo: Mutex<HashMap<Concept, bool>>,
    calls: AtomicU64,
}

impl Clone for StrictTheory {
    fn clone(&self) -> Self {
        StrictTheory {
            axioms: self.axioms.clone(),
            internalization: self.internalization.clone(),
            budget: self.budget,
            memo: Mutex::new(self.memo.lock().unwrap().clone()),
            calls: AtomicU64::new(0),
        }
    }
}

impl StrictTheory {
    pub fn new<I: IntoIterator<Item = Inclusion>>(axioms: I) -> Self {
        let axioms: BTreeSet<Inclusion> = axioms.into_iter().collect();
        let internalization =
            Concept::conjunction(axioms.iter().map(|i| i.materialized().nnf())).normalize();
        StrictTheory {
            axioms,
            internalization,
            budget: DEFAULT_NODE_BUDGET,
            memo: Mutex::new(HashMap::new()),
            calls: AtomicU64::new(0),
        }
    }

    pub fn from_kb(kb: &KnowledgeBase) -> Self {
        Self::new(kb.strict.iter().cloned())
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn axioms(&self) -> &BTreeSet<Inclusion> {
        &self.axioms
    }

    pub fn internalization(&self) -> &Concept {
        &self.internalization
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Number of satisfiability questions answered, memo hits included.
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Is there a model of the theory in which `c` is nonempty?
    pub fn is_satisfiable(&self, c: &Concept) -> Result<bool> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let key = c.nnf().normalize();
        if let Some(&hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit);
        }
        let mut search = Search::new(&self.internalization, self.budget);
        let answer = search.satisfiable(&key)?;
        self.memo.lock().unwrap().insert(key, answer);
        Ok(answer)
    }

    /// `theory ⊨ c ⊑ d`
    pub fn entails_subsumption(&self, c: &Concept, d: &Concept) -> Result<bool> {
        let probe = Concept::and(c.clone(), Concept::not(d.clone()));
        Ok(!self.is_satisfiable(&probe)?)
    }

    /// Consistency of the theory together with an ABox.
    pub fn is_consistent_with(&self, abox: &BTreeSet<Assertion>) -> Result<bool> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut roots: Vec<Vec<Concept>> = Vec::new();
        let mut slot = |name: &str| -> usize {
            let next = index.len();
            let i = *index.entry(name.to_string()).or_insert(next);
            if i == roots.len() {
                roots.push(Vec::new());
            }
            i
        };
        let mut concepts = Vec::new();
        let mut edges = Vec::new();
        for a in abox {
            match a {
                Assertion::Concept { concept, individual } => {
                    concepts.push((slot(individual), concept.nnf()));
                }
                Assertion::Role { role, subject, object } => {
                    edges.push((slot(subject), role.clone(), slot(object)));
                }
            }
        }
        for (i, c) in concepts {
            roots[i].push(c);
        }
        if roots.is_empty() {
            return self.is_satisfiable(&Concept::Top);
        }
        let mut search = Search::new(&self.internalization, self.budget);
        search.satisfiable_roots(&roots, &edges)
    }

    /// Tableau expansions a fresh search spends on `c`; bypasses the memo.
    pub fn expansions(&self, c: &Concept) -> Result<u64> {
        let mut search = Search::new(&self.internalization, self.budget);
        search.satisfiable(&c.nnf())?;
        Ok(search.spent())
    }
}

/// Strict part plus ABox has a classical model; defeasible inclusions are ignored.
pub fn is_classically_consistent(kb: &KnowledgeBase) -> Result<bool> {
    StrictTheory::from_kb(kb).is_consistent_with(&kb.abox)
}
