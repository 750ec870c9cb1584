//! Defeasible reasoning for ALC with a typicality operator.
//!
//! A knowledge base mixes strict inclusions `C => D`, defeasible inclusions
//! `C ~> D` (read `T(C) ⊑ D`) and ABox assertions. Four closures are offered,
//! from weakest to strongest: rational, skeptical, MP and lexicographic.
//! The [`oracle`] module checks them against ranked and preferential models
//! on small signatures.
//!
//! ```
//! use defeasor_core::{parse_kb, parse_query, Closure, Reasoner};
//!
//! let kb = parse_kb("Student ~> !PayTaxes\nWStudent ~> PayTaxes\nStudent ~> Smart\nWStudent => Student")?;
//! let r = Reasoner::new(&kb)?;
//! let q = parse_query("WStudent ~> Smart")?;
//! assert!(!r.entails(&q, Closure::Rational)?);
//! assert!(r.entails(&q, Closure::Skeptical)?);
//! # Ok::<(), defeasor_core::Error>(())
//! ```

pub mod alc;
pub mod error;
pub mod mp;
pub mod oracle;
pub mod rc;
pub mod skeptical;
pub mod syntax;

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

pub use alc::{is_classically_consistent, StrictTheory, DEFAULT_NODE_BUDGET};
pub use error::{Error, Result};
pub use mp::{
    bases_entail, closure_entails, lex_prefer, maximal_bases, maximal_bases_with_budget, mp_prefer, BaseOrder,
    BaseSet, StratifiedDefaultSet, DEFAULT_CANDIDATE_BUDGET,
};
pub use oracle::{OracleBounds, Verdict};
pub use rc::{compute_ranking, materialize, rc_entails, DefaultId, DefaultSet, Rank, RankedPartition};
pub use skeptical::{sk_entails, skeptical_base, SkepticalBase, StratumReport, StratumStatus};
pub use syntax::{
    parse_concept, parse_kb, parse_query, Assertion, Concept, Inclusion, KnowledgeBase, ParseError, ParseErrorKind,
    Query, Signature, Typical,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    #[serde(rename = "rc")]
    Rational,
    #[serde(rename = "sk")]
    Skeptical,
    Mp,
    Lex,
}

impl Closure {
    pub const ALL: [Closure; 4] = [Closure::Rational, Closure::Skeptical, Closure::Mp, Closure::Lex];
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closure::Rational => "rc",
            Closure::Skeptical => "sk",
            Closure::Mp => "mp",
            Closure::Lex => "lex",
        })
    }
}

/// A ranked partition plus per-focus caches of the bases built from it.
#[derive(Debug)]
pub struct Reasoner {
    partition: RankedPartition,
    candidate_budget: usize,
    skeptical: Mutex<HashMap<Concept, SkepticalBase>>,
    bases: Mutex<HashMap<(Concept, BaseOrder), BaseSet>>,
}

impl Reasoner {
    pub fn new(kb: &KnowledgeBase) -> Result<Self> {
        Self::with_budget(kb, DEFAULT_NODE_BUDGET)
    }

    /// `node_budget` bounds each tableau run.
    pub fn with_budget(kb: &KnowledgeBase, node_budget: u64) -> Result<Self> {
        let theory = StrictTheory::from_kb(kb).with_budget(node_budget);
        Ok(Self::from_partition(RankedPartition::with_theory(theory, kb.defeasible.iter().cloned())?))
    }

    pub fn from_partition(partition: RankedPartition) -> Self {
        Reasoner {
            partition,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
            skeptical: Mutex::new(HashMap::new()),
            bases: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_candidate_budget(mut self, budget: usize) -> Self {
        self.candidate_budget = budget;
        self
    }

    pub fn partition(&self) -> &RankedPartition {
        &self.partition
    }

    pub fn rank_of(&self, c: &Concept) -> Result<Rank> {
        self.partition.rank_of(&c.normalize())
    }

    pub fn skeptical_base(&self, b: &Concept) -> Result<SkepticalBase> {
        let b = b.normalize();
        if let Some(s) = self.skeptical.lock().unwrap().get(&b) {
            return Ok(s.clone());
        }
        let s = skeptical_base(&self.partition, &b)?;
        self.skeptical.lock().unwrap().insert(b, s.clone());
        Ok(s)
    }

    /// Fails with [`Error::InfiniteRank`] when `b` has infinite rank.
    pub fn bases(&self, b: &Concept, order: BaseOrder) -> Result<BaseSet> {
        let key = (b.normalize(), order);
        if let Some(s) = self.bases.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let s = maximal_bases_with_budget(&self.partition, &key.0, order, self.candidate_budget)?;
        self.bases.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// Strict queries are answered the same way under every closure.
    pub fn entails(&self, q: &Query, closure: Closure) -> Result<bool> {
        let q = q.normalize();
        let Query::Defeasible(b, d) = &q else {
            return self.partition.entails(&q);
        };
        if closure == Closure::Rational || self.partition.rank_of(b)?.is_infinite() {
            return self.partition.entails(&q);
        }
        match closure {
            Closure::Rational => unreachable!(),
            Closure::Skeptical => skeptical::base_entails(&self.partition, &self.skeptical_base(b)?, d),
            Closure::Mp => bases_entail(&self.partition, &self.bases(b, BaseOrder::Mp)?, d),
            Closure::Lex => bases_entail(&self.partition, &self.bases(b, BaseOrder::Lex)?, d),
        }
    }
}
