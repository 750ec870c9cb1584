//! Rational closure: exceptionality, the level sequence `E₀ ⊇ E₁ ⊇ …`,
//! concept ranks and query answering.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::{Serialize, Serializer};

use crate::alc::StrictTheory;
use crate::error::Result;
use crate::syntax::{Concept, Inclusion, KnowledgeBase, Query};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

impl Rank {
    pub fn finite(self) -> Option<usize> {
        match self {
            Rank::Finite(i) => Some(i),
            Rank::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Rank::Infinite
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(i) => write!(f, "{i}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(i) => s.serialize_u64(*i as u64),
            Rank::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Index of a defeasible inclusion in [`RankedPartition::defaults`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DefaultId(pub usize);

pub type DefaultSet = BTreeSet<DefaultId>;

/// The conjunction of `¬C ⊔ D` over `defaults`, in the given order; `Top` when empty.
pub fn materialize<'a, I: IntoIterator<Item = &'a Inclusion>>(defaults: I) -> Concept {
    Concept::conjunction(defaults.into_iter().map(Inclusion::materialized))
}

#[derive(Debug)]
pub struct RankedPartition {
    theory: StrictTheory,
    defaults: Vec<Inclusion>,
    /// `δ(E₀), δ(E₁), …` up to and including the first fixpoint.
    levels: Vec<DefaultSet>,
    ranks: Vec<Rank>,
    cache: Mutex<HashMap<Concept, Rank>>,
}

impl RankedPartition {
    pub fn compute(kb: &KnowledgeBase) -> Result<Self> {
        Self::with_theory(StrictTheory::from_kb(kb), kb.defeasible.iter().cloned())
    }

    pub fn with_theory<I: IntoIterator<Item = Inclusion>>(
        theory: StrictTheory,
        defaults: I,
    ) -> Result<Self> {
        let defaults: Vec<Inclusion> =
            defaults.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut p = RankedPartition {
            theory,
            levels: vec![(0..defaults.len()).map(DefaultId).collect()],
            ranks: Vec::new(),
            defaults,
            cache: Mutex::new(HashMap::new()),
        };
        loop {
            let current = p.levels.last().unwrap();
            let mut next = DefaultSet::new();
            for &id in current {
                if p.is_exceptional(current, &p.defaults[id.0].lhs)? {
                    next.insert(id);
                }
            }
            if &next == current {
                break;
            }
            p.levels.push(next);
        }
        let last = p.levels.len() - 1;
        p.ranks = (0..p.defaults.len())
            .map(|d| {
                let top = p.levels.iter().rposition(|l| l.contains(&DefaultId(d))).unwrap();
                if top == last {
                    Rank::Infinite
                } else {
                    Rank::Finite(top)
                }
            })
            .collect();
        Ok(p)
    }

    pub fn theory(&self) -> &StrictTheory {
        &self.theory
    }

    pub fn defaults(&self) -> &[Inclusion] {
        &self.defaults
    }

    pub fn default(&self, id: DefaultId) -> &Inclusion {
        &self.defaults[id.0]
    }

    pub fn all_defaults(&self) -> DefaultSet {
        (0..self.defaults.len()).map(DefaultId).collect()
    }

    pub fn id_of(&self, inclusion: &Inclusion) -> Option<DefaultId> {
        self.defaults.binary_search(inclusion).ok().map(DefaultId)
    }

    /// The levels `δ(E₀) … δ(Eₙ)`; a trailing empty fixpoint is dropped
    /// unless it is the only level.
    pub fn levels(&self) -> &[DefaultSet] {
        let n = self.levels.len();
        if n > 1 && self.levels[n - 1].is_empty() {
            &self.levels[..n - 1]
        } else {
            &self.levels
        }
    }

    /// `δ(Eᵢ)`; indices past the fixpoint return the fixpoint.
    pub fn level(&self, i: usize) -> &DefaultSet {
        &self.levels[i.min(self.levels.len() - 1)]
    }

    /// Number of finite ranks in use.
    pub fn finite_rank_count(&self) -> usize {
        self.levels.len() - 1
    }

    /// `Dᵢ = δ(Eᵢ) − δ(Eᵢ₊₁)`.
    pub fn stratum(&self, i: usize) -> DefaultSet {
        if i >= self.finite_rank_count() {
            return DefaultSet::new();
        }
        self.levels[i].difference(&self.levels[i + 1]).copied().collect()
    }

    pub fn strata(&self) -> Vec<DefaultSet> {
        (0..self.finite_rank_count()).map(|i| self.stratum(i)).collect()
    }

    pub fn infinite(&self) -> &DefaultSet {
        self.levels.last().unwrap()
    }

    pub fn default_rank(&self, id: DefaultId) -> Rank {
        self.ranks[id.0]
    }

    pub fn materialize(&self, set: &DefaultSet) -> Concept {
        materialize(set.iter().map(|&id| self.default(id)))
    }

    /// `c` is exceptional for `Strict ∪ level` iff `Strict ⊨ mat(level) ⊓ c ⊑ ⊥`.
    pub fn is_exceptional(&self, level: &DefaultSet, c: &Concept) -> Result<bool> {
        let probe = Concept::and(self.materialize(level), c.clone());
        Ok(!self.theory.is_satisfiable(&probe)?)
    }

    pub fn rank_of(&self, c: &Concept) -> Result<Rank> {
        let key = c.normalize();
        if let Some(&r) = self.cache.lock().unwrap().get(&key) {
            return Ok(r);
        }
        let mut rank = Rank::Infinite;
        for (i, level) in self.levels.iter().enumerate() {
            if !self.is_exceptional(level, &key)? {
                rank = Rank::Finite(i);
                break;
            }
        }
        self.cache.lock().unwrap().insert(key, rank);
        Ok(rank)
    }

    /// Rational-closure membership of a query.
    ///
    /// A strict query `C ⊑ D` holds iff `C ⊓ ¬D` has infinite rank: the
    /// defaults in the fixpoint level constrain every model, so they take
    /// part in classical consequences too.
    pub fn entails(&self, q: &Query) -> Result<bool> {
        match q {
            Query::Defeasible(b, d) => {
                let rb = self.rank_of(b)?;
                if rb.is_infinite() {
                    return Ok(true);
                }
                let counter = Concept::and(b.clone(), Concept::not(d.clone()));
                Ok(rb < self.rank_of(&counter)?)
            }
            Query::Strict(c, d) => {
                let counter = Concept::and(c.clone(), Concept::not(d.clone()));
                Ok(self.rank_of(&counter)?.is_infinite())
            }
        }
    }
}

pub fn compute_ranking(kb: &KnowledgeBase) -> Result<RankedPartition> {
    RankedPartition::compute(kb)
}

pub fn rc_entails(kb: &KnowledgeBase, q: &Query) -> Result<bool> {
    RankedPartition::compute(kb)?.entails(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_concept, parse_kb, parse_query};

    const STUDENT: &str = "Student ~> !Pay_Taxes\nWStudent ~> Pay_Taxes\nStudent ~> Smart\nWStudent => Student";
    const PENGUINS: &str = "Bird ~> Fly\nBird ~> NiceFeather\nPenguin => Bird\nPenguin ~> !Fly\nPenguin ~> BlackFeather\nBabyPenguin => Penguin\nBabyPenguin ~> !BlackFeather";

    fn rank(p: &RankedPartition, c: &str) -> Rank {
        p.rank_of(&parse_concept(c).unwrap()).unwrap()
    }

    fn ids(p: &RankedPartition, lines: &[&str]) -> DefaultSet {
        lines
            .iter()
            .map(|l| {
                let kb = parse_kb(l).unwrap();
                p.id_of(kb.defeasible.iter().next().unwrap()).unwrap()
            })
            .collect()
    }

    #[test]
    fn materialize_edge_cases() {
        assert_eq!(materialize([]), Concept::Top);
        let i = Inclusion::new(Concept::atom("Student"), Concept::atom("Smart"));
        assert_eq!(materialize([&i]).to_string(), "!Student | Smart");
        let kb = parse_kb(STUDENT).unwrap();
        let expected = parse_concept(
            "(!Student | !Pay_Taxes) & (!WStudent | Pay_Taxes) & (!Student | Smart)",
        )
        .unwrap();
        assert_eq!(materialize(&kb.defeasible).normalize(), expected.normalize());
    }

    #[test]
    fn student_levels() {
        let p = compute_ranking(&parse_kb(STUDENT).unwrap()).unwrap();
        assert_eq!(p.levels().len(), 2);
        assert_eq!(p.levels()[1], ids(&p, &["WStudent ~> Pay_Taxes"]));
        assert_eq!(rank(&p, "Student"), Rank::Finite(0));
        assert_eq!(rank(&p, "WStudent"), Rank::Finite(1));
        assert!(p.infinite().is_empty());
        assert!(p.is_exceptional(p.level(0), &Concept::atom("WStudent")).unwrap());
        assert!(!p.is_exceptional(p.level(0), &Concept::atom("Student")).unwrap());
        assert!(p.is_exceptional(p.level(1), &Concept::Bot).unwrap());
    }

    #[test]
    fn penguin_strata() {
        let p = compute_ranking(&parse_kb(PENGUINS).unwrap()).unwrap();
        assert_eq!(
            p.strata(),
            vec![
                ids(&p, &["Bird ~> Fly", "Bird ~> NiceFeather"]),
                ids(&p, &["Penguin ~> !Fly", "Penguin ~> BlackFeather"]),
                ids(&p, &["BabyPenguin ~> !BlackFeather"]),
            ]
        );
        assert_eq!(rank(&p, "BabyPenguin"), Rank::Finite(2));
    }

    #[test]
    fn no_defaults_single_level() {
        let p = compute_ranking(&parse_kb("A => B").unwrap()).unwrap();
        assert_eq!(p.levels().len(), 1);
        assert!(p.levels()[0].is_empty());
        assert!(p.strata().is_empty());
        assert_eq!(rank(&p, "A"), Rank::Finite(0));
        assert_eq!(rank(&p, "A & !B"), Rank::Infinite);
    }

    #[test]
    fn unsatisfiable_antecedent_has_infinite_rank() {
        let p = compute_ranking(&parse_kb("A ~> B\nA ~> !B").unwrap()).unwrap();
        assert_eq!(p.infinite().len(), 2);
        assert_eq!(p.default_rank(DefaultId(0)), Rank::Infinite);
        assert_eq!(p.levels().len(), 1);
        // the fixpoint defaults constrain strict consequences
        assert!(p.entails(&parse_query("A => Bot").unwrap()).unwrap());
        assert!(!p.entails(&parse_query("Top => A").unwrap()).unwrap());
    }

    #[test]
    fn student_queries() {
        let p = compute_ranking(&parse_kb(STUDENT).unwrap()).unwrap();
        let q = |s: &str| p.entails(&parse_query(s).unwrap()).unwrap();
        assert!(q("Student & Italian ~> !Pay_Taxes"));
        assert!(q("WStudent & Italian ~> Pay_Taxes"));
        assert!(!q("WStudent ~> Smart"));
        assert!(q("Bot ~> Smart"));
        assert!(q("WStudent => Student"));
        assert!(!q("Student => Smart"));
    }
}
