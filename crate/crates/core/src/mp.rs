//! MP-closure and lexicographic closure: maximal compatible bases under a
//! rank-stratified preference, and query entailment over all bases.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rc::{DefaultId, DefaultSet, Rank, RankedPartition};
use crate::skeptical::globally_compatible;
use crate::syntax::{Concept, KnowledgeBase};

pub const DEFAULT_CANDIDATE_BUDGET: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseOrder {
    Mp,
    Lex,
}

impl fmt::Display for BaseOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseOrder::Mp => "mp",
            BaseOrder::Lex => "lex",
        })
    }
}

/// A set of finite-rank defaults split by rank: `Sᵢ = S ∩ Dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratifiedDefaultSet {
    strata: Vec<DefaultSet>,
}

impl StratifiedDefaultSet {
    /// Infinite-rank members of `set` are dropped.
    pub fn new(p: &RankedPartition, set: &DefaultSet) -> Self {
        let mut strata = vec![DefaultSet::new(); p.finite_rank_count()];
        for &id in set {
            if let Rank::Finite(i) = p.default_rank(id) {
                strata[i].insert(id);
            }
        }
        StratifiedDefaultSet { strata }
    }

    pub fn from_strata(strata: Vec<DefaultSet>) -> Self {
        StratifiedDefaultSet { strata }
    }

    pub fn strata(&self) -> &[DefaultSet] {
        &self.strata
    }

    pub fn stratum(&self, i: usize) -> &DefaultSet {
        static EMPTY: DefaultSet = DefaultSet::new();
        self.strata.get(i).unwrap_or(&EMPTY)
    }

    pub fn source(&self) -> DefaultSet {
        self.strata.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.strata.iter().map(DefaultSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.strata.iter().map(DefaultSet::len).collect()
    }

    fn height(&self, other: &Self) -> usize {
        self.strata.len().max(other.strata.len())
    }
}

/// `s ≺ s_prime` in the seriousness order: at some rank `h`, `Sₕ ⊊ S'ₕ`,
/// with equal strata above `h`.
pub fn mp_prefer(s_prime: &StratifiedDefaultSet, s: &StratifiedDefaultSet) -> bool {
    for h in (0..s.height(s_prime)).rev() {
        let (a, b) = (s_prime.stratum(h), s.stratum(h));
        if a != b {
            return b.is_subset(a);
        }
    }
    false
}

/// At the highest rank where the stratum sizes differ, `s_prime` has more.
pub fn lex_prefer(s_prime: &StratifiedDefaultSet, s: &StratifiedDefaultSet) -> bool {
    for h in (0..s.height(s_prime)).rev() {
        match s_prime.stratum(h).len().cmp(&s.stratum(h).len()) {
            Ordering::Equal => continue,
            Ordering::Greater => return true,
            Ordering::Less => return false,
        }
    }
    false
}

pub fn prefer(order: BaseOrder, s_prime: &StratifiedDefaultSet, s: &StratifiedDefaultSet) -> bool {
    match order {
        BaseOrder::Mp => mp_prefer(s_prime, s),
        BaseOrder::Lex => lex_prefer(s_prime, s),
    }
}

#[derive(Clone, Debug)]
pub struct BaseSet {
    pub focus: Concept,
    pub rank: usize,
    pub order: BaseOrder,
    /// In canonical order.
    pub bases: Vec<StratifiedDefaultSet>,
    /// Compatibility checks spent in the search.
    pub candidates: usize,
}

struct Enumerator<'a> {
    p: &'a RankedPartition,
    b: &'a Concept,
    k: usize,
    budget: usize,
    spent: usize,
    memo: HashMap<(DefaultSet, DefaultSet), bool>,
    found: Vec<Vec<DefaultSet>>,
}

impl Enumerator<'_> {
    fn compatible(&mut self, prefix: &DefaultSet, extra: &DefaultSet) -> Result<bool> {
        let key = (prefix.clone(), extra.clone());
        if let Some(&known) = self.memo.get(&key) {
            return Ok(known);
        }
        self.spent += 1;
        if self.spent > self.budget {
            return Err(Error::CandidateBudget { budget: self.budget });
        }
        let fits = globally_compatible(self.p, prefix, extra, self.b, self.k)?;
        self.memo.insert(key, fits);
        Ok(fits)
    }

    /// The ⊆-maximal subsets `X` of `stratum` with `prefix ∪ X` compatible.
    fn maximal_extensions(&mut self, prefix: &DefaultSet, stratum: &DefaultSet) -> Result<Vec<DefaultSet>> {
        if self.compatible(prefix, stratum)? {
            return Ok(vec![stratum.clone()]);
        }
        let items: Vec<_> = stratum.iter().copied().collect();
        let mut found: Vec<DefaultSet> = Vec::new();
        while let Some(mut h) = self.hitting(prefix, &items, &found, &mut DefaultSet::new(), &mut DefaultSet::new())? {
            for &e in &items {
                if !h.contains(&e) {
                    h.insert(e);
                    if !self.compatible(prefix, &h)? {
                        h.remove(&e);
                    }
                }
            }
            found.push(h);
        }
        Ok(found)
    }

    /// A compatible `h` with an item outside every set in `found`, or `None`
    /// when `found` already lists every maximal extension.
    fn hitting(
        &mut self,
        prefix: &DefaultSet,
        items: &[DefaultId],
        found: &[DefaultSet],
        h: &mut DefaultSet,
        banned: &mut DefaultSet,
    ) -> Result<Option<DefaultSet>> {
        let Some(m) = found.iter().find(|m| h.is_subset(m)) else {
            return Ok(Some(h.clone()));
        };
        let choices: Vec<DefaultId> =
            items.iter().copied().filter(|e| !m.contains(e) && !banned.contains(e)).collect();
        let mut result = None;
        let mut tried = Vec::new();
        for e in choices {
            h.insert(e);
            if self.compatible(prefix, h)? {
                result = self.hitting(prefix, items, found, h, banned)?;
            }
            h.remove(&e);
            if result.is_some() {
                break;
            }
            banned.insert(e);
            tried.push(e);
        }
        for e in tried {
            banned.remove(&e);
        }
        Ok(result)
    }

    /// Fills levels `level, level−1, …, 0` below the chosen `prefix`.
    fn descend(&mut self, level: usize, prefix: &DefaultSet, chosen: &mut Vec<DefaultSet>) -> Result<()> {
        let stratum = self.p.stratum(level);
        for x in self.maximal_extensions(prefix, &stratum)? {
            let mut next = prefix.clone();
            next.extend(x.iter().copied());
            chosen[level] = x;
            if level == 0 {
                self.found.push(chosen.clone());
            } else {
                self.descend(level - 1, &next, chosen)?;
            }
        }
        chosen[level] = DefaultSet::new();
        Ok(())
    }
}

pub fn maximal_bases(p: &RankedPartition, b: &Concept, order: BaseOrder) -> Result<BaseSet> {
    maximal_bases_with_budget(p, b, order, DEFAULT_CANDIDATE_BUDGET)
}

pub fn maximal_bases_with_budget(
    p: &RankedPartition,
    b: &Concept,
    order: BaseOrder,
    budget: usize,
) -> Result<BaseSet> {
    let Rank::Finite(k) = p.rank_of(b)? else {
        return Err(Error::InfiniteRank(b.to_string()));
    };
    let n = p.finite_rank_count();
    let mut chosen: Vec<DefaultSet> = (0..n).map(|i| if i >= k { p.stratum(i) } else { DefaultSet::new() }).collect();
    let mut e = Enumerator { p, b, k, budget, spent: 0, memo: HashMap::new(), found: Vec::new() };
    if k == 0 {
        e.found.push(chosen);
    } else {
        e.descend(k - 1, &DefaultSet::new(), &mut chosen)?;
    }
    let mut bases: Vec<StratifiedDefaultSet> =
        e.found.into_iter().map(StratifiedDefaultSet::from_strata).collect();
    if order == BaseOrder::Lex {
        let best = bases.iter().map(lex_key).max();
        bases.retain(|s| Some(lex_key(s)) == best);
    }
    bases.sort();
    Ok(BaseSet { focus: b.clone(), rank: k, order, bases, candidates: e.spent })
}

fn lex_key(s: &StratifiedDefaultSet) -> Vec<usize> {
    s.cardinalities().into_iter().rev().collect()
}

/// `mat(δ(Eₖ)) ⊓ mat(S) ⊓ B ⊑ D` for every base `S`.
pub fn bases_entail(p: &RankedPartition, bases: &BaseSet, d: &Concept) -> Result<bool> {
    let ek = p.materialize(p.level(bases.rank));
    for s in &bases.bases {
        let lhs = Concept::conjunction([ek.clone(), p.materialize(&s.source()), bases.focus.clone()]);
        if !p.theory().entails_subsumption(&lhs, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn closure_entails(kb: &KnowledgeBase, b: &Concept, d: &Concept, order: BaseOrder) -> Result<bool> {
    let p = RankedPartition::compute(kb)?;
    if p.rank_of(b)?.is_infinite() {
        return Ok(true);
    }
    let bases = maximal_bases(&p, b, order)?;
    bases_entail(&p, &bases, d)
}
