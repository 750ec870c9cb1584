//! Skeptical closure: a single base per focus concept built rank by rank.

use serde::Serialize;

use crate::error::Result;
use crate::rc::{DefaultSet, Rank, RankedPartition};
use crate::syntax::{Concept, KnowledgeBase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumStatus {
    Accepted,
    Rejected,
    NotEvaluated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub level: usize,
    /// `Dᵢ`
    pub candidates: DefaultSet,
    /// `Sᵢᴮ`; empty when not evaluated.
    pub compatible: DefaultSet,
    pub status: StratumStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkepticalBase {
    pub focus: Concept,
    pub rank: Rank,
    /// Reports for levels `k−1` down to `0`.
    pub strata: Vec<StratumReport>,
    /// `h`; `None` when even `S_{k−1}ᴮ` is rejected and the base is `Eₖ`.
    pub cutoff: Option<usize>,
    pub failing_level: Option<usize>,
    /// Defaults of `S^{sk,B}`: `δ(Eₖ)` plus the accepted strata.
    pub base: DefaultSet,
    /// Compatibility checks spent building the base.
    pub call_count: usize,
}

impl SkepticalBase {
    pub fn collapsed(&self) -> bool {
        self.cutoff.is_none()
    }

    pub fn accepted(&self) -> impl Iterator<Item = &StratumReport> {
        self.strata.iter().filter(|s| s.status == StratumStatus::Accepted)
    }
}

/// `Eₖ ∪ S ∪ S' ⊭ T(⊤) ⊑ ¬B`, decided as satisfiability of
/// `mat(δ(Eₖ)) ⊓ mat(S) ⊓ mat(S') ⊓ B`.
pub fn globally_compatible(
    p: &RankedPartition,
    s: &DefaultSet,
    s_prime: &DefaultSet,
    b: &Concept,
    k: usize,
) -> Result<bool> {
    let probe = Concept::conjunction([
        p.materialize(p.level(k)),
        p.materialize(s),
        p.materialize(s_prime),
        b.clone(),
    ]);
    p.theory().is_satisfiable(&probe)
}

/// Members of `Dᵢ` that alone keep `B` compatible with `Eₖ ∪ extra`.
pub fn individually_compatible(
    p: &RankedPartition,
    b: &Concept,
    extra: &DefaultSet,
    i: usize,
    k: usize,
) -> Result<DefaultSet> {
    let mut out = DefaultSet::new();
    for id in p.stratum(i) {
        if globally_compatible(p, &DefaultSet::from([id]), extra, b, k)? {
            out.insert(id);
        }
    }
    Ok(out)
}

pub fn skeptical_base(p: &RankedPartition, b: &Concept) -> Result<SkepticalBase> {
    let rank = p.rank_of(b)?;
    let Rank::Finite(k) = rank else {
        return Ok(SkepticalBase {
            focus: b.clone(),
            rank,
            strata: Vec::new(),
            cutoff: None,
            failing_level: None,
            base: DefaultSet::new(),
            call_count: 0,
        });
    };
    let mut extra = DefaultSet::new();
    let mut strata = Vec::new();
    let mut failing_level = None;
    let mut calls = 0;
    for i in (0..k).rev() {
        let candidates = p.stratum(i);
        if failing_level.is_some() {
            strata.push(StratumReport {
                level: i,
                candidates,
                compatible: DefaultSet::new(),
                status: StratumStatus::NotEvaluated,
            });
            continue;
        }
        let compatible = individually_compatible(p, b, &extra, i, k)?;
        calls += candidates.len();
        // a singleton was already checked on its own
        let ok = if compatible.len() > 1 {
            calls += 1;
            globally_compatible(p, &compatible, &extra, b, k)?
        } else {
            true
        };
        let status = if ok {
            extra.extend(compatible.iter().copied());
            StratumStatus::Accepted
        } else {
            failing_level = Some(i);
            StratumStatus::Rejected
        };
        strata.push(StratumReport { level: i, candidates, compatible, status });
    }
    let cutoff = match failing_level {
        Some(j) if j + 1 == k => None,
        Some(j) => Some(j + 1),
        None => Some(0),
    };
    let mut base = p.level(k).clone();
    base.extend(extra);
    Ok(SkepticalBase { focus: b.clone(), rank, strata, cutoff, failing_level, base, call_count: calls })
}

/// Query against an already computed base: `mat(base) ⊓ B ⊑ D`.
pub fn base_entails(p: &RankedPartition, base: &SkepticalBase, d: &Concept) -> Result<bool> {
    if base.rank.is_infinite() {
        return Ok(true);
    }
    let lhs = Concept::and(p.materialize(&base.base), base.focus.clone());
    p.theory().entails_subsumption(&lhs, d)
}

pub fn sk_entails(kb: &KnowledgeBase, b: &Concept, d: &Concept) -> Result<(bool, SkepticalBase)> {
    let p = RankedPartition::compute(kb)?;
    let base = skeptical_base(&p, b)?;
    Ok((base_entails(&p, &base, d)?, base))
}
