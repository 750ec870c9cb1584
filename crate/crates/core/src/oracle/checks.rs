//! Library-vs-oracle cross-checks over a KB's literal probes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{oracle_exceptional, CanonicalModel, OracleBounds, Verdict};
use crate::error::{Error, Result};
use crate::syntax::{Concept, Inclusion, KnowledgeBase, Query};
use crate::{Closure, Reasoner};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleCheck {
    RcVsModels,
    SkVsDisk,
    MpVsBp,
    Exceptional,
}

impl fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleCheck::RcVsModels => "rc-vs-models",
            OracleCheck::SkVsDisk => "sk-vs-disk",
            OracleCheck::MpVsBp => "mp-vs-bp",
            OracleCheck::Exceptional => "exceptional",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Disagree,
    Unknown,
}

/// A canonical model in which library and oracle part ways.
#[derive(Clone, Debug, Serialize)]
pub struct Countermodel {
    /// The query or exceptionality probe.
    pub subject: String,
    pub library: bool,
    pub oracle: Verdict,
    /// Atoms true at each element.
    pub domain: Vec<Vec<String>>,
    pub ranks: Vec<usize>,
    /// `below[y]` lists every `x < y`; present for BP checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub below: Option<Vec<Vec<usize>>>,
    pub extensions: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: OracleCheck,
    pub verdict: Agreement,
    pub bounds: OracleBounds,
    /// Comparisons with a definite oracle answer.
    pub checked: usize,
    pub unknown: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Countermodel>,
}

/// Literals over `atoms` plus conjunctions of two literals on distinct atoms.
pub fn literal_probes<'a, I: IntoIterator<Item = &'a String>>(atoms: I) -> Vec<Concept> {
    let atoms: Vec<&String> = atoms.into_iter().collect();
    let lit = |a: &str, pos: bool| if pos { Concept::atom(a) } else { Concept::not(Concept::atom(a)) };
    let mut out = Vec::new();
    for a in &atoms {
        out.push(lit(a, true));
        out.push(lit(a, false));
    }
    for (i, a) in atoms.iter().enumerate() {
        for b in &atoms[i + 1..] {
            for (pa, pb) in [(true, true), (true, false), (false, true), (false, false)] {
                out.push(Concept::and(lit(a, pa), lit(b, pb)));
            }
        }
    }
    out
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn unknown(check: OracleCheck, bounds: &OracleBounds, reason: String) -> CheckReport {
    CheckReport {
        check,
        verdict: Agreement::Unknown,
        bounds: *bounds,
        checked: 0,
        unknown: 1,
        reason: Some(reason),
        countermodel: None,
    }
}

fn describe(m: &CanonicalModel) -> (Vec<Vec<String>>, Vec<usize>) {
    let domain = m
        .elements()
        .iter()
        .map(|&v| m.atoms().iter().enumerate().filter(|(i, _)| v >> i & 1 == 1).map(|(_, a)| a.clone()).collect())
        .collect();
    (domain, m.ranks().to_vec())
}

/// Compares the library against the oracle on every defeasible query built
/// from the KB's literal probes, or on every (level, probe) pair for
/// [`OracleCheck::Exceptional`].
pub fn cross_check(
    kb: &KnowledgeBase,
    reasoner: &Reasoner,
    check: OracleCheck,
    bounds: &OracleBounds,
) -> Result<CheckReport> {
    if check == OracleCheck::Exceptional {
        return check_exceptional(kb, reasoner, bounds);
    }
    if !bounds.canonical_mode {
        return Ok(unknown(check, bounds, "canonical mode is off".into()));
    }
    if !kb.is_role_free() {
        return Ok(unknown(check, bounds, "canonical models need a role-free knowledge base".into()));
    }
    let m = match CanonicalModel::build(kb, &BTreeSet::new(), bounds) {
        Ok(m) => m,
        Err(e @ (Error::BoundsExceeded(_) | Error::BoundsInsufficient(_))) => {
            return Ok(unknown(check, bounds, e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let order = m.induce_bp_order();
    let probes = literal_probes(&kb.signature().atoms);
    let mut checked = 0;
    for b in &probes {
        for d in &probes {
            let query = Query::Defeasible(b.clone(), d.clone());
            let (closure, oracle, minimal) = match check {
                OracleCheck::RcVsModels => (Closure::Rational, m.ranked_entails(b, d)?, m.typical(b)?),
                OracleCheck::SkVsDisk => (Closure::Skeptical, m.sk_semantic_entails(&order, b, d)?, m.bp_typical(&order, b)?),
                OracleCheck::MpVsBp => (Closure::Mp, m.bp_entails(&order, b, d)?, m.bp_typical(&order, b)?),
                OracleCheck::Exceptional => unreachable!(),
            };
            let library = reasoner.entails(&query, closure)?;
            checked += 1;
            if library != oracle {
                let (domain, ranks) = describe(&m);
                let below = (check != OracleCheck::RcVsModels).then(|| order.below.iter().map(|&b| bits(b)).collect());
                let extensions = BTreeMap::from([
                    (b.to_string(), bits(m.extension(b)?)),
                    (d.to_string(), bits(m.extension(d)?)),
                    (format!("min({b})"), bits(minimal)),
                ]);
                return Ok(CheckReport {
                    check,
                    verdict: Agreement::Disagree,
                    bounds: *bounds,
                    checked,
                    unknown: 0,
                    reason: None,
                    countermodel: Some(Countermodel {
                        subject: query.to_string(),
                        library,
                        oracle: oracle.into(),
                        domain,
                        ranks,
                        below,
                        extensions,
                    }),
                });
            }
        }
    }
    Ok(CheckReport {
        check,
        verdict: Agreement::Agree,
        bounds: *bounds,
        checked,
        unknown: 0,
        reason: None,
        countermodel: None,
    })
}

fn check_exceptional(kb: &KnowledgeBase, reasoner: &Reasoner, bounds: &OracleBounds) -> Result<CheckReport> {
    let p = reasoner.partition();
    let mut probes = literal_probes(&kb.signature().atoms);
    probes.push(Concept::Top);
    probes.extend(kb.defeasible.iter().map(|i| i.lhs.clone()));
    let (mut checked, mut unknowns) = (0, 0);
    for (i, level) in p.levels().iter().enumerate() {
        let defaults: BTreeSet<Inclusion> = level.iter().map(|&id| p.default(id).clone()).collect();
        for probe in &probes {
            let library = p.is_exceptional(level, probe)?;
            let oracle = oracle_exceptional(kb, &defaults, probe, bounds)?;
            if oracle == Verdict::Unknown {
                unknowns += 1;
                continue;
            }
            checked += 1;
            if Verdict::from(library) == oracle {
                continue;
            }
            let model = CanonicalModel::from_parts(&kb.strict, &defaults, &BTreeSet::new(), bounds).ok();
            let (domain, ranks, extensions) = match model {
                Some(m) => {
                    let (domain, ranks) = describe(&m);
                    let ext = m.extension(probe).map(bits).unwrap_or_default();
                    (domain, ranks, BTreeMap::from([(probe.to_string(), ext)]))
                }
                None => (Vec::new(), Vec::new(), BTreeMap::new()),
            };
            return Ok(CheckReport {
                check: OracleCheck::Exceptional,
                verdict: Agreement::Disagree,
                bounds: *bounds,
                checked,
                unknown: unknowns,
                reason: None,
                countermodel: Some(Countermodel {
                    subject: format!("{probe} exceptional for E{i}"),
                    library,
                    oracle,
                    domain,
                    ranks,
                    below: None,
                    extensions,
                }),
            });
        }
    }
    let verdict = if unknowns > 0 { Agreement::Unknown } else { Agreement::Agree };
    let reason = (unknowns > 0).then(|| format!("{unknowns} probes beyond the oracle bounds"));
    Ok(CheckReport {
        check: OracleCheck::Exceptional,
        verdict,
        bounds: *bounds,
        checked,
        unknown: unknowns,
        reason,
        countermodel: None,
    })
}
