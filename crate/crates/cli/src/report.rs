use std::collections::BTreeMap;
use std::fmt::Write;

use defeasor_core::oracle::CheckReport;
use defeasor_core::{
    BaseOrder, Closure, Concept, DefaultSet, KnowledgeBase, Query, Rank, Reasoner, Result, StratifiedDefaultSet,
    StratumStatus, Typical,
};
use serde::Serialize;

fn names(r: &Reasoner, set: &DefaultSet) -> Vec<String> {
    let p = r.partition();
    set.iter().map(|&id| Typical(p.default(id)).to_string()).collect()
}

fn block(out: &mut String, title: &str, items: &[String]) {
    if items.is_empty() {
        let _ = writeln!(out, "{title}: (none)");
    } else {
        let _ = writeln!(out, "{title}:");
        for i in items {
            let _ = writeln!(out, "  {i}");
        }
    }
}

#[derive(Serialize)]
pub struct RankReport {
    pub strict: Vec<String>,
    /// Defaults of `E₀, E₁, …`; strict axioms belong to every level.
    pub levels: Vec<Vec<String>>,
    pub strata: Vec<Vec<String>>,
    pub infinite: Vec<String>,
    /// Rank of every defeasible antecedent.
    pub ranks: BTreeMap<String, Rank>,
}

impl RankReport {
    pub fn new(kb: &KnowledgeBase, r: &Reasoner) -> Result<Self> {
        let p = r.partition();
        let mut ranks = BTreeMap::new();
        for d in p.defaults() {
            ranks.insert(d.lhs.to_string(), r.rank_of(&d.lhs)?);
        }
        Ok(RankReport {
            strict: kb.strict.iter().map(|i| format!("{} => {}", i.lhs, i.rhs)).collect(),
            levels: p.levels().iter().map(|l| names(r, l)).collect(),
            strata: p.strata().iter().map(|s| names(r, s)).collect(),
            infinite: names(r, p.infinite()),
            ranks,
        })
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        block(&mut out, "strict", &self.strict);
        for (i, l) in self.levels.iter().enumerate() {
            block(&mut out, &format!("E{i}"), l);
        }
        for (i, s) in self.strata.iter().enumerate() {
            block(&mut out, &format!("D{i}"), s);
        }
        block(&mut out, "infinite", &self.infinite);
        let _ = writeln!(out, "ranks:");
        for (c, rank) in &self.ranks {
            let _ = writeln!(out, "  {rank}\t{c}");
        }
        out
    }
}

#[derive(Serialize)]
pub struct StratumJson {
    pub level: usize,
    pub candidates: Vec<String>,
    pub compatible: Vec<String>,
    pub status: StratumStatus,
}

#[derive(Serialize)]
pub struct SkepticalExplanation {
    pub focus: String,
    pub k: Rank,
    pub strata: Vec<StratumJson>,
    pub cutoff: Option<usize>,
    pub failing_level: Option<usize>,
    pub base: Vec<String>,
    pub call_count: usize,
}

#[derive(Serialize)]
pub struct BaseJson {
    /// Defaults of the base by rank, rank 0 first.
    pub strata: Vec<Vec<String>>,
}

impl BaseJson {
    fn new(r: &Reasoner, s: &StratifiedDefaultSet) -> Self {
        BaseJson { strata: s.strata().iter().map(|x| names(r, x)).collect() }
    }

    fn text(&self, out: &mut String, i: usize) {
        let _ = writeln!(out, "base {}:", i + 1);
        for (rank, s) in self.strata.iter().enumerate() {
            let _ = writeln!(out, "  rank {rank}: {}", if s.is_empty() { "-".to_string() } else { s.join("; ") });
        }
    }
}

#[derive(Serialize)]
pub struct Stats {
    /// Compatibility checks spent building the base or bases.
    pub entailment_checks: usize,
    /// Satisfiability tests run after the ranking was computed.
    pub tableau_calls: u64,
}

#[derive(Serialize)]
pub struct QueryReport {
    pub query: String,
    pub mode: Closure,
    pub answer: bool,
    /// Rank of the antecedent of a defeasible query.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<Rank>,
    /// Rank of `B ⊓ ¬D`, compared against `rank` under rational closure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counter_rank: Option<Rank>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skeptical: Option<SkepticalExplanation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<BaseJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
}

impl QueryReport {
    pub fn new(r: &Reasoner, query: &Query, mode: Closure, stats: bool) -> Result<Self> {
        let before = r.partition().theory().calls();
        let answer = r.entails(query, mode)?;
        let mut report = QueryReport {
            query: query.to_string(),
            mode,
            answer,
            rank: None,
            counter_rank: None,
            skeptical: None,
            bases: None,
            stats: None,
        };
        let mut checks = 0;
        if let Query::Defeasible(b, d) = query {
            let rank = r.rank_of(b)?;
            report.rank = Some(rank);
            match mode {
                Closure::Rational => {
                    report.counter_rank = Some(r.rank_of(&Concept::and(b.clone(), Concept::not(d.clone())))?);
                }
                Closure::Skeptical => {
                    let s = r.skeptical_base(b)?;
                    checks = s.call_count;
                    report.skeptical = Some(SkepticalExplanation {
                        focus: s.focus.to_string(),
                        k: s.rank,
                        strata: s
                            .strata
                            .iter()
                            .map(|st| StratumJson {
                                level: st.level,
                                candidates: names(r, &st.candidates),
                                compatible: names(r, &st.compatible),
                                status: st.status,
                            })
                            .collect(),
                        cutoff: s.cutoff,
                        failing_level: s.failing_level,
                        base: names(r, &s.base),
                        call_count: s.call_count,
                    });
                }
                Closure::Mp | Closure::Lex if !rank.is_infinite() => {
                    let order = if mode == Closure::Mp { BaseOrder::Mp } else { BaseOrder::Lex };
                    let set = r.bases(b, order)?;
                    checks = set.candidates;
                    report.bases = Some(set.bases.iter().map(|s| BaseJson::new(r, s)).collect());
                }
                _ => {}
            }
        }
        if stats {
            let tableau_calls = r.partition().theory().calls() - before;
            report.stats = Some(Stats { entailment_checks: checks, tableau_calls });
        }
        Ok(report)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.answer { "entailed" } else { "not entailed" };
        let _ = writeln!(out, "{}: {verdict} ({})", self.query, self.mode);
        if let Some(rank) = self.rank {
            let _ = write!(out, "rank: {rank}");
            if let Some(counter) = self.counter_rank {
                let _ = write!(out, ", counter rank: {counter}");
            }
            out.push('\n');
        }
        if let Some(s) = &self.skeptical {
            for st in &s.strata {
                let status = match st.status {
                    StratumStatus::Accepted => "accepted",
                    StratumStatus::Rejected => "rejected",
                    StratumStatus::NotEvaluated => "not evaluated",
                };
                let _ = writeln!(out, "S{}: {status} [{}]", st.level, st.compatible.join("; "));
            }
            block(&mut out, "base", &s.base);
        }
        if let Some(bases) = &self.bases {
            for (i, b) in bases.iter().enumerate() {
                b.text(&mut out, i);
            }
        }
        if let Some(st) = &self.stats {
            let _ = writeln!(out, "entailment checks: {}, tableau calls: {}", st.entailment_checks, st.tableau_calls);
        }
        out
    }
}

#[derive(Serialize)]
pub struct BasesReport {
    pub focus: String,
    pub rank: usize,
    pub order: BaseOrder,
    pub candidates: usize,
    pub bases: Vec<BaseJson>,
}

impl BasesReport {
    pub fn new(r: &Reasoner, focus: &Concept, order: BaseOrder) -> Result<Self> {
        let set = r.bases(focus, order)?;
        Ok(BasesReport {
            focus: set.focus.to_string(),
            rank: set.rank,
            order,
            candidates: set.candidates,
            bases: set.bases.iter().map(|s| BaseJson::new(r, s)).collect(),
        })
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let n = self.bases.len();
        let _ = writeln!(
            out,
            "{} {} base{} for {} (rank {})",
            n,
            self.order,
            if n == 1 { "" } else { "s" },
            self.focus,
            self.rank
        );
        for (i, b) in self.bases.iter().enumerate() {
            b.text(&mut out, i);
        }
        out
    }
}

pub fn oracle_text(r: &CheckReport) -> String {
    let mut out = String::new();
    let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let _ = writeln!(out, "{}: {verdict} ({} comparisons, {} unknown)", r.check, r.checked, r.unknown);
    if let Some(reason) = &r.reason {
        let _ = writeln!(out, "reason: {reason}");
    }
    if let Some(m) = &r.countermodel {
        let _ = writeln!(out, "countermodel for {}: library {}, oracle {}", m.subject, m.library, m.oracle);
        for (i, (atoms, rank)) in m.domain.iter().zip(&m.ranks).enumerate() {
            let _ = writeln!(out, "  x{i} rank {rank}: {{{}}}", atoms.join(", "));
        }
        for (c, ext) in &m.extensions {
            let ext: Vec<String> = ext.iter().map(|x| format!("x{x}")).collect();
            let _ = writeln!(out, "  {c} = {{{}}}", ext.join(", "));
        }
    }
    out
}
