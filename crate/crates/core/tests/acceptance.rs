//! Acceptance criteria A1–A10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use defeasor_core::oracle::{oracle_exceptional, CanonicalModel};
use defeasor_core::{
    lex_prefer, mp_prefer, parse_concept, parse_query, BaseOrder, Closure, Concept, DefaultSet, Inclusion,
    KnowledgeBase, OracleBounds, Query, Rank, Reasoner, StratifiedDefaultSet, Verdict,
};
use rayon::prelude::*;

use common::{corpus, load, query_concepts, SAMPLE_KBS, ROLE_FREE_SAMPLE_KBS};

#[derive(Default)]
struct Check {
    checked: usize,
    failures: Vec<String>,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(mut self, other: Check) -> Check {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }
}

fn c(s: &str) -> Concept {
    parse_concept(s).unwrap()
}

fn q(s: &str) -> Query {
    parse_query(s).unwrap()
}

fn ids(r: &Reasoner, lines: &str) -> DefaultSet {
    defeasor_core::parse_kb(lines)
        .unwrap()
        .defeasible
        .iter()
        .map(|i| r.partition().id_of(i).unwrap())
        .collect()
}

fn a1() -> Check {
    let mut ch = Check::default();
    let r = Reasoner::new(&load("student")).unwrap();
    for (concept, rank) in [
        ("Student", 0),
        ("WStudent", 1),
        ("Student & Italian", 0),
        ("Student & Italian & Pay_Taxes", 1),
        ("WStudent & Italian", 1),
        ("WStudent & Italian & !Pay_Taxes", 2),
    ] {
        let got = r.rank_of(&c(concept)).unwrap();
        ch.expect(got == Rank::Finite(rank), || format!("rank({concept}) = {got}, expected {rank}"));
    }
    for (query, expected) in [
        ("Student & Italian ~> !Pay_Taxes", true),
        ("WStudent & Italian ~> Pay_Taxes", true),
        ("WStudent ~> Smart", false),
    ] {
        let got = r.entails(&q(query), Closure::Rational).unwrap();
        ch.expect(got == expected, || format!("rc `{query}` = {got}"));
    }
    ch
}

fn a2() -> Check {
    let mut ch = Check::default();

    let r = Reasoner::new(&load("student")).unwrap();
    let base = r.skeptical_base(&c("WStudent")).unwrap();
    let mut expected = r.partition().level(1).clone();
    expected.extend(ids(&r, "Student ~> Smart"));
    ch.expect(base.base == expected, || "student base differs from E1 + {Student ~> Smart}".into());
    ch.expect(r.entails(&q("WStudent ~> Smart"), Closure::Skeptical).unwrap(), || "student sk query".into());

    let r = Reasoner::new(&load("employed_student")).unwrap();
    let base = r.skeptical_base(&c("Student & Employee")).unwrap();
    ch.expect(base.collapsed() && &base.base == r.partition().level(1), || "employed-student base is not E1".into());

    let r = Reasoner::new(&load("penguins")).unwrap();
    ch.expect(
        r.entails(&q("BabyPenguin ~> NiceFeather & !Fly & !BlackFeather"), Closure::Skeptical).unwrap(),
        || "penguin sk query".into(),
    );

    let r = Reasoner::new(&load("weak")).unwrap();
    let query = q("Student & Employee ~> Young");
    ch.expect(!r.entails(&query, Closure::Skeptical).unwrap(), || "weak KB sk should be false".into());
    ch.expect(r.entails(&query, Closure::Lex).unwrap(), || "weak KB lex should be true".into());
    ch
}

fn a3() -> Check {
    let mut ch = Check::default();
    let focus = c("Student & Employee");

    let r = Reasoner::new(&load("ssn")).unwrap();
    let mp = r.bases(&focus, BaseOrder::Mp).unwrap();
    ch.expect(mp.bases.len() == 2, || format!("ssn: {} MP bases", mp.bases.len()));
    let query = q("Student & Employee ~> some hasSSN. Top");
    ch.expect(r.entails(&query, Closure::Mp).unwrap(), || "ssn mp should be true".into());
    ch.expect(!r.entails(&query, Closure::Skeptical).unwrap(), || "ssn sk should be false".into());

    let r = Reasoner::new(&load("ssn_smart")).unwrap();
    let mp = r.bases(&focus, BaseOrder::Mp).unwrap();
    let lex = r.bases(&focus, BaseOrder::Lex).unwrap();
    ch.expect(mp.bases.len() == 2, || format!("ssn_smart: {} MP bases", mp.bases.len()));
    ch.expect(lex.bases.len() == 1, || format!("ssn_smart: {} lex bases", lex.bases.len()));
    ch
}

/// Per-KB tallies for the corpus-wide criteria A4–A10.
#[derive(Default)]
struct Tally {
    a4: Check,
    a5: Check,
    a6: Check,
    a7: Check,
    a8: Check,
    a9: Check,
    a10: Check,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            a4: self.a4.merge(o.a4),
            a5: self.a5.merge(o.a5),
            a6: self.a6.merge(o.a6),
            a7: self.a7.merge(o.a7),
            a8: self.a8.merge(o.a8),
            a9: self.a9.merge(o.a9),
            a10: self.a10.merge(o.a10),
        }
    }
}

/// A4 and A9 on any KB, plus the rank-based structural checks of A10.
fn closure_checks(name: &str, kb: &KnowledgeBase, t: &mut Tally) {
    let r = Reasoner::new(kb).unwrap();
    let p = r.partition();
    let concepts = query_concepts(kb);
    let budget = 2 * kb.defeasible.len();

    for b in &concepts {
        let base = r.skeptical_base(b).unwrap();
        t.a9.expect(base.call_count <= budget, || {
            format!("{name}: focus {b} used {} checks, bound {budget}", base.call_count)
        });
        for d in &concepts {
            let query = Query::Defeasible(b.clone(), d.clone());
            let answers: Vec<bool> = Closure::ALL.iter().map(|&m| r.entails(&query, m).unwrap()).collect();
            for (w, pair) in answers.windows(2).enumerate() {
                t.a4.expect(!pair[0] || pair[1], || {
                    format!("{name}: `{query}` in {} but not {}", Closure::ALL[w], Closure::ALL[w + 1])
                });
            }
        }
    }

    for pair in p.levels().windows(2) {
        t.a10.expect(pair[1].is_subset(&pair[0]), || format!("{name}: levels not decreasing"));
    }
    for c1 in &concepts {
        for c2 in &concepts {
            let (r1, r2) = (r.rank_of(c1).unwrap(), r.rank_of(c2).unwrap());
            let r12 = r.rank_of(&Concept::and(c1.clone(), c2.clone())).unwrap();
            t.a10.expect(r12 >= r1.max(r2), || format!("{name}: rank({c1} & {c2}) = {r12} below a conjunct"));
        }
    }
}

/// Oracle agreement (A5–A8) and the BP-order checks of A10 on a role-free KB.
fn oracle_checks(name: &str, kb: &KnowledgeBase, t: &mut Tally) {
    let bounds = OracleBounds::desk();
    let r = Reasoner::new(kb).unwrap();
    let p = r.partition();
    let concepts = query_concepts(kb);

    let mut probes = concepts.clone();
    probes.push(Concept::Top);
    probes.extend(kb.defeasible.iter().map(|i| i.lhs.clone()));
    for level in p.levels() {
        let defaults: BTreeSet<Inclusion> = level.iter().map(|&id| p.default(id).clone()).collect();
        for probe in &probes {
            let ours = p.is_exceptional(level, probe).unwrap();
            let oracle = oracle_exceptional(kb, &defaults, probe, &bounds).unwrap();
            t.a5.expect(oracle != Verdict::Unknown && Verdict::from(ours) == oracle, || {
                format!("{name}: exceptional({probe}) over {} defaults: ours {ours}, oracle {oracle}", defaults.len())
            });
        }
    }

    let m = CanonicalModel::build(kb, &BTreeSet::new(), &bounds).unwrap();
    let order = m.induce_bp_order();
    t.a10.expect(order.is_strict_partial_order(), || format!("{name}: BP order is not a strict partial order"));
    t.a10.expect(order.refines(m.ranks()), || format!("{name}: <_rc not contained in <"));
    for d in &kb.defeasible {
        let min = m.bp_typical(&order, &d.lhs).unwrap();
        let ok = min & !m.extension(&d.rhs).unwrap() == 0;
        t.a10.expect(ok, || format!("{name}: BP model violates {}", defeasor_core::Typical(d)));
    }

    for b in &concepts {
        for d in &concepts {
            let query = Query::Defeasible(b.clone(), d.clone());
            let rc = r.entails(&query, Closure::Rational).unwrap();
            let model = m.ranked_entails(b, d).unwrap();
            t.a6.expect(rc == model, || format!("{name}: `{query}` rc {rc}, minimal ranked models {model}"));
            let mp = r.entails(&query, Closure::Mp).unwrap();
            let bp = m.bp_entails(&order, b, d).unwrap();
            t.a7.expect(mp == bp, || format!("{name}: `{query}` mp {mp}, minimal BP-models {bp}"));
            let sk = r.entails(&query, Closure::Skeptical).unwrap();
            let di = m.sk_semantic_entails(&order, b, d).unwrap();
            t.a8.expect(sk == di, || format!("{name}: `{query}` sk {sk}, DI_Sk route {di}"));
        }
    }
}

/// Strict partial order laws for both base preferences, and MP ⊆ lex.
fn order_laws(name: &str, kb: &KnowledgeBase, t: &mut Tally) {
    let r = Reasoner::new(kb).unwrap();
    let p = r.partition();
    let finite: Vec<_> = p.all_defaults().difference(p.infinite()).copied().collect();
    let sets: Vec<StratifiedDefaultSet> = (0u32..1 << finite.len())
        .map(|mask| {
            let s: DefaultSet = (0..finite.len()).filter(|i| mask >> i & 1 == 1).map(|i| finite[i]).collect();
            StratifiedDefaultSet::new(p, &s)
        })
        .collect();
    let stride = (sets.len() / 16).max(1);
    let sample: Vec<_> = sets.iter().step_by(stride).collect();
    for (label, prefer) in [("mp", mp_prefer as fn(&_, &_) -> bool), ("lex", lex_prefer)] {
        for x in &sets {
            t.a10.expect(!prefer(x, x), || format!("{name}: {label} preference not irreflexive"));
            for y in &sets {
                if prefer(x, y) {
                    t.a10.expect(!prefer(y, x), || format!("{name}: {label} preference not asymmetric"));
                }
                if label == "mp" && mp_prefer(x, y) {
                    t.a10.expect(lex_prefer(x, y), || format!("{name}: mp preference not contained in lex"));
                }
            }
        }
        for x in &sample {
            for y in &sample {
                if !prefer(x, y) {
                    continue;
                }
                for z in &sample {
                    if prefer(y, z) {
                        t.a10.expect(prefer(x, z), || format!("{name}: {label} preference not transitive"));
                    }
                }
            }
        }
    }
}

fn corpus_tally() -> Tally {
    let mut jobs: Vec<(String, KnowledgeBase, bool)> = Vec::new();
    for name in SAMPLE_KBS {
        let kb = load(name);
        let role_free = kb.is_role_free();
        jobs.push((name.to_string(), kb, role_free));
    }
    for name in ROLE_FREE_SAMPLE_KBS.iter().filter(|n| !SAMPLE_KBS.contains(n)) {
        jobs.push((format!("{name}#oracle"), load(name), true));
    }
    for (i, kb) in corpus().into_iter().enumerate() {
        jobs.push((format!("random#{i}"), kb, true));
    }
    jobs.par_iter()
        .map(|(name, kb, role_free)| {
            let mut t = Tally::default();
            if !name.ends_with("#oracle") {
                closure_checks(name, kb, &mut t);
            }
            if *role_free {
                oracle_checks(name, kb, &mut t);
                order_laws(name, kb, &mut t);
            }
            t
        })
        .reduce(Tally::default, Tally::merge)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results = vec![
        ("A1", "rational closure ranks and answers on the student KB", a1()),
        ("A2", "skeptical closure examples", a2()),
        ("A3", "MP and lexicographic examples", a3()),
    ];
    let t = corpus_tally();
    results.extend([
        ("A4", "RC ⊆ SK ⊆ MP ⊆ LEX on sample and random KBs", t.a4),
        ("A5", "materialized exceptionality matches the oracle", t.a5),
        ("A6", "rc_entails matches minimal canonical ranked models", t.a6),
        ("A7", "MP closure matches minimal canonical BP-models", t.a7),
        ("A8", "skeptical closure matches the DI_Sk characterization", t.a8),
        ("A9", "skeptical base checks ≤ 2|T|", t.a9),
        ("A10", "structural properties", t.a10),
    ]);
    let mut failed = false;
    for (id, title, ch) in &results {
        let verdict = if ch.failures.is_empty() { "PASS" } else { "FAIL" };
        failed |= !ch.failures.is_empty();
        println!("{verdict} {id:<3} {title} ({} checks, {} failures)", ch.checked, ch.failures.len());
        for f in ch.failures.iter().take(10) {
            println!("      {f}");
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
