//! Finite ranked interpretations and their exhaustive enumeration.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::{Assertion, Concept, Inclusion, KnowledgeBase, Signature};

use super::{OracleBounds, Verdict};

/// At most 64 elements; sets of elements are bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedInterpretation {
    pub atoms: Vec<String>,
    pub roles: Vec<String>,
    pub individuals: Vec<String>,
    /// `k_M(x)` per element.
    pub ranks: Vec<usize>,
    /// Atoms true at each element, as a bitmask over `atoms`.
    pub labels: Vec<u64>,
    /// `successors[r][x]`: elements reachable from `x` through role `r`.
    pub successors: Vec<Vec<u64>>,
    pub individual_map: Vec<usize>,
}

impl RankedInterpretation {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn full(&self) -> u64 {
        mask_of(self.len())
    }

    /// Extension of `c`. Names outside the interpretation's signature are empty.
    pub fn extension(&self, c: &Concept) -> u64 {
        let full = self.full();
        match c {
            Concept::Top => full,
            Concept::Bot => 0,
            Concept::Atom(a) => match self.atoms.iter().position(|x| x == a) {
                Some(i) => self.select(|x| self.labels[x] >> i & 1 == 1),
                None => 0,
            },
            Concept::Not(d) => full & !self.extension(d),
            Concept::And(l, r) => self.extension(l) & self.extension(r),
            Concept::Or(l, r) => self.extension(l) | self.extension(r),
            Concept::Some(role, d) => {
                let ext = self.extension(d);
                match self.roles.iter().position(|x| x == role) {
                    Some(r) => self.select(|x| self.successors[r][x] & ext != 0),
                    None => 0,
                }
            }
            Concept::All(role, d) => {
                let ext = self.extension(d);
                match self.roles.iter().position(|x| x == role) {
                    Some(r) => self.select(|x| self.successors[r][x] & !ext == 0),
                    None => full,
                }
            }
        }
    }

    fn select(&self, keep: impl Fn(usize) -> bool) -> u64 {
        (0..self.len()).filter(|&x| keep(x)).fold(0, |m, x| m | 1 << x)
    }

    /// `min_<(C)`: the lowest-ranked elements of `C`.
    pub fn typical(&self, c: &Concept) -> u64 {
        let ext = self.extension(c);
        match self.min_rank(ext) {
            Some(r) => ext & self.select(|x| self.ranks[x] == r),
            None => 0,
        }
    }

    pub fn min_rank(&self, set: u64) -> Option<usize> {
        (0..self.len()).filter(|x| set >> x & 1 == 1).map(|x| self.ranks[x]).min()
    }

    pub fn rank_zero(&self) -> u64 {
        self.select(|x| self.ranks[x] == 0)
    }

    pub fn satisfies_strict(&self, i: &Inclusion) -> bool {
        self.extension(&i.lhs) & !self.extension(&i.rhs) == 0
    }

    pub fn satisfies_defeasible(&self, i: &Inclusion) -> bool {
        self.typical(&i.lhs) & !self.extension(&i.rhs) == 0
    }

    pub fn satisfies_assertion(&self, a: &Assertion) -> bool {
        let ind = |name: &str| {
            self.individuals
                .iter()
                .position(|x| x == name)
                .map(|i| self.individual_map[i])
        };
        match a {
            Assertion::Concept { concept, individual } => {
                ind(individual).is_some_and(|x| self.extension(concept) >> x & 1 == 1)
            }
            Assertion::Role { role, subject, object } => {
                match (self.roles.iter().position(|r| r == role), ind(subject), ind(object)) {
                    (Some(r), Some(s), Some(o)) => self.successors[r][s] >> o & 1 == 1,
                    _ => false,
                }
            }
        }
    }
}

pub(crate) fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Strict inclusions hold extensionally, typical `C`s are `D`s, assertions hold.
pub fn check_ranked_model(kb: &KnowledgeBase, m: &RankedInterpretation) -> bool {
    kb.strict.iter().all(|i| m.satisfies_strict(i))
        && kb.defeasible.iter().all(|i| m.satisfies_defeasible(i))
        && kb.abox.iter().all(|a| m.satisfies_assertion(a))
}

/// Rank vectors of length `n` over `0..=max_rank` whose used ranks form a prefix `0..r`.
pub(crate) fn prefix_rank_vectors(n: usize, max_rank: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut v = vec![0; n];
    fn go(i: usize, v: &mut Vec<usize>, max_rank: usize, out: &mut Vec<Vec<usize>>) {
        if i == v.len() {
            let used: BTreeSet<usize> = v.iter().copied().collect();
            if used.iter().enumerate().all(|(j, &r)| j == r) {
                out.push(v.clone());
            }
            return;
        }
        for r in 0..=max_rank {
            v[i] = r;
            go(i + 1, v, max_rank, out);
        }
    }
    go(0, &mut v, max_rank, &mut out);
    out
}

/// Lazily yields every interpretation over `sig` with `1..=max_domain`
/// elements and ranks `0..=max_rank`, ranks normalized to a prefix.
pub struct RankedEnumerator {
    atoms: Vec<String>,
    roles: Vec<String>,
    individuals: Vec<String>,
    max_domain: usize,
    max_rank: usize,
    n: usize,
    rank_vectors: Vec<Vec<usize>>,
    rv: usize,
    rest: u128,
    rest_total: u128,
}

impl RankedEnumerator {
    fn start_size(&mut self, n: usize) {
        self.n = n;
        self.rank_vectors = prefix_rank_vectors(n, self.max_rank);
        self.rv = 0;
        self.rest = 0;
        let bits = (self.atoms.len() * n + self.roles.len() * n * n) as u32;
        self.rest_total = (1u128 << bits) * (n as u128).pow(self.individuals.len() as u32);
    }

    fn decode(&self) -> RankedInterpretation {
        let n = self.n;
        let mut code = self.rest;
        let mut take = |bits: usize| {
            let v = (code & ((1u128 << bits) - 1)) as u64;
            code >>= bits;
            v
        };
        let a = self.atoms.len();
        let labels = (0..n).map(|_| take(a)).collect();
        let successors = (0..self.roles.len())
            .map(|_| (0..n).map(|_| take(n)).collect())
            .collect();
        let individual_map = (0..self.individuals.len())
            .map(|_| {
                let x = (code % n as u128) as usize;
                code /= n as u128;
                x
            })
            .collect();
        RankedInterpretation {
            atoms: self.atoms.clone(),
            roles: self.roles.clone(),
            individuals: self.individuals.clone(),
            ranks: self.rank_vectors[self.rv].clone(),
            labels,
            successors,
            individual_map,
        }
    }
}

impl Iterator for RankedEnumerator {
    type Item = RankedInterpretation;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.n > self.max_domain {
                return None;
            }
            if self.rv < self.rank_vectors.len() && self.rest < self.rest_total {
                let m = self.decode();
                self.rest += 1;
                if self.rest == self.rest_total {
                    self.rest = 0;
                    self.rv += 1;
                }
                return Some(m);
            }
            let next = self.n + 1;
            self.start_size(next);
        }
    }
}

pub fn enumerate_ranked_interpretations(
    sig: &Signature,
    bounds: &OracleBounds,
) -> Result<RankedEnumerator> {
    if sig.atoms.len() > bounds.max_atoms {
        return Err(Error::BoundsExceeded(format!(
            "{} atoms, at most {} allowed",
            sig.atoms.len(),
            bounds.max_atoms
        )));
    }
    if sig.roles.len() > bounds.max_roles {
        return Err(Error::BoundsExceeded(format!(
            "{} roles, at most {} allowed",
            sig.roles.len(),
            bounds.max_roles
        )));
    }
    let n = bounds.max_domain;
    let bits = sig.atoms.len() * n + sig.roles.len() * n * n;
    if n > 64 || bits > 100 {
        return Err(Error::BoundsExceeded(format!("domain of {n} elements is too large to enumerate")));
    }
    let mut e = RankedEnumerator {
        atoms: sig.atoms.iter().cloned().collect(),
        roles: sig.roles.iter().cloned().collect(),
        individuals: sig.individuals.iter().cloned().collect(),
        max_domain: n,
        max_rank: bounds.max_rank,
        n: 0,
        rank_vectors: Vec::new(),
        rv: 0,
        rest: 0,
        rest_total: 0,
    };
    e.start_size(1);
    Ok(e)
}

/// Exceptionality by search for a model of `Strict ∪ level` with a rank-0 `c` element.
pub(crate) fn enumerate_exceptional(
    strict: &BTreeSet<Inclusion>,
    level: &BTreeSet<Inclusion>,
    c: &Concept,
    bounds: &OracleBounds,
) -> Result<Verdict> {
    let mut kb = KnowledgeBase::new();
    kb.strict = strict.clone();
    kb.defeasible = level.clone();
    let mut sig = kb.signature();
    c.atoms(&mut sig.atoms);
    c.roles(&mut sig.roles);
    for m in enumerate_ranked_interpretations(&sig, bounds)? {
        if m.extension(c) & m.rank_zero() != 0 && check_ranked_model(&kb, &m) {
            return Ok(Verdict::False);
        }
    }
    let complete = sig.roles.is_empty()
        && bounds.max_domain as u128 >= 1u128 << sig.atoms.len()
        && bounds.max_rank >= level.len();
    Ok(if complete { Verdict::True } else { Verdict::Unknown })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_kb;

    fn sig(atoms: &[&str], roles: &[&str]) -> Signature {
        Signature {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            roles: roles.iter().map(|s| s.to_string()).collect(),
            individuals: BTreeSet::new(),
        }
    }

    fn bounds(domain: usize, rank: usize) -> OracleBounds {
        OracleBounds { max_atoms: 4, max_roles: 1, max_domain: domain, max_rank: rank, canonical_mode: false }
    }

    #[test]
    fn counts() {
        let count = |s: &Signature, d, r| enumerate_ranked_interpretations(s, &bounds(d, r)).unwrap().count();
        assert_eq!(count(&sig(&["A"], &[]), 1, 0), 2);
        assert_eq!(count(&sig(&["A", "B"], &[]), 1, 0), 4);
        // n=1: 1 rank vector x 2 labels; n=2: 3 rank vectors x 4 labelings
        assert_eq!(count(&sig(&["A"], &[]), 2, 1), 2 + 3 * 4);
        // one role adds n² edge bits
        assert_eq!(count(&sig(&[], &["r"]), 2, 0), 2 + 16);
    }

    #[test]
    fn rank_vectors_are_prefix_normalized() {
        // ordered set partitions of 3 elements into at most 3 blocks: 1 + 6 + 6
        assert_eq!(prefix_rank_vectors(3, 2).len(), 13);
        assert_eq!(prefix_rank_vectors(3, 0), vec![vec![0, 0, 0]]);
    }

    fn single(atoms: &[&str], true_atoms: &[&str]) -> RankedInterpretation {
        let label = atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| true_atoms.contains(a))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        RankedInterpretation {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            roles: vec![],
            individuals: vec![],
            ranks: vec![0],
            labels: vec![label],
            successors: vec![],
            individual_map: vec![],
        }
    }

    #[test]
    fn model_checks() {
        let kb = parse_kb("Student ~> !Pay_Taxes\nWStudent ~> Pay_Taxes\nStudent ~> Smart\nWStudent => Student").unwrap();
        let atoms = ["Pay_Taxes", "Smart", "Student", "WStudent"];
        assert!(check_ranked_model(&kb, &single(&atoms, &["Student", "Smart"])));
        assert!(!check_ranked_model(&kb, &single(&atoms, &["WStudent", "Student", "Pay_Taxes"])));
        assert!(check_ranked_model(&KnowledgeBase::new(), &single(&atoms, &["Smart"])));
    }

    #[test]
    fn quantifier_extensions() {
        let m = RankedInterpretation {
            atoms: vec!["A".into()],
            roles: vec!["r".into()],
            individuals: vec![],
            ranks: vec![0, 0],
            labels: vec![0, 1],
            successors: vec![vec![0b10, 0]],
            individual_map: vec![],
        };
        assert_eq!(m.extension(&Concept::some("r", Concept::atom("A"))), 0b01);
        assert_eq!(m.extension(&Concept::all("r", Concept::atom("A"))), 0b11);
        assert_eq!(m.extension(&Concept::all("r", Concept::not(Concept::atom("A")))), 0b10);
    }
}
