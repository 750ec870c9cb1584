//! Minimal canonical models of role-free knowledge bases.
//!
//! For a role-free KB, elements with the same valuation are interchangeable
//! and ranked models over a fixed set of valuations are closed under
//! pointwise minimum of ranks. So there is a least model over the set `V*`
//! of valuations that occur in some model, and it realizes every
//! KB-consistent set of literals. Its rank function is computed as a least
//! fixpoint; valuations whose rank climbs past `|V|` occur in no model and
//! are dropped.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rc::Rank;
use crate::syntax::{Concept, Inclusion, KnowledgeBase};

use super::interp::{mask_of, RankedInterpretation};
use super::{OracleBounds, Verdict};

/// Truth of a role-free concept under a valuation.
pub(crate) fn holds(c: &Concept, v: u64, index: &BTreeMap<String, usize>) -> bool {
    match c {
        Concept::Top => true,
        Concept::Bot => false,
        Concept::Atom(a) => index.get(a).is_some_and(|&i| v >> i & 1 == 1),
        Concept::Not(d) => !holds(d, v, index),
        Concept::And(l, r) => holds(l, v, index) && holds(r, v, index),
        Concept::Or(l, r) => holds(l, v, index) || holds(r, v, index),
        Concept::All(..) | Concept::Some(..) => unreachable!("role-free concepts only"),
    }
}

/// The least ranked model over all KB-consistent valuations.
#[derive(Clone, Debug)]
pub struct CanonicalModel {
    atoms: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Valuations satisfying the strict part, before pruning.
    strict_valuations: Vec<u64>,
    /// `V*`
    elements: Vec<u64>,
    ranks: Vec<usize>,
    defaults: Vec<Inclusion>,
    /// Defaults violated at each element, as a bitmask over `defaults`.
    violations: Vec<u64>,
    /// `k_M(C)` for each default's antecedent.
    default_ranks: Vec<Rank>,
}

impl CanonicalModel {
    /// Builds the model over the KB's atoms plus `extra_atoms`. The ABox is ignored.
    pub fn build(kb: &KnowledgeBase, extra_atoms: &BTreeSet<String>, bounds: &OracleBounds) -> Result<Self> {
        Self::from_parts(&kb.strict, &kb.defeasible, extra_atoms, bounds)
    }

    pub fn from_parts(
        strict: &BTreeSet<Inclusion>,
        defeasible: &BTreeSet<Inclusion>,
        extra_atoms: &BTreeSet<String>,
        bounds: &OracleBounds,
    ) -> Result<Self> {
        if !bounds.canonical_mode {
            return Err(Error::BoundsInsufficient("canonical mode is off".into()));
        }
        let mut atoms = extra_atoms.clone();
        for i in strict.iter().chain(defeasible) {
            if i.lhs.has_roles() || i.rhs.has_roles() {
                return Err(Error::NotRoleFree);
            }
            i.lhs.atoms(&mut atoms);
            i.rhs.atoms(&mut atoms);
        }
        if atoms.len() > bounds.max_atoms || atoms.len() > 6 {
            return Err(Error::BoundsExceeded(format!(
                "{} atoms, at most {} allowed",
                atoms.len(),
                bounds.max_atoms.min(6)
            )));
        }
        if defeasible.len() > 64 {
            return Err(Error::BoundsExceeded("more than 64 defeasible inclusions".into()));
        }
        let atoms: Vec<String> = atoms.into_iter().collect();
        let index: BTreeMap<String, usize> =
            atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let strict_valuations: Vec<u64> = (0..1u64 << atoms.len())
            .filter(|&v| strict.iter().all(|i| !holds(&i.lhs, v, &index) || holds(&i.rhs, v, &index)))
            .collect();
        let defaults: Vec<Inclusion> = defeasible.iter().cloned().collect();
        let applies = |v: u64, d: &Inclusion| holds(&d.lhs, v, &index);
        let violates = |v: u64, d: &Inclusion| applies(v, d) && !holds(&d.rhs, v, &index);

        let mut elements = strict_valuations.clone();
        let ranks = loop {
            let n = elements.len();
            let mut r = vec![0usize; n];
            let mut escaped = None;
            'fix: loop {
                let mut changed = false;
                for (x, &v) in elements.iter().enumerate() {
                    for d in &defaults {
                        if !violates(v, d) {
                            continue;
                        }
                        let floor = (0..n).filter(|&u| applies(elements[u], d)).map(|u| r[u]).min().unwrap();
                        if r[x] < floor + 1 {
                            r[x] = floor + 1;
                            changed = true;
                        }
                    }
                }
                if r.iter().any(|&k| k >= n) {
                    escaped = Some(r.iter().map(|&k| k >= n).collect::<Vec<_>>());
                    break 'fix;
                }
                if !changed {
                    break 'fix;
                }
            }
            match escaped {
                None => break r,
                Some(out) => {
                    elements = elements.iter().zip(out).filter(|(_, o)| !o).map(|(&v, _)| v).collect();
                }
            }
        };
        if elements.len() > bounds.max_domain {
            return Err(Error::BoundsInsufficient(format!(
                "{} KB-consistent valuations, domain bound is {}",
                elements.len(),
                bounds.max_domain
            )));
        }
        if let Some(&top) = ranks.iter().max() {
            if top > bounds.max_rank {
                return Err(Error::BoundsInsufficient(format!(
                    "model needs rank {top}, rank bound is {}",
                    bounds.max_rank
                )));
            }
        }
        let violations = elements
            .iter()
            .map(|&v| {
                defaults
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| violates(v, d))
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let default_ranks = defaults
            .iter()
            .map(|d| {
                elements
                    .iter()
                    .zip(&ranks)
                    .filter(|(&v, _)| applies(v, d))
                    .map(|(_, &r)| r)
                    .min()
                    .map_or(Rank::Infinite, Rank::Finite)
            })
            .collect();
        Ok(CanonicalModel {
            atoms,
            index,
            strict_valuations,
            elements,
            ranks,
            defaults,
            violations,
            default_ranks,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn defaults(&self) -> &[Inclusion] {
        &self.defaults
    }

    pub fn default_rank(&self, i: usize) -> Rank {
        self.default_ranks[i]
    }

    pub fn violations(&self, x: usize) -> u64 {
        self.violations[x]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check_atoms(&self, c: &Concept) -> Result<()> {
        if c.has_roles() {
            return Err(Error::NotRoleFree);
        }
        let mut atoms = BTreeSet::new();
        c.atoms(&mut atoms);
        match atoms.into_iter().find(|a| !self.index.contains_key(a)) {
            Some(a) => Err(Error::BoundsExceeded(format!("atom `{a}` is outside the model's signature"))),
            None => Ok(()),
        }
    }

    pub fn extension(&self, c: &Concept) -> Result<u64> {
        self.check_atoms(c)?;
        Ok(self
            .elements
            .iter()
            .enumerate()
            .filter(|(_, &v)| holds(c, v, &self.index))
            .fold(0, |m, (x, _)| m | 1 << x))
    }

    /// `k_M(C)`
    pub fn rank_of(&self, c: &Concept) -> Result<Rank> {
        let ext = self.extension(c)?;
        Ok((0..self.len())
            .filter(|x| ext >> x & 1 == 1)
            .map(|x| self.ranks[x])
            .min()
            .map_or(Rank::Infinite, Rank::Finite))
    }

    /// `min_{<_rc}(C)`
    pub fn typical(&self, c: &Concept) -> Result<u64> {
        let ext = self.extension(c)?;
        Ok(match self.rank_of(c)? {
            Rank::Finite(r) => (0..self.len())
                .filter(|&x| ext >> x & 1 == 1 && self.ranks[x] == r)
                .fold(0, |m, x| m | 1 << x),
            Rank::Infinite => 0,
        })
    }

    /// `T(B) ⊑ D` in the minimal canonical ranked model.
    pub fn ranked_entails(&self, b: &Concept, d: &Concept) -> Result<bool> {
        Ok(self.typical(b)? & !self.extension(d)? == 0)
    }

    /// `C ⊑ D` in every model of the KB.
    pub fn strict_entails(&self, c: &Concept, d: &Concept) -> Result<bool> {
        Ok(self.extension(c)? & !self.extension(d)? == 0)
    }

    /// Is `c` exceptional: no rank-0 element of the least model lies in `c`.
    pub fn exceptional(&self, c: &Concept) -> Result<bool> {
        let ext = self.extension(c)?;
        Ok((0..self.len()).all(|x| ext >> x & 1 == 0 || self.ranks[x] > 0))
    }

    pub fn as_interpretation(&self) -> RankedInterpretation {
        RankedInterpretation {
            atoms: self.atoms.clone(),
            roles: Vec::new(),
            individuals: Vec::new(),
            ranks: self.ranks.clone(),
            labels: self.elements.clone(),
            successors: Vec::new(),
            individual_map: Vec::new(),
        }
    }

    fn max_violated_rank(&self, set: u64) -> usize {
        (0..self.defaults.len())
            .filter(|i| set >> i & 1 == 1)
            .map(|i| self.default_ranks[i].finite().expect("violated defaults have finite rank"))
            .max()
            .unwrap_or(0)
    }

    /// `x <¹ y`: `y` violates a default that `x` satisfies, and each default
    /// violated only by `x` is outranked by one violated only by `y`.
    pub fn one_step_prefers(&self, x: usize, y: usize) -> bool {
        let (vx, vy) = (self.violations[x], self.violations[y]);
        let only_y = vy & !vx;
        let only_x = vx & !vy;
        only_y != 0 && (only_x == 0 || self.max_violated_rank(only_y) > self.max_violated_rank(only_x))
    }

    pub fn induce_bp_order(&self) -> BpOrder {
        let n = self.len();
        let below = (0..n)
            .map(|y| (0..n).filter(|&x| self.one_step_prefers(x, y)).fold(0u64, |m, x| m | 1 << x))
            .collect();
        BpOrder::from_relation(below)
    }

    /// `min_<(B)` in the minimal canonical BP-model.
    pub fn bp_typical(&self, order: &BpOrder, b: &Concept) -> Result<u64> {
        let ext = self.extension(b)?;
        Ok((0..self.len())
            .filter(|&x| ext >> x & 1 == 1 && order.below[x] & ext == 0)
            .fold(0, |m, x| m | 1 << x))
    }

    pub fn bp_entails(&self, order: &BpOrder, b: &Concept, d: &Concept) -> Result<bool> {
        Ok(self.bp_typical(order, b)? & !self.extension(d)? == 0)
    }

    pub fn di_sets(&self, order: &BpOrder, b: &Concept) -> Result<DiSets> {
        let Rank::Finite(k) = self.rank_of(b)? else {
            return Err(Error::InfiniteRank(b.to_string()));
        };
        let minimal = self.bp_typical(order, b)?;
        let members: Vec<usize> = (0..self.len()).filter(|x| minimal >> x & 1 == 1).collect();
        let mut di = BTreeSet::new();
        let mut confl = BTreeSet::new();
        for i in 0..self.defaults.len() {
            let violated = members.iter().filter(|&&x| self.violations[x] >> i & 1 == 1).count();
            if violated == 0 {
                di.insert(i);
            } else if violated < members.len() {
                confl.insert(i);
            }
        }
        let rank = |i: &usize| self.default_ranks[*i];
        let confl_at = |j: usize| confl.iter().any(|i| rank(i) == Rank::Finite(j));
        let mut h = k;
        while h > 0 && !confl_at(h - 1) {
            h -= 1;
        }
        let di_sk = di
            .iter()
            .filter(|i| rank(i) >= Rank::Finite(h))
            .map(|&i| self.defaults[i].clone())
            .collect();
        let names = |s: &BTreeSet<usize>| s.iter().map(|&i| self.defaults[i].clone()).collect();
        Ok(DiSets { k, h, di: names(&di), confl: names(&confl), di_sk })
    }

    /// `Strict ∪ DI_Sk(B) ⊨ T(⊤) ⊑ ¬B ⊔ D`: every valuation satisfying the
    /// strict part, the materialized `DI_Sk(B)` and `B` satisfies `D`.
    pub fn sk_semantic_entails(&self, order: &BpOrder, b: &Concept, d: &Concept) -> Result<bool> {
        self.check_atoms(b)?;
        self.check_atoms(d)?;
        if self.rank_of(b)?.is_infinite() {
            return Ok(true);
        }
        let sets = self.di_sets(order, b)?;
        let ok = self.strict_valuations.iter().all(|&v| {
            let base = sets.di_sk.iter().all(|i| !holds(&i.lhs, v, &self.index) || holds(&i.rhs, v, &self.index));
            !(base && holds(b, v, &self.index)) || holds(d, v, &self.index)
        });
        Ok(ok)
    }
}

/// The preference `<` of a BP-model: `below[y]` holds every `x < y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpOrder {
    pub below: Vec<u64>,
    /// `d_M(x)`: longest descending path from `x` to a `<`-minimal element.
    pub dist: Vec<usize>,
}

impl BpOrder {
    /// Transitive closure of `below`.
    pub fn from_relation(mut below: Vec<u64>) -> Self {
        let n = below.len();
        for k in 0..n {
            for y in 0..n {
                if below[y] >> k & 1 == 1 {
                    below[y] |= below[k];
                }
            }
        }
        let mut dist = vec![usize::MAX; n];
        fn depth(x: usize, below: &[u64], dist: &mut [usize]) -> usize {
            if dist[x] != usize::MAX {
                return dist[x];
            }
            let d = (0..below.len())
                .filter(|&z| below[x] >> z & 1 == 1)
                .map(|z| depth(z, below, dist) + 1)
                .max()
                .unwrap_or(0);
            dist[x] = d;
            d
        }
        let irreflexive = (0..n).all(|x| below[x] >> x & 1 == 0);
        if irreflexive {
            for x in 0..n {
                depth(x, &below, &mut dist);
            }
        }
        BpOrder { below, dist }
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        self.below[y] >> x & 1 == 1
    }

    pub fn is_strict_partial_order(&self) -> bool {
        let n = self.below.len();
        let irreflexive = (0..n).all(|x| !self.less(x, x));
        let transitive = (0..n).all(|y| {
            (0..n).filter(|&x| self.less(x, y)).all(|x| self.below[x] & !self.below[y] == 0)
        });
        irreflexive && transitive
    }

    /// `<_rc ⊆ <` for the given element ranks.
    pub fn refines(&self, ranks: &[usize]) -> bool {
        let n = self.below.len();
        (0..n).all(|x| (0..n).all(|y| ranks[x] >= ranks[y] || self.less(x, y)))
    }

    pub fn full(&self) -> u64 {
        mask_of(self.below.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiSets {
    pub k: usize,
    pub h: usize,
    pub di: BTreeSet<Inclusion>,
    pub confl: BTreeSet<Inclusion>,
    pub di_sk: BTreeSet<Inclusion>,
}

/// Three-valued exceptionality of `c` for `Strict ∪ level`.
pub(crate) fn canonical_exceptional(
    strict: &BTreeSet<Inclusion>,
    level: &BTreeSet<Inclusion>,
    c: &Concept,
    bounds: &OracleBounds,
) -> Result<Verdict> {
    let mut extra = BTreeSet::new();
    c.atoms(&mut extra);
    let m = CanonicalModel::from_parts(strict, level, &extra, bounds)?;
    Ok(if m.exceptional(c)? { Verdict::True } else { Verdict::False })
}
