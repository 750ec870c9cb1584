//! Tableau search for ALC with a general TBox.
//!
//! Concepts are interned as n-ary NNF nodes. A completion-tree node is a
//! label set of node ids; successors are explored depth first and a successor
//! whose initial label is contained in the completed label of an ancestor is
//! blocked.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::syntax::Concept;

type Id = u32;
type Label = BTreeSet<Id>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Top,
    Bot,
    Lit(Id, bool),
    And(Vec<Id>),
    Or(Vec<Id>),
    All(Id, Id),
    Some(Id, Id),
}

#[derive(Default)]
struct Interner {
    nodes: Vec<Node>,
    ids: HashMap<Node, Id>,
    names: HashMap<String, Id>,
}

impl Interner {
    fn name(&mut self, s: &str) -> Id {
        let next = self.names.len() as Id;
        *self.names.entry(s.to_string()).or_insert(next)
    }

    fn node(&mut self, n: Node) -> Id {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as Id;
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    /// Interns a concept already in NNF.
    fn intern(&mut self, c: &Concept) -> Id {
        match c {
            Concept::Top => self.node(Node::Top),
            Concept::Bot => self.node(Node::Bot),
            Concept::Atom(a) => {
                let a = self.name(a);
                self.node(Node::Lit(a, true))
            }
            Concept::Not(inner) => match inner.as_ref() {
                Concept::Atom(a) => {
                    let a = self.name(a);
                    self.node(Node::Lit(a, false))
                }
                other => {
                    let n = Concept::not(other.clone()).nnf();
                    self.intern(&n)
                }
            },
            Concept::And(..) => {
                let mut parts = Vec::new();
                self.flatten(c, true, &mut parts);
                let top = self.node(Node::Top);
                let bot = self.node(Node::Bot);
                if parts.contains(&bot) {
                    return bot;
                }
                parts.retain(|&p| p != top);
                parts.sort_unstable();
                parts.dedup();
                match parts.len() {
                    0 => top,
                    1 => parts[0],
                    _ => self.node(Node::And(parts)),
                }
            }
            Concept::Or(..) => {
                let mut parts = Vec::new();
                self.flatten(c, false, &mut parts);
                let top = self.node(Node::Top);
                let bot = self.node(Node::Bot);
                if parts.contains(&top) {
                    return top;
                }
                parts.retain(|&p| p != bot);
                parts.sort_unstable();
                parts.dedup();
                match parts.len() {
                    0 => bot,
                    1 => parts[0],
                    _ => self.node(Node::Or(parts)),
                }
            }
            Concept::All(r, d) => {
                let r = self.name(r);
                let d = self.intern(d);
                self.node(Node::All(r, d))
            }
            Concept::Some(r, d) => {
                let r = self.name(r);
                let d = self.intern(d);
                self.node(Node::Some(r, d))
            }
        }
    }

    fn flatten(&mut self, c: &Concept, conj: bool, out: &mut Vec<Id>) {
        match (c, conj) {
            (Concept::And(l, r), true) | (Concept::Or(l, r), false) => {
                self.flatten(l, conj, out);
                self.flatten(r, conj, out);
            }
            _ => {
                let id = self.intern(c);
                // nested chains of the same kind collapse after interning too
                match (&self.nodes[id as usize], conj) {
                    (Node::And(ps), true) | (Node::Or(ps), false) => out.extend(ps.iter().copied()),
                    _ => out.push(id),
                }
            }
        }
    }

    fn complement(&self, id: Id) -> Option<Id> {
        match self.nodes[id as usize] {
            Node::Lit(a, pos) => self.ids.get(&Node::Lit(a, !pos)).copied(),
            _ => None,
        }
    }
}

/// Result of a completion attempt on a set of roots.
pub(crate) struct Search {
    interner: Interner,
    universal: Id,
    budget: u64,
    spent: u64,
    unsat: HashSet<Label>,
}

impl Search {
    /// `universal` must be in NNF: it is added to every node.
    pub(crate) fn new(universal: &Concept, budget: u64) -> Self {
        let mut interner = Interner::default();
        let universal = interner.intern(universal);
        Search { interner, universal, budget, spent: 0, unsat: HashSet::new() }
    }

    pub(crate) fn spent(&self) -> u64 {
        self.spent
    }

    fn tick(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.budget {
            Err(Error::ResourceLimit { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Is the NNF concept `c` satisfiable together with the universal concept?
    pub(crate) fn satisfiable(&mut self, c: &Concept) -> Result<bool> {
        let id = self.interner.intern(c);
        let label = Label::from([id, self.universal]);
        let mut ancestors = Vec::new();
        self.tree(label, &mut ancestors)
    }

    /// Named roots with initial concept sets and role edges between them.
    pub(crate) fn satisfiable_roots(
        &mut self,
        roots: &[Vec<Concept>],
        edges: &[(usize, String, usize)],
    ) -> Result<bool> {
        let labels: Vec<Label> = roots
            .iter()
            .map(|cs| {
                let mut l: Label = cs.iter().map(|c| self.interner.intern(c)).collect();
                l.insert(self.universal);
                l
            })
            .collect();
        let edges: Vec<(usize, Id, usize)> = edges
            .iter()
            .map(|(a, r, b)| (*a, self.interner.name(r), *b))
            .collect();
        self.graph(labels, &edges)
    }

    fn clashes(&self, label: &Label) -> bool {
        label.iter().any(|&id| match self.interner.nodes[id as usize] {
            Node::Bot => true,
            Node::Lit(_, true) => self.interner.complement(id).is_some_and(|n| label.contains(&n)),
            _ => false,
        })
    }

    /// Applies the conjunction rule to a fixpoint. Returns false on clash.
    fn close_and(&self, label: &mut Label) -> bool {
        loop {
            let mut added = Vec::new();
            for &id in label.iter() {
                if let Node::And(ps) = &self.interner.nodes[id as usize] {
                    added.extend(ps.iter().copied().filter(|p| !label.contains(p)));
                }
            }
            if added.is_empty() {
                return !self.clashes(label);
            }
            label.extend(added);
        }
    }

    /// First disjunction in the label with no disjunct present.
    fn pending_or(&self, label: &Label) -> Option<Vec<Id>> {
        label.iter().find_map(|&id| match &self.interner.nodes[id as usize] {
            Node::Or(ds) if !ds.iter().any(|d| label.contains(d)) => Some(ds.clone()),
            _ => None,
        })
    }

    fn successors(&self, label: &Label) -> Vec<Label> {
        let mut out = Vec::new();
        for &id in label {
            if let Node::Some(r, c) = self.interner.nodes[id as usize] {
                let mut child = Label::from([c, self.universal]);
                for &other in label {
                    if let Node::All(r2, d) = self.interner.nodes[other as usize] {
                        if r2 == r {
                            child.insert(d);
                        }
                    }
                }
                out.push(child);
            }
        }
        out
    }

    fn tree(&mut self, mut label: Label, ancestors: &mut Vec<Label>) -> Result<bool> {
        self.tick()?;
        if self.unsat.contains(&label) {
            return Ok(false);
        }
        let initial = label.clone();
        if !self.close_and(&mut label) {
            self.unsat.insert(initial);
            return Ok(false);
        }
        if let Some(ds) = self.pending_or(&label) {
            for d in ds {
                let mut branch = label.clone();
                branch.insert(d);
                if self.tree(branch, ancestors)? {
                    return Ok(true);
                }
            }
            self.unsat.insert(initial);
            return Ok(false);
        }
        let children = self.successors(&label);
        ancestors.push(label);
        let mut ok = true;
        for child in children {
            if ancestors.iter().any(|a| child.is_subset(a)) {
                continue;
            }
            if !self.tree(child, ancestors)? {
                ok = false;
                break;
            }
        }
        ancestors.pop();
        if !ok {
            self.unsat.insert(initial);
        }
        Ok(ok)
    }

    fn graph(&mut self, mut labels: Vec<Label>, edges: &[(usize, Id, usize)]) -> Result<bool> {
        self.tick()?;
        loop {
            for l in labels.iter_mut() {
                if !self.close_and(l) {
                    return Ok(false);
                }
            }
            let mut changed = false;
            for &(a, r, b) in edges {
                let fillers: Vec<Id> = labels[a]
                    .iter()
                    .filter_map(|&id| match self.interner.nodes[id as usize] {
                        Node::All(r2, d) if r2 == r => Some(d),
                        _ => None,
                    })
                    .collect();
                for d in fillers {
                    changed |= labels[b].insert(d);
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..labels.len() {
            if let Some(ds) = self.pending_or(&labels[i]) {
                for d in ds {
                    let mut branch = labels.clone();
                    branch[i].insert(d);
                    if self.graph(branch, edges)? {
                        return Ok(true);
                    }
                }
                return Ok(false);
            }
        }
        for label in &labels {
            let mut ancestors = vec![label.clone()];
            for child in self.successors(label) {
                if child.is_subset(label) {
                    continue;
                }
                if !self.tree(child, &mut ancestors)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
