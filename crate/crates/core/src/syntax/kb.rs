use std::collections::BTreeSet;
use std::fmt;

use super::Concept;

/// `lhs ⊑ rhs`, or `T(lhs) ⊑ rhs` when held in the defeasible part of a KB.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inclusion {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Inclusion {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Inclusion { lhs, rhs }
    }

    /// The classical concept `¬lhs ⊔ rhs`.
    pub fn materialized(&self) -> Concept {
        Concept::or(Concept::not(self.lhs.clone()), self.rhs.clone())
    }

    fn normalize(&self) -> Self {
        Inclusion::new(self.lhs.normalize(), self.rhs.normalize())
    }
}

/// Convenience display of a defeasible inclusion as `T(C) ⊑ D` in ASCII form.
pub struct Typical<'a>(pub &'a Inclusion);

impl fmt::Display for Typical<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~> {}", self.0.lhs, self.0.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Concept { concept: Concept, individual: String },
    Role { role: String, subject: String, object: String },
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept { concept: c @ Concept::Atom(_), individual } => {
                write!(f, "{c}({individual})")
            }
            Assertion::Concept { concept, individual } => write!(f, "({concept})({individual})"),
            Assertion::Role { role, subject, object } => write!(f, "{role}({subject}, {object})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub atoms: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

/// Strict inclusions, defeasible inclusions and assertions, each a set of
/// normalized items.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub strict: BTreeSet<Inclusion>,
    pub defeasible: BTreeSet<Inclusion>,
    pub abox: BTreeSet<Assertion>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_strict(&mut self, lhs: Concept, rhs: Concept) -> &mut Self {
        self.strict.insert(Inclusion::new(lhs, rhs).normalize());
        self
    }

    pub fn add_defeasible(&mut self, lhs: Concept, rhs: Concept) -> &mut Self {
        self.defeasible.insert(Inclusion::new(lhs, rhs).normalize());
        self
    }

    pub fn add_assertion(&mut self, a: Assertion) -> &mut Self {
        let a = match a {
            Assertion::Concept { concept, individual } => Assertion::Concept {
                concept: concept.normalize(),
                individual,
            },
            role => role,
        };
        self.abox.insert(a);
        self
    }

    /// Copy with every concept normalized.
    pub fn normalize(&self) -> Self {
        let mut kb = KnowledgeBase::new();
        for i in &self.strict {
            kb.add_strict(i.lhs.clone(), i.rhs.clone());
        }
        for i in &self.defeasible {
            kb.add_defeasible(i.lhs.clone(), i.rhs.clone());
        }
        for a in &self.abox {
            kb.add_assertion(a.clone());
        }
        kb
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for i in self.strict.iter().chain(&self.defeasible) {
            for c in [&i.lhs, &i.rhs] {
                c.atoms(&mut sig.atoms);
                c.roles(&mut sig.roles);
            }
        }
        for a in &self.abox {
            match a {
                Assertion::Concept { concept, individual } => {
                    concept.atoms(&mut sig.atoms);
                    concept.roles(&mut sig.roles);
                    sig.individuals.insert(individual.clone());
                }
                Assertion::Role { role, subject, object } => {
                    sig.roles.insert(role.clone());
                    sig.individuals.insert(subject.clone());
                    sig.individuals.insert(object.clone());
                }
            }
        }
        sig
    }

    pub fn is_role_free(&self) -> bool {
        self.signature().roles.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.strict.is_empty() && self.defeasible.is_empty() && self.abox.is_empty()
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.strict {
            writeln!(f, "{} => {}", i.lhs, i.rhs)?;
        }
        for i in &self.defeasible {
            writeln!(f, "{}", Typical(i))?;
        }
        for a in &self.abox {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Query {
    /// `C ⊑ D`
    Strict(Concept, Concept),
    /// `T(B) ⊑ D`
    Defeasible(Concept, Concept),
}

impl Query {
    pub fn concepts(&self) -> (&Concept, &Concept) {
        match self {
            Query::Strict(c, d) | Query::Defeasible(c, d) => (c, d),
        }
    }

    pub fn normalize(&self) -> Query {
        match self {
            Query::Strict(c, d) => Query::Strict(c.normalize(), d.normalize()),
            Query::Defeasible(c, d) => Query::Defeasible(c.normalize(), d.normalize()),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Strict(c, d) => write!(f, "{c} => {d}"),
            Query::Defeasible(c, d) => write!(f, "{c} ~> {d}"),
        }
    }
}
