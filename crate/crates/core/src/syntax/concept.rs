use std::collections::BTreeSet;
use std::fmt;

/// A typicality-free ALC concept.
///
/// The derived `Ord` is the canonical ordering used for set keys and for
/// deterministic output. Binary constructors are kept binary; [`Concept::normalize`]
/// flattens, sorts and deduplicates `&`/`|` chains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bot,
    Atom(String),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    All(String, Box<Concept>),
    Some(String, Box<Concept>),
}

impl Concept {
    pub fn atom(name: impl Into<String>) -> Self {
        Concept::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn and(l: Concept, r: Concept) -> Self {
        Concept::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Concept, r: Concept) -> Self {
        Concept::Or(Box::new(l), Box::new(r))
    }

    pub fn all(role: impl Into<String>, c: Concept) -> Self {
        Concept::All(role.into(), Box::new(c))
    }

    pub fn some(role: impl Into<String>, c: Concept) -> Self {
        Concept::Some(role.into(), Box::new(c))
    }

    /// Left-nested conjunction of `parts`; `Top` when empty.
    pub fn conjunction<I: IntoIterator<Item = Concept>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Concept::and)
            .unwrap_or(Concept::Top)
    }

    /// Left-nested disjunction of `parts`; `Bot` when empty.
    pub fn disjunction<I: IntoIterator<Item = Concept>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Concept::or)
            .unwrap_or(Concept::Bot)
    }

    /// Negation normal form: negation only in front of atoms.
    pub fn nnf(&self) -> Concept {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => self.clone(),
            Concept::And(l, r) => Concept::and(l.nnf(), r.nnf()),
            Concept::Or(l, r) => Concept::or(l.nnf(), r.nnf()),
            Concept::All(role, c) => Concept::all(role.clone(), c.nnf()),
            Concept::Some(role, c) => Concept::some(role.clone(), c.nnf()),
            Concept::Not(inner) => match inner.as_ref() {
                Concept::Top => Concept::Bot,
                Concept::Bot => Concept::Top,
                Concept::Atom(_) => self.clone(),
                Concept::Not(c) => c.nnf(),
                Concept::And(l, r) => Concept::or(negated(l).nnf(), negated(r).nnf()),
                Concept::Or(l, r) => Concept::and(negated(l).nnf(), negated(r).nnf()),
                Concept::All(role, c) => Concept::some(role.clone(), negated(c).nnf()),
                Concept::Some(role, c) => Concept::all(role.clone(), negated(c).nnf()),
            },
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => true,
            Concept::Not(c) => matches!(c.as_ref(), Concept::Atom(_)),
            Concept::And(l, r) | Concept::Or(l, r) => l.is_nnf() && r.is_nnf(),
            Concept::All(_, c) | Concept::Some(_, c) => c.is_nnf(),
        }
    }

    /// Canonical form: `&` and `|` chains are flattened, their operands
    /// normalized, sorted and deduplicated, then rebuilt left-nested.
    pub fn normalize(&self) -> Concept {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => self.clone(),
            Concept::Not(c) => Concept::not(c.normalize()),
            Concept::All(role, c) => Concept::all(role.clone(), c.normalize()),
            Concept::Some(role, c) => Concept::some(role.clone(), c.normalize()),
            Concept::And(..) => {
                let mut parts = BTreeSet::new();
                self.collect_conjuncts(&mut |c| {
                    parts.insert(c.normalize());
                });
                Concept::conjunction(parts)
            }
            Concept::Or(..) => {
                let mut parts = BTreeSet::new();
                self.collect_disjuncts(&mut |c| {
                    parts.insert(c.normalize());
                });
                Concept::disjunction(parts)
            }
        }
    }

    fn collect_conjuncts(&self, f: &mut impl FnMut(&Concept)) {
        match self {
            Concept::And(l, r) => {
                l.collect_conjuncts(f);
                r.collect_conjuncts(f);
            }
            other => f(other),
        }
    }

    fn collect_disjuncts(&self, f: &mut impl FnMut(&Concept)) {
        match self {
            Concept::Or(l, r) => {
                l.collect_disjuncts(f);
                r.collect_disjuncts(f);
            }
            other => f(other),
        }
    }

    /// Top-level conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a Concept, out: &mut Vec<&'a Concept>) {
            match c {
                Concept::And(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Concept::Top | Concept::Bot => {}
            Concept::Atom(a) => {
                out.insert(a.clone());
            }
            Concept::Not(c) => c.atoms(out),
            Concept::And(l, r) | Concept::Or(l, r) => {
                l.atoms(out);
                r.atoms(out);
            }
            Concept::All(_, c) | Concept::Some(_, c) => c.atoms(out),
        }
    }

    pub fn roles(&self, out: &mut BTreeSet<String>) {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => {}
            Concept::Not(c) => c.roles(out),
            Concept::And(l, r) | Concept::Or(l, r) => {
                l.roles(out);
                r.roles(out);
            }
            Concept::All(role, c) | Concept::Some(role, c) => {
                out.insert(role.clone());
                c.roles(out);
            }
        }
    }

    pub fn has_roles(&self) -> bool {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => false,
            Concept::Not(c) => c.has_roles(),
            Concept::And(l, r) | Concept::Or(l, r) => l.has_roles() || r.has_roles(),
            Concept::All(..) | Concept::Some(..) => true,
        }
    }

    /// Nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 0,
            Concept::Not(c) => c.quantifier_depth(),
            Concept::And(l, r) | Concept::Or(l, r) => l.quantifier_depth().max(r.quantifier_depth()),
            Concept::All(_, c) | Concept::Some(_, c) => 1 + c.quantifier_depth(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Concept::Or(..) => 1,
            Concept::And(..) => 2,
            _ => 3,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Concept::Top => write!(f, "Top"),
            Concept::Bot => write!(f, "Bot"),
            Concept::Atom(a) => write!(f, "{a}"),
            Concept::Not(c) => {
                write!(f, "!")?;
                c.write_prec(f, 3)
            }
            // Left-nested chains print without parentheses and parse back
            // to the same tree; a right operand of the same kind is bracketed.
            Concept::And(l, r) => {
                l.write_prec(f, 2)?;
                write!(f, " & ")?;
                r.write_prec(f, 3)
            }
            Concept::Or(l, r) => {
                l.write_prec(f, 1)?;
                write!(f, " | ")?;
                r.write_prec(f, 2)
            }
            Concept::All(role, c) => {
                write!(f, "all {role}. ")?;
                c.write_prec(f, 3)
            }
            Concept::Some(role, c) => {
                write!(f, "some {role}. ")?;
                c.write_prec(f, 3)
            }
        }
    }
}

fn negated(c: &Concept) -> Concept {
    Concept::not(c.clone())
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}
