//! Freshness and alpha-equivalence.
//!
//! Decision procedures for the judgments `ctx |- a # t` and
//! `ctx |- t ~ s`, the `fc` algorithm computing the minimal freshness
//! context justifying a set of atomic freshness formulas, context
//! instances under substitutions, and the derived `respects` check.
//! Both judgments are syntax-directed: exactly one rule applies per
//! term shape, so no search is involved.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::term::{Atom, NominalTerm, Substitution, VarName};

/// The constraint `a # X`: instantiations of `X` may not contain `a` free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreshnessConstraint {
    pub atom: Atom,
    pub var: VarName,
}

// Ordered variable-first so contexts print grouped by variable.
impl Ord for FreshnessConstraint {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.var, &self.atom).cmp(&(&other.var, &other.atom))
    }
}

impl PartialOrd for FreshnessConstraint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FreshnessConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Fresh generated names start with `#`; keep them lexable by
        // spacing the constraint marker.
        if self.atom.as_str().starts_with('#') || self.var.as_str().starts_with('#') {
            write!(f, "{} # {}", self.atom, self.var)
        } else {
            write!(f, "{}#{}", self.atom, self.var)
        }
    }
}

/// A finite set of freshness constraints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreshnessContext {
    constraints: BTreeSet<FreshnessConstraint>,
}

impl FreshnessContext {
    pub fn new() -> Self {
        FreshnessContext::default()
    }

    pub fn insert(&mut self, atom: Atom, var: VarName) -> bool {
        self.constraints.insert(FreshnessConstraint { atom, var })
    }

    pub fn contains(&self, atom: &Atom, var: &VarName) -> bool {
        self.constraints.contains(&FreshnessConstraint {
            atom: atom.clone(),
            var: var.clone(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &FreshnessConstraint> {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn is_subset(&self, other: &FreshnessContext) -> bool {
        self.constraints.is_subset(&other.constraints)
    }

    pub fn union(&self, other: &FreshnessContext) -> FreshnessContext {
        FreshnessContext {
            constraints: self
                .constraints
                .union(&other.constraints)
                .cloned()
                .collect(),
        }
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        self.constraints.iter().map(|c| c.var.clone()).collect()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.constraints.iter().map(|c| c.atom.clone()).collect()
    }

    pub fn constraints_on<'a>(
        &'a self,
        var: &'a VarName,
    ) -> impl Iterator<Item = &'a FreshnessConstraint> {
        self.constraints.iter().filter(move |c| c.var == *var)
    }

    /// The context as atomic formulas `a # X`.
    pub fn formulas(&self) -> Vec<FreshnessFormula> {
        self.constraints
            .iter()
            .map(|c| FreshnessFormula {
                atom: c.atom.clone(),
                term: NominalTerm::var(c.var.clone()),
            })
            .collect()
    }
}

impl FromIterator<FreshnessConstraint> for FreshnessContext {
    fn from_iter<I: IntoIterator<Item = FreshnessConstraint>>(iter: I) -> Self {
        FreshnessContext {
            constraints: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for FreshnessContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A formula `a # t` over an arbitrary term, the input shape of `fc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshnessFormula {
    pub atom: Atom,
    pub term: NominalTerm,
}

impl fmt::Display for FreshnessFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} # {}", self.atom, self.term)
    }
}

/// Whether `ctx |- a # t` is derivable.
pub fn derives_fresh(ctx: &FreshnessContext, a: &Atom, t: &NominalTerm) -> bool {
    match t {
        NominalTerm::Atom(b) => a != b,
        NominalTerm::Abs(b, body) => a == b || derives_fresh(ctx, a, body),
        NominalTerm::App(_, args) => args.iter().all(|arg| derives_fresh(ctx, a, arg)),
        NominalTerm::Susp(p, x) => ctx.contains(&p.apply_inverse_atom(a), x),
    }
}

/// Whether `ctx |- a # t` holds for every formula.
pub fn derives_all(ctx: &FreshnessContext, formulas: &[FreshnessFormula]) -> bool {
    formulas
        .iter()
        .all(|f| derives_fresh(ctx, &f.atom, &f.term))
}

/// Whether `ctx |- t ~ s` is derivable. Suspensions of the same variable
/// are compared by the action disagreement set, every member of which
/// must be constrained; suspensions of distinct variables are never
/// alpha-equivalent.
pub fn alpha_eq(ctx: &FreshnessContext, t: &NominalTerm, s: &NominalTerm) -> bool {
    match (t, s) {
        (NominalTerm::Atom(a), NominalTerm::Atom(b)) => a == b,
        (NominalTerm::App(f, ts), NominalTerm::App(g, ss)) => {
            f == g
                && ts.len() == ss.len()
                && ts.iter().zip(ss).all(|(t, s)| alpha_eq(ctx, t, s))
        }
        (NominalTerm::Abs(a, t1), NominalTerm::Abs(b, s1)) => {
            if a == b {
                alpha_eq(ctx, t1, s1)
            } else {
                alpha_eq(ctx, t1, &s1.apply_swap(a, b)) && derives_fresh(ctx, a, s1)
            }
        }
        (NominalTerm::Susp(p1, x), NominalTerm::Susp(p2, y)) => {
            x == y
                && p1
                    .disagreement(p2, [].iter())
                    .iter()
                    .all(|d| ctx.contains(d, x))
        }
        _ => false,
    }
}

/// The `fc` algorithm: the minimal freshness context justifying all of
/// `formulas`, or `None` when an irreducible `a # a` shows none exists.
/// Formulas are consumed work-list style in insertion order.
pub fn fc<I>(formulas: I) -> Option<FreshnessContext>
where
    I: IntoIterator<Item = FreshnessFormula>,
{
    let mut queue: VecDeque<FreshnessFormula> = formulas.into_iter().collect();
    let mut ctx = FreshnessContext::new();
    while let Some(FreshnessFormula { atom: a, term }) = queue.pop_front() {
        match term {
            NominalTerm::Atom(b) => {
                if a == b {
                    return None;
                }
            }
            NominalTerm::Abs(b, body) => {
                if a != b {
                    queue.push_back(FreshnessFormula {
                        atom: a,
                        term: *body,
                    });
                }
            }
            NominalTerm::App(_, args) => {
                for arg in args {
                    queue.push_back(FreshnessFormula {
                        atom: a.clone(),
                        term: arg,
                    });
                }
            }
            NominalTerm::Susp(p, x) => {
                ctx.insert(p.apply_inverse_atom(&a), x);
            }
        }
    }
    Some(ctx)
}

/// The instance `ctx sigma = fc({a # X.sigma | a#X in ctx})`, or `None`
/// exactly when `sigma` does not respect `ctx`.
pub fn ctx_instance(ctx: &FreshnessContext, sigma: &Substitution) -> Option<FreshnessContext> {
    fc(ctx.iter().map(|c| FreshnessFormula {
        atom: c.atom.clone(),
        term: sigma.apply(&NominalTerm::var(c.var.clone())),
    }))
}

pub fn respects(sigma: &Substitution, ctx: &FreshnessContext) -> bool {
    ctx_instance(ctx, sigma).is_some()
}
