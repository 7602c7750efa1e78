//! Nominal terms: atoms, variables, abstractions, applications and
//! suspensions, plus substitutions, atom sets and the fresh-name supply.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::perm::{Permutation, Swapping};

/// A bindable name. Atoms can be abstracted but never substituted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty());
        Atom(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A substitutable variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(String);

impl VarName {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty());
        VarName(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Terms over the grammar `t ::= f(t1,...,tn) | a | a.t | p*X`.
///
/// A bare variable is a suspension under the empty permutation; an
/// application with no arguments is a constant. Suspension permutations
/// compare by action, so terms differing only in the written form of a
/// permutation are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NominalTerm {
    Atom(Atom),
    Abs(Atom, Box<NominalTerm>),
    App(String, Vec<NominalTerm>),
    Susp(Permutation, VarName),
}

impl NominalTerm {
    pub fn var(name: VarName) -> Self {
        NominalTerm::Susp(Permutation::identity(), name)
    }

    pub fn constant(symbol: impl Into<String>) -> Self {
        NominalTerm::App(symbol.into(), Vec::new())
    }

    pub fn abs(binder: Atom, body: NominalTerm) -> Self {
        NominalTerm::Abs(binder, Box::new(body))
    }

    pub fn app(symbol: impl Into<String>, args: Vec<NominalTerm>) -> Self {
        NominalTerm::App(symbol.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            NominalTerm::Atom(_) => true,
            NominalTerm::Abs(_, t) => t.is_ground(),
            NominalTerm::App(_, args) => args.iter().all(|t| t.is_ground()),
            NominalTerm::Susp(_, _) => false,
        }
    }

    /// Homomorphic permutation application; on a suspension the
    /// permutation is prepended: `p • (q*X) = (pq)*X`.
    pub fn apply_perm(&self, p: &Permutation) -> NominalTerm {
        match self {
            NominalTerm::Atom(a) => NominalTerm::Atom(p.apply_atom(a)),
            NominalTerm::Abs(a, t) => {
                NominalTerm::abs(p.apply_atom(a), t.apply_perm(p))
            }
            NominalTerm::App(f, args) => NominalTerm::App(
                f.clone(),
                args.iter().map(|t| t.apply_perm(p)).collect(),
            ),
            NominalTerm::Susp(q, x) => NominalTerm::Susp(p.compose(q), x.clone()),
        }
    }

    pub fn apply_swap(&self, a: &Atom, b: &Atom) -> NominalTerm {
        self.apply_perm(&Permutation::swap(a.clone(), b.clone()))
    }

    /// In-place swapping application: renames atom leaves and binders and
    /// prepends to suspension tables in constant time per node, which is
    /// what keeps repeated binder renamings quadratic overall instead of
    /// cubic.
    pub fn apply_swap_mut(&mut self, s: &Swapping) {
        match self {
            NominalTerm::Atom(a) => *a = s.apply(a),
            NominalTerm::Abs(a, t) => {
                *a = s.apply(a);
                t.apply_swap_mut(s);
            }
            NominalTerm::App(_, args) => {
                for t in args {
                    t.apply_swap_mut(s);
                }
            }
            NominalTerm::Susp(p, _) => p.prepend_swap(s.clone()),
        }
    }

    /// Short label of the top symbol, for diagnostics.
    pub fn head(&self) -> String {
        match self {
            NominalTerm::Atom(a) => a.to_string(),
            NominalTerm::Abs(_, _) => ".".to_string(),
            NominalTerm::App(f, _) => f.clone(),
            NominalTerm::Susp(_, x) => x.to_string(),
        }
    }

    pub fn measures(&self) -> Measures {
        let mut m = Measures::default();
        m.collect(self);
        m
    }

    pub fn free_atoms(&self) -> BTreeSet<Atom> {
        self.measures().free_atoms
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.measures().atoms
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        self.measures().vars
    }

    pub fn size(&self) -> usize {
        self.measures().size
    }

    pub fn abs_count(&self) -> usize {
        self.measures().abs_count
    }
}

/// Structural measures collected in one pass: free atoms (suspensions
/// contribute the atoms of their permutation), free atoms ignoring
/// suspensions, all atoms, variables, length, and abstraction count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Measures {
    pub free_atoms: BTreeSet<Atom>,
    pub free_atoms_no_susp: BTreeSet<Atom>,
    pub atoms: BTreeSet<Atom>,
    pub vars: BTreeSet<VarName>,
    pub size: usize,
    pub abs_count: usize,
}

impl Measures {
    pub fn of(term: &NominalTerm) -> Measures {
        term.measures()
    }

    fn collect(&mut self, term: &NominalTerm) {
        match term {
            NominalTerm::Atom(a) => {
                self.free_atoms.insert(a.clone());
                self.free_atoms_no_susp.insert(a.clone());
                self.atoms.insert(a.clone());
                self.size += 1;
            }
            NominalTerm::Abs(a, t) => {
                let mut inner = Measures::default();
                inner.collect(t);
                inner.free_atoms.remove(a);
                inner.free_atoms_no_susp.remove(a);
                self.free_atoms.extend(inner.free_atoms);
                self.free_atoms_no_susp.extend(inner.free_atoms_no_susp);
                self.atoms.extend(inner.atoms);
                self.atoms.insert(a.clone());
                self.vars.extend(inner.vars);
                self.size += inner.size + 1;
                self.abs_count += inner.abs_count + 1;
            }
            NominalTerm::App(_, args) => {
                for arg in args {
                    self.collect(arg);
                }
                self.size += 1;
            }
            NominalTerm::Susp(p, x) => {
                let perm_atoms = p.atoms();
                self.free_atoms.extend(perm_atoms.iter().cloned());
                self.atoms.extend(perm_atoms);
                self.vars.insert(x.clone());
                self.size += 1 + 2 * p.written_len();
            }
        }
    }
}

/// A finite set of atoms: a membership table plus a member list kept in
/// atom order, so iteration is deterministic and membership is cheap.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomSet {
    members: HashSet<Atom>,
    order: Vec<Atom>,
}

impl AtomSet {
    pub fn new() -> Self {
        AtomSet::default()
    }

    pub fn insert(&mut self, a: Atom) -> bool {
        if self.members.contains(&a) {
            return false;
        }
        let pos = self.order.binary_search(&a).unwrap_err();
        self.order.insert(pos, a.clone());
        self.members.insert(a);
        true
    }

    pub fn remove(&mut self, a: &Atom) -> bool {
        if !self.members.remove(a) {
            return false;
        }
        if let Ok(pos) = self.order.binary_search(a) {
            self.order.remove(pos);
        }
        true
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Members in atom order.
    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.order.iter()
    }

    pub fn members(&self) -> &HashSet<Atom> {
        &self.members
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.order.iter().all(|a| other.contains(a))
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        for a in other.iter() {
            out.insert(a.clone());
        }
        out
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut out = AtomSet::new();
        for a in iter {
            out.insert(a);
        }
        out
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.order.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Supply of fresh variable and atom names.
///
/// Emitted names start with `#`, which the input grammar rejects, so they
/// can never collide with user-written names. `reserved` additionally
/// guards against names already emitted elsewhere (for instance atoms a
/// saturation step added to the problem earlier).
#[derive(Debug, Clone, Default)]
pub struct NameSupply {
    counter: u64,
    reserved: HashSet<String>,
}

impl NameSupply {
    pub fn new() -> Self {
        NameSupply::default()
    }

    pub fn avoiding<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut supply = NameSupply::new();
        for n in names {
            supply.reserved.insert(n.into());
        }
        supply
    }

    pub fn reserve(&mut self, name: &str) {
        self.reserved.insert(name.to_string());
    }

    pub fn reserve_term(&mut self, term: &NominalTerm) {
        let m = term.measures();
        for a in &m.atoms {
            self.reserve(a.as_str());
        }
        for v in &m.vars {
            self.reserve(v.as_str());
        }
    }

    pub fn reserve_atoms(&mut self, atoms: &AtomSet) {
        for a in atoms.iter() {
            self.reserve(a.as_str());
        }
    }

    pub fn fresh_var(&mut self) -> VarName {
        VarName::new(self.fresh_with_prefix("#v"))
    }

    pub fn fresh_atom(&mut self) -> Atom {
        Atom::new(self.fresh_with_prefix("#a"))
    }

    fn fresh_with_prefix(&mut self, prefix: &str) -> String {
        loop {
            let name = format!("{prefix}{}", self.counter);
            self.counter += 1;
            if self.reserved.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// A finite map from variables to terms. Application allows atom capture
/// and forces suspension permutations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<VarName, NominalTerm>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn single(var: VarName, term: NominalTerm) -> Self {
        let mut s = Substitution::identity();
        s.insert(var, term);
        s
    }

    /// Adds a binding, dropping it when it acts as the identity.
    pub fn insert(&mut self, var: VarName, term: NominalTerm) {
        if let NominalTerm::Susp(p, x) = &term {
            if *x == var && p.is_identity_action() {
                self.map.remove(&var);
                return;
            }
        }
        self.map.insert(var, term);
    }

    pub fn get(&self, var: &VarName) -> Option<&NominalTerm> {
        self.map.get(var)
    }

    pub fn domain(&self) -> impl Iterator<Item = &VarName> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &NominalTerm)> {
        self.map.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, term: &NominalTerm) -> NominalTerm {
        match term {
            NominalTerm::Atom(_) => term.clone(),
            NominalTerm::Abs(a, t) => NominalTerm::abs(a.clone(), self.apply(t)),
            NominalTerm::App(f, args) => NominalTerm::App(
                f.clone(),
                args.iter().map(|t| self.apply(t)).collect(),
            ),
            NominalTerm::Susp(p, x) => match self.map.get(x) {
                Some(u) => u.apply_perm(p),
                None => term.clone(),
            },
        }
    }

    /// Composition `st`: applying the result is applying `self`, then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::identity();
        for (v, t) in &self.map {
            out.insert(v.clone(), other.apply(t));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }
}

impl FromIterator<(VarName, NominalTerm)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (VarName, NominalTerm)>>(iter: I) -> Self {
        let mut s = Substitution::identity();
        for (v, t) in iter {
            s.insert(v, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn t(src: &str) -> NominalTerm {
        parse_term(src, None).unwrap()
    }

    fn atom(s: &str) -> Atom {
        Atom::new(s)
    }

    fn atoms(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|s| atom(s)).collect()
    }

    #[test]
    fn perm_application_is_homomorphic() {
        let p = Permutation::swap(atom("a"), atom("b"));
        assert_eq!(t("f(a, c.a)").apply_perm(&p), t("f(b, c.b)"));
        let u = t("f(a.b, (c d)*X)");
        assert_eq!(u.apply_perm(&Permutation::identity()), u);

        // (a b) applied to (a b)*X accumulates, and the result acts as Id.
        let v = t("(a b)*X").apply_perm(&p);
        assert_eq!(v, t("(a b)(a b)*X"));
        match &v {
            NominalTerm::Susp(q, _) => {
                assert!(q.is_identity_action());
                assert_eq!(q.written_len(), 2);
            }
            _ => panic!("expected suspension"),
        }
    }

    #[test]
    fn substitution_allows_capture_and_forces_permutations() {
        let s = Substitution::single(VarName::new("X"), t("a"));
        assert_eq!(s.apply(&t("a.X")), t("a.a"));

        let s = Substitution::single(VarName::new("X"), t("f(a, (a b)*Y)"));
        assert_eq!(s.apply(&t("(a b)*X")), t("f(b, (a b)(a b)*Y)"));

        let u = t("f(a.b.g((a b)*X, a), h(c))");
        assert_eq!(Substitution::identity().apply(&u), u);
    }

    #[test]
    fn composition_agrees_with_sequential_application() {
        let sigma = Substitution::single(VarName::new("X"), t("g(Y)"));
        let theta = Substitution::single(VarName::new("Y"), t("a"));
        let composed = sigma.compose(&theta);
        for src in ["f(X, Y)", "a.X", "(a b)*X", "h(c)"] {
            let u = t(src);
            assert_eq!(theta.apply(&sigma.apply(&u)), composed.apply(&u));
        }
    }

    #[test]
    fn measures_match_the_defining_recursions() {
        let m = t("f(a.(a b)*X, X, Y)").measures();
        assert_eq!(m.size, 7);
        assert_eq!(m.abs_count, 1);

        assert!(t("a.a").free_atoms().is_empty());

        let m = t("f(a.g(a), (b c)*X, d)").measures();
        assert_eq!(m.atoms, atoms(&["a", "b", "c", "d"]));
        assert_eq!(m.free_atoms, atoms(&["b", "c", "d"]));
        assert_eq!(m.free_atoms_no_susp, atoms(&["d"]));

        // Suspensions contribute their permutation atoms to FA but nothing
        // to the suspension-free variant.
        let m = t("(a b)*X").measures();
        assert_eq!(m.free_atoms, atoms(&["a", "b"]));
        assert!(m.free_atoms_no_susp.is_empty());
    }

    #[test]
    fn atom_set_keeps_order_and_membership_in_sync() {
        let mut s: AtomSet = ["c", "a", "b"].into_iter().map(atom).collect();
        assert_eq!(
            s.iter().cloned().collect::<Vec<_>>(),
            vec![atom("a"), atom("b"), atom("c")]
        );
        assert!(s.contains(&atom("b")));
        assert!(s.remove(&atom("b")));
        assert!(!s.contains(&atom("b")));
        assert_eq!(s.len(), 2);
        assert!(!s.remove(&atom("b")));
        assert_eq!(s.to_string(), "{a, c}");
    }

    #[test]
    fn name_supply_never_repeats_or_collides() {
        let mut sup = NameSupply::avoiding(["#v0", "#a1"]);
        let v = sup.fresh_var();
        assert_ne!(v.as_str(), "#v0");
        let a = sup.fresh_atom();
        assert_ne!(a.as_str(), "#a1");
        let mut seen = HashSet::new();
        for _ in 0..100 {
            assert!(seen.insert(sup.fresh_var().as_str().to_string()));
            assert!(seen.insert(sup.fresh_atom().as_str().to_string()));
        }
    }
}
