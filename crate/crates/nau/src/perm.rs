//! Atom swappings and permutations.
//!
//! A permutation is written as a sequence of swappings `(a1 b1)...(an bn)`,
//! applied rightmost first. Operationally it is a pair of hash tables, one
//! for the action and one for the inverse action, so applying it to an atom
//! and prepending a swapping are constant-time. The written sequence is
//! retained for printing; equality is always by action, never by sequence.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::term::Atom;

/// A pair of atoms `(a b)`. `a = b` is allowed and acts as the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Swapping {
    pub left: Atom,
    pub right: Atom,
}

impl Swapping {
    pub fn new(left: Atom, right: Atom) -> Self {
        Swapping { left, right }
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        if *a == self.left {
            self.right.clone()
        } else if *a == self.right {
            self.left.clone()
        } else {
            a.clone()
        }
    }
}

impl fmt::Display for Swapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.left, self.right)
    }
}

/// A finite permutation of atoms.
///
/// Invariant: `fwd` and `inv` are mutually inverse and never contain
/// identity entries, and their action agrees with applying `swaps`
/// rightmost first. Atoms absent from the tables are fixed.
#[derive(Debug, Clone, Default)]
pub struct Permutation {
    swaps: VecDeque<Swapping>,
    fwd: HashMap<Atom, Atom>,
    inv: HashMap<Atom, Atom>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    pub fn swap(a: Atom, b: Atom) -> Self {
        let mut p = Permutation::identity();
        p.prepend_swap(Swapping::new(a, b));
        p
    }

    /// Builds a permutation from its written form (outermost swapping first).
    pub fn from_swaps<I>(swaps: I) -> Self
    where
        I: IntoIterator<Item = Swapping>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut p = Permutation::identity();
        for s in swaps.into_iter().rev() {
            p.prepend_swap(s);
        }
        p
    }

    /// Builds a permutation acting as `map`, with a canonical written form
    /// (cycle decomposition, cycles and cycle starts in atom order).
    pub fn from_mapping(map: &HashMap<Atom, Atom>) -> Self {
        let mut keys: Vec<&Atom> = map.keys().filter(|k| map[*k] != **k).collect();
        keys.sort();
        let mut visited: BTreeSet<&Atom> = BTreeSet::new();
        let mut swaps = Vec::new();
        for start in keys {
            if visited.contains(start) {
                continue;
            }
            let mut cycle = vec![start];
            visited.insert(start);
            let mut cur = &map[start];
            while cur != start {
                cycle.push(cur);
                visited.insert(cur);
                cur = map.get(cur).unwrap_or(cur);
            }
            for w in cycle.windows(2) {
                swaps.push(Swapping::new(w[0].clone(), w[1].clone()));
            }
        }
        let p = Permutation::from_swaps(swaps);
        debug_assert!(map
            .iter()
            .all(|(k, v)| p.apply_atom(k) == *v || k == v));
        p
    }

    /// Same action, written form renormalized to the cycle decomposition.
    pub fn canonical(&self) -> Self {
        Permutation::from_mapping(&self.fwd)
    }

    /// The written swapping sequence, outermost first.
    pub fn written_swaps(&self) -> impl Iterator<Item = &Swapping> {
        self.swaps.iter()
    }

    pub fn written_len(&self) -> usize {
        self.swaps.len()
    }

    /// True when the written form is the empty sequence `Id`.
    pub fn is_written_identity(&self) -> bool {
        self.swaps.is_empty()
    }

    /// True when the action fixes every atom (e.g. `(a b)(a b)`).
    pub fn is_identity_action(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        self.fwd.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    pub fn apply_inverse_atom(&self, a: &Atom) -> Atom {
        self.inv.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    /// Prepends `(a b)` so that the new action is `(a b)` after the old one.
    /// The table updates follow the two-table recipe: look up the preimages
    /// of `a` and `b`, redirect them, and fix up the inverse table.
    pub fn prepend_swap(&mut self, s: Swapping) {
        let a = s.left.clone();
        let b = s.right.clone();
        self.swaps.push_front(s);
        if a == b {
            return;
        }
        let c = self.apply_inverse_atom(&a);
        let d = self.apply_inverse_atom(&b);
        set(&mut self.fwd, c.clone(), b.clone());
        set(&mut self.fwd, d.clone(), a.clone());
        set(&mut self.inv, b, c);
        set(&mut self.inv, a, d);
    }

    /// The inverse permutation: reversed written form, swapped tables.
    pub fn inverse(&self) -> Self {
        Permutation {
            swaps: self.swaps.iter().rev().cloned().collect(),
            fwd: self.inv.clone(),
            inv: self.fwd.clone(),
        }
    }

    /// `self` after `other`: the written forms concatenate, the action is
    /// composition of the table lookups.
    pub fn compose(&self, other: &Permutation) -> Self {
        let mut swaps = self.swaps.clone();
        swaps.extend(other.swaps.iter().cloned());
        let mut fwd = HashMap::new();
        let mut inv = HashMap::new();
        for k in self.fwd.keys().chain(other.fwd.keys()) {
            let v = self.apply_atom(&other.apply_atom(k));
            if v != *k {
                inv.insert(v.clone(), k.clone());
                fwd.insert(k.clone(), v);
            }
        }
        Permutation { swaps, fwd, inv }
    }

    /// Atoms moved by the action, in atom order.
    pub fn support(&self) -> BTreeSet<Atom> {
        self.fwd.keys().cloned().collect()
    }

    /// Atoms appearing in the written form, in atom order.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.swaps
            .iter()
            .flat_map(|s| [s.left.clone(), s.right.clone()])
            .collect()
    }

    /// Atoms of `domain` (plus everything either permutation moves) on
    /// which the two actions differ.
    pub fn disagreement<'a, I>(&self, other: &Permutation, domain: I) -> BTreeSet<Atom>
    where
        I: IntoIterator<Item = &'a Atom>,
    {
        let mut candidates: BTreeSet<Atom> = self.support();
        candidates.extend(other.support());
        candidates.extend(domain.into_iter().cloned());
        candidates
            .into_iter()
            .filter(|a| self.apply_atom(a) != other.apply_atom(a))
            .collect()
    }
}

fn set(table: &mut HashMap<Atom, Atom>, key: Atom, value: Atom) {
    if key == value {
        table.remove(&key);
    } else {
        table.insert(key, value);
    }
}

/// Equality of actions; the written forms are irrelevant.
impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.fwd == other.fwd
    }
}

impl Eq for Permutation {}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.swaps.is_empty() {
            return write!(f, "Id");
        }
        for s in &self.swaps {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
