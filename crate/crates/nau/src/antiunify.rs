//! Nominal anti-unification: least general generalizations of two terms
//! under a shared freshness context, based on a fixed finite atom set.
//!
//! The algorithm works on anti-unification triples `X: t =^= s`. Pending
//! triples are decomposed when the heads agree, turned into abstractions
//! over an available atom fresh for both sides, and otherwise solved into
//! a store while the result context picks up every available atom fresh
//! for both sides. Store entries whose term pairs are equivariant are
//! then merged, which is what makes the result least general. The
//! generalization is unique up to variable renaming and
//! alpha-equivalence regardless of the order choices; a seeded strategy
//! exists to exercise exactly that in tests.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alpha::{ctx_instance, derives_fresh, FreshnessContext};
use crate::equiv::{solve_equivariance, EquivEquation};
use crate::perm::Permutation;
use crate::term::{Atom, AtomSet, NameSupply, NominalTerm, Substitution, VarName};

/// An anti-unification triple `X: t =^= s`; `X` generalizes `t` and `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aut {
    pub var: VarName,
    pub left: NominalTerm,
    pub right: NominalTerm,
}

impl fmt::Display for Aut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} =^= {}", self.var, self.left, self.right)
    }
}

/// The final state projected onto its useful parts: the result
/// term-in-context `<gamma, term>`, the irreducible store, and the
/// witness substitutions read off the store (left components for the
/// left input, right for the right).
#[derive(Debug, Clone)]
pub struct GenResult {
    pub gamma: FreshnessContext,
    pub term: NominalTerm,
    pub store: Vec<Aut>,
    pub witness_left: Substitution,
    pub witness_right: Substitution,
}

impl GenResult {
    /// Renames the generalization variables to short names (X, Y, Z, W,
    /// X1, ...) in store order, skipping anything in `taken`. Purely a
    /// presentation move: the result is the same modulo variable renaming.
    pub fn with_presentation_names(&self, taken: &BTreeSet<VarName>) -> GenResult {
        const POOL: [&str; 4] = ["X", "Y", "Z", "W"];
        let mut candidates = (0..).map(|i: usize| {
            if i < POOL.len() {
                VarName::new(POOL[i])
            } else {
                VarName::new(format!("{}{}", POOL[i % POOL.len()], i / POOL.len()))
            }
        });
        let mut map: std::collections::BTreeMap<VarName, VarName> =
            std::collections::BTreeMap::new();
        for aut in &self.store {
            let new = candidates
                .by_ref()
                .find(|v| !taken.contains(v))
                .expect("infinite candidate pool");
            map.insert(aut.var.clone(), new);
        }
        let renaming: Substitution = map
            .iter()
            .map(|(old, new)| (old.clone(), NominalTerm::var(new.clone())))
            .collect();
        let rename = |v: &VarName| map.get(v).cloned().unwrap_or_else(|| v.clone());
        GenResult {
            gamma: self
                .gamma
                .iter()
                .map(|c| crate::alpha::FreshnessConstraint {
                    atom: c.atom.clone(),
                    var: rename(&c.var),
                })
                .collect(),
            term: renaming.apply(&self.term),
            store: self
                .store
                .iter()
                .map(|aut| Aut {
                    var: rename(&aut.var),
                    left: aut.left.clone(),
                    right: aut.right.clone(),
                })
                .collect(),
            witness_left: self
                .witness_left
                .iter()
                .map(|(v, t)| (rename(v), t.clone()))
                .collect(),
            witness_right: self
                .witness_right
                .iter()
                .map(|(v, t)| (rename(v), t.clone()))
                .collect(),
        }
    }
}

/// Rejected input: everything handed to the algorithm must be based on
/// the available atom set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotBasedError {
    pub place: &'static str,
    pub atom: Atom,
}

impl fmt::Display for NotBasedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mentions atom `{}` outside the available atom set",
            self.place, self.atom
        )
    }
}

impl std::error::Error for NotBasedError {}

enum Strategy {
    Deterministic,
    Seeded(ChaCha8Rng),
}

/// Deterministic run: pending triples in FIFO order, merges scanning
/// store pairs in creation order keeping the earlier variable.
pub fn antiunify(
    t: &NominalTerm,
    s: &NominalTerm,
    ctx: &FreshnessContext,
    avail: &AtomSet,
    supply: &mut NameSupply,
) -> Result<GenResult, NotBasedError> {
    run(t, s, ctx, avail, supply, Strategy::Deterministic)
}

/// Randomized triple selection, merge pairing and merge orientation.
/// The result is equi-general to the deterministic one.
pub fn antiunify_seeded(
    t: &NominalTerm,
    s: &NominalTerm,
    ctx: &FreshnessContext,
    avail: &AtomSet,
    supply: &mut NameSupply,
    seed: u64,
) -> Result<GenResult, NotBasedError> {
    run(
        t,
        s,
        ctx,
        avail,
        supply,
        Strategy::Seeded(ChaCha8Rng::seed_from_u64(seed)),
    )
}

fn check_based(
    atoms: impl IntoIterator<Item = Atom>,
    avail: &AtomSet,
    place: &'static str,
) -> Result<(), NotBasedError> {
    for a in atoms {
        if !avail.contains(&a) {
            return Err(NotBasedError { place, atom: a });
        }
    }
    Ok(())
}

enum Step {
    DecAtom,
    DecApp,
    Abs(Atom),
    Sol,
}

fn run(
    t: &NominalTerm,
    s: &NominalTerm,
    ctx: &FreshnessContext,
    avail: &AtomSet,
    supply: &mut NameSupply,
    mut strategy: Strategy,
) -> Result<GenResult, NotBasedError> {
    check_based(t.atoms(), avail, "left term")?;
    check_based(s.atoms(), avail, "right term")?;
    check_based(ctx.atoms(), avail, "freshness context")?;

    supply.reserve_term(t);
    supply.reserve_term(s);
    supply.reserve_atoms(avail);
    for c in ctx.iter() {
        supply.reserve(c.atom.as_str());
        supply.reserve(c.var.as_str());
    }

    let root = supply.fresh_var();
    let mut pending: VecDeque<Aut> = VecDeque::new();
    pending.push_back(Aut {
        var: root.clone(),
        left: t.clone(),
        right: s.clone(),
    });
    let mut store: Vec<Aut> = Vec::new();
    let mut gamma = FreshnessContext::new();
    let mut sigma = Substitution::identity();

    while !pending.is_empty() {
        let idx = match &mut strategy {
            Strategy::Deterministic => 0,
            Strategy::Seeded(rng) => rng.gen_range(0..pending.len()),
        };
        let aut = pending.remove(idx).expect("index in range");
        let step = match (&aut.left, &aut.right) {
            (NominalTerm::Atom(a), NominalTerm::Atom(b)) if a == b => Step::DecAtom,
            (NominalTerm::App(f, ts), NominalTerm::App(g, ss))
                if f == g && ts.len() == ss.len() =>
            {
                Step::DecApp
            }
            (NominalTerm::Abs(_, _), NominalTerm::Abs(_, _)) => {
                match choose_abs_atom(&aut.left, &aut.right, avail, ctx) {
                    Some(c) => Step::Abs(c),
                    None => Step::Sol,
                }
            }
            _ => Step::Sol,
        };
        match step {
            Step::DecAtom => {
                sigma = sigma.compose(&Substitution::single(aut.var, aut.left));
            }
            Step::DecApp => {
                let (NominalTerm::App(f, ts), NominalTerm::App(_, ss)) =
                    (aut.left, aut.right)
                else {
                    unreachable!()
                };
                let mut arg_vars = Vec::with_capacity(ts.len());
                for (l, r) in ts.into_iter().zip(ss) {
                    let y = supply.fresh_var();
                    arg_vars.push(NominalTerm::var(y.clone()));
                    pending.push_back(Aut {
                        var: y,
                        left: l,
                        right: r,
                    });
                }
                sigma = sigma.compose(&Substitution::single(
                    aut.var,
                    NominalTerm::App(f, arg_vars),
                ));
            }
            Step::Abs(c) => {
                let (NominalTerm::Abs(a, tb), NominalTerm::Abs(b, sb)) =
                    (aut.left, aut.right)
                else {
                    unreachable!()
                };
                let y = supply.fresh_var();
                pending.push_back(Aut {
                    var: y.clone(),
                    left: tb.apply_swap(&c, &a),
                    right: sb.apply_swap(&c, &b),
                });
                sigma = sigma.compose(&Substitution::single(
                    aut.var,
                    NominalTerm::abs(c, NominalTerm::var(y)),
                ));
            }
            Step::Sol => {
                gamma = gamma.union(&sol_gamma(&aut.left, &aut.right, &aut.var, avail, ctx));
                store.push(aut);
            }
        }
    }

    match &mut strategy {
        Strategy::Deterministic => {
            let mut i = 0;
            while i < store.len() {
                let mut j = i + 1;
                while j < store.len() {
                    if let Some(pi) = merge_step(&store[i], &store[j], ctx) {
                        apply_merge(&mut gamma, &mut sigma, &mut store, j, i, pi);
                    } else {
                        j += 1;
                    }
                }
                i += 1;
            }
        }
        Strategy::Seeded(rng) => loop {
            let mut pairs: Vec<(usize, usize)> = (0..store.len())
                .flat_map(|i| (i + 1..store.len()).map(move |j| (i, j)))
                .collect();
            pairs.shuffle(rng);
            let mut merged = false;
            for (i, j) in pairs {
                // Random orientation: keep either the earlier or the
                // later triple; the results are equi-general.
                let (keep, drop) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
                if let Some(pi) = merge_step(&store[keep], &store[drop], ctx) {
                    apply_merge(&mut gamma, &mut sigma, &mut store, drop, keep, pi);
                    merged = true;
                    break;
                }
            }
            if !merged {
                break;
            }
        },
    }

    let term = sigma.apply(&NominalTerm::var(root));
    let witness_left = store
        .iter()
        .map(|aut| (aut.var.clone(), aut.left.clone()))
        .collect();
    let witness_right = store
        .iter()
        .map(|aut| (aut.var.clone(), aut.right.clone()))
        .collect();
    Ok(GenResult {
        gamma,
        term,
        store,
        witness_left,
        witness_right,
    })
}

fn apply_merge(
    gamma: &mut FreshnessContext,
    sigma: &mut Substitution,
    store: &mut Vec<Aut>,
    drop: usize,
    keep: usize,
    pi: Permutation,
) {
    let phi = Substitution::single(
        store[drop].var.clone(),
        NominalTerm::Susp(pi, store[keep].var.clone()),
    );
    // On a suspension range the instance only reroutes constraints
    // through the inverse permutation, so it cannot fail.
    *gamma = ctx_instance(gamma, &phi).expect("context instance of a suspension");
    *sigma = sigma.compose(&phi);
    store.remove(drop);
}

/// The freshness constraints a solved triple contributes: every
/// available atom derivably fresh for both sides, constrained on the
/// generalization variable.
pub fn sol_gamma(
    lhs: &NominalTerm,
    rhs: &NominalTerm,
    gen_var: &VarName,
    avail: &AtomSet,
    ctx: &FreshnessContext,
) -> FreshnessContext {
    let mut out = FreshnessContext::new();
    for a in avail.iter() {
        if derives_fresh(ctx, a, lhs) && derives_fresh(ctx, a, rhs) {
            out.insert(a.clone(), gen_var.clone());
        }
    }
    out
}

/// The smallest available atom derivably fresh for both abstractions,
/// or `None` when the solve rule has to take over.
pub fn choose_abs_atom(
    lhs_abs: &NominalTerm,
    rhs_abs: &NominalTerm,
    avail: &AtomSet,
    ctx: &FreshnessContext,
) -> Option<Atom> {
    debug_assert!(matches!(lhs_abs, NominalTerm::Abs(_, _)));
    debug_assert!(matches!(rhs_abs, NominalTerm::Abs(_, _)));
    avail
        .iter()
        .find(|c| derives_fresh(ctx, c, lhs_abs) && derives_fresh(ctx, c, rhs_abs))
        .cloned()
}

/// A permutation merging two solved triples, i.e. mapping both
/// components of `s1` onto those of `s2` up to alpha-equivalence, based
/// on the atoms of the four terms. `None` keeps the triples separate.
pub fn merge_step(s1: &Aut, s2: &Aut, ctx: &FreshnessContext) -> Option<Permutation> {
    let mut avail = AtomSet::new();
    for term in [&s1.left, &s1.right, &s2.left, &s2.right] {
        for a in term.atoms() {
            avail.insert(a);
        }
    }
    let eqs = [
        EquivEquation::new(s1.left.clone(), s2.left.clone()),
        EquivEquation::new(s1.right.clone(), s2.right.clone()),
    ];
    solve_equivariance(&eqs, ctx, &avail, &mut NameSupply::new()).ok()
}

/// The available atoms unused by `t`, `s` and `ctx`.
pub fn fresh_atoms_for(
    avail: &AtomSet,
    t: &NominalTerm,
    s: &NominalTerm,
    ctx: &FreshnessContext,
) -> BTreeSet<Atom> {
    let mut used = t.atoms();
    used.extend(s.atoms());
    used.extend(ctx.atoms());
    avail
        .iter()
        .filter(|a| !used.contains(*a))
        .cloned()
        .collect()
}

/// Whether enough unused atoms remain to abstract every binder pair:
/// at least `min(|t|_abs, |s|_abs)` of them.
pub fn is_saturated(
    avail: &AtomSet,
    t: &NominalTerm,
    s: &NominalTerm,
    ctx: &FreshnessContext,
) -> bool {
    fresh_atoms_for(avail, t, s, ctx).len() >= t.abs_count().min(s.abs_count())
}

/// The minimal saturated superset of `avail`, extended with supply atoms.
pub fn saturate(
    avail: &AtomSet,
    t: &NominalTerm,
    s: &NominalTerm,
    ctx: &FreshnessContext,
    supply: &mut NameSupply,
) -> AtomSet {
    supply.reserve_term(t);
    supply.reserve_term(s);
    supply.reserve_atoms(avail);
    for c in ctx.iter() {
        supply.reserve(c.atom.as_str());
    }
    let need = t.abs_count().min(s.abs_count());
    let have = fresh_atoms_for(avail, t, s, ctx).len();
    let mut out = avail.clone();
    for _ in have..need {
        out.insert(supply.fresh_atom());
    }
    out
}
