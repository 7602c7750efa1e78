//! Constructive equivariance.
//!
//! Given equations `t ~ s`, a freshness context and a finite set of
//! available atoms, find an available-atom-based permutation `pi` with
//! `ctx |- pi • t ~ s` for every equation, or report that none exists.
//!
//! The solver runs in two phases. The first decomposes applications,
//! abstractions (renaming both binders to a fresh atom) and suspensions
//! of a common variable (expanding them into atom equations over the
//! unconstrained available atoms) until only atom equations remain. The
//! second consumes atom equations, removing one equation and one
//! available atom per step while extending the permutation. Fresh atoms
//! introduced by the first phase lie outside the available set and can
//! never enter the result.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alpha::FreshnessContext;
use crate::perm::{Permutation, Swapping};
use crate::term::{Atom, AtomSet, NameSupply, NominalTerm, VarName};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivEquation {
    pub lhs: NominalTerm,
    pub rhs: NominalTerm,
}

impl EquivEquation {
    pub fn new(lhs: NominalTerm, rhs: NominalTerm) -> Self {
        EquivEquation { lhs, rhs }
    }
}

impl fmt::Display for EquivEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.lhs, self.rhs)
    }
}

/// The failed rule guard behind a `⊥` answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivFailure {
    SymbolClash { left: String, right: String },
    SuspensionVarClash { left: VarName, right: VarName },
    ShapeClash { left: String, right: String },
    AtomClash { lhs: Atom, rhs: Atom, image: Atom },
}

impl fmt::Display for EquivFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivFailure::SymbolClash { left, right } => write!(
                f,
                "Dec-E guard fails: distinct application heads `{left}` and `{right}`"
            ),
            EquivFailure::SuspensionVarClash { left, right } => write!(
                f,
                "Sus-E guard fails: suspensions of distinct variables {left} and {right}"
            ),
            EquivFailure::ShapeClash { left, right } => {
                write!(f, "no rule applies to `{left} ~ {right}`")
            }
            EquivFailure::AtomClash { lhs, rhs, image } => write!(
                f,
                "atom equation `{lhs} ~ {rhs}` unsolvable: pi•{lhs} = {image}, \
                 and Rem-E/Sol-E guards need pi•{lhs} = {rhs} or both pi•{lhs} and {rhs} still available"
            ),
        }
    }
}

impl std::error::Error for EquivFailure {}

enum Order {
    Fifo,
    Shuffled(ChaCha8Rng),
}

impl Order {
    fn pick(&mut self, len: usize) -> usize {
        match self {
            Order::Fifo => 0,
            Order::Shuffled(rng) => rng.gen_range(0..len),
        }
    }
}

/// Solves the equation set with the deterministic FIFO strategy.
pub fn solve_equivariance(
    eqs: &[EquivEquation],
    ctx: &FreshnessContext,
    avail: &AtomSet,
    supply: &mut NameSupply,
) -> Result<Permutation, EquivFailure> {
    solve(eqs, ctx, avail, supply, &mut Order::Fifo)
}

/// Same answer status, randomized equation selection; used to check that
/// the result does not depend on the strategy.
pub fn solve_equivariance_seeded(
    eqs: &[EquivEquation],
    ctx: &FreshnessContext,
    avail: &AtomSet,
    supply: &mut NameSupply,
    seed: u64,
) -> Result<Permutation, EquivFailure> {
    solve(
        eqs,
        ctx,
        avail,
        supply,
        &mut Order::Shuffled(ChaCha8Rng::seed_from_u64(seed)),
    )
}

fn solve(
    eqs: &[EquivEquation],
    ctx: &FreshnessContext,
    avail: &AtomSet,
    supply: &mut NameSupply,
    order: &mut Order,
) -> Result<Permutation, EquivFailure> {
    for eq in eqs {
        supply.reserve_term(&eq.lhs);
        supply.reserve_term(&eq.rhs);
    }
    supply.reserve_atoms(avail);
    for c in ctx.iter() {
        supply.reserve(c.atom.as_str());
    }

    let mut work: VecDeque<EquivEquation> = eqs.iter().cloned().collect();
    let mut atom_eqs: VecDeque<(Atom, Atom)> = VecDeque::new();

    while !work.is_empty() {
        let idx = order.pick(work.len());
        let eq = work.remove(idx).expect("index in range");
        match (eq.lhs, eq.rhs) {
            (NominalTerm::App(f, ts), NominalTerm::App(g, ss)) => {
                if f != g || ts.len() != ss.len() {
                    return Err(EquivFailure::SymbolClash { left: f, right: g });
                }
                for (t, s) in ts.into_iter().zip(ss) {
                    work.push_back(EquivEquation::new(t, s));
                }
            }
            (NominalTerm::Abs(a, mut t), NominalTerm::Abs(b, mut s)) => {
                let c = supply.fresh_atom();
                t.apply_swap_mut(&Swapping::new(c.clone(), a));
                s.apply_swap_mut(&Swapping::new(c, b));
                work.push_back(EquivEquation::new(*t, *s));
            }
            (NominalTerm::Susp(p1, x), NominalTerm::Susp(p2, y)) => {
                if x != y {
                    return Err(EquivFailure::SuspensionVarClash { left: x, right: y });
                }
                for a in avail.iter() {
                    if !ctx.contains(a, &x) {
                        atom_eqs.push_back((p1.apply_atom(a), p2.apply_atom(a)));
                    }
                }
            }
            (NominalTerm::Atom(a), NominalTerm::Atom(b)) => {
                atom_eqs.push_back((a, b));
            }
            (lhs, rhs) => {
                return Err(EquivFailure::ShapeClash {
                    left: lhs.to_string(),
                    right: rhs.to_string(),
                })
            }
        }
    }

    let mut pi = Permutation::identity();
    let mut remaining: HashSet<Atom> = avail.members().clone();
    while !atom_eqs.is_empty() {
        let idx = order.pick(atom_eqs.len());
        let (a, b) = atom_eqs.remove(idx).expect("index in range");
        let image = pi.apply_atom(&a);
        if image == b {
            remaining.remove(&b);
        } else if remaining.contains(&image) && remaining.contains(&b) {
            pi.prepend_swap(Swapping::new(image, b.clone()));
            remaining.remove(&b);
        } else {
            return Err(EquivFailure::AtomClash { lhs: a, rhs: b, image });
        }
    }

    debug_assert!(pi.support().iter().all(|a| avail.contains(a)));
    let mut mapping = HashMap::new();
    for a in avail.iter() {
        let b = pi.apply_atom(a);
        if b != *a {
            mapping.insert(a.clone(), b);
        }
    }
    Ok(Permutation::from_mapping(&mapping))
}

/// The available atoms the problem statement assigns to a set of
/// equations: all atoms occurring in them.
pub fn equation_atoms(eqs: &[EquivEquation]) -> AtomSet {
    let mut set = AtomSet::new();
    for eq in eqs {
        for a in eq.lhs.atoms().into_iter().chain(eq.rhs.atoms()) {
            set.insert(a);
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq;
    use crate::syntax::{parse_context, parse_term};

    fn eqs(pairs: &[(&str, &str)]) -> Vec<EquivEquation> {
        pairs
            .iter()
            .map(|(l, r)| {
                EquivEquation::new(
                    parse_term(l, None).unwrap(),
                    parse_term(r, None).unwrap(),
                )
            })
            .collect()
    }

    fn run(pairs: &[(&str, &str)], ctx: &str) -> Result<Permutation, EquivFailure> {
        let eqs = eqs(pairs);
        let ctx = parse_context(ctx).unwrap();
        let avail = equation_atoms(&eqs);
        solve_equivariance(&eqs, &ctx, &avail, &mut NameSupply::new())
    }

    fn assert_action(p: &Permutation, pairs: &[(&str, &str)]) {
        for (a, b) in pairs {
            assert_eq!(p.apply_atom(&Atom::new(*a)), Atom::new(*b), "{p}");
        }
    }

    #[test]
    fn worked_example_computes_c_d() {
        let p = run(
            &[("a", "a"), ("a.(a b)(c d)*X", "b.X")],
            "{a#X}",
        )
        .unwrap();
        assert_action(&p, &[("a", "a"), ("b", "b"), ("c", "d"), ("d", "c")]);
        assert_eq!(p.to_string(), "(c d)");
    }

    #[test]
    fn unsolvable_capture_fails() {
        let err = run(&[("a.f(b, X)", "b.f(a, X)")], "{a#X}").unwrap_err();
        assert!(matches!(err, EquivFailure::AtomClash { .. }), "{err}");
    }

    #[test]
    fn swapped_suspension_solves_to_b_a() {
        let p = run(&[("a.f(b, (a b)*X)", "b.f(a, X)")], "{a#X}").unwrap();
        assert_action(&p, &[("a", "b"), ("b", "a")]);
    }

    #[test]
    fn equal_actions_solve_to_id() {
        let p = run(&[("a.b.(a b)(a c)*X", "b.a.(a c)*X")], "{}").unwrap();
        assert!(p.is_identity_action());
    }

    #[test]
    fn mismatching_suspensions_fail() {
        let err = run(&[("a.b.(a b)(a c)*X", "a.b.(b c)*X")], "{}").unwrap_err();
        assert!(matches!(err, EquivFailure::AtomClash { .. }), "{err}");
    }

    #[test]
    fn ground_identity_is_found() {
        let t = "f(a.b.g((a b)(c d)*X, a), h(c))";
        let p = run(&[(t, t)], "{}").unwrap();
        let term = parse_term(t, None).unwrap();
        for a in term.free_atoms() {
            assert_eq!(p.apply_atom(&a), a);
        }
    }

    #[test]
    fn soundness_of_returned_permutations() {
        let cases: &[(&[(&str, &str)], &str)] = &[
            (&[("a", "a"), ("a.(a b)(c d)*X", "b.X")], "{a#X}"),
            (&[("a.f(b, (a b)*X)", "b.f(a, X)")], "{a#X}"),
            (&[("a.b.(a b)(a c)*X", "b.a.(a c)*X")], "{}"),
            (&[("f(a, b)", "f(b, a)")], "{}"),
        ];
        for (pairs, c) in cases {
            let equations = eqs(pairs);
            let ctx = parse_context(c).unwrap();
            let avail = equation_atoms(&equations);
            let p = solve_equivariance(&equations, &ctx, &avail, &mut NameSupply::new())
                .unwrap();
            for a in p.support() {
                assert!(avail.contains(&a), "result not available-based: {a}");
            }
            for eq in &equations {
                assert!(
                    alpha_eq(&ctx, &eq.lhs.apply_perm(&p), &eq.rhs),
                    "pi = {p} does not solve {eq}"
                );
            }
        }
    }

    #[test]
    fn selection_order_does_not_change_the_status() {
        let cases: &[(&[(&str, &str)], &str)] = &[
            (&[("a", "a"), ("a.(a b)(c d)*X", "b.X")], "{a#X}"),
            (&[("a.f(b, X)", "b.f(a, X)")], "{a#X}"),
            (&[("a.b.(a b)(a c)*X", "a.b.(b c)*X")], "{}"),
            (&[("f(a, b)", "f(b, a)")], "{}"),
        ];
        for (pairs, c) in cases {
            let equations = eqs(pairs);
            let ctx = parse_context(c).unwrap();
            let avail = equation_atoms(&equations);
            let fifo =
                solve_equivariance(&equations, &ctx, &avail, &mut NameSupply::new());
            for seed in 0..5 {
                let shuffled = solve_equivariance_seeded(
                    &equations,
                    &ctx,
                    &avail,
                    &mut NameSupply::new(),
                    seed,
                );
                assert_eq!(fifo.is_ok(), shuffled.is_ok());
                if let (Ok(p), Ok(q)) = (&fifo, &shuffled) {
                    for eq in &equations {
                        for a in eq.lhs.free_atoms() {
                            assert_eq!(p.apply_atom(&a), q.apply_atom(&a));
                        }
                    }
                }
            }
        }
    }
}
