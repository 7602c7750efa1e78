//! The subsumption order on terms and terms-in-context.
//!
//! `<ctx1, t1>` is more general than `<ctx2, t2>` when some substitution
//! respecting `ctx1` sends `ctx1` inside `ctx2` and `t1` onto `t2` up to
//! alpha-equivalence. The witness finder here is a syntax-directed
//! matcher; its positive answers are always verified, its negative
//! answers are not a completeness claim. The module also houses the
//! brute-force oracles the property suites compare against: permutation
//! enumeration for equivariance, bounded term enumeration for
//! generalization sets, and bounded substitution search for subsumption.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;

use crate::alpha::{alpha_eq, ctx_instance, derives_all, FreshnessContext};
use crate::perm::Permutation;
use crate::term::{Atom, AtomSet, NameSupply, NominalTerm, Substitution, VarName};

/// A pair `<ctx, term>` of a freshness context and a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermInContext {
    pub ctx: FreshnessContext,
    pub term: NominalTerm,
}

impl TermInContext {
    pub fn new(ctx: FreshnessContext, term: NominalTerm) -> Self {
        TermInContext { ctx, term }
    }
}

impl fmt::Display for TermInContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.ctx, self.term)
    }
}

/// An oracle was asked to enumerate beyond its configured bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundExceeded {
    pub msg: String,
}

impl fmt::Display for BoundExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "oracle bound exceeded: {}", self.msg)
    }
}

impl std::error::Error for BoundExceeded {}

/// Searches for a substitution with `ctx |- pattern.sigma ~ target`.
///
/// The descent mirrors the alpha-equivalence rules: applications and
/// atoms decompose, an abstraction pair recurses on the swapped body
/// (deferring the freshness premise), and a suspension binds its
/// variable to the inverse-permuted target subterm, with repeated
/// occurrences checked for alpha-equivalent candidates. The assembled
/// witness is verified before it is returned.
pub fn match_terms(
    pattern: &NominalTerm,
    target: &NominalTerm,
    ctx: &FreshnessContext,
) -> Option<Substitution> {
    let mut bindings = Substitution::identity();
    if !descend(pattern, target, ctx, &mut bindings) {
        return None;
    }
    if alpha_eq(ctx, &bindings.apply(pattern), target) {
        Some(bindings)
    } else {
        None
    }
}

fn descend(
    pattern: &NominalTerm,
    target: &NominalTerm,
    ctx: &FreshnessContext,
    bindings: &mut Substitution,
) -> bool {
    match (pattern, target) {
        (NominalTerm::Atom(a), NominalTerm::Atom(b)) => a == b,
        (NominalTerm::App(f, ps), NominalTerm::App(g, ts)) => {
            f == g
                && ps.len() == ts.len()
                && ps
                    .iter()
                    .zip(ts)
                    .all(|(p, t)| descend(p, t, ctx, bindings))
        }
        (NominalTerm::Abs(a, pb), NominalTerm::Abs(b, tb)) => {
            if a == b {
                descend(pb, tb, ctx, bindings)
            } else {
                descend(pb, &tb.apply_swap(a, b), ctx, bindings)
            }
        }
        (NominalTerm::Susp(p, x), t) => {
            let candidate = t.apply_perm(&p.inverse());
            match bindings.get(x) {
                Some(previous) => alpha_eq(ctx, previous, &candidate),
                None => {
                    bindings.insert(x.clone(), candidate);
                    true
                }
            }
        }
        _ => false,
    }
}

/// `ctx |- t1 <= t2`: some substitution sends `t1` onto `t2` under `ctx`.
pub fn term_subsumes(ctx: &FreshnessContext, t1: &NominalTerm, t2: &NominalTerm) -> bool {
    match_terms(t1, t2, ctx).is_some()
}

/// `p1 <= p2` for terms-in-context: a substitution respecting `p1.ctx`
/// maps `p1.ctx` inside `p2.ctx` and `p1.term` onto `p2.term`.
///
/// Constrained variables the matcher never touched are sent to an atom
/// no input mentions, which discharges their constraints for free.
pub fn subsumes(p1: &TermInContext, p2: &TermInContext, supply: &mut NameSupply) -> bool {
    let Some(mut sigma) = match_terms(&p1.term, &p2.term, &p2.ctx) else {
        return false;
    };
    let bound: BTreeSet<VarName> = sigma.domain().cloned().collect();
    let term_vars = p1.term.vars();
    let mut filler: Option<Atom> = None;
    let dangling: Vec<VarName> = p1
        .ctx
        .vars()
        .into_iter()
        .filter(|v| !bound.contains(v) && !term_vars.contains(v))
        .collect();
    for v in dangling {
        let a = filler
            .get_or_insert_with(|| {
                supply.reserve_term(&p1.term);
                supply.reserve_term(&p2.term);
                for c in p1.ctx.iter().chain(p2.ctx.iter()) {
                    supply.reserve(c.atom.as_str());
                }
                supply.fresh_atom()
            })
            .clone();
        sigma.insert(v, NominalTerm::Atom(a));
    }
    let Some(instance) = ctx_instance(&p1.ctx, &sigma) else {
        return false;
    };
    derives_all(&p2.ctx, &instance.formulas())
}

/// `p1 ~ p2`: subsumption in both directions.
pub fn equi_general(p1: &TermInContext, p2: &TermInContext, supply: &mut NameSupply) -> bool {
    subsumes(p1, p2, supply) && subsumes(p2, p1, supply)
}

/// Enumerates every bijection of `avail` (as a permutation) in a fixed
/// order and returns the first solving `ctx |- mu • t ~ s`.
pub fn brute_equivariance(
    t: &NominalTerm,
    s: &NominalTerm,
    ctx: &FreshnessContext,
    avail: &AtomSet,
    max_atoms: usize,
) -> Result<Option<Permutation>, BoundExceeded> {
    if avail.len() > max_atoms {
        return Err(BoundExceeded {
            msg: format!("{} atoms exceed the {max_atoms}-atom cap", avail.len()),
        });
    }
    let atoms: Vec<Atom> = avail.iter().cloned().collect();
    for mu in all_bijections(&atoms) {
        if alpha_eq(ctx, &t.apply_perm(&mu), s) {
            return Ok(Some(mu));
        }
    }
    Ok(None)
}

/// All bijections of `atoms`, identity first, in lexicographic image order.
pub fn all_bijections(atoms: &[Atom]) -> Vec<Permutation> {
    if atoms.is_empty() {
        return vec![Permutation::identity()];
    }
    atoms
        .iter()
        .permutations(atoms.len())
        .map(|images| {
            let mapping = atoms
                .iter()
                .zip(images)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            Permutation::from_mapping(&mapping)
        })
        .collect()
}

fn collect_symbols(terms: &[&NominalTerm], out: &mut BTreeSet<(String, usize)>) {
    for t in terms {
        match t {
            NominalTerm::Atom(_) | NominalTerm::Susp(_, _) => {}
            NominalTerm::Abs(_, body) => collect_symbols(&[body], out),
            NominalTerm::App(f, args) => {
                out.insert((f.clone(), args.len()));
                collect_symbols(&args.iter().collect::<Vec<_>>(), out);
            }
        }
    }
}

const ENUMERATION_CAP: usize = 2_000_000;

/// All terms over the given atoms, variables and symbols up to `depth`,
/// with suspension permutations drawn from the atom bijections.
fn enumerate_terms(
    atoms: &[Atom],
    vars: &[VarName],
    symbols: &BTreeSet<(String, usize)>,
    depth: usize,
) -> Result<Vec<NominalTerm>, BoundExceeded> {
    let mut all: Vec<NominalTerm> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut push = |t: NominalTerm, all: &mut Vec<NominalTerm>| {
        if seen.insert(t.to_string()) {
            all.push(t);
        }
    };
    for a in atoms {
        push(NominalTerm::Atom(a.clone()), &mut all);
    }
    for (f, k) in symbols {
        if *k == 0 {
            push(NominalTerm::constant(f.clone()), &mut all);
        }
    }
    for mu in all_bijections(atoms) {
        for v in vars {
            push(NominalTerm::Susp(mu.clone(), v.clone()), &mut all);
        }
    }
    for _ in 0..depth {
        let base = all.clone();
        for a in atoms {
            for t in &base {
                push(NominalTerm::abs(a.clone(), t.clone()), &mut all);
            }
        }
        for (f, k) in symbols {
            if *k == 0 {
                continue;
            }
            for args in (0..*k).map(|_| base.iter()).multi_cartesian_product() {
                push(
                    NominalTerm::App(f.clone(), args.into_iter().cloned().collect()),
                    &mut all,
                );
                if all.len() > ENUMERATION_CAP {
                    return Err(BoundExceeded {
                        msg: format!("more than {ENUMERATION_CAP} candidate terms"),
                    });
                }
            }
        }
        if all.len() > ENUMERATION_CAP {
            return Err(BoundExceeded {
                msg: format!("more than {ENUMERATION_CAP} candidate terms"),
            });
        }
    }
    Ok(all)
}

/// Every subset of `atoms x vars` as a freshness context.
fn all_contexts(atoms: &[Atom], vars: &[VarName]) -> Vec<FreshnessContext> {
    let pairs: Vec<(Atom, VarName)> = atoms
        .iter()
        .flat_map(|a| vars.iter().map(move |v| (a.clone(), v.clone())))
        .collect();
    let mut out = Vec::with_capacity(1 << pairs.len());
    for mask in 0u32..(1 << pairs.len()) {
        let mut ctx = FreshnessContext::new();
        for (i, (a, v)) in pairs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                ctx.insert(a.clone(), v.clone());
            }
        }
        out.push(ctx);
    }
    out
}

/// Brute-force generalization enumeration at tiny scale: every
/// `avail`-based term-in-context (up to two generalization variables,
/// contexts over all subsets of `avail x vars`) subsuming both inputs.
pub fn enumerate_generalizations(
    p1: &TermInContext,
    p2: &TermInContext,
    avail: &AtomSet,
    depth_bound: usize,
    supply: &mut NameSupply,
) -> Result<Vec<TermInContext>, BoundExceeded> {
    if avail.len() > 3 || depth_bound > 2 {
        return Err(BoundExceeded {
            msg: format!(
                "enumerate_generalizations is limited to 3 atoms and depth 2, got {} atoms, depth {depth_bound}",
                avail.len()
            ),
        });
    }
    supply.reserve_term(&p1.term);
    supply.reserve_term(&p2.term);
    let vars = [supply.fresh_var(), supply.fresh_var()];
    let mut symbols = BTreeSet::new();
    collect_symbols(&[&p1.term, &p2.term], &mut symbols);
    let atoms: Vec<Atom> = avail.iter().cloned().collect();
    let terms = enumerate_terms(&atoms, &vars, &symbols, depth_bound)?;
    let mut out = Vec::new();
    for r in terms {
        let rvars: Vec<VarName> = r.vars().into_iter().collect();
        for ctx in all_contexts(&atoms, &rvars) {
            let cand = TermInContext::new(ctx, r.clone());
            if subsumes(&cand, p1, supply) && subsumes(&cand, p2, supply) {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

/// Bounded exhaustive decision of `p1 <= p2`: tries every substitution
/// that maps the pattern variables to enumerated terms over the input
/// atoms (plus one never-mentioned extra atom) up to `max_depth`. Unlike
/// `subsumes` this is complete within its bounds, so a `false` really
/// refutes subsumption for witnesses inside the search space.
pub fn subsumes_exhaustive(
    p1: &TermInContext,
    p2: &TermInContext,
    max_atoms: usize,
    max_depth: usize,
    supply: &mut NameSupply,
) -> Result<bool, BoundExceeded> {
    let mut domain: BTreeSet<VarName> = p1.term.vars();
    domain.extend(p1.ctx.vars());
    let domain: Vec<VarName> = domain.into_iter().collect();

    let check = |sigma: &Substitution| -> bool {
        match ctx_instance(&p1.ctx, sigma) {
            Some(instance) => {
                derives_all(&p2.ctx, &instance.formulas())
                    && alpha_eq(&p2.ctx, &sigma.apply(&p1.term), &p2.term)
            }
            None => false,
        }
    };

    if domain.is_empty() {
        return Ok(check(&Substitution::identity()));
    }

    supply.reserve_term(&p1.term);
    supply.reserve_term(&p2.term);
    for c in p1.ctx.iter().chain(p2.ctx.iter()) {
        supply.reserve(c.atom.as_str());
    }
    let extra = supply.fresh_atom();
    let mut atoms: BTreeSet<Atom> = p1.term.atoms();
    atoms.extend(p1.ctx.atoms());
    atoms.extend(p2.term.atoms());
    atoms.extend(p2.ctx.atoms());
    atoms.insert(extra);
    if atoms.len() > max_atoms {
        return Err(BoundExceeded {
            msg: format!("{} atoms exceed the {max_atoms}-atom cap", atoms.len()),
        });
    }
    let atoms: Vec<Atom> = atoms.into_iter().collect();

    let mut range_vars: BTreeSet<VarName> = p2.term.vars();
    range_vars.extend(p2.ctx.vars());
    let range_vars: Vec<VarName> = range_vars.into_iter().collect();

    let mut symbols = BTreeSet::new();
    collect_symbols(&[&p1.term, &p2.term], &mut symbols);
    let range = enumerate_terms(&atoms, &range_vars, &symbols, max_depth)?;
    let combinations = range
        .len()
        .checked_pow(domain.len() as u32)
        .filter(|n| *n <= ENUMERATION_CAP);
    if combinations.is_none() {
        return Err(BoundExceeded {
            msg: format!(
                "{}^{} substitution candidates exceed the cap",
                range.len(),
                domain.len()
            ),
        });
    }

    for assignment in (0..domain.len())
        .map(|_| range.iter())
        .multi_cartesian_product()
    {
        let sigma: Substitution = domain
            .iter()
            .cloned()
            .zip(assignment.into_iter().cloned())
            .collect();
        if check(&sigma) {
            return Ok(true);
        }
    }
    Ok(false)
}
