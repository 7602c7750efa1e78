//! Seeded random instance generation for the property and acceptance
//! suites, and the fixed layered term family behind the runtime trend
//! checks. Everything here is deterministic in the seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alpha::FreshnessContext;
use crate::perm::{Permutation, Swapping};
use crate::term::{Atom, AtomSet, NominalTerm, VarName};

const ATOM_POOL: [&str; 8] = ["a", "b", "c", "d", "e", "f1", "g1", "h1"];
const VAR_POOL: [&str; 6] = ["X", "Y", "Z", "W", "V", "U"];

/// Random nominal terms, contexts and problem instances.
pub struct InstanceGen {
    rng: ChaCha8Rng,
    pub max_atoms: usize,
    pub max_depth: usize,
    pub max_vars: usize,
}

impl InstanceGen {
    pub fn with_seed(seed: u64) -> Self {
        InstanceGen::bounded(seed, 5, 4, 4)
    }

    pub fn bounded(seed: u64, max_atoms: usize, max_depth: usize, max_vars: usize) -> Self {
        assert!(max_atoms >= 1 && max_atoms <= ATOM_POOL.len());
        assert!(max_vars <= VAR_POOL.len());
        InstanceGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_atoms,
            max_depth,
            max_vars,
        }
    }

    fn pools(&mut self) -> (Vec<Atom>, Vec<VarName>) {
        let n_atoms = self.rng.gen_range(1..=self.max_atoms);
        let n_vars = self.rng.gen_range(0..=self.max_vars);
        (
            ATOM_POOL[..n_atoms].iter().map(|s| Atom::new(*s)).collect(),
            VAR_POOL[..n_vars].iter().map(|s| VarName::new(*s)).collect(),
        )
    }

    /// A random anti-unification problem: two terms, a context and the
    /// atom set everything is based on.
    pub fn problem(&mut self) -> (NominalTerm, NominalTerm, FreshnessContext, AtomSet) {
        let (atoms, vars) = self.pools();
        let depth = self.rng.gen_range(0..=self.max_depth);
        let t = self.term(&atoms, &vars, depth);
        let s = self.term(&atoms, &vars, depth);
        let ctx = self.context(&atoms, &vars);
        (t, s, ctx, atoms.into_iter().collect())
    }

    /// A random equivariance instance. Half the time the right-hand side
    /// is a permuted copy of the left, so solvable cases are well
    /// represented.
    pub fn equiv_instance(&mut self) -> (NominalTerm, NominalTerm, FreshnessContext, AtomSet) {
        let (atoms, vars) = self.pools();
        let depth = self.rng.gen_range(0..=self.max_depth);
        let t = self.term(&atoms, &vars, depth);
        let s = if self.rng.gen_bool(0.5) {
            t.apply_perm(&self.bijection(&atoms))
        } else {
            self.term(&atoms, &vars, depth)
        };
        let ctx = self.context(&atoms, &vars);
        let mut avail: AtomSet = atoms.into_iter().collect();
        for a in t.atoms().into_iter().chain(s.atoms()) {
            avail.insert(a);
        }
        (t, s, ctx, avail)
    }

    pub fn term(&mut self, atoms: &[Atom], vars: &[VarName], depth: usize) -> NominalTerm {
        let leaf_only = depth == 0 || self.rng.gen_bool(0.35);
        if leaf_only {
            return self.leaf(atoms, vars);
        }
        match self.rng.gen_range(0..10) {
            0..=3 => NominalTerm::app(
                "f",
                vec![
                    self.term(atoms, vars, depth - 1),
                    self.term(atoms, vars, depth - 1),
                ],
            ),
            4..=6 => NominalTerm::app("g", vec![self.term(atoms, vars, depth - 1)]),
            _ => {
                let binder = atoms.choose(&mut self.rng).unwrap().clone();
                NominalTerm::abs(binder, self.term(atoms, vars, depth - 1))
            }
        }
    }

    fn leaf(&mut self, atoms: &[Atom], vars: &[VarName]) -> NominalTerm {
        if !vars.is_empty() && self.rng.gen_bool(0.5) {
            let v = vars.choose(&mut self.rng).unwrap().clone();
            NominalTerm::Susp(self.permutation(atoms), v)
        } else if self.rng.gen_bool(0.15) {
            NominalTerm::constant("c0")
        } else {
            NominalTerm::Atom(atoms.choose(&mut self.rng).unwrap().clone())
        }
    }

    /// A short random swapping sequence; degenerate swappings slip in
    /// occasionally on purpose.
    pub fn permutation(&mut self, atoms: &[Atom]) -> Permutation {
        let len = self.rng.gen_range(0..=2);
        let swaps: Vec<Swapping> = (0..len)
            .map(|_| {
                Swapping::new(
                    atoms.choose(&mut self.rng).unwrap().clone(),
                    atoms.choose(&mut self.rng).unwrap().clone(),
                )
            })
            .collect();
        Permutation::from_swaps(swaps)
    }

    /// A uniformly random bijection of `atoms`.
    pub fn bijection(&mut self, atoms: &[Atom]) -> Permutation {
        let mut images: Vec<Atom> = atoms.to_vec();
        images.shuffle(&mut self.rng);
        let mapping = atoms
            .iter()
            .cloned()
            .zip(images)
            .collect();
        Permutation::from_mapping(&mapping)
    }

    pub fn context(&mut self, atoms: &[Atom], vars: &[VarName]) -> FreshnessContext {
        let mut ctx = FreshnessContext::new();
        for a in atoms {
            for v in vars {
                if self.rng.gen_bool(0.25) {
                    ctx.insert(a.clone(), v.clone());
                }
            }
        }
        ctx
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

fn padded(prefix: &str, i: usize) -> Atom {
    Atom::new(format!("{prefix}{i:03}"))
}

fn nest(binders: &[Atom], body: NominalTerm) -> NominalTerm {
    binders
        .iter()
        .rev()
        .fold(body, |acc, b| NominalTerm::abs(b.clone(), acc))
}

/// A balanced instance with `k` suspensions under `k` abstractions:
/// `b0...b{k-1}.f(p0*V, ..., p{k-1}*V)` with single-swapping `p_i`.
/// Both phases of the equivariance solver do full work on the pair
/// `(t, t)`: every abstraction renames, every suspension expands.
pub fn layered_equiv_instance(k: usize) -> (NominalTerm, NominalTerm) {
    assert!(k >= 2);
    let binders: Vec<Atom> = (0..k).map(|i| padded("b", i)).collect();
    let v = VarName::new("V");
    let args: Vec<NominalTerm> = (0..k)
        .map(|i| {
            let sw = Swapping::new(binders[i].clone(), binders[(i + 1) % k].clone());
            NominalTerm::Susp(Permutation::from_swaps([sw]), v.clone())
        })
        .collect();
    let t = nest(&binders, NominalTerm::app("f", args));
    (t.clone(), t)
}

/// A balanced anti-unification instance of the same shape. The extra
/// atoms `e_i` are constrained for both variables so every binder pair
/// abstracts, and all the solved suspension pairs land in the store,
/// where merging runs the equivariance solver on every pair.
pub fn layered_antiunify_instance(
    k: usize,
) -> (NominalTerm, NominalTerm, FreshnessContext, AtomSet) {
    assert!(k >= 4);
    let binders: Vec<Atom> = (0..k).map(|i| padded("b", i)).collect();
    let extras: Vec<Atom> = (0..k).map(|i| padded("e", i)).collect();
    let v = VarName::new("V");
    let w = VarName::new("W");
    let side = |var: &VarName, stride: usize| {
        let args: Vec<NominalTerm> = (0..k)
            .map(|i| {
                let sw = Swapping::new(binders[i].clone(), binders[(i + stride) % k].clone());
                NominalTerm::Susp(Permutation::from_swaps([sw]), var.clone())
            })
            .collect();
        nest(&binders, NominalTerm::app("f", args))
    };
    let t = side(&v, 1);
    let s = side(&w, 2);
    let mut ctx = FreshnessContext::new();
    for e in &extras {
        ctx.insert(e.clone(), v.clone());
        ctx.insert(e.clone(), w.clone());
    }
    let avail: AtomSet = binders.into_iter().chain(extras).collect();
    (t, s, ctx, avail)
}
