//! Command implementations: parsed inputs in, a `ResultReport` out.
//! Parse and validation failures are `Err` (process exit 2); `bot` and
//! `false` answers are ordinary reports (exit 1).

use anyhow::{bail, Result};

use nau::{
    alpha_eq, antiunify, antiunify_seeded, derives_fresh, equation_atoms, fc, saturate,
    solve_equivariance, subsumes, subsumes_exhaustive, Atom, AtomSet, EquivEquation,
    FreshnessContext, FreshnessFormula, NameSupply, NominalTerm, TermInContext,
};

use crate::report::{
    boolean_report, context_report, failure_report, generalization_report, permutation_report,
    ResultReport,
};

/// Strategy selector for `antiunify`: the deterministic default or a
/// seeded randomized rule order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Default,
    Seeded(u64),
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "default" {
            Ok(Strategy::Default)
        } else {
            s.parse::<u64>()
                .map(Strategy::Seeded)
                .map_err(|_| format!("expected `default` or a numeric seed, got `{s}`"))
        }
    }
}

/// When no atom set is given, every atom the inputs mention is available.
fn default_atoms(terms: &[&NominalTerm], ctx: &FreshnessContext) -> AtomSet {
    let mut out = AtomSet::new();
    for t in terms {
        for a in t.atoms() {
            out.insert(a);
        }
    }
    for a in ctx.atoms() {
        out.insert(a);
    }
    out
}

fn require_based(
    atoms: &AtomSet,
    terms: &[&NominalTerm],
    ctx: &FreshnessContext,
) -> Result<()> {
    for t in terms {
        for a in t.atoms() {
            if !atoms.contains(&a) {
                bail!("term `{t}` mentions atom `{a}` outside atoms: {atoms}");
            }
        }
    }
    for c in ctx.iter() {
        if !atoms.contains(&c.atom) {
            bail!("context constraint `{c}` mentions an atom outside atoms: {atoms}");
        }
    }
    Ok(())
}

/// The full antiunify pipeline behind the CLI: optional saturation,
/// basedness validation, the run itself, and presentation renaming.
/// Returns the atom set actually used, the result, and any
/// saturation diagnostics.
pub fn compute_antiunify(
    left: &NominalTerm,
    right: &NominalTerm,
    ctx: &FreshnessContext,
    atoms: Option<AtomSet>,
    saturate_first: bool,
    strategy: Strategy,
) -> Result<(AtomSet, nau::GenResult, Vec<String>)> {
    let mut avail = atoms.unwrap_or_else(|| default_atoms(&[left, right], ctx));
    require_based(&avail, &[left, right], ctx)?;
    let mut supply = NameSupply::new();
    let mut diagnostics = Vec::new();
    if saturate_first {
        let extended = saturate(&avail, left, right, ctx, &mut supply);
        if extended.len() > avail.len() {
            diagnostics.push(format!(
                "saturation extended the atom set from {avail} to {extended}"
            ));
        } else {
            diagnostics.push(format!("atom set {avail} is already saturated"));
        }
        avail = extended;
    }
    let result = match strategy {
        Strategy::Default => antiunify(left, right, ctx, &avail, &mut supply),
        Strategy::Seeded(seed) => {
            antiunify_seeded(left, right, ctx, &avail, &mut supply, seed)
        }
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => bail!("{e}"),
    };
    let mut taken = left.vars();
    taken.extend(right.vars());
    taken.extend(ctx.vars());
    Ok((avail, result.with_presentation_names(&taken), diagnostics))
}

pub fn run_antiunify(
    left: &NominalTerm,
    right: &NominalTerm,
    ctx: &FreshnessContext,
    atoms: Option<AtomSet>,
    saturate_first: bool,
    strategy: Strategy,
) -> Result<ResultReport> {
    let (avail, result, diagnostics) =
        compute_antiunify(left, right, ctx, atoms, saturate_first, strategy)?;
    let mut report = generalization_report(&avail, &result);
    report.diagnostics_mut().extend(diagnostics);
    Ok(report)
}

pub fn run_equiv(
    equations: &[EquivEquation],
    ctx: &FreshnessContext,
    atoms: Option<AtomSet>,
) -> Result<ResultReport> {
    if equations.is_empty() {
        bail!("no equations given (use --left/--right or eq: lines)");
    }
    let avail = atoms.unwrap_or_else(|| equation_atoms(equations));
    for eq in equations {
        require_based(&avail, &[&eq.lhs, &eq.rhs], ctx)?;
    }
    let mut supply = NameSupply::new();
    Ok(
        match solve_equivariance(equations, ctx, &avail, &mut supply) {
            Ok(pi) => permutation_report(&pi),
            Err(failure) => failure_report(failure.to_string()),
        },
    )
}

pub fn run_alphaeq(
    left: &NominalTerm,
    right: &NominalTerm,
    ctx: &FreshnessContext,
) -> ResultReport {
    boolean_report(alpha_eq(ctx, left, right))
}

pub fn run_fresh(atom: &Atom, term: &NominalTerm, ctx: &FreshnessContext) -> ResultReport {
    boolean_report(derives_fresh(ctx, atom, term))
}

pub fn run_fc(formulas: Vec<FreshnessFormula>) -> ResultReport {
    match fc(formulas) {
        Some(ctx) => context_report(&ctx),
        None => failure_report("no freshness context justifies the formulas (an atom must be fresh for itself)"),
    }
}

pub fn run_subsumes(
    p1: &TermInContext,
    p2: &TermInContext,
    exhaustive: bool,
    max_atoms: usize,
    max_depth: usize,
) -> Result<ResultReport> {
    let mut supply = NameSupply::new();
    let matched = subsumes(p1, p2, &mut supply);
    if matched || !exhaustive {
        return Ok(boolean_report(matched));
    }
    // The matcher is sound but not complete; on request, refute by
    // bounded exhaustive substitution search.
    let confirmed = match subsumes_exhaustive(p1, p2, max_atoms, max_depth, &mut supply) {
        Ok(found) => found,
        Err(bound) => bail!("{bound}"),
    };
    let mut report = boolean_report(confirmed);
    report.diagnostics_mut().push(if confirmed {
        "witness found by exhaustive search".to_string()
    } else {
        format!(
            "refuted by exhaustive substitution search (max {max_atoms} atoms, depth {max_depth})"
        )
    });
    Ok(report)
}
