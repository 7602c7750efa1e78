use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context as _, Result};
use clap::{Args, Parser, Subcommand};

use nau::{AtomSet, EquivEquation, FreshnessContext, NominalTerm, Signature, TermParser};
use nau_cli::{parse_pair, ProblemFile, ResultReport, Strategy};

/// Nominal anti-unification toolkit: least general generalizations,
/// equivariance, alpha-equivalence, freshness and subsumption.
#[derive(Parser)]
#[command(name = "nau", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Emit the machine-readable JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the least general generalization of two terms-in-context
    Antiunify(AntiunifyArgs),
    /// Find a permutation making the equation sides alpha-equivalent
    Equiv(InputArgs),
    /// Decide alpha-equivalence of two terms under a context
    Alphaeq(InputArgs),
    /// Decide whether an atom is fresh for a term under a context
    Fresh(FreshArgs),
    /// Compute the minimal freshness context justifying the formulas
    Fc(FcArgs),
    /// Decide subsumption between two terms-in-context
    Subsumes(SubsumesArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Problem file in the stanza format (see README); flags override it
    #[arg(long)]
    file: Option<PathBuf>,

    /// Available atoms, e.g. `a,b,c,d` (default: the atoms of the inputs)
    #[arg(long)]
    atoms: Option<String>,

    /// Freshness context, e.g. `{a#X, b#Y}` (default: empty)
    #[arg(long)]
    context: Option<String>,

    /// Left term
    #[arg(long)]
    left: Option<String>,

    /// Right term
    #[arg(long)]
    right: Option<String>,

    /// Signature, e.g. `f/2, g/1` (default: $NAU_SIGNATURE file, if set)
    #[arg(long)]
    sig: Option<String>,
}

#[derive(Args)]
struct AntiunifyArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Extend the atom set until it is saturated before running
    #[arg(long)]
    saturate: bool,

    /// `default` or a numeric seed for the randomized rule order
    #[arg(long, default_value = "default")]
    strategy: Strategy,
}

#[derive(Args)]
struct FreshArgs {
    /// The atom to test
    #[arg(long)]
    atom: String,

    /// The term to test against
    #[arg(long)]
    term: String,

    /// Freshness context (default: empty)
    #[arg(long)]
    context: Option<String>,

    /// Signature, e.g. `f/2, g/1`
    #[arg(long)]
    sig: Option<String>,
}

#[derive(Args)]
struct FcArgs {
    /// Formula set, e.g. `{a # f(b, X), c # d}`
    formulas: String,

    /// Signature, e.g. `f/2, g/1`
    #[arg(long)]
    sig: Option<String>,
}

#[derive(Args)]
struct SubsumesArgs {
    /// Left term-in-context, e.g. `{a#X} f(X)`
    #[arg(long)]
    left: String,

    /// Right term-in-context, e.g. `{} f(Y)`
    #[arg(long)]
    right: String,

    /// Double-check negative answers by exhaustive substitution search
    #[arg(long)]
    exhaustive: bool,

    /// Atom budget for the exhaustive search
    #[arg(long, default_value_t = 5)]
    max_atoms: usize,

    /// Term depth budget for the exhaustive search
    #[arg(long, default_value_t = 2)]
    max_depth: usize,

    /// Signature, e.g. `f/2, g/1`
    #[arg(long)]
    sig: Option<String>,
}

/// Inputs after merging file, flags and the environment signature.
struct Inputs {
    atoms: Option<AtomSet>,
    context: FreshnessContext,
    left: Option<NominalTerm>,
    right: Option<NominalTerm>,
    equations: Vec<EquivEquation>,
}

fn env_signature() -> Result<Option<Signature>> {
    match std::env::var_os("NAU_SIGNATURE") {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading $NAU_SIGNATURE file {path:?}"))?;
            Ok(Some(Signature::parse(text.trim())?))
        }
    }
}

fn signature_from(flag: &Option<String>) -> Result<Option<Signature>> {
    match flag {
        Some(s) => Ok(Some(Signature::parse(s)?)),
        None => env_signature(),
    }
}

fn gather(input: &InputArgs) -> Result<Inputs> {
    let flag_sig = signature_from(&input.sig)?;
    let file = match &input.file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {path:?}"))?;
            ProblemFile::parse(&text, flag_sig.as_ref())?
        }
        None => ProblemFile::default(),
    };
    let sig = file.signature.clone().or(flag_sig);
    let parser = TermParser::new().maybe_signature(sig.as_ref());

    let atoms = match &input.atoms {
        Some(src) => Some(parser.parse_atom_set(src)?),
        None => file.atoms.clone(),
    };
    let context = match &input.context {
        Some(src) => parser.parse_context(src)?,
        None => file.context.clone().unwrap_or_default(),
    };
    let left = match &input.left {
        Some(src) => Some(parser.parse_term(src)?),
        None => file.left.clone(),
    };
    let right = match &input.right {
        Some(src) => Some(parser.parse_term(src)?),
        None => file.right.clone(),
    };
    let mut equations = file.equations.clone();
    if input.left.is_some() || input.right.is_some() {
        equations.clear();
    }
    if equations.is_empty() {
        if let (Some(l), Some(r)) = (&left, &right) {
            equations.push(EquivEquation::new(l.clone(), r.clone()));
        }
    }
    if let Some(sig) = &sig {
        for t in left.iter().chain(right.iter()) {
            sig.check_term(t).map_err(|e| anyhow!(e))?;
        }
    }
    Ok(Inputs {
        atoms,
        context,
        left,
        right,
        equations,
    })
}

fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("missing {what} (give --{what} or put it in --file)"))
}

fn execute(cmd: &Cmd) -> Result<ResultReport> {
    match cmd {
        Cmd::Antiunify(args) => {
            let inputs = gather(&args.input)?;
            let left = require(inputs.left, "left")?;
            let right = require(inputs.right, "right")?;
            nau_cli::run_antiunify(
                &left,
                &right,
                &inputs.context,
                inputs.atoms,
                args.saturate,
                args.strategy,
            )
        }
        Cmd::Equiv(input) => {
            let inputs = gather(input)?;
            nau_cli::run_equiv(&inputs.equations, &inputs.context, inputs.atoms)
        }
        Cmd::Alphaeq(input) => {
            let inputs = gather(input)?;
            let left = require(inputs.left, "left")?;
            let right = require(inputs.right, "right")?;
            Ok(nau_cli::run_alphaeq(&left, &right, &inputs.context))
        }
        Cmd::Fresh(args) => {
            let sig = signature_from(&args.sig)?;
            let parser = TermParser::new().maybe_signature(sig.as_ref());
            let atom = parser.parse_atom(&args.atom)?;
            let term = parser.parse_term(&args.term)?;
            let context = match &args.context {
                Some(src) => parser.parse_context(src)?,
                None => FreshnessContext::new(),
            };
            Ok(nau_cli::run_fresh(&atom, &term, &context))
        }
        Cmd::Fc(args) => {
            let sig = signature_from(&args.sig)?;
            let parser = TermParser::new().maybe_signature(sig.as_ref());
            let formulas = parser.parse_formulas(&args.formulas)?;
            Ok(nau_cli::run_fc(formulas))
        }
        Cmd::Subsumes(args) => {
            let sig = signature_from(&args.sig)?;
            let p1 = parse_pair(&args.left, sig.as_ref())?;
            let p2 = parse_pair(&args.right, sig.as_ref())?;
            nau_cli::run_subsumes(&p1, &p2, args.exhaustive, args.max_atoms, args.max_depth)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.cmd) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_human());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
