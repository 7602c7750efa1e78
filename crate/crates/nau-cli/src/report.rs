//! Result reports: one structured value per command outcome, rendered
//! either as human-readable text or as JSON whose embedded terms,
//! contexts and permutations use the ordinary grammar and re-parse to
//! the reported values.

use anyhow::{anyhow, Context as _, Result};
use serde::{Deserialize, Serialize};

use nau::{
    Atom, AtomSet, Aut, FreshnessContext, GenResult, NominalTerm, Permutation, Substitution,
    TermParser, VarName,
};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StoreEntry {
    pub var: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Binding {
    pub var: String,
    pub term: String,
}

/// Everything a command can answer with. Field order is the wire order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultReport {
    Generalization {
        atoms: Vec<String>,
        context: Vec<String>,
        term: String,
        store: Vec<StoreEntry>,
        witness_left: Vec<Binding>,
        witness_right: Vec<Binding>,
        diagnostics: Vec<String>,
    },
    Permutation {
        perm: String,
        diagnostics: Vec<String>,
    },
    Boolean {
        value: bool,
        diagnostics: Vec<String>,
    },
    Context {
        context: Vec<String>,
        diagnostics: Vec<String>,
    },
    Failure {
        reason: String,
        diagnostics: Vec<String>,
    },
}

impl ResultReport {
    /// 0 for successful answers (including `true`), 1 for `false`/bot.
    pub fn exit_code(&self) -> i32 {
        match self {
            ResultReport::Generalization { .. }
            | ResultReport::Permutation { .. }
            | ResultReport::Context { .. } => 0,
            ResultReport::Boolean { value, .. } => i32::from(!*value),
            ResultReport::Failure { .. } => 1,
        }
    }

    pub fn diagnostics_mut(&mut self) -> &mut Vec<String> {
        match self {
            ResultReport::Generalization { diagnostics, .. }
            | ResultReport::Permutation { diagnostics, .. }
            | ResultReport::Boolean { diagnostics, .. }
            | ResultReport::Context { diagnostics, .. }
            | ResultReport::Failure { diagnostics, .. } => diagnostics,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(text: &str) -> Result<ResultReport> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let diags = match self {
            ResultReport::Generalization {
                atoms,
                context,
                term,
                store,
                witness_left,
                witness_right,
                diagnostics,
            } => {
                out.push_str(&format!("atoms:         {{{}}}\n", atoms.join(", ")));
                out.push_str(&format!("context:       {{{}}}\n", context.join(", ")));
                out.push_str(&format!("term:          {term}\n"));
                for entry in store {
                    out.push_str(&format!(
                        "store:         {}: {} =^= {}\n",
                        entry.var, entry.left, entry.right
                    ));
                }
                let subst = |bs: &[Binding]| {
                    bs.iter()
                        .map(|b| format!("{} -> {}", b.var, b.term))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                out.push_str(&format!("witness left:  {{{}}}\n", subst(witness_left)));
                out.push_str(&format!("witness right: {{{}}}\n", subst(witness_right)));
                diagnostics
            }
            ResultReport::Permutation { perm, diagnostics } => {
                out.push_str(&format!("{perm}\n"));
                diagnostics
            }
            ResultReport::Boolean { value, diagnostics } => {
                out.push_str(&format!("{value}\n"));
                diagnostics
            }
            ResultReport::Context { context, diagnostics } => {
                out.push_str(&format!("{{{}}}\n", context.join(", ")));
                diagnostics
            }
            ResultReport::Failure { reason, diagnostics } => {
                out.push_str(&format!("bot\nreason: {reason}\n"));
                diagnostics
            }
        };
        for d in diags {
            out.push_str(&format!("note: {d}\n"));
        }
        out
    }
}

fn context_strings(ctx: &FreshnessContext) -> Vec<String> {
    ctx.iter().map(|c| c.to_string()).collect()
}

fn binding_strings(subst: &Substitution) -> Vec<Binding> {
    subst
        .iter()
        .map(|(v, t)| Binding {
            var: v.to_string(),
            term: t.to_string(),
        })
        .collect()
}

pub fn generalization_report(atoms: &AtomSet, result: &GenResult) -> ResultReport {
    ResultReport::Generalization {
        atoms: atoms.iter().map(|a| a.to_string()).collect(),
        context: context_strings(&result.gamma),
        term: result.term.to_string(),
        store: result
            .store
            .iter()
            .map(|aut| StoreEntry {
                var: aut.var.to_string(),
                left: aut.left.to_string(),
                right: aut.right.to_string(),
            })
            .collect(),
        witness_left: binding_strings(&result.witness_left),
        witness_right: binding_strings(&result.witness_right),
        diagnostics: Vec::new(),
    }
}

pub fn permutation_report(p: &Permutation) -> ResultReport {
    ResultReport::Permutation {
        perm: p.canonical().to_string(),
        diagnostics: Vec::new(),
    }
}

pub fn boolean_report(value: bool) -> ResultReport {
    ResultReport::Boolean {
        value,
        diagnostics: Vec::new(),
    }
}

pub fn context_report(ctx: &FreshnessContext) -> ResultReport {
    ResultReport::Context {
        context: context_strings(ctx),
        diagnostics: Vec::new(),
    }
}

pub fn failure_report(reason: impl Into<String>) -> ResultReport {
    ResultReport::Failure {
        reason: reason.into(),
        diagnostics: Vec::new(),
    }
}

/// A generalization report parsed back into library values.
#[derive(Debug, Clone)]
pub struct DecodedGeneralization {
    pub atoms: AtomSet,
    pub gamma: FreshnessContext,
    pub term: NominalTerm,
    pub store: Vec<Aut>,
    pub witness_left: Substitution,
    pub witness_right: Substitution,
}

fn lenient() -> TermParser<'static> {
    TermParser::new().allow_fresh_names()
}

fn parse_context_entries(entries: &[String]) -> Result<FreshnessContext> {
    let joined = format!("{{{}}}", entries.join(", "));
    lenient()
        .parse_context(&joined)
        .map_err(|e| anyhow!("context in report does not re-parse: {e}"))
}

fn parse_name(name: &str) -> Result<VarName> {
    if name.is_empty() {
        return Err(anyhow!("empty variable name in report"));
    }
    Ok(VarName::new(name))
}

pub fn decode_generalization(report: &ResultReport) -> Result<DecodedGeneralization> {
    let ResultReport::Generalization {
        atoms,
        context,
        term,
        store,
        witness_left,
        witness_right,
        ..
    } = report
    else {
        return Err(anyhow!("expected a generalization report"));
    };
    let parser = lenient();
    let mut atom_set = AtomSet::new();
    for a in atoms {
        atom_set.insert(Atom::new(a.clone()));
    }
    let term = parser
        .parse_term(term)
        .map_err(|e| anyhow!("term in report does not re-parse: {e}"))?;
    let gamma = parse_context_entries(context)?;
    let mut decoded_store = Vec::new();
    for entry in store {
        decoded_store.push(Aut {
            var: parse_name(&entry.var)?,
            left: parser.parse_term(&entry.left).context("store left")?,
            right: parser.parse_term(&entry.right).context("store right")?,
        });
    }
    let decode_subst = |bindings: &[Binding]| -> Result<Substitution> {
        let mut s = Substitution::identity();
        for b in bindings {
            s.insert(parse_name(&b.var)?, parser.parse_term(&b.term)?);
        }
        Ok(s)
    };
    Ok(DecodedGeneralization {
        atoms: atom_set,
        gamma,
        term,
        store: decoded_store,
        witness_left: decode_subst(witness_left)?,
        witness_right: decode_subst(witness_right)?,
    })
}

pub fn decode_permutation(report: &ResultReport) -> Result<Permutation> {
    let ResultReport::Permutation { perm, .. } = report else {
        return Err(anyhow!("expected a permutation report"));
    };
    lenient()
        .parse_permutation(perm)
        .map_err(|e| anyhow!("permutation in report does not re-parse: {e}"))
}

pub fn decode_context(report: &ResultReport) -> Result<FreshnessContext> {
    let ResultReport::Context { context, .. } = report else {
        return Err(anyhow!("expected a context report"));
    };
    parse_context_entries(context)
}
