//! Command-line front end: parsing, glossing, deciding, proving, proof
//! checking, theory computation, and fixture emission.
//!
//! Exit codes: 0 for success (valid / satisfiable / check passed), 1 for
//! a negative verdict, 2 for unknown-within-bound, 3 for input errors,
//! and 4 when a certificate fails re-verification before printing.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::calculus::{
    check_derivation, derive, parse_derivation, print_derivation, refute, rule_set,
    RuleSetId,
};
use crate::deciders::{
    decide_sat, decide_star_sat, decide_valid, default_star_bound, print_verdict,
    ValidityOutcome, Verdict, DEFAULT_BOUND_CAP,
};
use crate::fixtures;
use crate::semantics::{parse_model, print_model, OracleOutcome};
use crate::surface::{gloss, parse_sequent, print_formula, print_sequent, SequentFile};
use crate::syntax::{Formula, Fragment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

/// Command-line configuration: the subcommand plus global flags.
#[derive(Debug, Parser)]
#[command(name = "syllog", version, about = "syllogistic fragments toolbox")]
pub struct CliConfig {
    /// Cap on the bounded-search domain size (env: SYLLO_BOUND_CAP).
    #[arg(long, global = true)]
    bound_cap: Option<usize>,
    /// Output format: human text or the bare file formats.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed recorded for randomized suites (reserved; current
    /// subcommands are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a sequent file, echoing canonical forms and fragment tags.
    Parse { file: PathBuf },
    /// Parse a sequent file and print English glosses.
    Gloss { file: PathBuf },
    /// Decide satisfiability of the premises of a sequent file.
    Sat {
        file: PathBuf,
        /// Domain bound for the inexact fragments.
        #[arg(long)]
        bound: Option<usize>,
        /// Fragment override for routing.
        #[arg(long)]
        fragment: Option<String>,
    },
    /// Decide validity of a sequent file (requires a `|- ` line).
    Valid {
        file: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        fragment: Option<String>,
    },
    /// Search for a derivation of the conclusion in a given system.
    Prove {
        file: PathBuf,
        /// Rule system: S, Sd, R or Rs.
        #[arg(long)]
        system: String,
        /// Allow one final reductio around a refutation.
        #[arg(long)]
        indirect: bool,
    },
    /// Check a derivation file against a premise file and a system.
    CheckProof {
        proof: PathBuf,
        file: PathBuf,
        #[arg(long)]
        system: String,
    },
    /// Enumerate the true formulas of a model file over its signature.
    Theory {
        model: PathBuf,
        /// Fragment tag: S, Sd, R, Rd, Rs or Rsd.
        #[arg(long)]
        fragment: String,
    },
    /// Emit a fixture bundle as model and sequent files.
    Fixtures {
        /// Bundle name: gamma, gamma-star or twin-chain.
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Run the CLI against an argument vector, writing to the given streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut args: Vec<String> = vec!["syllog".to_string()];
    args.extend(argv.into_iter().map(Into::into));
    let config = match CliConfig::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match execute(&config, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            3
        }
    }
}

/// Run the CLI against the process arguments.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn bound_cap(config: &CliConfig) -> usize {
    if let Some(cap) = config.bound_cap {
        return cap.max(1);
    }
    if let Ok(value) = std::env::var("SYLLO_BOUND_CAP") {
        if let Ok(cap) = value.parse::<usize>() {
            return cap.max(1);
        }
    }
    DEFAULT_BOUND_CAP
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_sequent(path: &PathBuf) -> Result<SequentFile, String> {
    parse_sequent(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_fragment(tag: &str) -> Result<Fragment, String> {
    Fragment::from_tag(tag).ok_or_else(|| format!("unknown fragment tag {tag}"))
}

fn parse_system(tag: &str) -> Result<RuleSetId, String> {
    RuleSetId::from_tag(tag).ok_or_else(|| format!("unknown system {tag} (S, Sd, R, Rs)"))
}

fn check_declared_fragment(
    formulas: &[Formula],
    fragment: Option<Fragment>,
) -> Result<(), String> {
    if let Some(f) = fragment {
        for phi in formulas {
            if !phi.classify().contains(f) {
                return Err(format!(
                    "formula {} is outside fragment {f}",
                    print_formula(phi)
                ));
            }
        }
    }
    Ok(())
}

fn execute(
    config: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    let text = config.format == OutputFormat::Text;
    let w = |out: &mut dyn Write, s: String| {
        let _ = write!(out, "{s}");
    };
    match &config.command {
        Command::Parse { file } => {
            let sequent = read_sequent(file)?;
            let mut block = String::new();
            for phi in sequent.premises.iter().chain(sequent.conclusion.iter()) {
                let canon = phi.canonicalize();
                let tags: Vec<&str> = canon.classify().iter().map(|f| f.tag()).collect();
                block.push_str(&format!("{}  [{}]\n", print_formula(&canon), tags.join(" ")));
            }
            w(out, block);
            Ok(0)
        }
        Command::Gloss { file } => {
            let sequent = read_sequent(file)?;
            let mut block = String::new();
            for phi in &sequent.premises {
                block.push_str(&format!("{}\n", gloss(phi)));
            }
            if let Some(theta) = &sequent.conclusion {
                block.push_str(&format!("therefore: {}\n", gloss(theta)));
            }
            w(out, block);
            Ok(0)
        }
        Command::Sat { file, bound, fragment } => {
            let sequent = read_sequent(file)?;
            let theta = &sequent.premises;
            let forced = fragment.as_deref().map(parse_fragment).transpose()?;
            check_declared_fragment(theta, forced)?;
            let cap = bound_cap(config);
            let (routed, verdict) = match forced {
                None => decide_sat(theta, bound.unwrap_or(cap)),
                Some(f @ (Fragment::S | Fragment::SDagger)) => (
                    f,
                    crate::deciders::decide_sdagger_sat(theta).map_err(|e| e.to_string())?,
                ),
                Some(Fragment::R) => (
                    Fragment::R,
                    crate::deciders::decide_r_sat(theta).map_err(|e| e.to_string())?,
                ),
                Some(f) => {
                    let b = bound.unwrap_or_else(|| default_star_bound(theta, cap));
                    (f, decide_star_sat(theta, b))
                }
            };
            // re-verify certificates before printing
            match &verdict {
                Verdict::Satisfiable(m) => {
                    if !m.models(theta.iter()) {
                        let _ = writeln!(err, "internal error: model fails re-verification");
                        return Ok(4);
                    }
                }
                Verdict::Unsatisfiable(cert) => {
                    let system = if routed == Fragment::R {
                        RuleSetId::R
                    } else {
                        RuleSetId::SDagger
                    };
                    match check_derivation(&cert.refutation, rule_set(system), theta) {
                        Ok(conclusion) if conclusion.is_absurdity() => {}
                        _ => {
                            let _ = writeln!(
                                err,
                                "internal error: refutation fails re-verification"
                            );
                            return Ok(4);
                        }
                    }
                }
                Verdict::NoModelWithinBound(_) => {}
            }
            if text {
                w(out, format!("fragment: {routed}\n"));
            }
            w(out, print_verdict(&verdict));
            Ok(match verdict {
                Verdict::Satisfiable(_) => 0,
                Verdict::Unsatisfiable(_) => 1,
                Verdict::NoModelWithinBound(_) => 2,
            })
        }
        Command::Valid { file, bound, fragment } => {
            let sequent = read_sequent(file)?;
            let conclusion = sequent
                .conclusion
                .clone()
                .ok_or_else(|| "valid requires a |- conclusion line".to_string())?;
            let theta = &sequent.premises;
            let forced = fragment.as_deref().map(parse_fragment).transpose()?;
            let mut all = theta.clone();
            all.push(conclusion.clone());
            check_declared_fragment(&all, forced)?;
            let cap = bound_cap(config);
            let (routed, outcome) = match forced {
                None => decide_valid(theta, &conclusion, bound.unwrap_or(cap)),
                Some(f @ (Fragment::S | Fragment::SDagger)) => {
                    let r = crate::deciders::decide_sdagger_valid(theta, &conclusion)
                        .map_err(|e| e.to_string())?;
                    (
                        f,
                        match r {
                            crate::deciders::SdValidity::Valid(d) => ValidityOutcome::Valid(d),
                            crate::deciders::SdValidity::Invalid(m) => {
                                ValidityOutcome::Invalid(m)
                            }
                        },
                    )
                }
                Some(Fragment::R) => {
                    let r = crate::deciders::decide_r_valid(theta, &conclusion)
                        .map_err(|e| e.to_string())?;
                    (
                        Fragment::R,
                        match r {
                            crate::deciders::RValidity::Valid(d) => ValidityOutcome::Valid(d),
                            crate::deciders::RValidity::Invalid(m) => {
                                ValidityOutcome::Invalid(m)
                            }
                        },
                    )
                }
                Some(f) => {
                    let b = bound.unwrap_or_else(|| default_star_bound(&all, cap));
                    let outcome = match crate::semantics::oracle_valid(theta, &conclusion, b) {
                        OracleOutcome::CounterModel(m) => ValidityOutcome::Invalid(m),
                        OracleOutcome::ValidWithinBound(b) => {
                            ValidityOutcome::NoCounterModelWithinBound(b)
                        }
                    };
                    (f, outcome)
                }
            };
            match &outcome {
                ValidityOutcome::Valid(d) => {
                    let system = if routed == Fragment::R {
                        RuleSetId::R
                    } else if all.iter().all(|p| p.classify().contains(Fragment::S)) {
                        RuleSetId::S
                    } else {
                        RuleSetId::SDagger
                    };
                    let ok = check_derivation(d, rule_set(system), theta)
                        .map(|c| c.canonicalize() == conclusion.canonicalize())
                        .unwrap_or(false);
                    if !ok {
                        let _ =
                            writeln!(err, "internal error: derivation fails re-verification");
                        return Ok(4);
                    }
                    if text {
                        w(out, format!("fragment: {routed}\nvalid\n"));
                    } else {
                        w(out, "verdict: valid\n".to_string());
                    }
                    w(out, print_derivation(d));
                    Ok(0)
                }
                ValidityOutcome::Invalid(m) => {
                    if !m.models(theta.iter()) || m.holds(&conclusion) {
                        let _ =
                            writeln!(err, "internal error: countermodel fails re-verification");
                        return Ok(4);
                    }
                    if text {
                        w(out, format!("fragment: {routed}\ninvalid\n"));
                    } else {
                        w(out, "verdict: invalid\n".to_string());
                    }
                    w(out, print_model(m));
                    Ok(1)
                }
                ValidityOutcome::NoCounterModelWithinBound(b) => {
                    if text {
                        w(out, format!("fragment: {routed}\n"));
                    }
                    w(out, format!("verdict: unknown-bound\nbound: {b}\n"));
                    Ok(2)
                }
            }
        }
        Command::Prove { file, system, indirect } => {
            let sequent = read_sequent(file)?;
            let conclusion = sequent
                .conclusion
                .clone()
                .ok_or_else(|| "prove requires a |- conclusion line".to_string())?;
            let theta = &sequent.premises;
            let system = parse_system(system)?;
            let derivation = derive(theta, &conclusion, system).or_else(|| {
                if !indirect {
                    return None;
                }
                let mut with_bar = theta.clone();
                with_bar.push(conclusion.bar());
                refute(&with_bar, system)
                    .map(|refutation| refutation.into_raa(conclusion.clone()))
            });
            match derivation {
                Some(d) => {
                    let ok = check_derivation(&d, rule_set(system), theta)
                        .map(|c| c.canonicalize() == conclusion.canonicalize())
                        .unwrap_or(false);
                    if !ok {
                        let _ =
                            writeln!(err, "internal error: derivation fails re-verification");
                        return Ok(4);
                    }
                    if text {
                        w(out, format!("derivable in {system}\n"));
                    }
                    w(out, print_derivation(&d));
                    Ok(0)
                }
                None => {
                    w(out, "not derivable\n".to_string());
                    Ok(1)
                }
            }
        }
        Command::CheckProof { proof, file, system } => {
            let system = parse_system(system)?;
            let derivation = parse_derivation(&read_file(proof)?, rule_set(system))
                .map_err(|e| format!("{}: {e}", proof.display()))?;
            let sequent = read_sequent(file)?;
            match check_derivation(&derivation, rule_set(system), &sequent.premises) {
                Ok(conclusion) => {
                    let style = if derivation.is_direct() { "direct" } else { "indirect" };
                    w(
                        out,
                        format!("{style} derivation of {}\n", print_formula(&conclusion)),
                    );
                    if let Some(theta) = &sequent.conclusion {
                        if theta.canonicalize() != conclusion.canonicalize() {
                            w(
                                out,
                                format!(
                                    "note: file conclusion {} differs\n",
                                    print_formula(theta)
                                ),
                            );
                            return Ok(1);
                        }
                    }
                    Ok(0)
                }
                Err(e) => {
                    w(out, format!("rejected: {e}\n"));
                    Ok(1)
                }
            }
        }
        Command::Theory { model, fragment } => {
            let structure = parse_model(&read_file(model)?)
                .map_err(|e| format!("{}: {e}", model.display()))?;
            let fragment = parse_fragment(fragment)?;
            let sig = structure.signature();
            let mut block = String::new();
            for phi in structure.theory(fragment, &sig) {
                block.push_str(&print_formula(&phi));
                block.push('\n');
            }
            w(out, block);
            Ok(0)
        }
        Command::Fixtures { name, n, i, out: dir } => {
            let n = n.unwrap_or(4);
            let bundle = match name.as_str() {
                "gamma" => fixtures::gamma_fixture(n),
                "gamma-star" => {
                    let (set, conclusion) = fixtures::gamma_star_fixture(n);
                    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
                    let path = dir.join("gamma-star.syl");
                    let file = SequentFile {
                        premises: set,
                        conclusion: Some(conclusion),
                        declared_fragment: Some(Fragment::R),
                    };
                    std::fs::write(&path, print_sequent(&file)).map_err(|e| e.to_string())?;
                    w(out, format!("wrote {}\n", path.display()));
                    return Ok(0);
                }
                "twin-chain" => fixtures::twin_chain_fixture(n, *i),
                other => return Err(format!("unknown fixture {other}")),
            };
            std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
            for (name, structure) in &bundle.structures {
                let path = dir.join(format!("{name}.model"));
                std::fs::write(&path, print_model(structure)).map_err(|e| e.to_string())?;
                w(out, format!("wrote {}\n", path.display()));
            }
            for (name, set) in &bundle.formula_sets {
                let path = dir.join(format!("{name}.syl"));
                let file = SequentFile {
                    premises: set.clone(),
                    conclusion: None,
                    declared_fragment: None,
                };
                std::fs::write(&path, print_sequent(&file)).map_err(|e| e.to_string())?;
                w(out, format!("wrote {}\n", path.display()));
            }
            Ok(0)
        }
    }
}
