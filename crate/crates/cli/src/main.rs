//! `gt3`: JSON reports for relation checks, decompositions, weight
//! multiplicities, spectral chains and localization.
//!
//! Exit codes: 0 on success, 1 when the report lists violations, 2 when the
//! flags or the input they describe are rejected.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gt3::action::relation_sweep;
use gt3::catalog::label_report;
use gt3::localize::{apply_functor, replay_tables, Functor};
use gt3::region::Region;
use gt3::singular_action::{oracle_mismatches, OracleVariant};
use gt3::spectral::mu_line;
use gt3::structure::{decompose_block, line_count};
use gt3::{scalar, BlockSpec, Scalar, Shift};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gt3", version, about = "Exact Gelfand-Tsetlin modules of sl(3)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Checks every bracket relation on a window of basis tableaux.
    Relations {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 2)]
        radius: i64,
    },
    /// Simple subquotients of a block as regions.
    Decompose {
        #[command(flatten)]
        base: BaseArgs,
    },
    /// Loewy layers of a block, socle first.
    Loewy {
        #[command(flatten)]
        base: BaseArgs,
    },
    /// Weight multiplicities of a region around an anchor.
    Weights {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        region: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_shift)]
        anchor: Shift,
        #[arg(long, default_value_t = 2)]
        span: i64,
    },
    /// Eigenvalues of E12 E21 along a weight line and their chain class.
    Chain {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_shift)]
        anchor: Shift,
        #[arg(long, default_value_t = 4)]
        range: u32,
    },
    /// Applies D12, QD12 or D12^x to the module of a region.
    Localize {
        #[arg(long)]
        op: Functor,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar, default_value = "0")]
        x: Scalar,
        #[arg(long)]
        region: String,
        #[command(flatten)]
        base: OptionalBase,
    },
    /// Replays every recipe of the localization tables.
    ReplayTables {
        #[arg(long, default_value_t = 1)]
        t: i64,
        #[arg(long, default_value_t = 2)]
        s: i64,
    },
    /// Compares the symbolic singular action with the closed-form lists.
    VerifySingular {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 2)]
        radius: i64,
        #[arg(long, value_enum, default_value_t = Variant::Corrected)]
        variant: Variant,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Corrected,
    Printed,
}

#[derive(Args)]
struct BaseArgs {
    #[command(flatten)]
    inner: OptionalBase,
}

#[derive(Args)]
struct OptionalBase {
    /// Six scalars `v31,v32,v33,v21,v22,v11`, e.g. `0,1/3,-10/3,0,7/3,0`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "base_file")]
    base: Option<String>,
    /// JSON file holding an array of six scalars (strings or integers).
    #[arg(long)]
    base_file: Option<PathBuf>,
    /// Require `v31+v32+v33+3 = 0`.
    #[arg(long)]
    sl3: bool,
}

/// An input rejected by flag parsing or by the engine.
struct Failure(String);

impl From<gt3::Error> for Failure {
    fn from(e: gt3::Error) -> Self {
        Failure(e.to_string())
    }
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    scalar::parse(s).map_err(|e| e.to_string())
}

fn parse_shift(s: &str) -> Result<Shift, String> {
    let v: Vec<i64> = s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x}: {e}"))).collect::<Result<_, _>>()?;
    match v[..] {
        [m, n, k] => Ok(Shift::new(m, n, k)),
        _ => Err(format!("expected m,n,k, got {s}")),
    }
}

impl OptionalBase {
    fn block(&self) -> Result<Option<BlockSpec>, Failure> {
        let items: Vec<String> = match (&self.base, &self.base_file) {
            (Some(b), _) => b.split(',').map(|x| x.trim().to_string()).collect(),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                let v: Vec<Value> = serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                v.iter()
                    .map(|x| match x {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
                        _ => Err(Failure(format!("base entries must be strings or integers, got {x}"))),
                    })
                    .collect::<Result<_, _>>()?
            }
            (None, None) => return Ok(None),
        };
        BlockSpec::parse(&items, self.sl3).map(Some).map_err(|e| Failure(e.to_string()))
    }
}

impl BaseArgs {
    fn block(&self) -> Result<BlockSpec, Failure> {
        self.inner.block()?.ok_or_else(|| Failure("one of --base or --base-file is required".into()))
    }
}

fn region_arg(text: &str) -> Result<Region, Failure> {
    text.parse().map_err(|e: gt3::Error| Failure(e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// The report and whether it lists violations.
fn run(cmd: Command) -> Result<(Value, bool), Failure> {
    match cmd {
        Command::Relations { base, radius } => {
            let b = base.block()?;
            let bad = relation_sweep(&b, radius)?;
            Ok((json!({ "violations": to_json(&bad) }), !bad.is_empty()))
        }
        Command::Decompose { base } => {
            let b = base.block()?;
            let mut report = decompose_block(&b)?;
            let case = label_report(&b, &mut report).ok().map(|(c, _)| c.label);
            let mut out = to_json(&report);
            out["case"] = json!(case);
            Ok((out, false))
        }
        Command::Loewy { base } => {
            let b = base.block()?;
            let report = decompose_block(&b)?;
            let layers: Vec<Vec<String>> = report
                .layers()
                .iter()
                .map(|l| l.iter().map(|i| report.subquotients[*i].region.to_string()).collect())
                .collect();
            Ok((json!({ "layers": layers }), false))
        }
        Command::Weights { base, region, anchor, span } => {
            let b = base.block()?;
            let r = region_arg(&region)?;
            let mut cells = Vec::new();
            // Weights are determined by (m + n, k); step both coordinates.
            for dk in -span..=span {
                for dm in -span..=span {
                    let p = Shift::new(anchor.m + dm, anchor.n, anchor.k + dk);
                    let w = b.weight_of(&b.tableau_at(p));
                    let count = match line_count(&r, p) {
                        Some(c) => json!(c),
                        None => json!("infinite"),
                    };
                    cells.push(json!({
                        "offset": [dm, dk],
                        "weight": [scalar::format(&w.h1), scalar::format(&w.h2)],
                        "multiplicity": count,
                    }));
                }
            }
            Ok((json!({ "anchor": to_json(&anchor), "region": r.to_string(), "cells": cells }), false))
        }
        Command::Chain { base, anchor, range } => {
            let b = base.block()?;
            Ok((to_json(&mu_line(&b, anchor, range)?), false))
        }
        Command::Localize { op, x, region, base } => {
            let b = base.block()?;
            let r = region_arg(&region)?;
            Ok((to_json(&apply_functor(op, &r, b.as_ref(), &x)?), false))
        }
        Command::ReplayTables { t, s } => {
            let recs = replay_tables(t, s)?;
            let bad: Vec<_> = recs.iter().filter(|r| !r.matched).collect();
            let matched = recs.len() - bad.len();
            let out = json!({
                "t": t,
                "s": s,
                "total": recs.len(),
                "matched": matched,
                "records": to_json(&recs),
                "violations": to_json(&bad),
            });
            Ok((out, !bad.is_empty()))
        }
        Command::VerifySingular { base, radius, variant } => {
            let b = base.block()?;
            let v = match variant {
                Variant::Corrected => OracleVariant::Corrected,
                Variant::Printed => OracleVariant::Printed,
            };
            let bad = oracle_mismatches(&b, radius, v)?;
            Ok((json!({ "violations": to_json(&bad) }), !bad.is_empty()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("GT3_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli.command) {
        Ok((report, violations)) => {
            // A closed pipe downstream is not an error of the report.
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&report).expect("json"));
            ExitCode::from(violations as u8)
        }
        Err(Failure(msg)) => {
            eprintln!("{}", json!({ "error": msg }));
            ExitCode::from(2)
        }
    }
}
