use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use orrkit::catalog::Catalog;
use orrkit::cli::{self, DiscoverArgs, Outcome, DIGITS_ENV};
use orrkit::factorization::FamilyId;
use orrkit::hyperseries::DenomPattern;
use orrkit::rational::{parse_rational, Rational};
use orrkit::Error;

const DEFAULT_CATALOG: &str = "catalog.json";

#[derive(Parser)]
#[command(name = "orrkit", version, about = "Verify, prove and discover hypergeometric series for 1/pi")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CatalogArg {
    /// Catalog file; the built-in catalog is used when the default file is absent
    catalog: Option<PathBuf>,
}

impl CatalogArg {
    fn path(&self) -> (PathBuf, bool) {
        match &self.catalog {
            Some(p) => (p.clone(), true),
            None => (PathBuf::from(DEFAULT_CATALOG), false),
        }
    }

    fn load(&self) -> orrkit::Result<Catalog> {
        let (p, explicit) = self.path();
        cli::load_catalog(&p, explicit)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sum catalog series and compare with their closed forms
    Verify {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        id: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, env = DIGITS_ENV)]
        digits: Option<u32>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Prove an entry by theta-operator translation or equivalence
    Prove {
        #[arg(long)]
        id: String,
        #[arg(long, env = DIGITS_ENV)]
        digits: Option<u32>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Search for a formula at y0 by PSLQ
    Discover {
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        y0: Rational,
        #[arg(long, default_value = "2n+1", value_parser = pattern_arg)]
        pattern: DenomPattern,
        /// Parameter s of the B(n,s) Pochhammer quotient
        #[arg(long, default_value = "1/4", value_parser = rational_arg)]
        s: Rational,
        #[arg(long, env = DIGITS_ENV)]
        digits: Option<u32>,
        #[arg(long, default_value = "10000000000")]
        max_coeff: BigInt,
        /// Do not write the discovered entry back to the catalog file
        #[arg(long)]
        no_save: bool,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Check a factorization numerically at random points
    FactorCheck {
        /// fam1, fam2, fam3, generic (with --s) or generic:p/q
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = rational_arg)]
        s: Option<Rational>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, env = DIGITS_ENV)]
        digits: Option<u32>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Write the catalog as JSON
    ExportCatalog {
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn pattern_arg(s: &str) -> Result<DenomPattern, String> {
    DenomPattern::parse(s).map_err(|e| e.to_string())
}

fn family_arg(name: &str, s: Option<&Rational>) -> orrkit::Result<FamilyId> {
    match (name, s) {
        ("generic", Some(s)) => Ok(FamilyId::Generic(s.clone())),
        ("generic", None) => Err(Error::Parse("--family generic needs --s".into())),
        _ => name.parse(),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { id, all: _, digits, catalog } => match catalog.load() {
            Ok(cat) => cli::cmd_verify(&cat, &id, digits.unwrap_or(cli::VERIFY_DIGITS)),
            Err(e) => cli::error_outcome("verify", &e),
        },
        Command::Prove { id, digits, catalog } => match catalog.load() {
            Ok(cat) => cli::cmd_prove(&cat, &id, digits.unwrap_or(cli::PROVE_DIGITS)),
            Err(e) => cli::error_outcome("prove", &e),
        },
        Command::Discover { y0, pattern, s, digits, max_coeff, no_save, catalog } => {
            let mut cat = match catalog.load() {
                Ok(c) => c,
                Err(e) => return cli::error_outcome("discover", &e),
            };
            let family = FamilyId::Generic(s);
            let args = DiscoverArgs {
                family: &family,
                y0: &y0,
                pattern,
                digits: digits.unwrap_or(cli::DISCOVER_DIGITS),
                max_coeff,
            };
            let out = cli::cmd_discover(&mut cat, &args);
            if out.code == cli::EXIT_OK && !no_save {
                if let Err(e) = cat.save(&catalog.path().0) {
                    return cli::error_outcome("discover", &e);
                }
            }
            out
        }
        Command::FactorCheck { family, s, samples, digits, seed } => {
            match family_arg(&family, s.as_ref()) {
                Ok(f) => cli::cmd_factor_check(&f, samples, digits.unwrap_or(cli::FACTOR_DIGITS), seed),
                Err(e) => cli::error_outcome("factor-check", &e),
            }
        }
        Command::ExportCatalog { out, catalog } => {
            let cat = match catalog.load() {
                Ok(c) => c,
                Err(e) => return cli::error_outcome("export-catalog", &e),
            };
            let text = cat.to_json();
            match out {
                Some(p) => match std::fs::write(&p, &text) {
                    Ok(()) => Outcome {
                        code: cli::EXIT_OK,
                        report: serde_json::json!({
                            "schema_version": orrkit::catalog::SCHEMA_VERSION,
                            "command": "export-catalog",
                            "path": p,
                            "entries": cat.entries.len(),
                        }),
                        summary: format!("wrote {} entries to {}", cat.entries.len(), p.display()),
                    },
                    Err(e) => cli::error_outcome("export-catalog", &e.into()),
                },
                None => {
                    print!("{text}");
                    Outcome {
                        code: cli::EXIT_OK,
                        report: serde_json::Value::Null,
                        summary: format!("{} entries", cat.entries.len()),
                    }
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let out = run(Cli::parse());
    if !out.report.is_null() {
        println!(
            "{}",
            serde_json::to_string_pretty(&out.report).expect("report serializes")
        );
    }
    eprintln!("{}", out.summary);
    ExitCode::from(out.code as u8)
}
