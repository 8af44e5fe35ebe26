//! Command implementations behind the `orrkit` binary. Each command returns
//! a JSON report, a one-paragraph human summary and an exit code.

use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{Catalog, CatalogEntry, Status, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::factorization::{check_factorization_seeded, FamilyId};
use crate::hyperseries::{verify_formula, DenomPattern, FormulaSpec};
use crate::numeric::PrecisionContext;
use crate::relations::{discover_formula, DiscoveryOutcome};
use crate::telescope::{equivalence_transfer, EquivalenceReport};
use crate::translator::{prove_formula, ProofReport, Verdict};

pub const DIGITS_ENV: &str = "ORRKIT_DIGITS";
pub const VERIFY_DIGITS: u32 = 120;
pub const PROVE_DIGITS: u32 = 200;
pub const DISCOVER_DIGITS: u32 = 300;
pub const FACTOR_DIGITS: u32 = 100;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub summary: String,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::PrecisionExhausted(_) => EXIT_PRECISION,
        Error::Parse(_) | Error::Catalog(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Report for a command that failed before producing a result.
pub fn error_outcome(command: &str, err: &Error) -> Outcome {
    Outcome {
        code: exit_code_for(err),
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "error": err.to_string(),
        }),
        summary: format!("{command}: error: {err}"),
    }
}

/// The catalog at `path`, or the built-in one when `path` is the default
/// name and no such file exists.
pub fn load_catalog(path: &Path, explicit: bool) -> Result<Catalog> {
    if !explicit && !path.exists() {
        return Ok(Catalog::builtin());
    }
    Catalog::load(path)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyEntryReport {
    pub id: String,
    /// match, mismatch, skipped or error
    pub status: String,
    pub catalog_status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits_agreed: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms_used: Option<u64>,
    pub seconds: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

fn verify_entry(e: &CatalogEntry, digits: u32) -> (VerifyEntryReport, i32) {
    let start = Instant::now();
    let mut r = VerifyEntryReport {
        id: e.id.clone(),
        status: String::new(),
        catalog_status: e.status.label(),
        digits_agreed: None,
        terms_used: None,
        seconds: 0.0,
        note: String::new(),
    };
    let code = if !e.formula.convergent {
        r.status = "skipped".into();
        r.note = "formal-divergent: the series diverges and has no numeric value".into();
        EXIT_OK
    } else {
        let ctx = PrecisionContext::new(digits);
        match verify_formula(&e.formula, &ctx) {
            Ok(v) => {
                r.digits_agreed = Some(v.digits_agreed);
                r.terms_used = Some(v.terms_used);
                if e.status == Status::Conjectural {
                    r.note = "numeric check of a conjectural identity".into();
                }
                r.status = if v.matched { "match" } else { "mismatch" }.into();
                if v.matched {
                    EXIT_OK
                } else {
                    EXIT_FAILURE
                }
            }
            Err(err) => {
                r.status = "error".into();
                r.note = err.to_string();
                exit_code_for(&err)
            }
        }
    };
    r.seconds = start.elapsed().as_secs_f64();
    (r, code)
}

/// Verify the listed entries (all of them when `ids` is empty), one worker
/// per entry, reports in catalog order.
pub fn cmd_verify(cat: &Catalog, ids: &[String], digits: u32) -> Outcome {
    let entries: Vec<&CatalogEntry> = if ids.is_empty() {
        cat.entries.iter().collect()
    } else {
        let mut v = Vec::new();
        for id in ids {
            match cat.get(id) {
                Some(e) => v.push(e),
                None => {
                    return error_outcome(
                        "verify",
                        &Error::Catalog(format!("no entry with id `{id}`")),
                    )
                }
            }
        }
        v
    };
    let results: Vec<(VerifyEntryReport, i32)> =
        entries.par_iter().map(|e| verify_entry(e, digits)).collect();
    let code = results.iter().map(|r| r.1).max().unwrap_or(EXIT_OK);
    let summary = results
        .iter()
        .map(|(r, _)| match r.digits_agreed {
            Some(d) => format!("{:<18} {:<9} {d} digits, {:.2}s", r.id, r.status, r.seconds),
            None => format!("{:<18} {:<9} {}", r.id, r.status, r.note),
        })
        .collect::<Vec<_>>()
        .join("\n");
    let reports: Vec<VerifyEntryReport> = results.into_iter().map(|r| r.0).collect();
    Outcome {
        code,
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "target_digits": digits,
            "entries": reports,
        }),
        summary,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProveReport {
    pub id: String,
    /// translation or equivalence
    pub route: String,
    pub verdict: Verdict,
    /// Entry proved by translation at the end of the chain.
    pub proved_via: String,
    pub translation: ProofReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub equivalences: Vec<EquivalenceStep>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceStep {
    pub from: String,
    pub to: String,
    pub report: EquivalenceReport,
}

fn family_of(e: &CatalogEntry) -> Result<Option<FamilyId>> {
    e.family.as_deref().map(str::parse).transpose()
}

/// Prove an entry by translation, or through its equivalence chain.
pub fn prove_entry(cat: &Catalog, id: &str, ctx: &PrecisionContext) -> Result<ProveReport> {
    let mut chain: Vec<&CatalogEntry> = Vec::new();
    let mut cur = cat
        .get(id)
        .ok_or_else(|| Error::Catalog(format!("no entry with id `{id}`")))?;
    loop {
        if chain.iter().any(|e| e.id == cur.id) {
            return Err(Error::Catalog(format!("equivalence cycle through `{}`", cur.id)));
        }
        chain.push(cur);
        let family = family_of(cur)?;
        if family.is_some() && cur.formula.denom_pattern == DenomPattern::One {
            break;
        }
        match &cur.status {
            Status::EquivalentTo { id: next } => {
                cur = cat
                    .get(next)
                    .ok_or_else(|| Error::Catalog(format!("no entry with id `{next}`")))?;
            }
            _ => return Err(Error::NoFamily(id.into())),
        }
    }
    let base = *chain.last().unwrap();
    let family = family_of(base)?.expect("chain ends at an entry with a family");
    let translation = prove_formula(&base.formula, &family, ctx)?;
    let mut proven = translation.verdict == Verdict::Proven;
    let mut equivalences = Vec::new();
    for pair in chain.windows(2).rev() {
        let (target, proved) = (pair[0], pair[1]);
        let report = equivalence_transfer(&proved.formula, &target.formula)?;
        proven &= report.proven;
        equivalences.push(EquivalenceStep {
            from: proved.id.clone(),
            to: target.id.clone(),
            report,
        });
    }
    Ok(ProveReport {
        id: id.into(),
        route: if equivalences.is_empty() { "translation" } else { "equivalence" }.into(),
        verdict: if proven { Verdict::Proven } else { Verdict::Mismatch },
        proved_via: base.id.clone(),
        translation,
        equivalences,
    })
}

pub fn cmd_prove(cat: &Catalog, id: &str, digits: u32) -> Outcome {
    let ctx = PrecisionContext::new(digits);
    match prove_entry(cat, id, &ctx) {
        Ok(r) => {
            let ok = r.verdict == Verdict::Proven;
            let summary = format!(
                "{id}: {} via {} ({}), surd ratio {} at {} and {} digits",
                if ok { "PROVEN" } else { "MISMATCH" },
                r.route,
                r.proved_via,
                r.translation.surd_ratio,
                r.translation.recognized_at_digits[0],
                r.translation.recognized_at_digits[1],
            );
            let mut report = serde_json::to_value(&r).expect("report serializes");
            report["schema_version"] = json!(SCHEMA_VERSION);
            report["command"] = json!("prove");
            Outcome {
                code: if ok { EXIT_OK } else { EXIT_FAILURE },
                report,
                summary,
            }
        }
        Err(e) => error_outcome("prove", &e),
    }
}

/// Same series: identical parameters, argument and denominator, and the
/// same normalized summand and right side.
pub fn same_series(a: &FormulaSpec, b: &FormulaSpec) -> bool {
    let sorted = |v: &[crate::rational::Rational]| {
        let mut v = v.to_vec();
        v.sort();
        v
    };
    sorted(&a.upper) == sorted(&b.upper)
        && sorted(&a.lower) == sorted(&b.lower)
        && a.z == b.z
        && a.denom_pattern == b.denom_pattern
        && a.start_index == b.start_index
        && a.numerator_poly == b.numerator_poly
        && a.rhs.surd == b.rhs.surd
        && a.rhs.pi_power == b.rhs.pi_power
        && &a.rhs.rat / &a.scale == &b.rhs.rat / &b.scale
}

pub struct DiscoverArgs<'a> {
    pub family: &'a FamilyId,
    pub y0: &'a crate::rational::Rational,
    pub pattern: DenomPattern,
    pub digits: u32,
    pub max_coeff: BigInt,
}

/// Run discovery; on success the catalog gains a `discovered` entry.
pub fn cmd_discover(cat: &mut Catalog, args: &DiscoverArgs) -> Outcome {
    if !crate::rational::abs_lt_one(args.y0) {
        return error_outcome(
            "discover",
            &Error::NotApplicable("discovery needs |y0| < 1".into()),
        );
    }
    let (upper, lower) = args.family.series_params();
    let ctx = PrecisionContext::new(args.digits);
    let start = Instant::now();
    let outcome = match discover_formula(&upper, &lower, args.y0, args.pattern, &args.max_coeff, &ctx) {
        Ok(o) => o,
        Err(e) => return error_outcome("discover", &e),
    };
    let seconds = start.elapsed().as_secs_f64();
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "discover",
        "y0": crate::rational::format_rational(args.y0),
        "pattern": args.pattern.label(),
        "target_digits": args.digits,
        "seconds": seconds,
        "outcome": serde_json::to_value(&outcome).expect("outcome serializes"),
    });
    match outcome {
        DiscoveryOutcome::Found(d) => {
            let known = cat
                .entries
                .iter()
                .find(|e| same_series(&e.formula, &d.formula))
                .map(|e| e.id.clone());
            let n = cat.entries.iter().filter(|e| e.status == Status::Discovered).count();
            let id = format!("discovered-{}", n + 1);
            cat.entries.push(CatalogEntry {
                id: id.clone(),
                formula: d.formula.clone(),
                status: Status::Discovered,
                family: None,
                note: match &known {
                    Some(k) => format!("PSLQ rediscovery of {k}"),
                    None => "found by PSLQ".into(),
                },
            });
            report["catalog_id"] = json!(id);
            report["rediscovers"] = json!(known);
            Outcome {
                code: EXIT_OK,
                summary: format!(
                    "found: poly {:?}, right side {}; verified to {} digits{}",
                    d.formula.numerator_poly,
                    d.formula.rhs.describe(),
                    d.verification.digits_agreed,
                    known.map(|k| format!(" (same as {k})")).unwrap_or_default()
                ),
                report,
            }
        }
        DiscoveryOutcome::NoneFound { norm_bound } => Outcome {
            code: EXIT_FAILURE,
            summary: format!(
                "no relation: every integer relation has norm above {}",
                norm_bound.to_decimal(6)
            ),
            report,
        },
    }
}

pub fn cmd_factor_check(family: &FamilyId, samples: usize, digits: u32, seed: u64) -> Outcome {
    let ctx = PrecisionContext::new(digits);
    match check_factorization_seeded(family, samples, seed, &ctx) {
        Ok(c) => {
            let threshold = digits.saturating_sub(5);
            let pass = c.passes(threshold);
            let summary = format!(
                "{family}: {} ({} samples, max deviation {}, jet deviation {})",
                if pass { "pass" } else { "FAIL" },
                samples,
                c.max_deviation.to_decimal(3),
                c.jet_deviation.to_decimal(3)
            );
            Outcome {
                code: if pass { EXIT_OK } else { EXIT_FAILURE },
                report: json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "factor-check",
                    "target_digits": digits,
                    "threshold_digits": threshold,
                    "pass": pass,
                    "check": c,
                }),
                summary,
            }
        }
        Err(e) => error_outcome("factor-check", &e),
    }
}
