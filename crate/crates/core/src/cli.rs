//! Command-line front end. The binary is a thin wrapper around [`run_args`].
//!
//! Exit codes: 0 success, 2 invalid input or a reported violation, 3 a
//! computation error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::{cohomology_dims, cohomology_vanishes_by_homotopy, verify_splitting};
use crate::counterexamples;
use crate::derham::{bounded_dimension, derham_report, BoundedDimension};
use crate::error::Error;
use crate::exterior::binomial;
use crate::forms::{fibre_basis, reduced_fibre_dimension, wedge_1k_rank};
use crate::metric::{check_pseudometric, compatible_metrics, GluedConnection};
use crate::report::{notes, Report};
use crate::scalar_expr::Rational;
use crate::space::{GluedSpace, SpacePoint};
use crate::spacefile::{parse_space, SpaceDescription};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "diffeo-glue", version, about = "Exact calculus on wedges of Euclidean spaces")]
pub struct Cli {
    /// Space description (TOML). Defaults to two planes glued at their origins.
    #[arg(long, global = true)]
    pub space: Option<PathBuf>,
    /// Coefficient degree bound for polynomial computations.
    #[arg(long, global = true, default_value_t = 4)]
    pub degree: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of the space and the largest fibre of Lambda^1.
    Dim,
    /// Dimension and basis of the fibre of Lambda^k at a point (`wedge` or `piece:c1,c2`).
    FibreDim {
        /// Wedge id, or `piece:c1,c2,...` for an ordinary point.
        point: String,
        /// Form degree.
        k: usize,
    },
    /// Truncated de Rham cohomology H^k, with coefficient degree at most D.
    Cohomology {
        /// Form degree.
        k: usize,
        /// Coefficient degree bound D; defaults to --degree.
        max_degree: Option<usize>,
    },
    /// Compatibility of the file's forms and metrics across the gluing.
    CheckCompat,
    /// Applies the De Rham operator to a named section or form.
    DerhamApply {
        /// Name of a `[section.*]` or `[form.*]` table.
        section: String,
    },
    /// Reproduces the failures of classical constructions at wedge points.
    Counterexamples,
    /// Validates the space description.
    Validate,
}

pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

const BUILTIN: &str = "builtin: two planes glued at their origins";

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::SpaceFile(_)
        | Error::UnknownPiece(_)
        | Error::UnknownWedge(_)
        | Error::MissingPiece(_) => 2,
        _ => 3,
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: exit_code(e),
    }
}

pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    let source = cli
        .space
        .as_ref()
        .map_or_else(|| BUILTIN.to_string(), |p| p.display().to_string());
    let loaded = match &cli.space {
        Some(path) => parse_space(path),
        None => Ok(SpaceDescription::from_space(GluedSpace::wedge_of_planes())),
    };
    let desc = match (loaded, &cli.command) {
        (Ok(d), _) => d,
        (Err(Error::Validation(v)), Command::Validate) => {
            let mut r = Report::new("validate");
            r.input("space", &source)
                .result("valid", false)
                .result("violations", v.iter().map(ToString::to_string).collect::<Vec<_>>());
            return emit(&r, cli.format, 2);
        }
        (Err(e), _) => return failure(&e),
    };
    let mut report = Report::new(command_name(&cli.command));
    report.input("space", &source);
    match execute(cli, &desc, &mut report) {
        Ok(violation) => emit(&report, cli.format, if violation { 2 } else { 0 }),
        Err(e) => failure(&e),
    }
}

fn emit(r: &Report, format: Format, code: i32) -> Outcome {
    Outcome {
        stdout: match format {
            Format::Human => r.render_human(),
            Format::Machine => r.render_machine(),
        },
        stderr: String::new(),
        code,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Dim => "dim",
        Command::FibreDim { .. } => "fibre-dim",
        Command::Cohomology { .. } => "cohomology",
        Command::CheckCompat => "check-compat",
        Command::DerhamApply { .. } => "derham-apply",
        Command::Counterexamples => "counterexamples",
        Command::Validate => "validate",
    }
}

/// Random rational points with denominators up to 4 in `[-2, 2]^n`.
pub fn sample_points(seed: u64, n: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let den: i64 = rng.gen_range(1..=4);
                    let num: i64 = rng.gen_range(-2 * den..=2 * den);
                    Rational::new(num.into(), den.into())
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct MetricCheck {
    piece: String,
    explicit: bool,
    ok: bool,
    violation: Option<String>,
}

fn metric_checks(cli: &Cli, desc: &SpaceDescription, report: &mut Report) -> bool {
    let checks: Vec<MetricCheck> = desc
        .metrics
        .iter()
        .map(|g| {
            let samples = sample_points(cli.seed, g.dim(), 20);
            let res = check_pseudometric(g, &samples);
            MetricCheck {
                piece: g.piece().to_string(),
                explicit: desc.explicit_metrics.iter().any(|p| p == g.piece()),
                ok: res.is_ok(),
                violation: res.err().map(|v| v.to_string()),
            }
        })
        .collect();
    let bad = checks.iter().any(|c| !c.ok);
    report.input("seed", cli.seed).result("metrics", checks);
    bad
}

/// Runs the command; `Ok(true)` signals a reported violation.
fn execute(cli: &Cli, desc: &SpaceDescription, report: &mut Report) -> crate::Result<bool> {
    let s = &desc.space;
    match &cli.command {
        Command::Dim => {
            let BoundedDimension::Bounded(n) = bounded_dimension(s) else {
                unreachable!("finite spaces have bounded fibres")
            };
            report
                .result("dimension", s.dimension())
                .result("pieces", s.pieces().len())
                .result("wedge_points", s.wedges().len())
                .result("max_lambda1_fibre", n);
        }
        Command::FibreDim { point, k } => {
            let x = s.normalize_point(&SpacePoint::parse(point)?)?;
            let basis = fibre_basis(s, &x, *k)?;
            report
                .input("point", point)
                .input("k", k)
                .input("degree", cli.degree)
                .result("point", x.to_string())
                .result("dimension", basis.dim())
                .result("labels", basis.labels.iter().map(|l| l.render(s)).collect::<Vec<_>>())
                .result("reduced_dimension", reduced_fibre_dimension(s, &x, *k, cli.degree)?);
            if *k >= 1 {
                let n1 = fibre_basis(s, &x, 1)?.dim();
                report
                    .result("exterior_power_dimension", binomial(n1, *k))
                    .result("wedge_map_rank", wedge_1k_rank(s, &x, *k)?)
                    .note(notes::WEDGE_1K_SURJECTIVITY);
                if matches!(x, SpacePoint::Wedge(_)) {
                    report.note(notes::FIBRE_LABELS);
                }
            }
        }
        Command::Cohomology { k, max_degree } => {
            let d = max_degree.unwrap_or(cli.degree);
            let entry = cohomology_dims(s, *k, d)?;
            let next = cohomology_dims(s, *k, d + 1)?;
            report
                .input("k", k)
                .input("max_degree", d)
                .result("cohomology", &entry)
                .result("dim_cohomology_next_degree", next.dim_cohomology)
                .result("stable", entry.dim_cohomology == next.dim_cohomology)
                .result("splitting", verify_splitting(s, *k, d)?);
            if *k >= 1 {
                report.result("koszul_primitives_found", cohomology_vanishes_by_homotopy(s, *k, d)?);
            }
            if *k < 2 {
                report.note(notes::SPLITTING_LOW_DEGREE);
            }
        }
        Command::CheckCompat => {
            #[derive(Serialize)]
            struct FormCheck {
                name: String,
                compatible: bool,
                detail: Option<String>,
            }
            let forms: Vec<FormCheck> = desc
                .forms
                .keys()
                .map(|name| match desc.form(name) {
                    Ok(_) => Ok(FormCheck {
                        name: name.clone(),
                        compatible: true,
                        detail: None,
                    }),
                    Err(e @ Error::SpaceFile(_)) => Ok(FormCheck {
                        name: name.clone(),
                        compatible: false,
                        detail: Some(e.to_string()),
                    }),
                    Err(e) => Err(e),
                })
                .collect::<crate::Result<_>>()?;
            let incompatible = forms.iter().any(|f| !f.compatible);
            let m = compatible_metrics(&desc.metrics, s)?;
            let bad_metric = metric_checks(cli, desc, report);
            report
                .result("forms", forms)
                .result("metrics_compatible", m.compatible)
                .note(&m.note);
            return Ok(incompatible || bad_metric);
        }
        Command::DerhamApply { section } => {
            let sec = desc.section(section)?;
            let g = desc.induced_metric()?;
            let conn = GluedConnection::levi_civita(s, &g)?;
            let r = derham_report(&sec, s, &g, &conn)?;
            report.input("section", section).result("derham", r);
            if !s.wedges().is_empty() {
                report
                    .note(notes::WEDGE_METRIC_SCALING)
                    .note(notes::DERHAM_PER_PIECE)
                    .note(notes::CLIFFORD_CROSS_PAIRING);
            }
        }
        Command::Counterexamples => {
            let suite = counterexamples::suite(s)?;
            report
                .result("vanishing_differential", &suite.vanishing_differential)
                .result("wedge_kernel", &suite.wedge_kernel)
                .result("star_degree", &suite.star_degree)
                .note(notes::SINE_REPLACED);
            if !s.wedges().is_empty() {
                report
                    .note(notes::FIBRE_LABELS)
                    .note(notes::WEDGE_1K_SURJECTIVITY)
                    .note(notes::STAR_BASIS)
                    .note(notes::CLIFFORD_CROSS_PAIRING);
            }
        }
        Command::Validate => {
            let bad_metric = metric_checks(cli, desc, report);
            let bad_forms: Vec<String> = desc
                .forms
                .keys()
                .filter(|name| desc.form(name).is_err())
                .cloned()
                .collect();
            report
                .result("valid", !bad_metric && bad_forms.is_empty())
                .result("pieces", s.pieces().iter().map(|p| p.id.clone()).collect::<Vec<_>>())
                .result("wedge_points", s.wedges().iter().map(|w| w.id.clone()).collect::<Vec<_>>())
                .result("forms", desc.forms.keys().cloned().collect::<Vec<_>>())
                .result("incompatible_forms", &bad_forms)
                .result("sections", desc.sections.keys().cloned().collect::<Vec<_>>());
            return Ok(bad_metric || !bad_forms.is_empty());
        }
    }
    Ok(false)
}

/// Entry point for the binary: runs on the process arguments and prints.
pub fn main() -> i32 {
    let out = run_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_on(args: &[&str]) -> Outcome {
        run_args(std::iter::once("diffeo-glue").chain(args.iter().copied()))
    }

    #[test]
    fn builtin_dim() {
        let out = run_on(&["dim"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("dimension: 2"), "{}", out.stdout);
        assert!(out.stdout.contains("max_lambda1_fibre: 4"));
    }

    #[test]
    fn bad_arguments_exit_two() {
        assert_eq!(run_on(&["fibre-dim"]).code, 2);
        assert_eq!(run_on(&["fibre-dim", "nowhere", "1"]).code, 2);
    }

    #[test]
    fn samples_are_seeded() {
        assert_eq!(sample_points(3, 2, 5), sample_points(3, 2, 5));
        assert_ne!(sample_points(3, 2, 5), sample_points(4, 2, 5));
    }
}
