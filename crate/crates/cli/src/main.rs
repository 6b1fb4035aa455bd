//! `nchodge`: batch front end for the nchodge library.
//!
//! Exit codes: 0 success, 2 validation failure, 3 computation error,
//! 64 usage error.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use nchodge::charclass::{modified_todd_class, sqrt_modified_todd, sqrt_todd, todd_class, BundleData};
use nchodge::cohring::{build_builtin, validate_ring, Builtin, CohClass, CohRing, RingDoc};
use nchodge::family::{
    builtin_family, flatness_check, intertwining_defect, kappa_closed, mc_check, transversality_check, DeformationSpec,
    FamilyDoc,
};
use nchodge::graphs::{
    enumerate_admissible, vanishing_check, weight_estimate, AdmissibleGraph, GraphFamily, Vanishing,
};
use nchodge::ncvshs::{hkr_embed, HPDoc, HPElement};
use nchodge::pairing::{canonical_pairing, higher_residue, hrr_chi, mukai_pairing, symmetry_defect, symmetry_sweep};
use nchodge::scalars::{Rational, TauScalar};
use nchodge::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_COMPUTATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "nchodge",
    version,
    about = "Exact characteristic-class, pairing and graph-weight computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ring documents.
    Ring {
        #[command(subcommand)]
        command: RingCommand,
    },
    /// Todd class of the tangent bundle.
    Todd {
        #[arg(long)]
        ring: String,
        /// Use z / (e^{z/2} - e^{-z/2}) instead of z / (1 - e^{-z}).
        #[arg(long)]
        modified: bool,
        /// Print the square root of the class.
        #[arg(long)]
        sqrt: bool,
    },
    /// Evaluate a pairing.
    Pair {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum)]
        kind: PairKind,
        /// Class expression, `@file.json` HP document, or (mukai) a bundle.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// u-truncation for expression arguments.
        #[arg(long, default_value_t = 0)]
        u_order: usize,
    },
    /// Euler pairing chi(E, F) by Hirzebruch-Riemann-Roch.
    Hrr {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        e: String,
        #[arg(long)]
        f: String,
    },
    /// Symmetry defect of the higher residue pairing.
    Symmetry {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true, requires = "b")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "a")]
        b: Option<String>,
    },
    /// Deformation families.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// Admissible graphs.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
}

#[derive(Subcommand)]
enum RingCommand {
    /// Check every ring invariant and print the report.
    Validate {
        #[arg(long)]
        ring: String,
    },
    /// Print the ring as a JSON document.
    Export {
        #[arg(long)]
        ring: String,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Maurer-Cartan, transversality, flatness and intertwining checks.
    Check {
        #[arg(long)]
        family: String,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Monte-Carlo weight of a graph.
    Weight {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List admissible graphs.
    Enum {
        #[arg(long)]
        aerial: usize,
        #[arg(long)]
        boundary: usize,
        #[arg(long)]
        max_edges: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Disk)]
        family: FamilyArg,
        #[arg(long, default_value_t = nchodge::graphs::DEFAULT_ENUM_CAP)]
        cap: usize,
        /// Only print graphs not forced to zero.
        #[arg(long)]
        nonvanishing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PairKind {
    Hres,
    Can,
    Mukai,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Disk,
    Cfw,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::Validation { .. }
            | Error::Parse(_)
            | Error::BadDiamond(_)
            | Error::BadChernDegrees { .. }
            | Error::UnknownLabel(_)
            | Error::InvalidGraph(_)
            | Error::BadDirection { .. } => Failure::Validation(text),
            Error::UnknownBundle(_) => Failure::Usage(text),
            _ => Failure::Computation(text),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Computation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_COMPUTATION)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Ring {
            command: RingCommand::Validate { ring },
        } => ring_validate(&ring),
        Command::Ring {
            command: RingCommand::Export { ring },
        } => Ok(format!("{}\n", RingDoc::from_ring(&*load_ring(&ring)?).to_json())),
        Command::Todd { ring, modified, sqrt } => {
            let r = load_ring(&ring)?;
            let c = match (modified, sqrt) {
                (false, false) => todd_class(&r)?,
                (true, false) => modified_todd_class(&r)?,
                (false, true) => sqrt_todd(&r)?,
                (true, true) => sqrt_modified_todd(&r)?,
            };
            Ok(format!("{c}\n"))
        }
        Command::Pair {
            ring,
            kind,
            a,
            b,
            u_order,
        } => {
            let r = load_ring(&ring)?;
            match kind {
                PairKind::Mukai => {
                    let v = mukai_pairing(&BundleData::parse(&r, &a)?, &BundleData::parse(&r, &b)?)?;
                    Ok(format!("mukai = {v}\n"))
                }
                PairKind::Hres | PairKind::Can => {
                    let (x, y) = (hp_arg(&r, &a, u_order)?, hp_arg(&r, &b, u_order)?);
                    let (name, v) = match kind {
                        PairKind::Hres => ("hres", higher_residue(&x, &y)?),
                        _ => ("can", canonical_pairing(&x, &y)?),
                    };
                    Ok(format!("{name} = {v}\n"))
                }
            }
        }
        Command::Hrr { ring, e, f } => {
            let r = load_ring(&ring)?;
            let chi = hrr_chi(&BundleData::parse(&r, &e)?, &BundleData::parse(&r, &f)?)?;
            Ok(format!("chi = {chi}\n"))
        }
        Command::Symmetry { ring, a, b } => {
            let r = load_ring(&ring)?;
            match (a, b) {
                (Some(a), Some(b)) => {
                    let d = symmetry_defect(&hp_arg(&r, &a, 1)?, &hp_arg(&r, &b, 1)?)?;
                    Ok(format!("defect = {d}\n"))
                }
                _ => symmetry_report(&r),
            }
        }
        Command::Family {
            command: FamilyCommand::Check { family },
        } => family_check(&family),
        Command::Graph { command } => match command {
            GraphCommand::Weight { graph, samples, seed } => graph_weight(&graph, samples, seed),
            GraphCommand::Enum {
                aerial,
                boundary,
                max_edges,
                family,
                cap,
                nonvanishing,
            } => {
                let family = match family {
                    FamilyArg::Disk => GraphFamily::Disk,
                    FamilyArg::Cfw => GraphFamily::Cfw,
                };
                let graphs = enumerate_admissible(family, aerial, boundary, max_edges, cap)?;
                let mut out = String::new();
                let mut count = 0;
                for g in graphs {
                    if nonvanishing && vanishing_check(&g) != Vanishing::NotForced {
                        continue;
                    }
                    count += 1;
                    writeln!(out, "{g}").unwrap();
                }
                writeln!(out, "count = {count}").unwrap();
                Ok(out)
            }
        },
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read `{path}`: {e}")))
}

fn builtin_name(spec: &str) -> Option<&str> {
    spec.strip_prefix("builtin:")
}

fn load_ring(spec: &str) -> Result<Arc<CohRing>, Failure> {
    match builtin_name(spec) {
        Some(name) => {
            let b: Builtin = name.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            Ok(build_builtin(&b)?)
        }
        None => Ok(CohRing::load(&read_file(spec)?)?),
    }
}

fn ring_validate(spec: &str) -> Outcome {
    let ring = match builtin_name(spec) {
        Some(_) => load_ring(spec)?,
        None => RingDoc::from_json(&read_file(spec)?)?.to_parts()?.build_unchecked(),
    };
    let report = validate_ring(&ring);
    let mut out = format!(
        "ring: {} (dimension {}, rank {})\n{report}",
        ring.name(),
        ring.dimension(),
        ring.rank()
    );
    if !out.ends_with('\n') {
        out.push('\n');
    }
    match report.first_failure() {
        None => {
            out.push_str("result: valid\n");
            Ok(out)
        }
        Some(c) => {
            print!("{out}");
            Err(Failure::Validation(format!(
                "validation failed: {}: {}",
                c.name, c.detail
            )))
        }
    }
}

fn symmetry_report(r: &Arc<CohRing>) -> Outcome {
    let bad = symmetry_sweep(r)?;
    let mut out = format!("pairs = {}\nnonzero defects = {}\n", r.rank() * r.rank(), bad.len());
    if bad.is_empty() {
        return Ok(out);
    }
    for (a, b, d) in &bad {
        writeln!(out, "  <{a}, {b}>: {d}").unwrap();
    }
    print!("{out}");
    Err(Failure::Validation(
        "symmetry of the higher residue pairing fails".into(),
    ))
}

/// `@path` reads an HP document; anything else is a class expression at
/// `u^0` such as `2 h + -1/2 pt` or `1/3*tau^-1 dz`.
fn hp_arg(r: &Arc<CohRing>, arg: &str, u_order: usize) -> Result<HPElement, Failure> {
    if let Some(path) = arg.strip_prefix('@') {
        let doc: HPDoc = serde_json::from_str(&read_file(path)?).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(HPElement::from_doc(r, &doc)?);
    }
    Ok(hkr_embed(&parse_class(r, arg)?, u_order))
}

fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && i > 0 && bytes[i - 1] == b' ' && bytes.get(i + 1) == Some(&b' ') => {
                out.push(&s[start..i - 1]);
                start = i + 2;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&s[start..]);
    out
}

fn parse_scalar(s: &str) -> Result<TauScalar, Failure> {
    let bad = || Failure::Usage(format!("bad coefficient `{s}`"));
    let rational = |t: &str| -> Result<Rational, Failure> {
        let t = t.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let (n, d): (i64, i64) = (
                    n.trim().parse().map_err(|_| bad())?,
                    d.trim().parse().map_err(|_| bad())?,
                );
                if d == 0 {
                    return Err(bad());
                }
                Ok(Rational::new(n.into(), d.into()))
            }
            None => Ok(Rational::from_integer(t.parse::<i64>().map_err(|_| bad())?.into())),
        }
    };
    let s = s.trim();
    if let Some((c, e)) = s.split_once("*tau^") {
        let e: i64 = e.parse().map_err(|_| bad())?;
        return Ok(TauScalar::monomial(e, rational(c)?));
    }
    if let Some(c) = s.strip_suffix("*tau") {
        return Ok(TauScalar::monomial(1, rational(c)?));
    }
    Ok(TauScalar::from_rational(rational(s)?))
}

fn parse_class(r: &Arc<CohRing>, expr: &str) -> Result<CohClass, Failure> {
    let mut out = CohClass::zero(r);
    for term in split_terms(expr.trim()) {
        let term = term.trim();
        if term.is_empty() || term == "0" {
            continue;
        }
        let (coeff, label) = match term.rsplit_once(' ') {
            Some((c, l)) => (parse_scalar(c)?, l.trim()),
            None if r.index_of(term).is_ok() => (TauScalar::one(), term),
            None => {
                let unit = r.unit().ok_or_else(|| Failure::Usage("ring has no unit".into()))?;
                let one = CohClass::basis(r, unit);
                out = out.add(&one.scale(&parse_scalar(term)?))?;
                continue;
            }
        };
        out = out.add(&CohClass::from_label(r, label)?.scale(&coeff))?;
    }
    Ok(out)
}

fn load_family(spec: &str) -> Result<(String, DeformationSpec), Failure> {
    if let Some(name) = builtin_name(spec) {
        return Ok((
            name.to_string(),
            builtin_family(name).map_err(|e| Failure::Usage(e.to_string()))?,
        ));
    }
    let doc = FamilyDoc::from_json(&read_file(spec)?)?;
    let ring = match builtin_name(&doc.ring) {
        Some(_) => load_ring(&doc.ring)?,
        None => {
            let base = Path::new(spec).parent().unwrap_or(Path::new("."));
            load_ring(&base.join(&doc.ring).to_string_lossy())?
        }
    };
    let name = Path::new(spec)
        .file_stem()
        .map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, doc.to_spec(&ring)?))
}

fn family_check(spec: &str) -> Outcome {
    let (name, d) = load_family(spec)?;
    let mut out = format!("family: {name} (mu = {}, ring {})\n", d.mu(), d.ring().name());
    let mc = mc_check(&d);
    writeln!(out, "maurer-cartan: {}", if mc { "pass" } else { "FAIL" }).unwrap();
    let corpus = d.basis_corpus(1);
    let t = transversality_check(&d, &corpus);
    let f = flatness_check(&d);
    writeln!(out, "{t}\n{f}").unwrap();
    let mut ok = mc && t.passed && f.passed;
    let twist = sqrt_modified_todd(d.ring())?;
    if kappa_closed(&twist, &d) {
        let mut cases = 0;
        let mut bad = 0;
        for s in &corpus {
            for j in 0..d.mu() {
                cases += 1;
                if !intertwining_defect(&twist, s, j, &d)?.is_zero() {
                    bad += 1;
                }
            }
        }
        if bad == 0 {
            writeln!(out, "intertwining: pass ({cases} cases)").unwrap();
        } else {
            writeln!(out, "intertwining: FAIL ({bad} of {cases} cases)").unwrap();
            ok = false;
        }
    } else {
        writeln!(out, "intertwining: skipped (sqrt(td') is not kappa-closed)").unwrap();
    }
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Validation("family check failed".into()))
    }
}

fn load_graph(spec: &str) -> Result<AdmissibleGraph, Failure> {
    match builtin_name(spec) {
        Some("wedge") => Ok(AdmissibleGraph::wedge()),
        Some(other) => Err(Failure::Usage(format!("unknown built-in graph `{other}`"))),
        None => Ok(AdmissibleGraph::from_json(&read_file(spec)?)?),
    }
}

/// Decimal with 12 significant digits.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = 11 - mag;
    if (0..=24).contains(&decimals) {
        format!("{x:.*}", decimals as usize)
    } else {
        format!("{x:.11e}")
    }
}

fn graph_weight(spec: &str, samples: u64, seed: u64) -> Outcome {
    let g = load_graph(spec)?;
    let w = weight_estimate(&g, samples, seed)?;
    let mut out = format!("graph: {g}\n");
    if let Some(reason) = w.forced_zero {
        writeln!(out, "forced_zero = {reason}").unwrap();
    }
    writeln!(out, "mean = {}", sig12(w.mean)).unwrap();
    writeln!(out, "std_error = {}", sig12(w.std_error)).unwrap();
    writeln!(out, "samples = {}", w.samples).unwrap();
    writeln!(out, "seed = {}", w.seed).unwrap();
    Ok(out)
}
