//! The `structmap` command-line front end.
//!
//! Exit codes: 0 on success, 2 when the structured problem has no solution
//! (the report is still written), 1 for usage and I/O errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::backward::{self, BackwardErrorReport};
use crate::io::{self, read_matrix_market, spec_to_json};
use crate::linalg::{self, spectral_norm};
use crate::mapping::{self, MappingProblem};
use crate::pseudospectra::{self, EtaKind};
use crate::structure::{Preset, StructureSpec, ToleranceProfile};
use crate::{CMat, Error, Result, C64};

#[derive(Debug, Parser)]
#[command(name = "structmap", version, about = "Structured mapping problems AX = B over Jordan and Lie algebras")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a structured A with AX = B exists.
    Exist(MappingArgs),
    /// Compute minimal-norm structured solutions.
    Solve(SolveArgs),
    /// Draw a member of the structured solution family.
    FamilySample(FamilyArgs),
    /// Structured backward errors of eigenpairs, invariant pairs and subspaces.
    BackwardError(BackwardArgs),
    /// Structured eigenvalue backward error on a point or a grid.
    Pseudospectrum(PseudoArgs),
    /// List structure presets.
    Presets(PresetArgs),
}

#[derive(Debug, Args)]
pub struct StructureArgs {
    /// Named structure (see `presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON structure spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_membership: Option<f64>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Mtx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormChoice {
    Frobenius,
    Spectral,
    Both,
}

impl NormChoice {
    fn frobenius(self) -> bool {
        matches!(self, NormChoice::Frobenius | NormChoice::Both)
    }

    fn spectral(self) -> bool {
        matches!(self, NormChoice::Spectral | NormChoice::Both)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output path; matrices are written next to it as `<stem>.<name>.mtx`.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct MappingArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(short = 'X', value_name = "FILE")]
    pub x: PathBuf,
    #[arg(short = 'B', value_name = "FILE")]
    pub b: PathBuf,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub mapping: MappingArgs,
    #[arg(long, value_enum, default_value_t = NormChoice::Both)]
    pub norm: NormChoice,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub mapping: MappingArgs,
    /// Seed for the random family parameter.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BackwardArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(short = 'A', value_name = "FILE")]
    pub a: Option<PathBuf>,
    /// Basis of an invariant pair (with -D).
    #[arg(short = 'X', value_name = "FILE")]
    pub x: Option<PathBuf>,
    #[arg(short = 'D', value_name = "FILE")]
    pub d: Option<PathBuf>,
    /// Orthonormal basis of a subspace.
    #[arg(short = 'U', value_name = "FILE")]
    pub u: Option<PathBuf>,
    /// Approximate eigenvector (with --lambda).
    #[arg(long = "x", value_name = "FILE")]
    pub vector: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub lambda: Option<C64>,
    #[arg(long, value_enum, default_value_t = NormChoice::Both)]
    pub norm: NormChoice,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PseudoArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(short = 'A', value_name = "FILE")]
    pub a: PathBuf,
    /// Evaluate a single point instead of a grid.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub lambda: Option<C64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub re: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub im: Option<Vec<f64>>,
    #[arg(long, default_value_t = 41)]
    pub nx: usize,
    #[arg(long, default_value_t = 41)]
    pub ny: usize,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = pseudospectra::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (`j` also accepted for the unit).
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let finite = |z: C64| if z.re.is_finite() && z.im.is_finite() { Ok(z) } else { Err(bad()) };
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return finite(C64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    let coef = |c: &str| -> std::result::Result<f64, String> {
        match c {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => c.parse().map_err(|_| bad()),
        }
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => finite(C64::new(body[..k].parse().map_err(|_| bad())?, coef(&body[k..])?)),
        None => finite(C64::new(0.0, coef(body)?)),
    }
}

fn tolerances(t: &TolArgs) -> Result<ToleranceProfile> {
    let mut tol = ToleranceProfile::default();
    if let Some(v) = t.tol_membership {
        tol.membership_rtol = v;
    }
    if t.tol_rank.is_some() {
        tol.rank_rtol = t.tol_rank;
    }
    if let Some(v) = t.tol_residual {
        tol.residual_rtol = v;
    }
    tol.validate()?;
    Ok(tol)
}

fn tolerances_json(tol: &ToleranceProfile) -> Value {
    json!({
        "membership_rtol": tol.membership_rtol,
        "rank_rtol": tol.rank_rtol,
        "residual_rtol": tol.residual_rtol,
    })
}

/// Resolve the structure from `--preset` and/or `--spec`; `n` is the
/// dimension implied by the input matrices.
fn resolve_structure(args: &StructureArgs, n: usize) -> Result<StructureSpec> {
    let from_file = args.spec.as_deref().map(io::read_spec).transpose()?;
    let from_preset = args
        .preset
        .as_deref()
        .map(|name| -> Result<StructureSpec> {
            let p: Preset = name.parse()?;
            p.build(n)
        })
        .transpose()?;
    match (from_preset, from_file) {
        (Some(p), Some(f)) => {
            if p != f {
                return Err(Error::InvalidInput(format!(
                    "--preset {} conflicts with the structure in --spec",
                    args.preset.as_deref().unwrap_or_default()
                )));
            }
            Ok(p)
        }
        (Some(p), None) => Ok(p),
        (None, Some(f)) => Ok(f),
        (None, None) => Err(Error::InvalidInput("one of --preset or --spec is required".into())),
    }
}

/// Where report and matrices go.
struct Sink {
    output: Option<PathBuf>,
    format: OutputFormat,
    refs: Vec<(String, String)>,
}

impl Sink {
    fn new(out: &OutputArgs) -> Self {
        Sink {
            output: out.output.clone(),
            format: out.format,
            refs: Vec::new(),
        }
    }

    fn sibling(&self, name: &str, ext: &str) -> Option<(PathBuf, String)> {
        let out = self.output.as_ref()?;
        let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
        let file = format!("{stem}.{name}.{ext}");
        let dir = out.parent().unwrap_or_else(|| Path::new(""));
        Some((dir.join(&file), file))
    }

    /// Write a named matrix next to the report (JSON format only).
    fn matrix(&mut self, name: &str, a: &CMat) -> Result<()> {
        if self.format != OutputFormat::Json {
            return Ok(());
        }
        if let Some((path, file)) = self.sibling(name, "mtx") {
            io::write_matrix_market(&path, a)?;
            self.refs.push((name.to_string(), file));
        }
        Ok(())
    }

    fn refs_json(&self) -> Value {
        Value::Object(self.refs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
    }

    fn emit_text(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_report(&self, mut report: Value) -> Result<()> {
        report["output_refs"] = self.refs_json();
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        match self.format {
            OutputFormat::Json => self.emit_text(&text),
            // the primary artifact went to -o; the report goes to stdout
            _ => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_primary_matrix(&self, a: &CMat) -> Result<()> {
        self.emit_text(&io::format_matrix_market(a))
    }
}

fn base_report(command: &str, spec: Option<&StructureSpec>, tol: &ToleranceProfile) -> Value {
    json!({
        "command": command,
        "spec": spec.map(spec_to_json),
        "existence": null,
        "sigma": { "frobenius": null, "spectral": null, "unstructured": null },
        "norms": {},
        "output_refs": {},
        "tolerances": tolerances_json(tol),
        "version": crate::VERSION,
    })
}

fn read(path: &Path) -> Result<CMat> {
    read_matrix_market(path)
}

/// Successful run or a not-solvable outcome (exit 2).
enum Status {
    Ok,
    NotSolvable,
}

fn load_mapping(args: &MappingArgs) -> Result<(MappingProblem, ToleranceProfile)> {
    let tol = tolerances(&args.tol)?;
    let x = read(&args.x)?;
    let b = read(&args.b)?;
    let spec = resolve_structure(&args.structure, x.nrows())?;
    Ok((MappingProblem::new(x, b, spec, tol)?, tol))
}

fn reject_format(sink: &Sink, allowed: &[OutputFormat]) -> Result<()> {
    if allowed.contains(&sink.format) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("--format {:?} is not supported by this command", sink.format).to_lowercase()))
    }
}

fn cmd_exist(args: &MappingArgs) -> Result<Status> {
    let sink = Sink::new(&args.out);
    reject_format(&sink, &[OutputFormat::Json])?;
    let (prob, tol) = load_mapping(args)?;
    let rep = mapping::check_existence(&prob);
    let mut report = base_report("exist", Some(prob.spec()), &tol);
    report["existence"] = serde_json::to_value(&rep)?;
    sink.emit_report(report)?;
    Ok(if rep.exists { Status::Ok } else { Status::NotSolvable })
}

fn cmd_solve(args: &SolveArgs) -> Result<Status> {
    let mut sink = Sink::new(&args.mapping.out);
    reject_format(&sink, &[OutputFormat::Json, OutputFormat::Mtx])?;
    let (prob, tol) = load_mapping(&args.mapping)?;
    let rep = mapping::check_existence(&prob);
    let mut report = base_report("solve", Some(prob.spec()), &tol);
    report["existence"] = serde_json::to_value(&rep)?;
    if !rep.exists {
        sink.emit_report(report)?;
        return Ok(Status::NotSolvable);
    }
    let sig = mapping::sigma_values(&prob)?;
    report["sigma"] = json!({
        "frobenius": sig.frobenius_closed_form,
        "spectral": sig.spectral,
        "unstructured": sig.unstructured,
    });
    let mut primary = None;
    if args.norm.frobenius() {
        let sol = mapping::solve_frobenius(&prob)?;
        report["norms"]["frobenius"] = json!({
            "norm_value": sol.norm_value,
            "sigma": sol.sigma,
            "unique": sol.unique,
            "residual": (&sol.a * prob.x() - prob.b()).norm(),
            "structure_defect": prob.spec().defect(&sol.a)?,
        });
        sink.matrix("A_frobenius", &sol.a)?;
        primary.get_or_insert(sol.a);
    }
    if args.norm.spectral() {
        let sol = mapping::solve_spectral(&prob, None)?;
        report["norms"]["spectral"] = json!({
            "norm_value": sol.norm_value,
            "sigma": sol.sigma,
            "unique": sol.unique,
            "residual": (&sol.a * prob.x() - prob.b()).norm(),
            "structure_defect": prob.spec().defect(&sol.a)?,
        });
        sink.matrix("A_spectral", &sol.a)?;
        primary.get_or_insert(sol.a);
    }
    if sink.format == OutputFormat::Mtx {
        sink.emit_primary_matrix(primary.as_ref().expect("a norm is always selected"))?;
    }
    sink.emit_report(report)?;
    Ok(Status::Ok)
}

fn cmd_family(args: &FamilyArgs) -> Result<Status> {
    let mut sink = Sink::new(&args.mapping.out);
    reject_format(&sink, &[OutputFormat::Json, OutputFormat::Mtx])?;
    let (prob, tol) = load_mapping(&args.mapping)?;
    let rep = mapping::check_existence(&prob);
    let mut report = base_report("family-sample", Some(prob.spec()), &tol);
    report["existence"] = serde_json::to_value(&rep)?;
    if !rep.exists {
        sink.emit_report(report)?;
        return Ok(Status::NotSolvable);
    }
    let fam = mapping::solution_family(&prob)?;
    let n = prob.n();
    let z = linalg::random_complex(n, n, &mut linalg::rng(args.seed));
    let member = fam.member(&z)?;
    report["norms"] = json!({
        "base_frobenius": fam.base.norm(),
        "member_frobenius": member.norm(),
        "member_spectral": spectral_norm(&member),
        "member_residual": (&member * prob.x() - prob.b()).norm(),
        "member_structure_defect": prob.spec().defect(&member)?,
    });
    report["seed"] = json!(args.seed);
    sink.matrix("base", &fam.base)?;
    sink.matrix("member", &member)?;
    if sink.format == OutputFormat::Mtx {
        sink.emit_primary_matrix(&member)?;
    }
    sink.emit_report(report)?;
    Ok(Status::Ok)
}

fn backward_json(rep: &BackwardErrorReport) -> Value {
    json!({
        "value_spectral": rep.value_spectral,
        "value_frobenius": rep.value_frobenius,
        "solvable": rep.solvable,
    })
}

fn cmd_backward(args: &BackwardArgs) -> Result<Status> {
    let mut sink = Sink::new(&args.out);
    reject_format(&sink, &[OutputFormat::Json, OutputFormat::Mtx])?;
    let tol = tolerances(&args.tol)?;
    let a = args.a.as_deref().map(read).transpose()?;
    let x = args.x.as_deref().map(read).transpose()?;
    let d = args.d.as_deref().map(read).transpose()?;
    let u = args.u.as_deref().map(read).transpose()?;
    let v = args.vector.as_deref().map(read).transpose()?;
    let n = [&a, &x, &u, &v]
        .iter()
        .find_map(|m| m.as_ref().map(|m| m.nrows()))
        .ok_or_else(|| Error::InvalidInput("no input matrices given".into()))?;
    let spec = resolve_structure(&args.structure, n)?;
    let mut report = base_report("backward-error", Some(&spec), &tol);

    let result: Result<(String, BackwardErrorReport, Option<CMat>)> = match (&a, &x, &d, &u, &v, args.lambda) {
        (Some(a), None, None, None, Some(v), Some(lambda)) => {
            backward::eigenpair_backward_error(a, v, lambda, &spec, &tol).map(|r| ("eigenpair".to_string(), r, None))
        }
        (Some(a), Some(x), Some(d), None, None, None) => {
            backward::invariant_pair_backward_error(a, x, d, &spec, &tol).map(|r| ("invariant-pair".to_string(), r, None))
        }
        (Some(a), None, None, Some(u), None, None) => backward::subspace_backward_error(a, u, &spec, &tol)
            .map(|r| ("subspace".to_string(), r.report, Some(r.e_o))),
        (None, Some(x), Some(d), None, None, None) => {
            return inverse_pair(x, d, &spec, &tol, args.norm, sink, report);
        }
        _ => {
            return Err(Error::InvalidInput(
                "expected one of: -A --x --lambda | -A -X -D | -A -U | -X -D".into(),
            ))
        }
    };
    match result {
        Ok((mode, rep, e_o)) => {
            report["mode"] = json!(mode);
            report["existence"] = serde_json::to_value(&rep.existence)?;
            report["sigma"]["spectral"] = json!(rep.value_spectral);
            report["sigma"]["frobenius"] = json!(rep.value_frobenius);
            report["backward_error"] = backward_json(&rep);
            let mut primary = None;
            if args.norm.frobenius() {
                sink.matrix("perturbation_frobenius", &rep.perturbation_frobenius)?;
                primary.get_or_insert(rep.perturbation_frobenius.clone());
            }
            if args.norm.spectral() {
                sink.matrix("perturbation_spectral", &rep.perturbation_spectral)?;
                primary.get_or_insert(rep.perturbation_spectral.clone());
            }
            if let Some(e_o) = e_o {
                sink.matrix("E_o", &e_o)?;
            }
            if sink.format == OutputFormat::Mtx {
                sink.emit_primary_matrix(primary.as_ref().expect("a norm is always selected"))?;
            }
            sink.emit_report(report)?;
            Ok(Status::Ok)
        }
        Err(Error::NotSolvable(ex)) => {
            report["existence"] = serde_json::to_value(&*ex)?;
            sink.emit_report(report)?;
            Ok(Status::NotSolvable)
        }
        Err(e @ Error::ConditionallyUnsolvable { .. }) => {
            report["error"] = json!({ "code": e.code(), "message": e.to_string() });
            sink.emit_report(report)?;
            Ok(Status::NotSolvable)
        }
        Err(e) => Err(e),
    }
}

fn inverse_pair(
    x: &CMat,
    d: &CMat,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
    norm: NormChoice,
    mut sink: Sink,
    mut report: Value,
) -> Result<Status> {
    report["mode"] = json!("inverse-invariant-pair");
    match backward::inverse_invariant_pair(x, d, spec, tol) {
        Ok((fro, spe)) => {
            let prob = MappingProblem::new(x.clone(), x * d, spec.clone(), *tol)?;
            report["existence"] = serde_json::to_value(mapping::check_existence(&prob))?;
            report["sigma"]["frobenius"] = json!(fro.sigma);
            report["sigma"]["spectral"] = json!(spe.sigma);
            report["sigma"]["unstructured"] = json!(spe.sigma);
            if norm.frobenius() {
                sink.matrix("A_frobenius", &fro.a)?;
            }
            if norm.spectral() {
                sink.matrix("A_spectral", &spe.a)?;
            }
            if sink.format == OutputFormat::Mtx {
                sink.emit_primary_matrix(if norm.frobenius() { &fro.a } else { &spe.a })?;
            }
            sink.emit_report(report)?;
            Ok(Status::Ok)
        }
        Err(Error::NotSolvable(ex)) => {
            report["existence"] = serde_json::to_value(&*ex)?;
            sink.emit_report(report)?;
            Ok(Status::NotSolvable)
        }
        Err(e) => Err(e),
    }
}

fn kind_name(k: EtaKind) -> &'static str {
    match k {
        EtaKind::Theorem => "theorem",
        EtaKind::Exact => "exact",
        EtaKind::UpperBound => "upper-bound",
        EtaKind::Infeasible => "infeasible",
    }
}

fn cmd_pseudo(args: &PseudoArgs) -> Result<Status> {
    let mut sink = Sink::new(&args.out);
    let tol = tolerances(&args.tol)?;
    let a = read(&args.a)?;
    let spec = resolve_structure(&args.structure, a.nrows())?;
    let mut report = base_report("pseudospectrum", Some(&spec), &tol);
    if let Some(lambda) = args.lambda {
        reject_format(&sink, &[OutputFormat::Json, OutputFormat::Mtx])?;
        let r = pseudospectra::eta_structured_seeded(&a, lambda, &spec, &tol, args.seed)?;
        report["point"] = json!({
            "lambda": [lambda.re, lambda.im],
            "eta": r.eta,
            "eta_unstructured": r.eta_unstructured,
            "equality": r.equality,
            "kind": kind_name(r.kind),
        });
        report["sigma"]["unstructured"] = json!(r.eta_unstructured);
        if let Some(cert) = &r.certificate {
            report["norms"]["certificate_spectral"] = json!(spectral_norm(cert));
            sink.matrix("certificate", cert)?;
            if sink.format == OutputFormat::Mtx {
                sink.emit_primary_matrix(cert)?;
            }
        } else if sink.format == OutputFormat::Mtx {
            return Err(Error::InvalidInput("no certificate exists at this point".into()));
        }
        sink.emit_report(report)?;
        return Ok(Status::Ok);
    }
    reject_format(&sink, &[OutputFormat::Json, OutputFormat::Csv])?;
    let range = |v: &Option<Vec<f64>>, flag: &str| -> Result<(f64, f64)> {
        match v.as_deref() {
            Some([lo, hi]) => Ok((*lo, *hi)),
            _ => Err(Error::InvalidInput(format!("--{flag} LO HI is required for a grid"))),
        }
    };
    let g = pseudospectra::grid(
        &a,
        &spec,
        range(&args.re, "re")?,
        range(&args.im, "im")?,
        (args.nx, args.ny),
        args.epsilon,
        &tol,
        args.seed,
    )?;
    let csv = g.to_csv();
    if sink.format == OutputFormat::Csv {
        sink.emit_text(&csv)?;
        return Ok(Status::Ok);
    }
    if let Some((path, file)) = sink.sibling("grid", "csv") {
        std::fs::write(path, &csv)?;
        sink.refs.push(("grid".into(), file));
    }
    report["grid"] = serde_json::to_value(&g)?;
    if let Some(eps) = args.epsilon {
        let inside: usize = g.sublevel(eps).iter().map(|r| r.iter().filter(|&&b| b).count()).sum();
        report["sublevel_nodes"] = json!(inside);
    }
    sink.emit_report(report)?;
    Ok(Status::Ok)
}

fn cmd_presets(args: &PresetArgs) -> Result<Status> {
    let sink = Sink::new(&args.out);
    reject_format(&sink, &[OutputFormat::Json])?;
    let list: Vec<Value> = Preset::all()
        .iter()
        .map(|p| {
            let spec = p.build(4).expect("all presets build at n = 4");
            let mut v = spec_to_json(&spec);
            let obj = v.as_object_mut().expect("object");
            obj.remove("M");
            obj.remove("n");
            obj.insert("name".into(), json!(p.name()));
            obj.insert("needs_even".into(), json!(p.needs_even()));
            v
        })
        .collect();
    let report = json!({
        "command": "presets",
        "presets": list,
        "accepted_names": Preset::NAMES,
        "version": crate::VERSION,
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    sink.emit_text(&text)?;
    Ok(Status::Ok)
}

/// Execute a parsed configuration, returning the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let status = match &config.command {
        Command::Exist(a) => cmd_exist(a),
        Command::Solve(a) => cmd_solve(a),
        Command::FamilySample(a) => cmd_family(a),
        Command::BackwardError(a) => cmd_backward(a),
        Command::Pseudospectrum(a) => cmd_pseudo(a),
        Command::Presets(a) => cmd_presets(a),
    };
    match status {
        Ok(Status::Ok) => 0,
        Ok(Status::NotSolvable) => 2,
        Err(e) => {
            eprintln!("structmap: error [{}]: {e}", e.code());
            1
        }
    }
}

/// Parse arguments and run; usage errors exit with 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
