//! Command-line front end. `main.rs` only parses arguments and calls [`run`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::absorb::{
    absorb_observables, absorb_probabilities, map_expectations, postprocess_counts,
    postprocess_distribution, CountsHistogram, ProbabilityAbsorption, TransformedObservable,
};
use crate::circuit::{peephole, Circuit};
use crate::error::{Error, Result};
use crate::extract::{basis_layer, extract, native_circuit};
use crate::oracle::{equivalent_up_to_phase, DenseOracle, DEFAULT_MAX_QUBITS};
use crate::problems::{Mode, Problem, ProblemKind, ProblemSpec, Schedule};

#[derive(Debug, Parser)]
#[command(
    name = "cliffex",
    version,
    about = "Clifford extraction and absorption for Pauli-rotation circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract the Clifford tail and write the circuits to run plus a report.
    Optimize(OptimizeArgs),
    /// Rewrite measured bitstring counts using a probability-mode report.
    Postprocess(PostprocessArgs),
    /// Apply observable signs from an observable-mode report.
    MapExpectations(MapArgs),
    /// Check a report and its circuits against dense simulation.
    Verify(VerifyArgs),
    /// Generate a benchmark input file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Observables,
    Probabilities,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Observables => Mode::Observables,
            ModeArg::Probabilities => Mode::Probabilities,
        }
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Optimized circuit (QASM).
    #[arg(long, default_value = "optimized.qasm")]
    pub out: PathBuf,
    /// Extracted Clifford (QASM).
    #[arg(long, default_value = "clifford.qasm")]
    pub clifford: PathBuf,
    #[arg(long, default_value = "report.json")]
    pub report: PathBuf,
    #[arg(long)]
    pub no_peephole: bool,
}

#[derive(Debug, Args)]
pub struct PostprocessArgs {
    pub counts: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
    /// Defaults to stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    pub values: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Debug, Args)]
pub struct Angles {
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// One value per layer; defaults to 0.2·(layer+1).
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// One value per layer; defaults to 0.4.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub beta: Vec<f64>,
    #[arg(long, short, default_value = "input.json")]
    pub out: PathBuf,
    /// Observables to attach; the file then defaults to observable mode.
    #[arg(long = "observable")]
    pub observables: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// QAOA MaxCut on a seeded regular or random graph.
    Maxcut {
        #[arg(long)]
        nodes: usize,
        #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
        degree: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        angles: Angles,
    },
    /// QAOA for low-autocorrelation binary sequences.
    Labs {
        #[arg(long, short = 'n', alias = "nodes")]
        n: usize,
        #[command(flatten)]
        angles: Angles,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub cnot_before: usize,
    pub cnot_after: usize,
    pub entangling_depth_before: usize,
    pub entangling_depth_after: usize,
    pub rotation_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    pub optimized: PathBuf,
    pub clifford: PathBuf,
    /// Circuits to execute: the optimized circuit plus the per-mode layer.
    pub executed: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input_digest: String,
    pub mode: Mode,
    pub num_qubits: usize,
    pub metrics: Metrics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<Vec<TransformedObservable>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absorption: Option<ProbabilityAbsorption>,
    pub artifacts: Artifacts,
}

impl Report {
    pub fn load(path: &Path) -> Result<Self> {
        let mut r: Report = serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        for o in r.observables.iter_mut().flatten() {
            o.basis_layer = basis_layer(&o.transformed);
        }
        Ok(r)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let h = Sha256::digest(bytes);
    let hex: String = h.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// `dir/stem.qasm` -> `dir/stem_<suffix>.qasm`
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("optimized");
    out.with_file_name(format!("{stem}_{suffix}.qasm"))
}

/// Whether a command succeeded or a check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Failed,
}

pub fn optimize(args: &OptimizeArgs) -> Result<Report> {
    let bytes = std::fs::read(&args.input)?;
    let text = String::from_utf8_lossy(&bytes);
    let mut problem = Problem::from_json(&text)?;
    if let Some(m) = args.mode {
        problem.mode = m.into();
    }
    if problem.mode == Mode::Observables && problem.observables.is_empty() {
        return Err(Error::Schema(
            "observable mode needs an \"observables\" list".into(),
        ));
    }

    let native = native_circuit(&problem.terms)?;
    let r = extract(&problem.terms)?;
    let optimized = if args.no_peephole {
        r.opt_circuit.clone()
    } else {
        peephole(&r.opt_circuit)
    };
    write(&args.out, &optimized.to_qasm())?;
    write(&args.clifford, &r.extracted.to_qasm())?;

    let mut report = Report {
        input_digest: digest(&bytes),
        mode: problem.mode,
        num_qubits: problem.num_qubits,
        metrics: Metrics {
            cnot_before: native.cnot_count(),
            cnot_after: optimized.cnot_count(),
            entangling_depth_before: native.entangling_depth(),
            entangling_depth_after: optimized.entangling_depth(),
            rotation_count: r.stats.rotations,
        },
        observables: None,
        absorption: None,
        artifacts: Artifacts {
            optimized: args.out.clone(),
            clifford: args.clifford.clone(),
            executed: Vec::new(),
        },
    };

    match problem.mode {
        Mode::Observables => {
            let recs = absorb_observables(&r.tableau, &problem.observables)?;
            for (i, rec) in recs.iter().enumerate() {
                let path = sibling(&args.out, &format!("obs{i}"));
                write(&path, &rec.measurement_circuit(&optimized)?.to_qasm())?;
                report.artifacts.executed.push(path);
            }
            report.observables = Some(recs);
        }
        Mode::Probabilities => {
            let pa = absorb_probabilities(&r.extracted)?;
            let path = sibling(&args.out, "exec");
            let exec = pa.executed_circuit(&optimized)?;
            report.metrics.cnot_after = exec.cnot_count();
            report.metrics.entangling_depth_after = exec.entangling_depth();
            write(&path, &exec.to_qasm())?;
            report.artifacts.executed.push(path);
            report.absorption = Some(pa);
        }
    }
    write(&args.report, &serde_json::to_string_pretty(&report)?)?;
    info!(
        "CNOTs {} -> {}, entangling depth {} -> {}",
        report.metrics.cnot_before,
        report.metrics.cnot_after,
        report.metrics.entangling_depth_before,
        report.metrics.entangling_depth_after
    );
    Ok(report)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

pub fn postprocess(args: &PostprocessArgs) -> Result<CountsHistogram> {
    let report = Report::load(&args.report)?;
    let pa = report.absorption.ok_or_else(|| {
        Error::Schema("report has no \"absorption\" section (not a probability-mode report)".into())
    })?;
    let h: CountsHistogram = serde_json::from_str(&std::fs::read_to_string(&args.counts)?)
        .map_err(|e| Error::Schema(format!("{}: {e}", args.counts.display())))?;
    if h.num_qubits() != report.num_qubits {
        return Err(Error::LengthMismatch {
            expected: report.num_qubits,
            found: h.num_qubits(),
        });
    }
    let out = postprocess_counts(&pa, &h)?;
    emit(args.out.as_deref(), &serde_json::to_string_pretty(&out)?)?;
    Ok(out)
}

pub fn map_values(args: &MapArgs) -> Result<Vec<f64>> {
    let report = Report::load(&args.report)?;
    let recs = report.observables.ok_or_else(|| {
        Error::Schema(
            "report has no \"observables\" section (not an observable-mode report)".into(),
        )
    })?;
    let values: Vec<f64> = serde_json::from_str(&std::fs::read_to_string(&args.values)?)
        .map_err(|e| Error::Schema(format!("{}: {e}", args.values.display())))?;
    let out = map_expectations(&recs, &values)?;
    emit(args.out.as_deref(), &serde_json::to_string(&out)?)?;
    Ok(out)
}

/// One named check of [`verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn parity_expectation(probs: &[f64], n: usize, qubits: &[usize]) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let odd = qubits
                .iter()
                .filter(|&&q| idx >> (n - 1 - q) & 1 == 1)
                .count()
                % 2
                == 1;
            if odd {
                -p
            } else {
                *p
            }
        })
        .sum()
}

fn load_qasm(path: &Path) -> Result<Circuit> {
    Circuit::from_qasm(&std::fs::read_to_string(path)?)
}

pub fn verify(args: &VerifyArgs) -> Result<Vec<Check>> {
    let bytes = std::fs::read(&args.input)?;
    let problem = Problem::from_json(&String::from_utf8_lossy(&bytes))?;
    let report = Report::load(&args.report)?;
    let n = problem.num_qubits;
    let oracle = DenseOracle::new(args.max_qubits);
    if n > args.max_qubits {
        return Err(Error::TooLarge {
            n,
            cap: args.max_qubits,
        });
    }
    let tol = args.tol;
    let mut checks = Vec::new();

    let d = digest(&bytes);
    checks.push(check("input digest", d == report.input_digest, d));

    let optimized = load_qasm(&report.artifacts.optimized)?;
    let clifford = load_qasm(&report.artifacts.clifford)?;
    let executed: Vec<Circuit> = report
        .artifacts
        .executed
        .iter()
        .map(|p| load_qasm(p))
        .collect::<Result<_>>()?;

    let reference = oracle.product_unitary(n, problem.terms.iter().map(|t| (&t.pauli, t.coeff)))?;
    let full = oracle.circuit_unitary(&optimized.then(&clifford)?)?;
    let same = equivalent_up_to_phase(&reference, &full, tol)?;
    checks.push(check(
        "unitary round trip",
        same,
        "optimized then clifford vs product of rotations",
    ));

    let counted = match report.mode {
        Mode::Probabilities => executed.first().unwrap_or(&optimized),
        Mode::Observables => &optimized,
    };
    checks.push(check(
        "metrics",
        counted.cnot_count() == report.metrics.cnot_after
            && counted.entangling_depth() == report.metrics.entangling_depth_after,
        format!(
            "{} CNOTs, depth {}",
            counted.cnot_count(),
            counted.entangling_depth()
        ),
    ));

    let mut zero = vec![num_complex::Complex64::new(0.0, 0.0); 1 << n];
    zero[0] = num_complex::Complex64::new(1.0, 0.0);
    let psi = crate::oracle::apply_unitary(&reference, &zero);

    match report.mode {
        Mode::Observables => {
            let recs = report.observables.as_deref().unwrap_or_default();
            let ok_len = recs.len() == problem.observables.len() && recs.len() == executed.len();
            checks.push(check(
                "observable count",
                ok_len,
                format!("{} records", recs.len()),
            ));
            for (i, (rec, circ)) in recs.iter().zip(&executed).enumerate() {
                let want =
                    crate::oracle::expectation_in_state(&oracle.pauli_matrix(&rec.original)?, &psi);
                let probs = oracle.probabilities(circ)?;
                let got = rec.sign() * parity_expectation(&probs, n, &rec.measured_qubits());
                checks.push(check(
                    format!("observable {i} ({})", rec.original),
                    (want - got).abs() <= tol,
                    format!("original {want:.12} vs absorbed {got:.12}"),
                ));
            }
        }
        Mode::Probabilities => {
            let pa = report
                .absorption
                .as_ref()
                .ok_or_else(|| Error::Schema("report has no \"absorption\" section".into()))?;
            let circ = executed
                .first()
                .ok_or_else(|| Error::Schema("report lists no executed circuit".into()))?;
            let want: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
            let got = postprocess_distribution(pa, &oracle.probabilities(circ)?)?;
            let diff = want
                .iter()
                .zip(&got)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            checks.push(check(
                "distribution",
                diff <= tol,
                format!("max deviation {diff:.3e}"),
            ));
        }
    }
    Ok(checks)
}

fn schedule(a: &Angles) -> Result<Schedule> {
    let mut s = Schedule::default_for(a.layers);
    for (name, given, slot) in [
        ("gamma", &a.gamma, &mut s.gammas),
        ("beta", &a.beta, &mut s.betas),
    ] {
        if given.is_empty() {
            continue;
        }
        if given.len() != a.layers {
            return Err(Error::Schema(format!(
                "--{name} needs {} value(s), got {}",
                a.layers,
                given.len()
            )));
        }
        *slot = given.clone();
    }
    Ok(s)
}

pub fn gen(args: &GenArgs) -> Result<Problem> {
    let (spec, angles) = match &args.kind {
        GenKind::Maxcut {
            nodes,
            degree,
            edges,
            seed,
            angles,
        } => {
            let kind = match (degree, edges) {
                (Some(d), _) => ProblemKind::MaxcutRegular { degree: *d },
                (None, Some(e)) => ProblemKind::MaxcutRandom { edges: *e },
                (None, None) => return Err(Error::Schema("give --degree or --edges".into())),
            };
            (
                ProblemSpec {
                    kind,
                    nodes: *nodes,
                    seed: *seed,
                    schedule: schedule(angles)?,
                },
                angles,
            )
        }
        GenKind::Labs { n, angles } => (
            ProblemSpec {
                kind: ProblemKind::Labs,
                nodes: *n,
                seed: 0,
                schedule: schedule(angles)?,
            },
            angles,
        ),
    };
    let observables = angles
        .observables
        .iter()
        .map(|o| o.parse())
        .collect::<Result<Vec<_>>>()?;
    let problem = Problem::new(spec.terms()?, observables, None)?;
    write(&angles.out, &problem.to_json())?;
    Ok(problem)
}

/// Runs one command and prints its summary. Verification failures map to
/// [`Outcome::Failed`]; everything else that goes wrong is an `Err`.
pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Optimize(a) => {
            let r = optimize(&a)?;
            println!(
                "{}: {} rotations, CNOTs {} -> {}, entangling depth {} -> {}",
                r.mode.as_str(),
                r.metrics.rotation_count,
                r.metrics.cnot_before,
                r.metrics.cnot_after,
                r.metrics.entangling_depth_before,
                r.metrics.entangling_depth_after
            );
            if let Some(pa) = &r.absorption {
                println!(
                    "h_mask {:?}, network of {} CNOTs",
                    pa.h_mask,
                    pa.network.len()
                );
            }
            for o in r.observables.iter().flatten() {
                println!("{} -> {}", o.original, o.transformed);
            }
            Ok(Outcome::Ok)
        }
        Command::Postprocess(a) => {
            postprocess(&a)?;
            Ok(Outcome::Ok)
        }
        Command::MapExpectations(a) => {
            map_values(&a)?;
            Ok(Outcome::Ok)
        }
        Command::Verify(a) => {
            let checks = verify(&a)?;
            for c in &checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            Ok(if checks.iter().all(|c| c.passed) {
                Outcome::Ok
            } else {
                Outcome::Failed
            })
        }
        Command::Gen(a) => {
            let p = gen(&a)?;
            println!("{} terms on {} qubits", p.terms.len(), p.num_qubits);
            Ok(Outcome::Ok)
        }
    }
}
