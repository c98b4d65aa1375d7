use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use hmom_core::classes::{classify, is_f_nnd, is_f_pd, ClassName};
use hmom_core::extensions::{extend, random_f, ExtensionMode, ExtensionPolicy};
use hmom_core::intervals::{endpoints, is_completely_degenerate, verify_parallel_identity};
use hmom_core::matrix::{is_psd, min_eig, numerical_rank};
use hmom_core::verify::{generate_corpus, limits, max_residuals, run_batch, CorpusShape, Suite};
use hmom_core::{MomentSequence, Tolerances};
use serde_json::json;

use crate::document::{matrix_to_json, parse_matrix, SequenceDocument, ToleranceOverrides};
use crate::report::{digest, Report, ResidualEntry, VerdictEntry};

/// Why a command did not pass.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input; exit status 2.
    Usage(String),
    /// A mathematical requirement failed; exit status 1.
    Math(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Math(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Math(m) => m,
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn math(e: impl ToString) -> Failure {
    Failure::Math(e.to_string())
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct TolFlags {
    /// Hermitian-ness tolerance (relative).
    #[arg(long, global = true)]
    pub tol_herm: Option<f64>,
    /// Eigenvalue tolerance for PSD tests (relative).
    #[arg(long, global = true)]
    pub tol_psd: Option<f64>,
    /// Per-dimension relative rank cutoff.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Range-inclusion tolerance (relative).
    #[arg(long, global = true)]
    pub tol_range: Option<f64>,
}

impl TolFlags {
    fn overrides(&self) -> ToleranceOverrides {
        ToleranceOverrides {
            tol_herm: self.tol_herm,
            tol_psd: self.tol_psd,
            rtol_rank: self.tol_rank,
            tol_range: self.tol_range,
        }
    }
}

pub const ENV_VARS: [&str; 4] = [
    "HMOM_TOL_HERM",
    "HMOM_TOL_PSD",
    "HMOM_TOL_RANK",
    "HMOM_TOL_RANGE",
];

fn env_overrides() -> Result<ToleranceOverrides, Failure> {
    let read = |name: &str| -> Result<Option<f64>, Failure> {
        match std::env::var(name) {
            Ok(v) => v
                .trim()
                .parse::<f64>()
                .map(Some)
                .map_err(|_| usage(format!("{name}={v} is not a number"))),
            Err(_) => Ok(None),
        }
    };
    Ok(ToleranceOverrides {
        tol_herm: read(ENV_VARS[0])?,
        tol_psd: read(ENV_VARS[1])?,
        rtol_rank: read(ENV_VARS[2])?,
        tol_range: read(ENV_VARS[3])?,
    })
}

/// Defaults, then environment, then the document, then flags.
pub fn resolve_tolerances(
    document: Option<&ToleranceOverrides>,
    flags: &TolFlags,
) -> Result<Tolerances, Failure> {
    let mut tol = env_overrides()?.apply(Tolerances::default());
    if let Some(d) = document {
        tol = d.apply(tol);
    }
    tol = flags.overrides().apply(tol);
    tol.validate().map_err(usage)?;
    Ok(tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Lower,
    Upper,
    Central,
    Ball,
    Explicit,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every class test on a sequence.
    Check {
        file: PathBuf,
        /// Class whose verdict decides the exit status.
        #[arg(long, default_value = "Fnnd")]
        require: ClassName,
    },
    /// Interval of admissible next moments after index `m`.
    Interval {
        file: PathBuf,
        /// Index of the last moment used (default: the last one).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Append moments by a fixed rule and write the extended document.
    Extend {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// q x q matrix: the contraction for `ball`, the next moment for `explicit`.
        #[arg(long)]
        k_file: Option<PathBuf>,
        /// Write the document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random sequence in the nonnegative class.
    Random {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw from the positive class.
        #[arg(long)]
        pd: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run identity suites on a document or on a generated corpus.
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        /// Number of generated sequences.
        #[arg(long)]
        random: Option<usize>,
        /// First corpus seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Suite to run; repeatable. Default: all.
        #[arg(long)]
        suite: Vec<Suite>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Interval { .. } => "interval",
            Command::Extend { .. } => "extend",
            Command::Random { .. } => "random",
            Command::Verify { .. } => "verify",
        }
    }

    /// Whether the command's main output is a sequence document.
    pub fn writes_document(&self) -> bool {
        matches!(self, Command::Extend { .. } | Command::Random { .. })
    }
}

/// Filled-in report plus, for `extend` and `random`, the serialized document.
pub struct Output {
    pub document: Option<String>,
    pub out: Option<PathBuf>,
}

fn read_input(path: &Path, report: &mut Report) -> Result<SequenceDocument, Failure> {
    let bytes =
        std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    report.input_digest = Some(digest(&bytes));
    let text =
        String::from_utf8(bytes).map_err(|_| usage(format!("{} is not UTF-8", path.display())))?;
    SequenceDocument::parse(&text).map_err(usage)
}

fn load(
    path: &Path,
    flags: &TolFlags,
    report: &mut Report,
) -> Result<(SequenceDocument, MomentSequence), Failure> {
    let doc = read_input(path, report)?;
    let tol = resolve_tolerances(doc.tolerances.as_ref(), flags)?;
    report.tolerances = Some(tol);
    let seq = doc.to_sequence(tol).map_err(usage)?;
    Ok((doc, seq))
}

pub fn run(cmd: &Command, flags: &TolFlags, report: &mut Report) -> Result<Output, Failure> {
    let none = Output {
        document: None,
        out: None,
    };
    match cmd {
        Command::Check { file, require } => {
            let (_, seq) = load(file, flags, report)?;
            check(&seq, *require, report)?;
            Ok(none)
        }
        Command::Interval { file, m } => {
            let (_, seq) = load(file, flags, report)?;
            interval(&seq, *m, report)?;
            Ok(none)
        }
        Command::Extend {
            file,
            mode,
            steps,
            k_file,
            out,
        } => {
            let (doc, seq) = load(file, flags, report)?;
            let extended = extend_cmd(&seq, *mode, *steps, k_file.as_deref(), report)?;
            let text = SequenceDocument::from_sequence(&extended, doc.tolerances).to_json();
            report.result["document_digest"] = json!(digest(text.as_bytes()));
            Ok(Output {
                document: Some(text),
                out: out.clone(),
            })
        }
        Command::Random {
            q,
            alpha,
            beta,
            m,
            seed,
            pd,
            out,
        } => {
            let seq = random_f(*q, *alpha, *beta, *m, *seed, *pd).map_err(usage)?;
            let tol = resolve_tolerances(None, flags)?;
            report.tolerances = Some(tol);
            let checked = seq.clone().with_tolerances(tol).map_err(usage)?;
            let v = if *pd {
                is_f_pd(&checked)
            } else {
                is_f_nnd(&checked)
            }
            .map_err(math)?;
            report
                .verdicts
                .push(VerdictEntry::new(if *pd { "Fpd" } else { "Fnnd" }, &v));
            let text = SequenceDocument::from_sequence(&seq, None).to_json();
            report.result = json!({
                "q": q, "alpha": alpha, "beta": beta, "m": m, "seed": seed, "pd": pd,
                "document_digest": digest(text.as_bytes()),
            });
            report.passed = v.status.holds();
            if !report.passed {
                return Err(math(format!(
                    "generated sequence failed its class test ({})",
                    v.detail
                )));
            }
            Ok(Output {
                document: Some(text),
                out: out.clone(),
            })
        }
        Command::Verify {
            file,
            random,
            seed,
            suite,
        } => {
            let suites: Vec<Suite> = if suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suite.clone()
            };
            let seqs = match (file, random) {
                (Some(path), _) => vec![load(path, flags, report)?.1],
                (None, Some(n)) => {
                    let tol = resolve_tolerances(None, flags)?;
                    report.tolerances = Some(tol);
                    generate_corpus(*n, *seed, CorpusShape::default())
                        .map_err(math)?
                        .into_iter()
                        .map(|e| e.seq.with_tolerances(tol))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(usage)?
                }
                (None, None) => return Err(usage("give a file or --random N")),
            };
            verify(&seqs, &suites, report)?;
            Ok(none)
        }
    }
}

fn check(seq: &MomentSequence, require: ClassName, report: &mut Report) -> Result<(), Failure> {
    let classes = classify(seq).map_err(math)?;
    for (name, v) in &classes.verdicts {
        report.verdicts.push(VerdictEntry::new(name.as_str(), v));
    }
    let required = classes.get(require);
    report.passed = required.status.holds();
    report.result = json!({
        "q": seq.q(),
        "m": seq.m(),
        "alpha": seq.alpha(),
        "beta": seq.beta(),
        "require": require.as_str(),
        "required_status": required.status,
        "inconsistencies": classes.inconsistencies,
    });
    if report.passed {
        Ok(())
    } else {
        Err(math(format!(
            "{require} is {} ({} at order {:?}, eigenvalue {:e})",
            required.status, required.detail, required.failing_index, required.witness_eig
        )))
    }
}

fn interval(seq: &MomentSequence, m: Option<usize>, report: &mut Report) -> Result<(), Failure> {
    let m = m.unwrap_or(seq.m());
    if m > seq.m() {
        return Err(usage(format!("--m {m} exceeds the last index {}", seq.m())));
    }
    let prefix = seq.prefix(m).map_err(usage)?;
    let member = is_f_nnd(&prefix).map_err(math)?;
    report.verdicts.push(VerdictEntry::new("Fnnd", &member));
    if !member.status.holds() {
        return Err(math(format!(
            "s_0..s_{m} is not a nonnegative Hausdorff sequence ({} fails, eigenvalue {:e})",
            member.detail, member.witness_eig
        )));
    }
    let e = endpoints(seq, m).map_err(math)?;
    let d_psd = is_psd(&e.d, seq.tol()).map_err(math)?;
    let degenerate = is_completely_degenerate(&prefix).map_err(math)?;
    report
        .verdicts
        .push(VerdictEntry::new("length_psd", &d_psd));
    report
        .verdicts
        .push(VerdictEntry::new("completely_degenerate", &degenerate));
    let parallel = verify_parallel_identity(&prefix).map_err(math)?;
    report.residuals.push(ResidualEntry::new(
        "parallel_sum_0",
        parallel.d0,
        limits::PARALLEL,
    ));
    for (k, r) in parallel.per_index.iter().enumerate() {
        report.residuals.push(ResidualEntry::new(
            format!("parallel_sum_{}", k + 1),
            *r,
            limits::PARALLEL,
        ));
    }
    report.result = json!({
        "m": m,
        "a": matrix_to_json(&e.a),
        "b": matrix_to_json(&e.b),
        "c": matrix_to_json(&e.c),
        "d": matrix_to_json(&e.d),
        "u": matrix_to_json(&e.u),
        "o": e.o.as_ref().map(matrix_to_json),
        "length_min_eig": min_eig(&e.d),
        "length_rank": numerical_rank(&e.d, seq.tol()),
        "degenerate": degenerate.status.holds(),
    });
    report.passed = d_psd.status.holds() && report.residuals.iter().all(|r| r.passed);
    if report.passed {
        Ok(())
    } else {
        Err(math("interval diagnostics failed"))
    }
}

fn extend_cmd(
    seq: &MomentSequence,
    mode: Mode,
    steps: usize,
    k_file: Option<&Path>,
    report: &mut Report,
) -> Result<MomentSequence, Failure> {
    let matrix = |what: &str| -> Result<_, Failure> {
        let path = k_file.ok_or_else(|| usage(format!("--mode {what} needs --k-file")))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        parse_matrix(&text, seq.q(), "--k-file").map_err(usage)
    };
    let mode = match mode {
        Mode::Lower => ExtensionMode::Lower,
        Mode::Upper => ExtensionMode::Upper,
        Mode::Central => ExtensionMode::Central,
        Mode::Ball => ExtensionMode::Ball(matrix("ball")?),
        Mode::Explicit => ExtensionMode::Explicit(matrix("explicit")?),
    };
    let policy = ExtensionPolicy::new(mode, steps, seq.tol()).map_err(usage)?;
    let extended = extend(seq, &policy).map_err(math)?;
    let v = is_f_nnd(&extended).map_err(math)?;
    report.verdicts.push(VerdictEntry::new("Fnnd", &v));
    report.result = json!({ "steps": steps, "m": extended.m() });
    report.passed = v.status.holds();
    if report.passed {
        Ok(extended)
    } else {
        Err(math("extended sequence left the nonnegative class"))
    }
}

fn verify(seqs: &[MomentSequence], suites: &[Suite], report: &mut Report) -> Result<(), Failure> {
    let outcomes = run_batch(seqs, suites);
    let mut failures = Vec::new();
    let mut errors = Vec::new();
    for o in &outcomes {
        if let Some(e) = &o.error {
            errors.push(json!({ "index": o.index, "error": e }));
        }
        for r in &o.reports {
            for c in r.failures() {
                failures.push(json!({
                    "index": o.index, "suite": r.suite, "check": c.name,
                    "residual": c.residual, "tolerance": c.tolerance,
                }));
            }
        }
    }
    for &s in suites {
        let worst = outcomes
            .iter()
            .flat_map(|o| o.reports.iter().filter(move |r| r.suite == s))
            .filter_map(|r| r.worst())
            .max_by(|a, b| (a.residual / a.tolerance).total_cmp(&(b.residual / b.tolerance)));
        if let Some(c) = worst {
            report.residuals.push(ResidualEntry::new(
                format!("{s}/{}", c.name),
                c.residual,
                c.tolerance,
            ));
        }
    }
    let maxima: serde_json::Map<String, serde_json::Value> = max_residuals(&outcomes)
        .into_iter()
        .map(|(s, r)| (s.as_str().to_string(), json!(r)))
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    report.result = json!({
        "sequences": seqs.len(),
        "passed_sequences": passed,
        "suites": suites,
        "max_residuals": maxima,
        "failures": failures,
        "errors": errors,
        "parallel": hmom_core::par::is_parallel(),
    });
    report.passed = passed == seqs.len();
    if report.passed {
        Ok(())
    } else {
        Err(math(format!(
            "{} of {} sequences failed",
            seqs.len() - passed,
            seqs.len()
        )))
    }
}
