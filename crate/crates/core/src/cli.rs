//! Command-line front end. Every command writes its report to the given writer so the
//! output can be captured byte for byte.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hmm::{
    brute_force_best_sequence, enumeration_cap, train_mle_with_tags, HmmError, HmmModel,
    Observation, TaggedCorpus,
};
use crate::qmax::{bench_csv, benchmark, log_log_slope, summarize, QueryLedger};
use crate::qsim::{
    build_grover_circuit, gate_histogram, optimal_iterations, Circuit, GateHistogram,
    MarkPredicate, QsimError,
};
use crate::qviterbi::{
    quantum_brute_force, quantum_viterbi, step_count_report, QviterbiError,
    REFERENCE_REDUCTION_PERCENT, REFERENCE_T_PER_CALL, REFERENCE_T_PER_CALL_OPTIMIZED,
};
use crate::viterbi::{classical_viterbi, classical_viterbi_with, ScoreMode, TagPath};
use crate::zx::{
    circuit_to_diagram, diagram_t_count, diagram_to_tensor, equal_up_to_scalar, full_simplify,
    ZxError,
};

/// Largest circuit width accepted by `zx-opt --verify`.
pub const MAX_VERIFY_QUBITS: usize = 8;
/// Tolerance of the tensor comparison after scalar alignment.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Hmm(#[from] HmmError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Zx(#[from] ZxError),
    #[error(transparent)]
    Qviterbi(#[from] QviterbiError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Parser, Debug)]
#[command(
    name = "qpos",
    version,
    about = "HMM tagging with classical and simulated-quantum Viterbi, and ZX T-count optimization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Classical,
    Quantum,
    Brute,
    /// Quantum maximum finding over all K^W sequence probabilities at once.
    QuantumBrute,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Train a model from a word<TAB>tag corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Output model file.
        #[arg(long)]
        out: PathBuf,
        /// Explicit comma-separated tag inventory (default: tags seen in the corpus).
        #[arg(long, value_delimiter = ',')]
        tags: Option<Vec<String>>,
    },
    /// Tag a sentence.
    Tag {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Classical)]
        backend: Backend,
        /// Required by the quantum backends.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 3)]
        retries: usize,
        /// Score in natural logs (classical backend only).
        #[arg(long)]
        log_space: bool,
        /// Write the trellis as TSV.
        #[arg(long)]
        trellis: Option<PathBuf>,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Benchmark quantum maximum finding on random lists.
    QmaxBench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Write the per-trial CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Simplify a circuit's ZX diagram and report T-counts.
    ZxOpt {
        circuit: PathBuf,
        /// Check tensor equality of the diagram before and after simplification.
        #[arg(long)]
        verify: bool,
        /// Plug every input with |0>.
        #[arg(long)]
        zero_inputs: bool,
        /// Write the simplified diagram here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the rewrite trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the simplified diagram in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Emit a compiled Grover circuit in the circuit text format.
    GroverCircuit {
        #[arg(long, default_value_t = 5)]
        qubits: usize,
        /// Marked basis states (comma-separated).
        #[arg(long, value_delimiter = ',', default_value = "22")]
        marked: Vec<usize>,
        /// Default: the optimal count for the marked set.
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical versus quantum step counts, with measured decodes on random models.
    Report {
        #[arg(long, default_value_t = 5)]
        tags: usize,
        #[arg(long, default_value_t = 5)]
        words: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        retries: usize,
    },
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli, out)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match cli.command {
        Command::Train {
            corpus,
            alpha,
            out: model_out,
            tags,
        } => cmd_train(&corpus, alpha, &model_out, tags.as_deref())?,
        Command::Tag {
            model,
            backend,
            seed,
            retries,
            log_space,
            trellis,
            words,
        } => cmd_tag(
            &model,
            backend,
            seed,
            retries,
            log_space,
            trellis.as_deref(),
            &words,
        )?,
        Command::QmaxBench {
            sizes,
            trials,
            seed,
            csv,
        } => cmd_qmax_bench(&sizes, trials, seed, csv.as_deref())?,
        Command::ZxOpt {
            circuit,
            verify,
            zero_inputs,
            out: diagram_out,
            trace,
            dot,
        } => {
            let c: Circuit = read_file(&circuit)?.parse()?;
            let (report, outputs) = zx_opt_report(&c, verify, zero_inputs)?;
            if let Some(p) = diagram_out {
                write_file(&p, &outputs.diagram)?;
            }
            if let Some(p) = trace {
                write_file(&p, &outputs.trace)?;
            }
            if let Some(p) = dot {
                write_file(&p, &outputs.dot)?;
            }
            report.to_string()
        }
        Command::GroverCircuit {
            qubits,
            marked,
            iterations,
            out: path,
        } => {
            if qubits == 0 || qubits > 8 {
                return Err(CliError::Usage("--qubits must be between 1 and 8".into()));
            }
            let dim = 1usize << qubits;
            if let Some(&bad) = marked.iter().find(|&&m| m >= dim) {
                return Err(CliError::Usage(format!(
                    "marked state {bad} needs more than {qubits} qubits"
                )));
            }
            let mark = MarkPredicate::from_indices(dim, marked.iter().copied());
            let rounds = iterations.unwrap_or_else(|| optimal_iterations(qubits, mark.count()));
            let text = build_grover_circuit(qubits, &mark, rounds)?.to_text();
            match path {
                Some(p) => {
                    write_file(&p, &text)?;
                    format!("wrote {} ({} rounds)\n", p.display(), rounds)
                }
                None => text,
            }
        }
        Command::Report {
            tags,
            words,
            seed,
            trials,
            retries,
        } => cmd_report(tags, words, seed, trials, retries)?,
    };
    out.write_all(text.as_bytes()).map_err(io)
}

fn cmd_train(
    corpus: &Path,
    alpha: f64,
    model_out: &Path,
    tags: Option<&[String]>,
) -> Result<String, CliError> {
    let c = TaggedCorpus::load(corpus)?;
    let m = train_mle_with_tags(&c, alpha, tags)?;
    m.save(model_out)?;
    Ok(format!(
        "K = {}\nN = {}\nsentences = {}\nwrote {}\n",
        m.k(),
        m.n(),
        c.len(),
        model_out.display()
    ))
}

fn format_path(m: &HmmModel, words: &[String], flags: &[bool], path: &TagPath) -> String {
    let mut s = String::new();
    for ((w, &t), &unk) in words.iter().zip(&path.states).zip(flags) {
        let mark = if unk { " (unknown word)" } else { "" };
        writeln!(s, "{w}/{}{mark}", m.tagset().label(t)).unwrap();
    }
    s
}

fn ledger_summary(l: &QueryLedger) -> String {
    format!(
        "oracle queries: {}\nthreshold updates: {}\nsearch rounds: {}\n",
        l.oracle_queries,
        l.threshold_updates,
        l.iterations_log.len()
    )
}

fn cmd_tag(
    model: &Path,
    backend: Backend,
    seed: Option<u64>,
    retries: usize,
    log_space: bool,
    trellis: Option<&Path>,
    words: &[String],
) -> Result<String, CliError> {
    let m = HmmModel::load(model)?;
    let (obs, flags) = m.observe(words)?;
    let need_seed = || {
        seed.ok_or_else(|| CliError::Usage("--seed is required for the quantum backends".into()))
    };
    let mut s = String::new();
    match backend {
        Backend::Classical => {
            let mode = if log_space {
                ScoreMode::Log
            } else {
                ScoreMode::Linear
            };
            let (path, t, stats) = classical_viterbi_with(&m, &obs, mode)?;
            if let Some(p) = trellis {
                write_file(p, &t.to_tsv())?;
            }
            s += &format_path(&m, words, &flags, &path);
            let label = if log_space { "log score" } else { "score" };
            writeln!(s, "{label}: {:e}", path.score).unwrap();
            writeln!(s, "candidate evaluations: {}", stats.candidate_evaluations).unwrap();
        }
        Backend::Brute => {
            let (states, p) = brute_force_best_sequence(&m, &obs)?;
            let path = TagPath { states, score: p };
            s += &format_path(&m, words, &flags, &path);
            writeln!(s, "score: {p:e}").unwrap();
        }
        Backend::Quantum => {
            let mut rng = ChaCha8Rng::seed_from_u64(need_seed()?);
            let q = quantum_viterbi(&m, &obs, &mut rng, retries)?;
            if let Some(p) = trellis {
                write_file(p, &q.trellis.to_tsv())?;
            }
            s += &format_path(&m, words, &flags, &q.path);
            writeln!(s, "score: {:e}", q.path.score).unwrap();
            writeln!(s, "retries per cell: {retries}").unwrap();
            let ok = q.cells.iter().filter(|c| c.success).count();
            writeln!(s, "cells at their maximum: {ok}/{}", q.cells.len()).unwrap();
            s += &ledger_summary(&q.ledger);
        }
        Backend::QuantumBrute => {
            let mut rng = ChaCha8Rng::seed_from_u64(need_seed()?);
            let (path, ledger) =
                quantum_brute_force(&m, &obs, &mut rng, retries, enumeration_cap())?;
            s += &format_path(&m, words, &flags, &path);
            writeln!(s, "score: {:e}", path.score).unwrap();
            s += &ledger_summary(&ledger);
        }
    }
    Ok(s)
}

fn cmd_qmax_bench(
    sizes: &[usize],
    trials: usize,
    seed: u64,
    csv: Option<&Path>,
) -> Result<String, CliError> {
    if sizes.is_empty() {
        return Err(CliError::Usage("--sizes needs at least one size".into()));
    }
    if let Some(&l) = sizes.iter().find(|&&l| l == 0 || l > 1 << 20) {
        return Err(CliError::Usage(format!("size {l} outside 1..=2^20")));
    }
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let rows = benchmark(sizes, trials, seed);
    let table = bench_csv(&rows);
    let mut s = String::new();
    match csv {
        Some(p) => write_file(p, &table)?,
        None => s += &table,
    }
    let summary = summarize(&rows);
    writeln!(
        s,
        "# l trials success_rate mean_queries budget mean_first_hit mean_first_hit_with_checks"
    )
    .unwrap();
    for x in &summary {
        writeln!(
            s,
            "# {} {} {:.3} {:.2} {} {:.3} {:.3}",
            x.l,
            x.trials,
            x.success_rate,
            x.mean_queries,
            x.budget,
            x.mean_first_hit,
            x.mean_first_hit_with_checks
        )
        .unwrap();
    }
    let usable: Vec<_> = summary
        .iter()
        .filter(|x| x.l > 1 && x.mean_first_hit > 0.0)
        .collect();
    if usable.len() >= 2 {
        let pts: Vec<(f64, f64)> = usable
            .iter()
            .map(|x| (x.l as f64, x.mean_first_hit))
            .collect();
        let pts2: Vec<(f64, f64)> = usable
            .iter()
            .map(|x| (x.l as f64, x.mean_first_hit_with_checks))
            .collect();
        writeln!(
            s,
            "# log-log slope of mean first-hit queries: {:.4}",
            log_log_slope(&pts)
        )
        .unwrap();
        writeln!(
            s,
            "# same, one query charged per comparison: {:.4}",
            log_log_slope(&pts2)
        )
        .unwrap();
    } else {
        writeln!(s, "# log-log slope: n/a (need two sizes above 1)").unwrap();
    }
    Ok(s)
}

/// Files produced by `zx-opt` besides the report.
pub struct ZxOptOutputs {
    pub diagram: String,
    pub trace: String,
    pub dot: String,
}

/// Gate histogram plus diagram T-counts before and after simplification.
#[derive(Clone, Debug, PartialEq)]
pub struct ZxOptReport {
    pub qubits: usize,
    pub histogram: GateHistogram,
    pub t_before: usize,
    pub t_after: usize,
    pub rewrite_steps: usize,
    /// `Some(equal)` when verification was requested.
    pub verified: Option<bool>,
}

impl ZxOptReport {
    pub fn reduction_percent(&self) -> f64 {
        if self.t_before == 0 {
            0.0
        } else {
            100.0 * (self.t_before - self.t_after) as f64 / self.t_before as f64
        }
    }
}

impl fmt::Display for ZxOptReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits: {}", self.qubits)?;
        writeln!(f, "gate histogram:")?;
        writeln!(f, "{}", self.histogram)?;
        writeln!(f, "rewrite steps: {}", self.rewrite_steps)?;
        writeln!(
            f,
            "{:<10} {:>8} {:>8} {:>10}",
            "", "before", "after", "reduction"
        )?;
        writeln!(
            f,
            "{:<10} {:>8} {:>8} {:>9.2}%",
            "ours",
            self.t_before,
            self.t_after,
            self.reduction_percent()
        )?;
        writeln!(
            f,
            "{:<10} {:>8} {:>8} {:>9.2}%",
            "reference",
            REFERENCE_T_PER_CALL,
            REFERENCE_T_PER_CALL_OPTIMIZED,
            REFERENCE_REDUCTION_PERCENT
        )?;
        match self.verified {
            Some(true) => writeln!(f, "verified: equal up to scalar")?,
            Some(false) => writeln!(f, "verified: NOT equal")?,
            None => {}
        }
        Ok(())
    }
}

pub fn zx_opt_report(
    c: &Circuit,
    verify: bool,
    zero_inputs: bool,
) -> Result<(ZxOptReport, ZxOptOutputs), CliError> {
    if verify && c.n_qubits() > MAX_VERIFY_QUBITS {
        return Err(CliError::Usage(format!(
            "--verify supports at most {MAX_VERIFY_QUBITS} qubits, circuit has {}",
            c.n_qubits()
        )));
    }
    let mut d = circuit_to_diagram(c);
    if zero_inputs {
        d.plug_all_inputs_zero();
    }
    let (g, trace) = full_simplify(&d);
    let verified = if verify {
        let a = diagram_to_tensor(&d)?;
        let b = diagram_to_tensor(&g)?;
        Some(equal_up_to_scalar(&a, &b, VERIFY_TOL))
    } else {
        None
    };
    let report = ZxOptReport {
        qubits: c.n_qubits(),
        histogram: gate_histogram(c),
        t_before: diagram_t_count(&d),
        t_after: diagram_t_count(&g),
        rewrite_steps: trace.len(),
        verified,
    };
    let outputs = ZxOptOutputs {
        diagram: g.to_text(),
        trace: trace.to_string(),
        dot: g.to_dot(),
    };
    Ok((report, outputs))
}

fn cmd_report(
    tags: usize,
    words: usize,
    seed: u64,
    trials: usize,
    retries: usize,
) -> Result<String, CliError> {
    if tags == 0 || words < 2 {
        return Err(CliError::Usage("need --tags >= 1 and --words >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = 2 * tags;
    let mut ledgers = Vec::with_capacity(trials);
    let mut agree = 0;
    for _ in 0..trials {
        let m = HmmModel::random(tags, vocab, &mut rng);
        let ids: Vec<usize> = (0..words).map(|_| rng.gen_range(0..vocab)).collect();
        let obs = Observation::new(ids, vocab)?;
        let (c, _) = classical_viterbi(&m, &obs)?;
        let q = quantum_viterbi(&m, &obs, &mut rng, retries)?;
        agree += (q.path.states == c.states) as usize;
        ledgers.push(q.ledger);
    }
    let r = step_count_report(tags as u64, words as u64, &ledgers);
    let mut s = r.to_string();
    writeln!(
        s,
        "decodes: {trials} random models; each of the {} cells and the final argmax runs {retries} time(s), \
         so the per-decode bound with retries is {}",
        r.cells,
        (r.cells + 1) * retries as u64 * (r.analytic_bound / r.cells)
    )
    .unwrap();
    if trials > 0 {
        writeln!(s, "agreement with classical decoder: {agree}/{trials}").unwrap();
    }
    Ok(s)
}

/// Entry point of the binary: exit status 0 on success, 2 for usage errors, 1 otherwise.
pub fn main_entry() -> ExitCode {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
