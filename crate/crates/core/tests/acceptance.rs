//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Seeds and tolerances are fixed below; nothing here is tuned to the outcome.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qpos::cli::zx_opt_report;
use qpos::hmm::{brute_force_best_sequence_with_cap, HmmModel, Observation};
use qpos::phase::Phase;
use qpos::qmax::{benchmark, log_log_slope, summarize, SearchBudget};
use qpos::qsim::{reference_grover_circuit, Circuit, Gate};
use qpos::qviterbi::{quantum_viterbi, step_count_report, QuantumDecode};
use qpos::viterbi::classical_viterbi;
use qpos::zx::{
    circuit_to_diagram, deviation_up_to_scalar, diagram_t_count, diagram_to_tensor, full_simplify,
    EdgeKind, VertexKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

const VITERBI_MODELS: u64 = 200;
const VITERBI_TIME: Duration = Duration::from_secs(10);

const QMAX_TRIALS: usize = 500;
const QMAX_SUCCESS_SIZES: [usize; 4] = [4, 8, 16, 32];
const QMAX_MIN_SUCCESS: f64 = 0.5;
const QMAX_TIME: Duration = Duration::from_secs(120);

const SLOPE_SIZES: [usize; 7] = [4, 8, 16, 32, 64, 128, 256];
const SLOPE_RANGE: (f64, f64) = (0.4, 0.6);

const QVITERBI_TRIALS: u64 = 200;
const QVITERBI_K: usize = 4;
const QVITERBI_W: usize = 5;
const QVITERBI_VOCAB: usize = 6;
const QVITERBI_RETRIES: usize = 3;
const QVITERBI_MIN_AGREEMENT: f64 = 0.95;

const ZX_CIRCUITS: usize = 500;
const ZX_MAX_QUBITS: usize = 8;
const ZX_MAX_GATES: usize = 20;
const ZX_TOL: f64 = 1e-9;
const ZX_TIME: Duration = Duration::from_secs(300);

const GHZ_TOL: f64 = 1e-9;
const GROVER_MIN_REDUCTION: f64 = 0.40;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_instance(seed: u64, max_k: usize, max_w: usize) -> (HmmModel, Observation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k: usize = rng.gen_range(1..=max_k);
    let n: usize = rng.gen_range(1..=5);
    let w: usize = rng.gen_range(1..=max_w);
    let m = HmmModel::random(k, n, &mut rng);
    let words = (0..w).map(|_| rng.gen_range(0..n)).collect();
    (m, Observation::new(words, n).unwrap())
}

fn viterbi_oracle() -> Outcome {
    let start = Instant::now();
    let mut equal = 0;
    let mut first_bad = None;
    for seed in 0..VITERBI_MODELS {
        let (m, obs) = random_instance(SEED ^ seed, 4, 6);
        let (path, _) = classical_viterbi(&m, &obs).unwrap();
        let (best, p) = brute_force_best_sequence_with_cap(&m, &obs, 1 << 20).unwrap();
        if path.states == best && path.score.to_bits() == p.to_bits() {
            equal += 1;
        } else if first_bad.is_none() {
            first_bad = Some(seed);
        }
    }
    let elapsed = start.elapsed();
    let mut detail = format!(
        "{equal}/{VITERBI_MODELS} models equal in path and score, {:.2}s (limit {}s)",
        elapsed.as_secs_f64(),
        VITERBI_TIME.as_secs()
    );
    if let Some(s) = first_bad {
        detail += &format!(", first mismatch at model {s}");
    }
    outcome(equal == VITERBI_MODELS && elapsed < VITERBI_TIME, detail)
}

fn qmax_success(rows: &[qpos::qmax::BenchRow], elapsed: Duration) -> Outcome {
    let summary = summarize(rows);
    let mut pass = elapsed < QMAX_TIME;
    let mut parts = Vec::new();
    for l in QMAX_SUCCESS_SIZES {
        let s = summary.iter().find(|s| s.l == l).unwrap();
        let in_budget = rows
            .iter()
            .filter(|r| r.l == l)
            .all(|r| r.queries <= s.budget + (l as f64).sqrt().ceil() as u64);
        pass &= s.trials >= QMAX_TRIALS && s.success_rate >= QMAX_MIN_SUCCESS && in_budget;
        parts.push(format!(
            "l={l}: {:.3} (budget {})",
            s.success_rate, s.budget
        ));
    }
    outcome(
        pass,
        format!(
            "success rates {} over {QMAX_TRIALS} trials each, threshold {QMAX_MIN_SUCCESS}, {:.2}s",
            parts.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn qmax_slope(rows: &[qpos::qmax::BenchRow]) -> Outcome {
    let summary = summarize(rows);
    let pts: Vec<(f64, f64)> = summary
        .iter()
        .map(|s| (s.l as f64, s.mean_first_hit))
        .collect();
    let checks: Vec<(f64, f64)> = summary
        .iter()
        .map(|s| (s.l as f64, s.mean_first_hit_with_checks))
        .collect();
    let slope = log_log_slope(&pts);
    let means: Vec<String> = summary
        .iter()
        .map(|s| format!("{:.2}", s.mean_first_hit))
        .collect();
    outcome(
        slope >= SLOPE_RANGE.0 && slope <= SLOPE_RANGE.1,
        format!(
            "slope {slope:.4} of mean queries to first hold of the max (required [{}, {}]); means [{}] for l = {:?}; with one query per comparison the slope is {:.4}",
            SLOPE_RANGE.0,
            SLOPE_RANGE.1,
            means.join(", "),
            SLOPE_SIZES,
            log_log_slope(&checks)
        ),
    )
}

fn qviterbi_agreement() -> Outcome {
    let mut agree = 0;
    let mut all_ok = 0;
    let mut all_ok_agree = 0;
    for t in 0..QVITERBI_TRIALS {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED.wrapping_add(t));
        let m = HmmModel::random(QVITERBI_K, QVITERBI_VOCAB, &mut rng);
        let words = (0..QVITERBI_W)
            .map(|_| rng.gen_range(0..QVITERBI_VOCAB))
            .collect();
        let obs = Observation::new(words, QVITERBI_VOCAB).unwrap();
        let (c, _) = classical_viterbi(&m, &obs).unwrap();
        let q: QuantumDecode = quantum_viterbi(&m, &obs, &mut rng, QVITERBI_RETRIES).unwrap();
        let same = q.path.states == c.states;
        agree += same as u64;
        if q.all_cells_succeeded() {
            all_ok += 1;
            all_ok_agree += same as u64;
        }
    }
    let rate = agree as f64 / QVITERBI_TRIALS as f64;
    outcome(
        rate >= QVITERBI_MIN_AGREEMENT && all_ok_agree == all_ok,
        format!(
            "paths agree in {agree}/{QVITERBI_TRIALS} ({:.1}%, required {:.0}%); all cells succeeded in {all_ok}, of which {all_ok_agree} agree",
            100.0 * rate,
            100.0 * QVITERBI_MIN_AGREEMENT
        ),
    )
}

fn step_report() -> Outcome {
    let r = step_count_report(5, 5, &[]);
    let text = r.to_string();
    let pass = r.cells == 20
        && r.t_total_optimized == 3320
        && r.t_total_per_call == 6720
        && r.printed_total_mismatch()
        && text.contains("166 x 20 = 3320")
        && text.contains("336 x 20 = 6720")
        && text.contains("336(T(W - 1)) = 316 × (5(5 - 1)) = 6320")
        && text.contains("MISMATCH");
    outcome(
        pass,
        format!(
            "cells {}, 166-based total {}, 336-based total {}, printed 6320/316 flagged: {}",
            r.cells,
            r.t_total_optimized,
            r.t_total_per_call,
            r.printed_total_mismatch()
        ),
    )
}

fn zx_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..ZX_CIRCUITS {
        let c = common::random_circuit(&mut rng, ZX_MAX_QUBITS, ZX_MAX_GATES);
        let d = circuit_to_diagram(&c);
        let (g, _) = full_simplify(&d);
        let dev = deviation_up_to_scalar(
            &diagram_to_tensor(&d).unwrap(),
            &diagram_to_tensor(&g).unwrap(),
        );
        worst = worst.max(dev);
        ok += (dev <= ZX_TOL) as usize;
    }
    let elapsed = start.elapsed();
    outcome(
        ok == ZX_CIRCUITS && elapsed < ZX_TIME,
        format!(
            "{ok}/{ZX_CIRCUITS} circuits preserved, worst deviation {worst:.2e} (tol {ZX_TOL:e}), {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn ghz() -> Outcome {
    let c = Circuit::from_gates(
        3,
        vec![
            Gate::H(0),
            Gate::Cnot {
                control: 0,
                target: 1,
            },
            Gate::Cnot {
                control: 1,
                target: 2,
            },
        ],
    )
    .unwrap();
    let mut d = circuit_to_diagram(&c);
    d.plug_all_inputs_zero();
    let (g, _) = full_simplify(&d);
    let spiders: Vec<_> = g.vertices().filter(|(_, v)| v.kind.is_spider()).collect();
    let normal_form = spiders.len() == 1 && {
        let (centre, v) = spiders[0];
        v.kind == VertexKind::Z
            && v.phase == Phase::zero()
            && g.outputs().len() == 3
            && g.outputs()
                .iter()
                .all(|&o| g.edge(centre, o) == Some(EdgeKind::Plain))
    };
    let t = diagram_to_tensor(&g).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut target = vec![Complex64::new(0.0, 0.0); 8];
    target[0] = Complex64::new(h, 0.0);
    target[7] = Complex64::new(h, 0.0);
    let want = qpos::zx::Tensor {
        n_legs: 3,
        data: target,
    };
    let dev = deviation_up_to_scalar(&want, &t);
    outcome(
        normal_form && dev <= GHZ_TOL,
        format!(
            "{} spider(s) after simplification, star normal form: {normal_form}, deviation from |000>+|111> {dev:.2e}",
            spiders.len()
        ),
    )
}

fn grover_t_count() -> Outcome {
    let c = reference_grover_circuit();
    let (report, _) = zx_opt_report(&c, false, false).unwrap();
    let d = circuit_to_diagram(&c);
    let before = diagram_t_count(&d);
    let after = diagram_t_count(&full_simplify(&d).0);
    let text = report.to_string();
    let reduction = (before - after) as f64 / before as f64;
    let pass = reduction >= GROVER_MIN_REDUCTION
        && report.t_before == before
        && report.t_after == after
        && text.lines().any(|l| {
            l.split_whitespace()
                .eq(["reference", "336", "166", "47.47%"])
        });
    outcome(
        pass,
        format!(
            "diagram T-count {before} -> {after} ({:.1}%, required {:.0}%), reference row 336 -> 166 printed beside it",
            100.0 * reduction,
            100.0 * GROVER_MIN_REDUCTION
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    std::fs::write(
        path("corpus.tsv"),
        "the\tDT\ndog\tNN\nbarks\tVB\n\na\tDT\ncat\tNN\nsleeps\tVB\n",
    )
    .unwrap();
    std::fs::write(path("ghz.qc"), "H 0\nCNOT 0 1\nCNOT 1 2\nT 2\n").unwrap();
    let model = path("model.json");
    let commands: Vec<Vec<String>> = vec![
        vec!["train", "--corpus", &path("corpus.tsv"), "--out", &model],
        vec![
            "tag",
            "--model",
            &model,
            "--backend",
            "quantum",
            "--seed",
            "5",
            "the",
            "cat",
            "barks",
        ],
        vec![
            "tag",
            "--model",
            &model,
            "--backend",
            "quantum-brute",
            "--seed",
            "5",
            "a",
            "dog",
            "sleeps",
        ],
        vec![
            "qmax-bench",
            "--sizes",
            "4,16,64",
            "--trials",
            "50",
            "--seed",
            "5",
        ],
        vec!["report", "--seed", "5", "--trials", "3"],
        vec![
            "zx-opt",
            &path("ghz.qc"),
            "--verify",
            "--trace",
            &path("trace.txt"),
        ],
        vec!["grover-circuit"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    let run = |args: &[String]| {
        let o = Command::new(env!("CARGO_BIN_EXE_qpos"))
            .args(args)
            .output()
            .unwrap();
        (o.status.success(), o.stdout, std::fs::read(&model).ok())
    };
    let mut identical = 0;
    let mut failed = Vec::new();
    for args in &commands {
        let (a, b) = (run(args), run(args));
        if a.0 && a == b {
            identical += 1;
        } else {
            failed.push(args[0].clone());
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{identical}/{} seeded commands byte-identical on rerun{}",
            commands.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(", differing: {failed:?}")
            }
        ),
    )
}

fn main() -> ExitCode {
    let mut sizes = QMAX_SUCCESS_SIZES.to_vec();
    sizes.extend(
        SLOPE_SIZES
            .iter()
            .filter(|l| !QMAX_SUCCESS_SIZES.contains(l)),
    );
    sizes.sort_unstable();
    let start = Instant::now();
    let rows = benchmark(&sizes, QMAX_TRIALS, SEED);
    let qmax_elapsed = start.elapsed();
    let success_rows: Vec<_> = rows
        .iter()
        .filter(|r| QMAX_SUCCESS_SIZES.contains(&r.l))
        .cloned()
        .collect();
    let slope_rows: Vec<_> = rows
        .iter()
        .filter(|r| SLOPE_SIZES.contains(&r.l))
        .cloned()
        .collect();
    assert_eq!(SearchBudget::for_len(16).max_queries, 113);

    let results = [
        ("1 viterbi equals exhaustive search", viterbi_oracle()),
        (
            "2 quantum max success rate",
            qmax_success(&success_rows, qmax_elapsed),
        ),
        ("3 query scaling slope", qmax_slope(&slope_rows)),
        ("4 quantum viterbi agreement", qviterbi_agreement()),
        ("5 step-count report", step_report()),
        ("6 zx soundness", zx_soundness()),
        ("7 ghz normal form", ghz()),
        ("8 grover t-count reduction", grover_t_count()),
        ("9 seeded determinism", determinism()),
    ];
    let mut failures = 0;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failures += (!o.pass) as usize;
    }
    println!(
        "acceptance: {}/{} criteria passed",
        results.len() - failures,
        results.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
