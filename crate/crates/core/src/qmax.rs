//! Quantum maximum finding: repeated Grover searches above a rising threshold, simulated on
//! an explicit statevector, with oracle-query accounting.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qsim::{grover_iteration_in_place, measure, MarkPredicate, StateVector};

/// Growth factor of the BBHT iteration cap.
pub const BBHT_LAMBDA: f64 = 6.0 / 5.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QmaxError {
    #[error("value list is empty")]
    Empty,
    #[error("value {index} is not finite")]
    NotFinite { index: usize },
    #[error("threshold index {r} out of range for {l} values")]
    ThresholdOutOfRange { r: usize, l: usize },
}

/// Candidate scores `V`, `l ≥ 1`, all finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueList {
    values: Vec<f64>,
}

impl ValueList {
    pub fn new(values: Vec<f64>) -> Result<Self, QmaxError> {
        if values.is_empty() {
            return Err(QmaxError::Empty);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(QmaxError::NotFinite { index });
        }
        Ok(ValueList { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Padded length: the next power of two.
    pub fn padded_len(&self) -> usize {
        self.values.len().next_power_of_two()
    }

    fn n_qubits(&self) -> usize {
        self.padded_len().trailing_zeros() as usize
    }
}

/// `⌈22.5·√l + 1.4·(log₂ l)²⌉` oracle queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_queries: u64,
}

impl SearchBudget {
    pub fn for_len(l: usize) -> Self {
        let l = l as f64;
        let q = (22.5 * l.sqrt() + 1.4 * l.log2().powi(2)).ceil() as u64;
        SearchBudget {
            max_queries: q.max(1),
        }
    }
}

/// Oracle-call accounting for one maximum-finding run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryLedger {
    pub oracle_queries: u64,
    pub threshold_updates: u64,
    /// Grover iterations applied in each search round.
    pub iterations_log: Vec<u64>,
    /// Every threshold the run held, starting with the initial pick.
    pub threshold_history: Vec<ThresholdEvent>,
}

/// The threshold moved to `index` after `queries` oracle queries and `rounds` search rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThresholdEvent {
    pub queries: u64,
    pub rounds: u64,
    pub index: usize,
}

impl QueryLedger {
    /// Adds another ledger's counters and rounds to this one (histories are not merged).
    pub fn absorb(&mut self, other: &QueryLedger) {
        self.oracle_queries += other.oracle_queries;
        self.threshold_updates += other.threshold_updates;
        self.iterations_log.extend_from_slice(&other.iterations_log);
    }

    pub fn largest_round(&self) -> u64 {
        self.iterations_log.iter().copied().max().unwrap_or(0)
    }

    /// First threshold event whose index satisfies `is_max`.
    pub fn first_hit(&self, is_max: impl Fn(usize) -> bool) -> Option<ThresholdEvent> {
        self.threshold_history
            .iter()
            .copied()
            .find(|e| is_max(e.index))
    }

    fn mark_threshold(&mut self, index: usize) {
        self.threshold_history.push(ThresholdEvent {
            queries: self.oracle_queries,
            rounds: self.iterations_log.len() as u64,
            index,
        });
    }
}

/// BBHT schedule: draw `j` uniformly from `[0, ⌈m⌉)`, then `m ← min(λm, √l')`.
#[derive(Clone, Debug, PartialEq)]
pub struct BbhtSchedule {
    m: f64,
    cap: f64,
}

impl BbhtSchedule {
    pub fn new(padded_len: usize) -> Self {
        BbhtSchedule {
            m: 1.0,
            cap: (padded_len as f64).sqrt(),
        }
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn next_iterations<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u64 {
        let j = rng.gen_range(0..self.m.ceil() as u64);
        self.m = (BBHT_LAMBDA * self.m).min(self.cap);
        j
    }

    pub fn reset(&mut self) {
        self.m = 1.0;
    }
}

/// One search round with a fixed iteration count: uniform superposition over the padded
/// list, `j` Grover iterations marking `{i : V[i] > V[r]}`, then a measurement. Each
/// iteration is one oracle query. The result may be an unmarked or padding index.
pub fn quantum_search_with_iterations<R: Rng + ?Sized>(
    v: &ValueList,
    r: usize,
    j: u64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<usize, QmaxError> {
    if r >= v.len() {
        return Err(QmaxError::ThresholdOutOfRange { r, l: v.len() });
    }
    let mark = MarkPredicate::above_threshold(v.values(), v.values()[r], v.padded_len());
    let mut state =
        StateVector::uniform(v.n_qubits()).expect("padded length within the simulator cap");
    for _ in 0..j {
        grover_iteration_in_place(&mut state, &mark);
    }
    ledger.oracle_queries += j;
    ledger.iterations_log.push(j);
    Ok(measure(&state, rng))
}

/// One search round with the iteration count drawn from `schedule`.
pub fn quantum_search<R: Rng + ?Sized>(
    v: &ValueList,
    r: usize,
    schedule: &mut BbhtSchedule,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<usize, QmaxError> {
    let j = schedule.next_iterations(rng);
    quantum_search_with_iterations(v, r, j, rng, ledger)
}

/// Threshold-raising loop until the ledger reaches `budget`, or, when `until` is given,
/// until that index predicate holds for the threshold as well.
fn max_finding_loop<R: Rng + ?Sized>(
    v: &ValueList,
    rng: &mut R,
    budget: u64,
    until: Option<&dyn Fn(usize) -> bool>,
) -> (usize, QueryLedger, usize) {
    let mut ledger = QueryLedger::default();
    let l = v.len();
    if l == 1 {
        ledger.mark_threshold(0);
        return (0, ledger, 0);
    }
    let mut r = rng.gen_range(0..l);
    ledger.mark_threshold(r);
    let mut schedule = BbhtSchedule::new(v.padded_len());
    let mut at_budget = None;
    loop {
        if at_budget.is_none() && ledger.oracle_queries >= budget {
            at_budget = Some(r);
        }
        let done = match until {
            None => at_budget.is_some(),
            Some(p) => at_budget.is_some() && p(r),
        };
        if done {
            break;
        }
        let r1 = quantum_search(v, r, &mut schedule, rng, &mut ledger).expect("r < l");
        if r1 < l && v.values()[r1] > v.values()[r] {
            r = r1;
            ledger.threshold_updates += 1;
            ledger.mark_threshold(r);
            schedule.reset();
        }
    }
    (at_budget.unwrap_or(r), ledger, r)
}

/// Runs until the budget for `l` is spent and returns `(V[r], r, ledger)`.
pub fn quantum_prob_max<R: Rng + ?Sized>(v: &ValueList, rng: &mut R) -> (f64, usize, QueryLedger) {
    let budget = SearchBudget::for_len(v.len()).max_queries;
    let (r, ledger, _) = max_finding_loop(v, rng, budget, None);
    (v.values()[r], r, ledger)
}

/// Linear scan; smallest index on ties. Returns `(value, index, comparisons)` with
/// `comparisons = l − 1`.
pub fn classical_max(v: &ValueList) -> (f64, usize, u64) {
    let xs = v.values();
    let mut best = 0;
    let mut comparisons = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        comparisons += 1;
        if x > xs[best] {
            best = i;
        }
    }
    (xs[best], best, comparisons)
}

/// One benchmark trial.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub l: usize,
    pub seed: u64,
    pub queries: u64,
    pub success: bool,
    pub found_index: usize,
    /// Oracle queries spent when the true maximum was first held. The run keeps going past
    /// the budget when needed, so this is defined for every trial.
    pub first_hit_queries: u64,
    /// Search rounds (measure-and-compare steps) completed at that point.
    pub first_hit_rounds: u64,
}

/// Seed of trial `trial` at size `l` under master seed `seed`.
pub fn trial_seed(seed: u64, l: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((l as u64) << 32) ^ trial as u64
}

/// A random permutation of `1/l, 2/l, …, 1`: distinct values.
pub fn distinct_values<R: Rng + ?Sized>(l: usize, rng: &mut R) -> ValueList {
    let mut xs: Vec<f64> = (1..=l).map(|i| i as f64 / l as f64).collect();
    xs.shuffle(rng);
    ValueList::new(xs).expect("l >= 1")
}

pub fn run_trial(l: usize, seed: u64) -> BenchRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = distinct_values(l, &mut rng);
    let (best, best_index, _) = classical_max(&v);
    let budget = SearchBudget::for_len(l).max_queries;
    let is_max = |i: usize| i == best_index;
    let (r, ledger, _) = max_finding_loop(&v, &mut rng, budget, Some(&is_max));
    let mut at_budget = 0;
    for &j in &ledger.iterations_log {
        if at_budget >= budget {
            break;
        }
        at_budget += j;
    }
    let hit = ledger
        .first_hit(is_max)
        .expect("loop runs until the max is held");
    BenchRow {
        l,
        seed,
        queries: at_budget,
        success: v.values()[r] == best,
        found_index: r,
        first_hit_queries: hit.queries,
        first_hit_rounds: hit.rounds,
    }
}

pub fn benchmark(sizes: &[usize], trials: usize, seed: u64) -> Vec<BenchRow> {
    let mut rows = Vec::with_capacity(sizes.len() * trials);
    for &l in sizes {
        for t in 0..trials {
            rows.push(run_trial(l, trial_seed(seed, l, t)));
        }
    }
    rows
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s =
        String::from("l,seed,queries,success,found_index,first_hit_queries,first_hit_rounds\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.l,
            r.seed,
            r.queries,
            r.success as u8,
            r.found_index,
            r.first_hit_queries,
            r.first_hit_rounds
        )
        .unwrap();
    }
    s
}

/// Per-size success rate and mean first-hit queries.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeSummary {
    pub l: usize,
    pub trials: usize,
    pub success_rate: f64,
    pub mean_queries: f64,
    pub mean_first_hit: f64,
    /// Mean of `first_hit_queries + first_hit_rounds`: each round's comparison also charged.
    pub mean_first_hit_with_checks: f64,
    pub budget: u64,
}

pub fn summarize(rows: &[BenchRow]) -> Vec<SizeSummary> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.l).collect();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|l| {
            let sel: Vec<&BenchRow> = rows.iter().filter(|r| r.l == l).collect();
            let n = sel.len() as f64;
            SizeSummary {
                l,
                trials: sel.len(),
                success_rate: sel.iter().filter(|r| r.success).count() as f64 / n,
                mean_queries: sel.iter().map(|r| r.queries as f64).sum::<f64>() / n,
                mean_first_hit: sel.iter().map(|r| r.first_hit_queries as f64).sum::<f64>() / n,
                mean_first_hit_with_checks: sel
                    .iter()
                    .map(|r| (r.first_hit_queries + r.first_hit_rounds) as f64)
                    .sum::<f64>()
                    / n,
                budget: SearchBudget::for_len(l).max_queries,
            }
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
