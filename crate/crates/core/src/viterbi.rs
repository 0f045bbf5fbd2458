//! Classical Viterbi decoding over a `K × W` trellis.

use std::fmt::Write as _;

use crate::hmm::{HmmError, HmmModel, Observation};

/// Linear probabilities (default) or natural logs for long sentences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScoreMode {
    #[default]
    Linear,
    Log,
}

impl ScoreMode {
    fn start(self, pi: f64, b: f64) -> f64 {
        match self {
            ScoreMode::Linear => pi * b,
            ScoreMode::Log => pi.ln() + b.ln(),
        }
    }

    fn extend(self, prev: f64, a: f64, b: f64) -> f64 {
        match self {
            ScoreMode::Linear => prev * a * b,
            ScoreMode::Log => prev + a.ln() + b.ln(),
        }
    }
}

/// `phi1[i][j]`: best score of a path ending in tag `i` at word `j`; `phi2[i][j]`: its
/// predecessor tag. Column 0 of `phi2` is the sentinel 0. Indices are 0-based here; the TSV
/// dump numbers words from 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Trellis {
    pub phi1: Vec<Vec<f64>>,
    pub phi2: Vec<Vec<usize>>,
    pub mode: ScoreMode,
}

impl Trellis {
    pub fn new(k: usize, w: usize, mode: ScoreMode) -> Self {
        Trellis {
            phi1: vec![vec![0.0; w]; k],
            phi2: vec![vec![0; w]; k],
            mode,
        }
    }

    pub fn k(&self) -> usize {
        self.phi1.len()
    }

    pub fn w(&self) -> usize {
        self.phi1.first().map_or(0, Vec::len)
    }

    /// Column `j` of `phi1`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.phi1.iter().map(|row| row[j]).collect()
    }

    /// `j<TAB>i<TAB>phi1<TAB>phi2` rows, word-major, with a header line.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("j\ti\tphi1\tphi2\n");
        for j in 0..self.w() {
            for i in 0..self.k() {
                writeln!(
                    s,
                    "{}\t{}\t{:e}\t{}",
                    j + 1,
                    i,
                    self.phi1[i][j],
                    self.phi2[i][j]
                )
                .unwrap();
            }
        }
        s
    }
}

/// Decoded tag sequence and its score (a probability, or its log in [`ScoreMode::Log`]).
#[derive(Clone, Debug, PartialEq)]
pub struct TagPath {
    pub states: Vec<usize>,
    pub score: f64,
}

/// Instrumentation counters of one decode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ViterbiStats {
    /// Number of `phi1[k][j-1]·trans[k][i]·emit[i][y_j]` products formed; `K²(W−1)`.
    pub candidate_evaluations: u64,
}

/// Candidates `phi1[k][j-1]·trans[k][i]·emit[i][y_j]` for cell `(i, j)`, `j ≥ 1`, over all `k`.
pub fn cell_candidates(
    model: &HmmModel,
    obs: &Observation,
    trellis: &Trellis,
    i: usize,
    j: usize,
) -> Vec<f64> {
    let b = model.emit()[i][obs.words()[j]];
    (0..model.k())
        .map(|k| {
            trellis
                .mode
                .extend(trellis.phi1[k][j - 1], model.trans()[k][i], b)
        })
        .collect()
}

/// First index of the largest value.
pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (k, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = k;
        }
    }
    best
}

/// Fills column 0: `phi1[i][0] = pi_i·emit[i][y_1]`, `phi2[i][0] = 0`.
pub fn init_trellis(
    model: &HmmModel,
    obs: &Observation,
    mode: ScoreMode,
) -> Result<Trellis, HmmError> {
    model.check_observation(obs)?;
    let mut t = Trellis::new(model.k(), obs.len(), mode);
    let y1 = obs.words()[0];
    for i in 0..model.k() {
        t.phi1[i][0] = mode.start(model.pi()[i], model.emit()[i][y1]);
    }
    Ok(t)
}

pub fn classical_viterbi(
    model: &HmmModel,
    obs: &Observation,
) -> Result<(TagPath, Trellis), HmmError> {
    let (path, trellis, _) = classical_viterbi_with(model, obs, ScoreMode::Linear)?;
    Ok((path, trellis))
}

/// Among the indices of `xs` holding its maximum, the one whose path (from `path_of`) is
/// lexicographically smallest. Without ties this is the plain argmax.
fn argmax_lex(xs: &[f64], path_of: impl Fn(usize) -> Vec<usize>) -> usize {
    let best = argmax(xs);
    let tied: Vec<usize> = (best..xs.len()).filter(|&k| xs[k] == xs[best]).collect();
    if tied.len() == 1 {
        return best;
    }
    tied.into_iter()
        .min_by_key(|&k| path_of(k))
        .expect("non-empty")
}

/// Tags of the best path ending in tag `k` at column `j`.
pub fn prefix(t: &Trellis, k: usize, j: usize) -> Vec<usize> {
    let mut z = vec![0; j + 1];
    z[j] = k;
    for c in (1..=j).rev() {
        z[c - 1] = t.phi2[z[c]][c];
    }
    z
}

/// Viterbi with "smallest index wins" ties: equal candidates are ordered by their paths,
/// compared lexicographically, so the result is the lexicographically smallest optimal path
/// (the same rule the exhaustive decoder uses). Without ties this is plain smallest-`k`.
pub fn classical_viterbi_with(
    model: &HmmModel,
    obs: &Observation,
    mode: ScoreMode,
) -> Result<(TagPath, Trellis, ViterbiStats), HmmError> {
    let mut t = init_trellis(model, obs, mode)?;
    let mut stats = ViterbiStats::default();
    for j in 1..obs.len() {
        for i in 0..model.k() {
            let cand = cell_candidates(model, obs, &t, i, j);
            stats.candidate_evaluations += cand.len() as u64;
            let k = argmax_lex(&cand, |k| prefix(&t, k, j - 1));
            t.phi1[i][j] = cand[k];
            t.phi2[i][j] = k;
        }
    }
    let last = t.column(obs.len() - 1);
    let z_w = argmax_lex(&last, |k| prefix(&t, k, obs.len() - 1));
    let path = TagPath {
        states: backtrace(&t, z_w),
        score: last[z_w],
    };
    Ok((path, t, stats))
}

/// Follows `phi2` back from tag `z_w` in the last column.
pub fn backtrace(trellis: &Trellis, z_w: usize) -> Vec<usize> {
    let w = trellis.w();
    let mut z = vec![0; w];
    z[w - 1] = z_w;
    for j in (1..w).rev() {
        z[j - 1] = trellis.phi2[z[j]][j];
    }
    z
}
