use crate::hmm::{sequence_probability, HmmError, HmmModel, Observation};

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;
/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "QPOS_ENUM_CAP";

/// Enumeration cap from the environment, or the default when unset or unparsable.
pub fn enumeration_cap() -> u64 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

fn sequence_count(k: usize, w: usize, cap: u64) -> Result<usize, HmmError> {
    let size = (k as f64).powi(w as i32);
    match (k as u64).checked_pow(w as u32) {
        Some(s) if s <= cap => Ok(s as usize),
        _ => Err(HmmError::EnumerationCap { size, cap }),
    }
}

/// Tag sequence with lexicographic rank `index` (first word most significant).
pub fn decode_sequence_index(mut index: usize, k: usize, w: usize) -> Vec<usize> {
    let mut tags = vec![0; w];
    for slot in tags.iter_mut().rev() {
        *slot = index % k;
        index /= k;
    }
    tags
}

/// Probabilities of all `K^W` tag sequences in lexicographic order.
pub fn enumerate_sequence_probabilities(
    model: &HmmModel,
    obs: &Observation,
    cap: u64,
) -> Result<Vec<f64>, HmmError> {
    let total = sequence_count(model.k(), obs.len(), cap)?;
    model.check_observation(obs)?;
    let mut out = Vec::with_capacity(total);
    let mut tags = vec![0usize; obs.len()];
    for _ in 0..total {
        out.push(sequence_probability(model, obs, &tags)?);
        advance(&mut tags, model.k());
    }
    Ok(out)
}

fn advance(tags: &mut [usize], k: usize) {
    for slot in tags.iter_mut().rev() {
        *slot += 1;
        if *slot < k {
            return;
        }
        *slot = 0;
    }
}

/// Exhaustive argmax with the cap from [`enumeration_cap`].
pub fn brute_force_best_sequence(
    model: &HmmModel,
    obs: &Observation,
) -> Result<(Vec<usize>, f64), HmmError> {
    brute_force_best_sequence_with_cap(model, obs, enumeration_cap())
}

/// Exhaustive argmax over all tag sequences; ties go to the lexicographically smallest.
pub fn brute_force_best_sequence_with_cap(
    model: &HmmModel,
    obs: &Observation,
    cap: u64,
) -> Result<(Vec<usize>, f64), HmmError> {
    let total = sequence_count(model.k(), obs.len(), cap)?;
    model.check_observation(obs)?;
    let mut tags = vec![0usize; obs.len()];
    let mut best = (tags.clone(), sequence_probability(model, obs, &tags)?);
    for _ in 1..total {
        advance(&mut tags, model.k());
        let p = sequence_probability(model, obs, &tags)?;
        if p > best.1 {
            best = (tags.clone(), p);
        }
    }
    Ok(best)
}
