use proptest::prelude::*;
use qpos::hmm::{
    brute_force_best_sequence_with_cap, enumerate_sequence_probabilities, sequence_probability,
    train_mle, HmmModel, Observation, TagSet, TaggedCorpus, ROW_TOL,
};
use qpos::viterbi::{backtrace, classical_viterbi, classical_viterbi_with, ScoreMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model_and_obs(seed: u64, max_k: usize, max_w: usize) -> (HmmModel, Observation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=max_k);
    let n = rng.gen_range(1..=5);
    let w = rng.gen_range(1..=max_w);
    let m = HmmModel::random(k, n, &mut rng);
    let obs = Observation::new((0..w).map(|_| rng.gen_range(0..n)).collect(), n).unwrap();
    (m, obs)
}

fn corpus_strategy() -> impl Strategy<Value = TaggedCorpus> {
    let pair = (0..6usize, 0..4usize).prop_map(|(w, t)| (format!("w{w}"), format!("T{t}")));
    prop::collection::vec(prop::collection::vec(pair, 1..6), 1..6)
        .prop_map(|s| TaggedCorpus::new(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trained_rows_are_stochastic(c in corpus_strategy(), alpha in 0.01f64..3.0) {
        let m = train_mle(&c, alpha).unwrap();
        prop_assert!((m.pi().iter().sum::<f64>() - 1.0).abs() < ROW_TOL);
        for row in m.trans().iter().chain(m.emit()) {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < ROW_TOL);
            prop_assert!(row.iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }

    #[test]
    fn corpus_text_round_trips(c in corpus_strategy()) {
        prop_assert_eq!(TaggedCorpus::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn brute_force_is_self_consistent_and_dominant(seed in any::<u64>()) {
        let (m, obs) = model_and_obs(seed, 4, 6);
        let (best, p) = brute_force_best_sequence_with_cap(&m, &obs, 1 << 20).unwrap();
        prop_assert_eq!(p, sequence_probability(&m, &obs, &best).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
        for _ in 0..100 {
            let tags: Vec<usize> = (0..obs.len()).map(|_| rng.gen_range(0..m.k())).collect();
            prop_assert!(sequence_probability(&m, &obs, &tags).unwrap() <= p);
        }
    }

    #[test]
    fn viterbi_matches_brute_force(seed in any::<u64>()) {
        let (m, obs) = model_and_obs(seed, 4, 6);
        let (path, trellis) = classical_viterbi(&m, &obs).unwrap();
        let (best, p) = brute_force_best_sequence_with_cap(&m, &obs, 1 << 20).unwrap();
        prop_assert_eq!(path.score, p);
        let all = enumerate_sequence_probabilities(&m, &obs, 1 << 20).unwrap();
        if all.iter().filter(|&&x| x == p).count() == 1 {
            prop_assert_eq!(&path.states, &best);
        } else {
            // Exact float ties: the path must still be one of the maximisers.
            prop_assert_eq!(sequence_probability(&m, &obs, &path.states).unwrap(), p);
        }
        let z = *path.states.last().unwrap();
        prop_assert_eq!(path.score, trellis.phi1[z][obs.len() - 1]);
        prop_assert_eq!(backtrace(&trellis, z), path.states);
        for row in &trellis.phi2 {
            prop_assert_eq!(row[0], 0);
            prop_assert!(row.iter().all(|&k| k < m.k()));
        }
    }

    #[test]
    fn candidate_count_is_k_squared_w_minus_one(seed in any::<u64>()) {
        let (m, obs) = model_and_obs(seed, 4, 6);
        let (_, _, stats) = classical_viterbi_with(&m, &obs, ScoreMode::Linear).unwrap();
        let (k, w) = (m.k() as u64, obs.len() as u64);
        prop_assert_eq!(stats.candidate_evaluations, k * k * (w - 1));
    }

    #[test]
    fn json_round_trip_keeps_every_bit(seed in any::<u64>()) {
        let (m, _) = model_and_obs(seed, 4, 1);
        prop_assert_eq!(HmmModel::from_json(&m.to_json()).unwrap(), m);
    }
}

#[test]
fn three_word_two_tag_example_matches_the_oracle() {
    let m = HmmModel::random(2, 3, &mut ChaCha8Rng::seed_from_u64(42));
    let obs = Observation::new(vec![2, 0, 1], 3).unwrap();
    let (path, _) = classical_viterbi(&m, &obs).unwrap();
    assert_eq!(
        path.states,
        brute_force_best_sequence_with_cap(&m, &obs, 8).unwrap().0
    );
}

#[test]
fn exact_tie_goes_to_the_smaller_path() {
    // Tag A cannot emit y, so only (0,1) and (1,1) survive; both score exactly 1/16.
    let m = HmmModel::new(
        TagSet::new(["A", "B"]).unwrap(),
        vec!["x".into(), "y".into()],
        vec![0.5, 0.5],
        vec![vec![0.75, 0.25], vec![0.5, 0.5]],
        vec![vec![1.0, 0.0], vec![0.5, 0.5]],
    )
    .unwrap();
    let obs = Observation::new(vec![0, 1], 2).unwrap();
    let p01 = sequence_probability(&m, &obs, &[0, 1]).unwrap();
    let p11 = sequence_probability(&m, &obs, &[1, 1]).unwrap();
    assert_eq!(p01, 1.0 / 16.0);
    assert_eq!(p11, 1.0 / 16.0);
    assert_eq!(sequence_probability(&m, &obs, &[0, 0]).unwrap(), 0.0);
    let (best, p) = brute_force_best_sequence_with_cap(&m, &obs, 4).unwrap();
    assert_eq!(best, vec![0, 1]);
    let (path, _) = classical_viterbi(&m, &obs).unwrap();
    assert_eq!(path.states, best);
    assert_eq!(path.score, p);
}

#[test]
fn tie_is_broken_at_the_earliest_position() {
    // (0,1) and (1,0) both score 3/8 and end in different tags; the final-column argmax alone
    // would pick (1,0).
    let m = HmmModel::new(
        TagSet::new(["A", "B"]).unwrap(),
        vec!["x".into()],
        vec![0.5, 0.5],
        vec![vec![0.25, 0.75], vec![0.75, 0.25]],
        vec![vec![1.0], vec![1.0]],
    )
    .unwrap();
    let obs = Observation::new(vec![0, 0], 1).unwrap();
    let (best, p) = brute_force_best_sequence_with_cap(&m, &obs, 4).unwrap();
    assert_eq!((best.as_slice(), p), (&[0, 1][..], 0.375));
    assert_eq!(sequence_probability(&m, &obs, &[1, 0]).unwrap(), 0.375);
    let (path, _) = classical_viterbi(&m, &obs).unwrap();
    assert_eq!(path.states, vec![0, 1]);
}

#[test]
fn log_space_handles_long_sentences() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let m = HmmModel::random(4, 6, &mut rng);
    let obs = Observation::new((0..400).map(|_| rng.gen_range(0..6)).collect(), 6).unwrap();
    let (lin, _, _) = classical_viterbi_with(&m, &obs, ScoreMode::Linear).unwrap();
    let (log, _, _) = classical_viterbi_with(&m, &obs, ScoreMode::Log).unwrap();
    assert_eq!(lin.score, 0.0);
    assert!(log.score.is_finite() && log.score < -400.0);
}
