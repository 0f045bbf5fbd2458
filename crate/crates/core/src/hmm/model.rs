use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::hmm::{HmmError, TagSet};

/// Tolerance on row sums of `pi`, `trans` and `emit`.
pub const ROW_TOL: f64 = 1e-9;

/// Bigram HMM. `trans[k][i]` is P(tag i | previous tag k); `emit[i][w]` is P(word w | tag i).
#[derive(Clone, Debug, PartialEq)]
pub struct HmmModel {
    tagset: TagSet,
    vocab: Vec<String>,
    pi: Vec<f64>,
    trans: Vec<Vec<f64>>,
    emit: Vec<Vec<f64>>,
}

/// Sentence as vocabulary indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    words: Vec<usize>,
}

impl Observation {
    pub fn new(words: Vec<usize>, vocab_size: usize) -> Result<Self, HmmError> {
        if words.is_empty() {
            return Err(HmmError::EmptyObservation);
        }
        if let Some(&index) = words.iter().find(|&&w| w >= vocab_size) {
            return Err(HmmError::WordOutOfRange {
                index,
                n: vocab_size,
            });
        }
        Ok(Observation { words })
    }

    pub fn words(&self) -> &[usize] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    tags: Vec<String>,
    vocab: Vec<String>,
    pi: Vec<f64>,
    trans: Vec<Vec<f64>>,
    emit: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    lexicon: BTreeMap<String, Vec<String>>,
}

fn check_row(table: &'static str, row: usize, xs: &[f64]) -> Result<(), HmmError> {
    if let Some(&value) = xs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(HmmError::Entry { table, row, value });
    }
    let sum: f64 = xs.iter().sum();
    if (sum - 1.0).abs() > ROW_TOL {
        return Err(HmmError::RowSum { table, row, sum });
    }
    Ok(())
}

fn check_shape(table: &'static str, rows: &[Vec<f64>], r: usize, c: usize) -> Result<(), HmmError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        let cols: Vec<String> = rows.iter().map(|row| row.len().to_string()).collect();
        return Err(HmmError::Shape {
            table,
            expected: format!("{r}x{c}"),
            got: format!("{} rows of [{}]", rows.len(), cols.join(",")),
        });
    }
    Ok(())
}

impl HmmModel {
    /// Validates shapes, entry ranges and row sums.
    pub fn new(
        tagset: TagSet,
        vocab: Vec<String>,
        pi: Vec<f64>,
        trans: Vec<Vec<f64>>,
        emit: Vec<Vec<f64>>,
    ) -> Result<Self, HmmError> {
        let k = tagset.len();
        let n = vocab.len();
        if pi.len() != k {
            return Err(HmmError::Shape {
                table: "pi",
                expected: k.to_string(),
                got: pi.len().to_string(),
            });
        }
        check_shape("trans", &trans, k, k)?;
        check_shape("emit", &emit, k, n)?;
        check_row("pi", 0, &pi)?;
        for (i, row) in trans.iter().enumerate() {
            check_row("trans", i, row)?;
        }
        for (i, row) in emit.iter().enumerate() {
            check_row("emit", i, row)?;
        }
        Ok(HmmModel {
            tagset,
            vocab,
            pi,
            trans,
            emit,
        })
    }

    /// Random model with strictly positive entries; rows are normalized uniform draws.
    pub fn random<R: Rng>(k: usize, n: usize, rng: &mut R) -> Self {
        let mut row = |len: usize| -> Vec<f64> {
            let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|x| x / s).collect()
        };
        let pi = row(k);
        let trans = (0..k).map(|_| row(k)).collect();
        let emit = (0..k).map(|_| row(n)).collect();
        let tagset = TagSet::new((0..k).map(|i| format!("T{i}"))).expect("k >= 1");
        let vocab = (0..n).map(|w| format!("w{w}")).collect();
        HmmModel::new(tagset, vocab, pi, trans, emit).expect("normalized rows")
    }

    pub fn k(&self) -> usize {
        self.tagset.len()
    }

    pub fn n(&self) -> usize {
        self.vocab.len()
    }

    pub fn tagset(&self) -> &TagSet {
        &self.tagset
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn trans(&self) -> &[Vec<f64>] {
        &self.trans
    }

    pub fn emit(&self) -> &[Vec<f64>] {
        &self.emit
    }

    pub fn word_index(&self, word: &str) -> Option<usize> {
        self.vocab.iter().position(|w| w == word)
    }

    /// Maps words to an observation. Out-of-vocabulary words use the `<unk>` entry when the
    /// vocabulary has one; the returned flags mark those positions.
    pub fn observe<S: AsRef<str>>(
        &self,
        words: &[S],
    ) -> Result<(Observation, Vec<bool>), HmmError> {
        let unk = self.word_index(crate::hmm::UNKNOWN_WORD);
        let mut ids = Vec::with_capacity(words.len());
        let mut flags = Vec::with_capacity(words.len());
        for w in words {
            let w = w.as_ref();
            match (self.word_index(w), unk) {
                (Some(i), _) => {
                    ids.push(i);
                    flags.push(false);
                }
                (None, Some(u)) => {
                    ids.push(u);
                    flags.push(true);
                }
                (None, None) => return Err(HmmError::UnknownWord(w.to_string())),
            }
        }
        Ok((Observation::new(ids, self.n())?, flags))
    }

    pub fn check_observation(&self, obs: &Observation) -> Result<(), HmmError> {
        match obs.words().iter().find(|&&w| w >= self.n()) {
            Some(&index) => Err(HmmError::WordOutOfRange { index, n: self.n() }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        let lexicon = self
            .tagset
            .lexicon()
            .iter()
            .map(|(w, ids)| {
                (
                    w.clone(),
                    ids.iter()
                        .map(|&i| self.tagset.label(i).to_string())
                        .collect(),
                )
            })
            .collect();
        let file = ModelFile {
            tags: self.tagset.tags().to_vec(),
            vocab: self.vocab.clone(),
            pi: self.pi.clone(),
            trans: self.trans.clone(),
            emit: self.emit.clone(),
            lexicon,
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, HmmError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| HmmError::Json(e.to_string()))?;
        let mut tagset = TagSet::new(file.tags)?;
        for (w, tags) in &file.lexicon {
            let tags: Vec<&str> = tags.iter().map(String::as_str).collect();
            tagset.permit(w, &tags)?;
        }
        HmmModel::new(tagset, file.vocab, file.pi, file.trans, file.emit)
    }

    pub fn save(&self, path: &Path) -> Result<(), HmmError> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| HmmError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, HmmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HmmError::Io(format!("{}: {e}", path.display())))?;
        HmmModel::from_json(&text)
    }
}

fn check_tags(model: &HmmModel, obs: &Observation, tags: &[usize]) -> Result<(), HmmError> {
    model.check_observation(obs)?;
    if tags.len() != obs.len() {
        return Err(HmmError::LengthMismatch {
            tags: tags.len(),
            words: obs.len(),
        });
    }
    if let Some(&index) = tags.iter().find(|&&t| t >= model.k()) {
        return Err(HmmError::TagOutOfRange {
            index,
            k: model.k(),
        });
    }
    Ok(())
}

/// `pi[t1]·emit[t1][y1] · Π (trans[t(i-1)][t(i)]·emit[t(i)][y(i)])`, multiplied left to right.
pub fn sequence_probability(
    model: &HmmModel,
    obs: &Observation,
    tags: &[usize],
) -> Result<f64, HmmError> {
    check_tags(model, obs, tags)?;
    let y = obs.words();
    let mut p = model.pi[tags[0]] * model.emit[tags[0]][y[0]];
    for i in 1..tags.len() {
        p = p * model.trans[tags[i - 1]][tags[i]] * model.emit[tags[i]][y[i]];
    }
    Ok(p)
}

/// Natural log of [`sequence_probability`], accumulated as a sum (`-inf` for zero factors).
pub fn sequence_log_probability(
    model: &HmmModel,
    obs: &Observation,
    tags: &[usize],
) -> Result<f64, HmmError> {
    check_tags(model, obs, tags)?;
    let y = obs.words();
    let mut lp = model.pi[tags[0]].ln() + model.emit[tags[0]][y[0]].ln();
    for i in 1..tags.len() {
        lp = lp + model.trans[tags[i - 1]][tags[i]].ln() + model.emit[tags[i]][y[i]].ln();
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn two_tag_model() -> HmmModel {
        HmmModel::new(
            TagSet::new(["A", "B"]).unwrap(),
            vec!["x".into(), "y".into()],
            vec![0.6, 0.4],
            vec![vec![0.7, 0.3], vec![0.4, 0.6]],
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
        )
        .unwrap()
    }

    #[test]
    fn hand_multiplied_example() {
        let m = two_tag_model();
        let obs = Observation::new(vec![0, 1], 2).unwrap();
        let p = sequence_probability(&m, &obs, &[0, 1]).unwrap();
        assert!((p - 0.045).abs() < 1e-15);
        let lp = sequence_log_probability(&m, &obs, &[0, 1]).unwrap();
        assert!((lp - 0.045f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn deterministic_single_word() {
        let m = HmmModel::new(
            TagSet::new(["A", "B"]).unwrap(),
            vec!["w".into()],
            vec![1.0, 0.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0], vec![1.0]],
        )
        .unwrap();
        let obs = Observation::new(vec![0], 1).unwrap();
        assert_eq!(sequence_probability(&m, &obs, &[0]).unwrap(), 1.0);
        assert_eq!(sequence_probability(&m, &obs, &[1]).unwrap(), 0.0);
        assert_eq!(
            sequence_log_probability(&m, &obs, &[1]).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn length_and_range_errors() {
        let m = two_tag_model();
        let obs = Observation::new(vec![0, 1], 2).unwrap();
        assert!(matches!(
            sequence_probability(&m, &obs, &[0]),
            Err(HmmError::LengthMismatch { tags: 1, words: 2 })
        ));
        assert!(matches!(
            sequence_probability(&m, &obs, &[0, 2]),
            Err(HmmError::TagOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            Observation::new(vec![], 2),
            Err(HmmError::EmptyObservation)
        ));
        assert!(matches!(
            Observation::new(vec![2], 2),
            Err(HmmError::WordOutOfRange { .. })
        ));
    }

    #[test]
    fn validation_catches_bad_rows() {
        let ts = TagSet::new(["A"]).unwrap();
        let err = HmmModel::new(
            ts.clone(),
            vec!["w".into()],
            vec![0.9],
            vec![vec![1.0]],
            vec![vec![1.0]],
        );
        assert!(matches!(err, Err(HmmError::RowSum { table: "pi", .. })));
        let err = HmmModel::new(
            ts.clone(),
            vec!["w".into()],
            vec![1.0],
            vec![vec![1.0]],
            vec![vec![1.5]],
        );
        assert!(matches!(err, Err(HmmError::Entry { table: "emit", .. })));
        let err = HmmModel::new(
            ts,
            vec!["w".into()],
            vec![1.0],
            vec![vec![1.0, 0.0]],
            vec![vec![1.0]],
        );
        assert!(matches!(err, Err(HmmError::Shape { table: "trans", .. })));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = HmmModel::random(4, 7, &mut rng);
        let back = HmmModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        for (a, b) in m
            .trans()
            .iter()
            .flatten()
            .zip(back.trans().iter().flatten())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn random_model_rows_are_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = HmmModel::random(3, 5, &mut rng);
        for row in m.trans().iter().chain(m.emit()) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < ROW_TOL);
        }
    }
}
