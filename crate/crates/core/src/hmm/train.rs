use crate::hmm::{HmmError, HmmModel, TagSet, TaggedCorpus};

/// Vocabulary entry appended by training; out-of-vocabulary words are scored as this word.
pub const UNKNOWN_WORD: &str = "<unk>";

/// Add-`alpha` relative frequencies. Tags are taken from the corpus in order of first
/// appearance; the lexicon records every (word, tag) pair seen.
pub fn train_mle(corpus: &TaggedCorpus, alpha: f64) -> Result<HmmModel, HmmError> {
    train_mle_with_tags(corpus, alpha, None)
}

/// As [`train_mle`], with an explicit tag inventory. With `alpha = 0` every listed tag must
/// occur in the corpus. A tag that only ever ends sentences has no observed successor; its
/// transition row is then uniform rather than all zero.
pub fn train_mle_with_tags(
    corpus: &TaggedCorpus,
    alpha: f64,
    tags: Option<&[String]>,
) -> Result<HmmModel, HmmError> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(HmmError::BadAlpha(alpha));
    }
    if corpus.is_empty() {
        return Err(HmmError::EmptyCorpus);
    }
    if let Some(i) = corpus.sentences.iter().position(Vec::is_empty) {
        return Err(HmmError::EmptySentence(i));
    }
    let mut tagset = match tags {
        Some(t) => TagSet::new(t.iter().cloned())?,
        None => TagSet::new(corpus.tags_in_order())?,
    };
    let mut vocab = corpus.words_in_order();
    vocab.retain(|w| w != UNKNOWN_WORD);
    vocab.push(UNKNOWN_WORD.to_string());
    let k = tagset.len();
    let n = vocab.len();
    let word_ids: std::collections::HashMap<&str, usize> = vocab
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();

    let mut start = vec![0.0; k];
    let mut trans = vec![vec![0.0; k]; k];
    let mut emit = vec![vec![0.0; n]; k];
    let mut seen = vec![false; k];
    for sentence in &corpus.sentences {
        let mut prev: Option<usize> = None;
        for (w, t) in sentence {
            let ti = tagset
                .index_of(t)
                .ok_or_else(|| HmmError::UnknownTag(t.clone()))?;
            seen[ti] = true;
            emit[ti][word_ids[w.as_str()]] += 1.0;
            match prev {
                None => start[ti] += 1.0,
                Some(p) => trans[p][ti] += 1.0,
            }
            prev = Some(ti);
        }
    }
    if alpha == 0.0 {
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(HmmError::UnseenTag(tagset.label(i).to_string()));
        }
    }
    for sentence in &corpus.sentences {
        for (w, t) in sentence {
            tagset.permit(w, &[t])?;
        }
    }
    let pi = smooth(&start, alpha);
    let trans = trans.iter().map(|r| smooth(r, alpha)).collect();
    let emit = emit.iter().map(|r| smooth(r, alpha)).collect();
    HmmModel::new(tagset, vocab, pi, trans, emit)
}

fn smooth(counts: &[f64], alpha: f64) -> Vec<f64> {
    let total: f64 = counts.iter().sum::<f64>() + alpha * counts.len() as f64;
    if total == 0.0 {
        return vec![1.0 / counts.len() as f64; counts.len()];
    }
    counts.iter().map(|c| (c + alpha) / total).collect()
}
