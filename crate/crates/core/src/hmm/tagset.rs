use std::collections::{BTreeMap, BTreeSet};

use crate::hmm::HmmError;

/// Ordered tag labels plus a word → permitted-tags lexicon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagSet {
    tags: Vec<String>,
    lexicon: BTreeMap<String, BTreeSet<usize>>,
}

/// Result of a lexicon lookup. `fallback` is set when the word was not in the lexicon and
/// every tag is returned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconLookup {
    pub tags: BTreeSet<usize>,
    pub fallback: bool,
}

impl TagSet {
    pub fn new<S: Into<String>>(tags: impl IntoIterator<Item = S>) -> Result<Self, HmmError> {
        let tags: Vec<String> = tags.into_iter().map(Into::into).collect();
        if tags.is_empty() {
            return Err(HmmError::NoTags);
        }
        let mut seen = BTreeSet::new();
        for t in &tags {
            if !seen.insert(t.as_str()) {
                return Err(HmmError::DuplicateTag(t.clone()));
            }
        }
        Ok(TagSet {
            tags,
            lexicon: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn label(&self, i: usize) -> &str {
        &self.tags[i]
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.tags.iter().position(|t| t == tag)
    }

    /// Registers `word` with the given tag labels (added to any already present).
    pub fn permit(&mut self, word: &str, tags: &[&str]) -> Result<(), HmmError> {
        let mut ids = BTreeSet::new();
        for t in tags {
            ids.insert(
                self.index_of(t)
                    .ok_or_else(|| HmmError::UnknownTag(t.to_string()))?,
            );
        }
        self.lexicon
            .entry(word.to_string())
            .or_default()
            .extend(ids);
        Ok(())
    }

    pub fn lexicon(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.lexicon
    }

    /// Permitted tags of `word`. Unknown words get every tag with `fallback` set.
    pub fn lexicon_tags(&self, word: &str) -> LexiconLookup {
        match self.lexicon.get(word) {
            Some(tags) => LexiconLookup {
                tags: tags.clone(),
                fallback: false,
            },
            None => LexiconLookup {
                tags: (0..self.tags.len()).collect(),
                fallback: true,
            },
        }
    }

    pub fn lexicon_labels(&self, word: &str) -> (BTreeSet<&str>, bool) {
        let l = self.lexicon_tags(word);
        (l.tags.iter().map(|&i| self.label(i)).collect(), l.fallback)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TagSet {
        let mut ts = TagSet::new(["DT", "NN", "VB"]).unwrap();
        ts.permit("Chair", &["NN", "VB"]).unwrap();
        ts.permit("Paper", &["NN"]).unwrap();
        ts
    }

    #[test]
    fn chair_is_noun_or_verb() {
        let ts = sample();
        let (tags, fb) = ts.lexicon_labels("Chair");
        assert_eq!(tags, BTreeSet::from(["NN", "VB"]));
        assert!(!fb);
    }

    #[test]
    fn paper_is_noun() {
        let ts = sample();
        let (tags, fb) = ts.lexicon_labels("Paper");
        assert_eq!(tags, BTreeSet::from(["NN"]));
        assert!(!fb);
    }

    #[test]
    fn unknown_word_falls_back_to_all_tags() {
        let l = sample().lexicon_tags("zzglorp");
        assert_eq!(l.tags.len(), 3);
        assert!(l.fallback);
    }

    #[test]
    fn rejects_bad_tag_sets() {
        assert_eq!(TagSet::new(Vec::<String>::new()), Err(HmmError::NoTags));
        assert_eq!(
            TagSet::new(["A", "A"]),
            Err(HmmError::DuplicateTag("A".into()))
        );
        let mut ts = TagSet::new(["A"]).unwrap();
        assert!(matches!(
            ts.permit("w", &["B"]),
            Err(HmmError::UnknownTag(_))
        ));
    }
}
