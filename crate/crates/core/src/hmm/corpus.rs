use std::path::Path;

use crate::hmm::HmmError;

/// Sentences of `(word, tag)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaggedCorpus {
    pub sentences: Vec<Vec<(String, String)>>,
}

impl TaggedCorpus {
    pub fn new(sentences: Vec<Vec<(String, String)>>) -> Result<Self, HmmError> {
        if let Some(i) = sentences.iter().position(Vec::is_empty) {
            return Err(HmmError::EmptySentence(i));
        }
        Ok(TaggedCorpus { sentences })
    }

    /// One `word<TAB>tag` per line; blank lines separate sentences. Line numbers in errors
    /// are 1-based.
    pub fn parse(text: &str) -> Result<Self, HmmError> {
        let mut sentences = Vec::new();
        let mut cur: Vec<(String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                if !cur.is_empty() {
                    sentences.push(std::mem::take(&mut cur));
                }
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = |message: &str| HmmError::Parse {
                line: i + 1,
                message: message.to_string(),
            };
            match fields.as_slice() {
                [w, t] => {
                    let (w, t) = (w.trim(), t.trim());
                    if w.is_empty() || t.is_empty() {
                        return Err(bad("empty word or tag"));
                    }
                    cur.push((w.to_string(), t.to_string()));
                }
                _ => {
                    return Err(bad(&format!(
                        "expected \"word<TAB>tag\", found {} field(s)",
                        fields.len()
                    )))
                }
            }
        }
        if !cur.is_empty() {
            sentences.push(cur);
        }
        Ok(TaggedCorpus { sentences })
    }

    pub fn load(path: &Path) -> Result<Self, HmmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HmmError::Io(format!("{}: {e}", path.display())))?;
        TaggedCorpus::parse(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    /// Distinct tags in order of first appearance.
    pub fn tags_in_order(&self) -> Vec<String> {
        distinct(self.sentences.iter().flatten().map(|(_, t)| t))
    }

    /// Distinct words in order of first appearance.
    pub fn words_in_order(&self) -> Vec<String> {
        distinct(self.sentences.iter().flatten().map(|(w, _)| w))
    }

    pub fn to_text(&self) -> String {
        let blocks: Vec<String> = self
            .sentences
            .iter()
            .map(|s| s.iter().map(|(w, t)| format!("{w}\t{t}\n")).collect())
            .collect();
        blocks.join("\n")
    }
}

fn distinct<'a>(items: impl Iterator<Item = &'a String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    items.filter(|s| seen.insert(*s)).cloned().collect()
}
