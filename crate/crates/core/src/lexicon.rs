//! Tokenization, stop words and keyword frequencies.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;

use crate::corpus::{BucketKey, Corpus};
use crate::error::{Error, Result};

pub const DEFAULT_TOP_K: usize = 100;

static BUNDLED_STOPWORDS: &str = include_str!("../resources/stopwords_en.txt");

static URL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?:https?://|www\.)\S*").unwrap());
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").unwrap());
static POSSESSIVE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"['’]s\b").unwrap());

/// Splits message text into lowercase keyword candidates.
///
/// URLs and @-mentions are deleted, hashtag bodies are kept, a trailing
/// possessive `'s` is dropped, and tokens are maximal runs of letters and
/// digits joined by single internal hyphens (`covid-19` stays whole).
pub fn tokenize(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let lower = URL.replace_all(&lower, " ");
    let lower = MENTION.replace_all(&lower, " ");
    let lower = POSSESSIVE.replace_all(&lower, "");

    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = lower.chars().peekable();
    while let Some(c) = chars.next() {
        let joins = c == '-' && !current.is_empty() && chars.peek().is_some_and(|n| n.is_alphanumeric());
        if c.is_alphanumeric() || joins {
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// A set of lowercase words excluded from keyword analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWordList {
    words: HashSet<String>,
    source: String,
}

impl StopWordList {
    /// The bundled English list.
    pub fn english() -> Self {
        Self::from_text(BUNDLED_STOPWORDS, "bundled:stopwords_en").expect("bundled stop-word list is valid")
    }

    /// Parses one word per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str, source: impl Into<String>) -> Result<Self> {
        let mut words = HashSet::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.chars().any(char::is_whitespace) {
                return Err(Error::Config(format!(
                    "stop word on line {} contains whitespace: {line:?}",
                    n + 1
                )));
            }
            words.insert(line.to_lowercase());
        }
        Ok(Self {
            words,
            source: source.into(),
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text, path.display().to_string())
    }

    pub fn from_words<I, S>(words: I, source: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let text: Vec<String> = words.into_iter().map(|w| w.as_ref().to_string()).collect();
        Self::from_text(&text.join("\n"), source)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

pub fn remove_stopwords(tokens: &[String], stopwords: &StopWordList) -> Vec<String> {
    tokens.iter().filter(|t| !stopwords.contains(t)).cloned().collect()
}

/// Tokens of `text` that survive stop-word removal, in order.
pub fn keywords_of(text: &str, stopwords: &StopWordList) -> Vec<String> {
    let mut tokens = tokenize(text);
    tokens.retain(|t| !stopwords.contains(t));
    tokens
}

/// Keyword occurrence counts for one bucket.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KeywordFrequency {
    pub bucket: Option<BucketKey>,
    pub counts: BTreeMap<String, u64>,
}

impl KeywordFrequency {
    pub fn with_bucket(mut self, bucket: BucketKey) -> Self {
        self.bucket = Some(bucket);
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Counts every keyword occurrence; repeats inside one tweet all count.
pub fn keyword_frequencies(corpus: &Corpus, stopwords: &StopWordList) -> KeywordFrequency {
    let mut counts = BTreeMap::new();
    for tweet in corpus {
        for kw in keywords_of(&tweet.text, stopwords) {
            *counts.entry(kw).or_insert(0) += 1;
        }
    }
    KeywordFrequency { bucket: None, counts }
}

/// The most frequent keywords of a bucket, ordered by count descending and
/// then lexicographically. Each keyword's position is its graph vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KeywordSet {
    words: Vec<String>,
    frequencies: Vec<u64>,
    index: HashMap<String, usize>,
    k: usize,
}

impl KeywordSet {
    /// Wraps an explicit vertex list. Frequencies are unknown and set to 0.
    pub fn from_words(words: Vec<String>) -> Result<Self> {
        let n = words.len();
        Self::from_parts(words, vec![0; n], n.max(1))
    }

    fn from_parts(words: Vec<String>, frequencies: Vec<u64>, k: usize) -> Result<Self> {
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate keyword {w:?}")));
            }
        }
        Ok(Self {
            words,
            frequencies,
            index,
            k,
        })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    pub fn frequency(&self, i: usize) -> u64 {
        self.frequencies[i]
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The requested capacity.
    pub fn k(&self) -> usize {
        self.k
    }
}

pub fn top_k(freq: &KeywordFrequency, k: usize) -> Result<KeywordSet> {
    if k == 0 {
        return Err(Error::Config("top-k must be at least 1".into()));
    }
    let mut ranked: Vec<(&String, u64)> = freq.counts.iter().map(|(w, &c)| (w, c)).collect();
    // BTreeMap iteration is already lexicographic, so a stable sort on count
    // leaves ties in ascending order.
    ranked.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
    ranked.truncate(k);
    let (words, counts) = ranked.into_iter().map(|(w, c)| (w.clone(), c)).unzip();
    KeywordSet::from_parts(words, counts, k)
}
