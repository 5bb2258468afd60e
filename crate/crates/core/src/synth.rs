//! Control corpora of pseudo-tweets.
//!
//! Three generators, all pure functions of their configuration and seed:
//! uniformly random words, a word-level Markov chain trained on a real
//! corpus, and a topic mixture with a known keyword-to-topic map. Output uses
//! the regular [`Corpus`] type (English, not retweets), with synthetic months
//! starting at 2020-01.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::LazyLock;

use chrono::{DateTime, Duration, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{BucketKey, Corpus, PeriodKind, Tweet};
use crate::error::{Error, Result};
use crate::rng::StreamRng;

/// Length limit for a generated message, in Unicode scalar values.
pub const TWEET_CHAR_LIMIT: usize = 280;
/// Markov output may run past [`TWEET_CHAR_LIMIT`] to finish a word, up to this.
pub const MARKOV_HARD_CAP: usize = 400;

static BUNDLED_WORDS: &str = include_str!("../resources/words_en.txt");
static BUNDLED: LazyLock<WordList> =
    LazyLock::new(|| WordList::from_text(BUNDLED_WORDS).expect("bundled word list is valid"));

const FIRST_YEAR: i32 = 2020;

fn month_start(month_index: usize) -> DateTime<Utc> {
    let year = FIRST_YEAR + (month_index / 12) as i32;
    let month = (month_index % 12) as u32 + 1;
    Utc.with_ymd_and_hms(year, month, 1, 0, 0, 0).unwrap()
}

/// Timestamp of message `index` of `per_month` in synthetic month
/// `month_index`, spread evenly over the month.
fn synthetic_time(month_index: usize, index: usize, per_month: usize) -> DateTime<Utc> {
    let start = month_start(month_index);
    let span = (month_start(month_index + 1) - start).num_seconds();
    start + Duration::seconds(span * index as i64 / per_month as i64)
}

fn check_volume(months: usize, per_month: usize) -> Result<()> {
    if months == 0 || per_month == 0 {
        return Err(Error::Config("months and messages per month must be positive".into()));
    }
    Ok(())
}

/// Emits `per_month` messages for each of `months` synthetic months.
fn generate(prefix: &str, months: usize, per_month: usize, mut message: impl FnMut() -> String) -> Corpus {
    let mut tweets = Vec::with_capacity(months * per_month);
    for m in 0..months {
        let label = BucketKey::for_instant(PeriodKind::Month, &month_start(m));
        for j in 0..per_month {
            tweets.push(
                Tweet::new(
                    format!("{prefix}-{label}-{j:06}"),
                    synthetic_time(m, j, per_month),
                    message(),
                )
                .with_lang("en"),
            );
        }
    }
    Corpus::from_tweets(tweets, prefix)
}

/// A non-empty list of distinct lowercase words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordList {
    words: Vec<String>,
}

impl WordList {
    pub fn new(words: Vec<String>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Config("word list is empty".into()));
        }
        let mut seen = std::collections::HashSet::with_capacity(words.len());
        for w in &words {
            if w.is_empty() || w.chars().any(char::is_whitespace) {
                return Err(Error::Config(format!("invalid word {w:?}")));
            }
            if w.chars().any(char::is_uppercase) {
                return Err(Error::Config(format!("word {w:?} is not lowercase")));
            }
            if !seen.insert(w.as_str()) {
                return Err(Error::Config(format!("duplicate word {w:?}")));
            }
        }
        Ok(Self { words })
    }

    /// One word per line; `#` comments and blank lines are skipped, entries
    /// are lowercased and repeats dropped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .filter(|w| seen.insert(w.clone()))
            .collect();
        Self::new(words)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    /// The bundled English list (~234k dictionary words).
    pub fn bundled() -> Self {
        BUNDLED.clone()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Messages of uniformly drawn words (with replacement), each filled until
/// the next word would push it past 280 characters.
pub fn random_tweets(words: &WordList, months: usize, per_month: usize, seed: u64) -> Result<Corpus> {
    check_volume(months, per_month)?;
    if let Some(w) = words.words.iter().find(|w| w.chars().count() > TWEET_CHAR_LIMIT) {
        return Err(Error::Config(format!(
            "word of {} characters cannot fit a {TWEET_CHAR_LIMIT}-character message",
            w.chars().count()
        )));
    }
    let mut rng = StreamRng::new(seed);
    Ok(generate("random", months, per_month, || {
        let mut text = String::new();
        let mut len = 0;
        loop {
            let w = rng.choose(&words.words);
            let next = len + w.chars().count() + usize::from(len > 0);
            if next > TWEET_CHAR_LIMIT {
                break;
            }
            if len > 0 {
                text.push(' ');
            }
            text.push_str(w);
            len = next;
        }
        text
    }))
}

/// Word-level Markov chain of order 1 or 2. A `None` successor marks the end
/// of a message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovModel {
    order: usize,
    transitions: BTreeMap<Vec<String>, BTreeMap<Option<String>, u64>>,
    /// Opening context of every training message.
    starts: Vec<Vec<String>>,
}

impl MarkovModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn transitions(&self) -> &BTreeMap<Vec<String>, BTreeMap<Option<String>, u64>> {
        &self.transitions
    }

    pub fn starts(&self) -> &[Vec<String>] {
        &self.starts
    }

    fn sample_next(&self, context: &[String], rng: &mut StreamRng) -> Option<&str> {
        let options = self.transitions.get(context)?;
        let total: u64 = options.values().sum();
        let mut pick = rng.below(total as usize) as u64;
        for (token, &count) in options {
            if pick < count {
                return token.as_deref();
            }
            pick -= count;
        }
        unreachable!("pick < total")
    }
}

/// Tokens used for generation: lowercase, whitespace-split, stop words kept.
/// Tokens longer than a whole message are dropped.
fn generation_tokens(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .filter(|t| t.chars().count() <= TWEET_CHAR_LIMIT)
        .map(str::to_string)
        .collect()
}

pub fn markov_train(corpus: &Corpus, order: usize) -> Result<MarkovModel> {
    if !(1..=2).contains(&order) {
        return Err(Error::Config(format!("Markov order must be 1 or 2, got {order}")));
    }
    let mut transitions: BTreeMap<Vec<String>, BTreeMap<Option<String>, u64>> = BTreeMap::new();
    let mut starts = Vec::new();
    for tweet in corpus {
        let tokens = generation_tokens(&tweet.text);
        if tokens.len() < order {
            continue;
        }
        starts.push(tokens[..order].to_vec());
        for i in 0..=tokens.len() - order {
            let next = tokens.get(i + order).cloned();
            *transitions
                .entry(tokens[i..i + order].to_vec())
                .or_default()
                .entry(next)
                .or_insert(0) += 1;
        }
    }
    if starts.is_empty() {
        return Err(Error::EmptyTrainingCorpus);
    }
    Ok(MarkovModel {
        order,
        transitions,
        starts,
    })
}

fn markov_message(model: &MarkovModel, rng: &mut StreamRng) -> String {
    let mut text = String::new();
    let mut len = 0;
    // Appends a token; false once the message must end.
    let mut push = |text: &mut String, token: &str| -> bool {
        let next = len + token.chars().count() + usize::from(len > 0);
        if next > MARKOV_HARD_CAP {
            return false;
        }
        if len > 0 {
            text.push(' ');
        }
        text.push_str(token);
        len = next;
        next <= TWEET_CHAR_LIMIT
    };

    let start = rng.choose(&model.starts).clone();
    for token in &start {
        if !push(&mut text, token) {
            return text;
        }
    }
    let mut context = start;
    while let Some(token) = model.sample_next(&context, rng) {
        if !push(&mut text, token) {
            break;
        }
        context.remove(0);
        context.push(token.to_string());
    }
    text
}

/// Samples messages from a trained chain. Each starts at a training
/// message's opening context and follows transitions until the end marker;
/// the word that crosses 280 characters is finished and the message stops,
/// never exceeding 400 characters.
pub fn markov_generate(model: &MarkovModel, months: usize, per_month: usize, seed: u64) -> Result<Corpus> {
    check_volume(months, per_month)?;
    let mut rng = StreamRng::new(seed);
    Ok(generate("markov", months, per_month, || {
        markov_message(model, &mut rng)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopicSpec {
    pub topic_count: usize,
    pub vocab_per_topic: usize,
    pub words_per_tweet: usize,
    /// Chance that a word is swapped for one from a different topic.
    pub cross_topic_noise: f64,
}

impl Default for TopicSpec {
    fn default() -> Self {
        Self {
            topic_count: 5,
            vocab_per_topic: 40,
            words_per_tweet: 8,
            cross_topic_noise: 0.02,
        }
    }
}

impl TopicSpec {
    pub fn validate(&self) -> Result<()> {
        if self.topic_count == 0 || self.vocab_per_topic == 0 || self.words_per_tweet == 0 {
            return Err(Error::Config(
                "topic count, vocabulary size and words per message must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.cross_topic_noise) {
            return Err(Error::Config(format!(
                "cross-topic noise {} is outside [0, 1)",
                self.cross_topic_noise
            )));
        }
        Ok(())
    }

    /// Vocabulary word `index` of `topic`. Topic vocabularies are disjoint.
    pub fn word(topic: usize, index: usize) -> String {
        format!("t{topic}w{index}")
    }
}

/// Messages that each pick one topic uniformly and draw `words_per_tweet`
/// words from its vocabulary, with per-word cross-topic noise. Also returns
/// the ground-truth keyword -> topic map.
pub fn topic_mixture(
    spec: &TopicSpec,
    months: usize,
    per_month: usize,
    seed: u64,
) -> Result<(Corpus, BTreeMap<String, usize>)> {
    spec.validate()?;
    check_volume(months, per_month)?;
    let truth = (0..spec.topic_count)
        .flat_map(|t| (0..spec.vocab_per_topic).map(move |i| (TopicSpec::word(t, i), t)))
        .collect();
    let mut rng = StreamRng::new(seed);
    let corpus = generate("topics", months, per_month, || {
        let topic = rng.below(spec.topic_count);
        let words: Vec<String> = (0..spec.words_per_tweet)
            .map(|_| {
                let mut t = topic;
                if spec.topic_count > 1 && rng.chance(spec.cross_topic_noise) {
                    t = rng.below(spec.topic_count - 1);
                    if t >= topic {
                        t += 1;
                    }
                }
                TopicSpec::word(t, rng.below(spec.vocab_per_topic))
            })
            .collect();
        words.join(" ")
    });
    Ok((corpus, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{bucket_by_period, filter_corpus, FilterConfig};
    use crate::lexicon::{tokenize, StopWordList};

    fn small_list() -> WordList {
        WordList::new(
            ["apple", "banana", "cherry", "date", "elderberry"]
                .map(String::from)
                .to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn bundled_list_is_large() {
        let wl = WordList::bundled();
        assert!(wl.len() >= 10_000);
        assert!(wl.words().iter().all(|w| w.chars().all(|c| c.is_ascii_lowercase())));
    }

    #[test]
    fn word_list_validation() {
        assert!(WordList::new(vec![]).is_err());
        assert!(WordList::new(vec!["a b".into()]).is_err());
        assert!(WordList::new(vec!["x".into(), "x".into()]).is_err());
        assert!(WordList::new(vec!["Big".into()]).is_err());
        let wl = WordList::from_text("# c\nApple\napple\n\npear\n").unwrap();
        assert_eq!(wl.words(), ["apple", "pear"]);
    }

    #[test]
    fn random_volume_and_length() {
        let c = random_tweets(&small_list(), 6, 100, 7).unwrap();
        assert_eq!(c.len(), 600);
        for t in &c {
            let n = t.text.chars().count();
            assert!((1..=TWEET_CHAR_LIMIT).contains(&n));
            assert_eq!(t.lang.as_deref(), Some("en"));
            assert!(!t.is_retweet);
        }
        // Filled: one more of the longest word would not fit.
        assert!(c.iter().all(|t| t.text.chars().count() + 11 > TWEET_CHAR_LIMIT));
        let months = bucket_by_period(&c, PeriodKind::Month);
        let labels: Vec<_> = months.keys().map(|k| k.label().to_string()).collect();
        assert_eq!(
            labels,
            ["2020-01", "2020-02", "2020-03", "2020-04", "2020-05", "2020-06"]
        );
        assert!(months.values().all(|b| b.len() == 100));
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_tweets(&small_list(), 2, 10, 3).unwrap();
        let b = random_tweets(&small_list(), 2, 10, 3).unwrap();
        let c = random_tweets(&small_list(), 2, 10, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_rejects_overlong_words() {
        let wl = WordList::new(vec!["x".repeat(281)]).unwrap();
        assert!(random_tweets(&wl, 1, 1, 0).is_err());
        assert!(random_tweets(&small_list(), 0, 1, 0).is_err());
    }

    #[test]
    fn months_roll_into_next_year() {
        let c = random_tweets(&small_list(), 14, 1, 0).unwrap();
        let last = c.tweets().last().unwrap();
        assert_eq!(
            BucketKey::for_instant(PeriodKind::Month, &last.created_at).label(),
            "2021-02"
        );
    }

    fn corpus_of(texts: &[&str]) -> Corpus {
        let t0 = month_start(0);
        Corpus::from_tweets(
            texts
                .iter()
                .enumerate()
                .map(|(i, t)| Tweet::new(format!("{i:03}"), t0, *t))
                .collect(),
            "train",
        )
    }

    #[test]
    fn markov_counts() {
        let m = markov_train(&corpus_of(&["a b c"]), 1).unwrap();
        let ctx = |s: &str| vec![s.to_string()];
        let next = |s: Option<&str>| s.map(String::from);
        assert_eq!(m.transitions().len(), 3);
        assert_eq!(m.transitions()[&ctx("a")], BTreeMap::from([(next(Some("b")), 1)]));
        assert_eq!(m.transitions()[&ctx("b")], BTreeMap::from([(next(Some("c")), 1)]));
        assert_eq!(m.transitions()[&ctx("c")], BTreeMap::from([(None, 1)]));
        assert_eq!(m.starts(), &[ctx("a")]);
    }

    #[test]
    fn markov_closure_and_reproduction() {
        let train = corpus_of(&["The quick brown fox", "the lazy dog sleeps", "a quick dog"]);
        let m = markov_train(&train, 1).unwrap();
        let vocab: std::collections::HashSet<String> = train.iter().flat_map(|t| generation_tokens(&t.text)).collect();
        let out = markov_generate(&m, 2, 50, 5).unwrap();
        for t in &out {
            assert!(t.text.split(' ').all(|w| vocab.contains(w)), "{}", t.text);
        }

        let sentence = "we will make the economy great again";
        let repeated = vec![sentence; 50];
        let m2 = markov_train(&corpus_of(&repeated), 2).unwrap();
        let out = markov_generate(&m2, 1, 20, 9).unwrap();
        assert!(out.iter().all(|t| t.text == sentence));
    }

    #[test]
    fn markov_length_caps() {
        // A cycle with no end marker after the first message: generation
        // can only stop at the length limits.
        let long = (0..150).map(|i| format!("w{}", i % 7)).collect::<Vec<_>>().join(" ");
        let m = markov_train(&corpus_of(&[&long, "supercalifragilisticexpialidocious w0"]), 1).unwrap();
        let out = markov_generate(&m, 1, 200, 1).unwrap();
        for t in &out {
            let n = t.text.chars().count();
            assert!(n <= MARKOV_HARD_CAP);
            // Past the soft limit only by the final word.
            if n > TWEET_CHAR_LIMIT {
                let last = t.text.rsplit(' ').next().unwrap().chars().count();
                assert!(n - last - 1 <= TWEET_CHAR_LIMIT);
            }
        }
        assert!(out.iter().any(|t| t.text.chars().count() > 200));
    }

    #[test]
    fn markov_errors() {
        assert!(matches!(
            markov_train(&corpus_of(&["", "   "]), 1),
            Err(Error::EmptyTrainingCorpus)
        ));
        assert!(matches!(
            markov_train(&corpus_of(&["single"]), 2),
            Err(Error::EmptyTrainingCorpus)
        ));
        assert!(markov_train(&corpus_of(&["a b"]), 3).is_err());
    }

    #[test]
    fn markov_is_deterministic() {
        let m = markov_train(&corpus_of(&["a b c d", "b c a", "c a b d"]), 1).unwrap();
        assert_eq!(
            markov_generate(&m, 1, 30, 2).unwrap(),
            markov_generate(&m, 1, 30, 2).unwrap()
        );
    }

    #[test]
    fn topics_without_noise_stay_on_topic() {
        let spec = TopicSpec {
            cross_topic_noise: 0.0,
            ..TopicSpec::default()
        };
        let (c, truth) = topic_mixture(&spec, 2, 100, 1).unwrap();
        assert_eq!(truth.len(), 200);
        for t in &c {
            let topics: std::collections::BTreeSet<usize> = tokenize(&t.text).iter().map(|w| truth[w]).collect();
            assert_eq!(topics.len(), 1, "{}", t.text);
        }
    }

    #[test]
    fn topic_words_survive_the_pipeline() {
        let sw = StopWordList::english();
        let (c, truth) = topic_mixture(&TopicSpec::default(), 1, 50, 2).unwrap();
        assert_eq!(filter_corpus(&c, &FilterConfig::default(), &sw).len(), 50);
        for t in &c {
            let toks = tokenize(&t.text);
            assert_eq!(toks.len(), 8);
            assert!(toks.iter().all(|w| truth.contains_key(w) && !sw.contains(w)));
        }
    }

    #[test]
    fn topic_spec_validation() {
        let bad = TopicSpec {
            cross_topic_noise: 1.0,
            ..TopicSpec::default()
        };
        assert!(topic_mixture(&bad, 1, 1, 0).is_err());
        let bad = TopicSpec {
            topic_count: 0,
            ..TopicSpec::default()
        };
        assert!(bad.validate().is_err());
    }
}
