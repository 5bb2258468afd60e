//! Message ingestion, filtering and calendar bucketing.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Read, Write};

use chrono::{DateTime, Datelike, NaiveDateTime, SecondsFormat, Timelike, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lexicon::{tokenize, StopWordList};

/// One ingested message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: String,
    /// UTC instant, truncated to whole seconds.
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub is_retweet: bool,
    /// Lowercase language tag, when the source provides one.
    pub lang: Option<String>,
}

impl Tweet {
    pub fn new(id: impl Into<String>, created_at: DateTime<Utc>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            created_at: truncate_to_seconds(created_at),
            text: text.into(),
            is_retweet: false,
            lang: None,
        }
    }

    pub fn with_lang(mut self, lang: impl Into<String>) -> Self {
        self.lang = normalize_lang(Some(lang.into()));
        self
    }

    pub fn retweet(mut self, is_retweet: bool) -> Self {
        self.is_retweet = is_retweet;
        self
    }
}

/// An ordered, id-unique collection of tweets.
///
/// Tweets are kept sorted by `created_at` ascending, ties broken by id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    tweets: Vec<Tweet>,
    source: String,
}

impl Corpus {
    /// Builds a corpus, resolving duplicate ids by keeping the last occurrence.
    pub fn from_tweets(tweets: Vec<Tweet>, source: impl Into<String>) -> Self {
        let entries = tweets.into_iter().enumerate().map(|(i, t)| (i + 1, t)).collect();
        assemble(entries, source.into()).0
    }

    pub fn empty(source: impl Into<String>) -> Self {
        Self {
            tweets: Vec::new(),
            source: source.into(),
        }
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tweet> {
        self.tweets.iter()
    }

    pub fn into_tweets(self) -> Vec<Tweet> {
        self.tweets
    }

    /// Keeps the tweets matching `keep`. Order and uniqueness carry over.
    fn retain_into(&self, source: String, mut keep: impl FnMut(&Tweet) -> bool) -> Corpus {
        Corpus {
            tweets: self.tweets.iter().filter(|t| keep(t)).cloned().collect(),
            source,
        }
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Tweet;
    type IntoIter = std::slice::Iter<'a, Tweet>;

    fn into_iter(self) -> Self::IntoIter {
        self.tweets.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RejectReason {
    /// Not valid JSON / not a JSON object / not UTF-8.
    Parse,
    MissingField,
    InvalidField,
    Timestamp,
    /// An earlier record whose id was reused later in the input.
    Duplicate,
}

/// A non-fatal ingestion failure, tied to its 1-based input line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectRecord {
    pub line: usize,
    pub reason: RejectReason,
    pub detail: String,
}

impl RejectRecord {
    fn new(line: usize, reason: RejectReason, detail: impl Into<String>) -> Self {
        Self {
            line,
            reason,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for RejectRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {:?}: {}", self.line, self.reason, self.detail)
    }
}

fn truncate_to_seconds(t: DateTime<Utc>) -> DateTime<Utc> {
    t.with_nanosecond(0).unwrap_or(t)
}

fn normalize_lang(lang: Option<String>) -> Option<String> {
    lang.map(|l| l.trim().to_lowercase()).filter(|l| !l.is_empty())
}

/// Parses the timestamp layouts found in common archive exports.
///
/// Zone-less layouts are read as UTC.
pub fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    let raw = raw.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(raw) {
        return Some(truncate_to_seconds(t.with_timezone(&Utc)));
    }
    // Twitter API v1.1, e.g. "Sat Mar 14 12:00:00 +0000 2020".
    if let Ok(t) = DateTime::parse_from_str(raw, "%a %b %d %H:%M:%S %z %Y") {
        return Some(truncate_to_seconds(t.with_timezone(&Utc)));
    }
    const NAIVE: [&str; 5] = [
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%dT%H:%M:%S",
        "%Y-%m-%d %H:%M:%S%.f",
        "%m-%d-%Y %H:%M:%S",
        "%m/%d/%Y %H:%M:%S",
    ];
    NAIVE
        .iter()
        .find_map(|layout| NaiveDateTime::parse_from_str(raw, layout).ok())
        .map(|n| truncate_to_seconds(n.and_utc()))
}

pub fn format_timestamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Sorts, removes duplicate ids (last wins) and reports the losers.
fn assemble(entries: Vec<(usize, Tweet)>, source: String) -> (Corpus, Vec<RejectRecord>) {
    let mut last: HashMap<&str, usize> = HashMap::with_capacity(entries.len());
    for (pos, (_, t)) in entries.iter().enumerate() {
        last.insert(t.id.as_str(), pos);
    }
    let keep: Vec<bool> = entries
        .iter()
        .enumerate()
        .map(|(pos, (_, t))| last[t.id.as_str()] == pos)
        .collect();
    let mut rejects = Vec::new();
    let mut tweets = Vec::with_capacity(entries.len());
    for ((line, tweet), keep) in entries.into_iter().zip(keep) {
        if keep {
            tweets.push(tweet);
        } else {
            rejects.push(RejectRecord::new(
                line,
                RejectReason::Duplicate,
                format!("id {:?} reappears later in the input", tweet.id),
            ));
        }
    }
    tweets.sort_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.id.cmp(&b.id)));
    (Corpus { tweets, source }, rejects)
}

fn json_tweet(value: Value) -> std::result::Result<Tweet, (RejectReason, String)> {
    let Value::Object(mut obj) = value else {
        return Err((RejectReason::Parse, "line is not a JSON object".into()));
    };
    let id = match obj.remove("id") {
        Some(Value::String(s)) if !s.is_empty() => s,
        Some(Value::Number(n)) => n.to_string(),
        Some(Value::Null) | None => return Err((RejectReason::MissingField, "missing \"id\"".into())),
        Some(other) => return Err((RejectReason::InvalidField, format!("bad \"id\": {other}"))),
    };
    let created_raw = match obj.remove("created_at") {
        Some(Value::String(s)) => s,
        Some(Value::Null) | None => return Err((RejectReason::MissingField, "missing \"created_at\"".into())),
        Some(other) => return Err((RejectReason::InvalidField, format!("bad \"created_at\": {other}"))),
    };
    let created_at = parse_timestamp(&created_raw).ok_or_else(|| {
        (
            RejectReason::Timestamp,
            format!("unparseable timestamp {created_raw:?}"),
        )
    })?;
    let text = match obj.remove("text") {
        Some(Value::String(s)) => s,
        Some(Value::Null) | None => return Err((RejectReason::MissingField, "missing \"text\"".into())),
        Some(other) => return Err((RejectReason::InvalidField, format!("bad \"text\": {other}"))),
    };
    let is_retweet = match obj.remove("is_retweet") {
        Some(Value::Bool(b)) => b,
        Some(Value::Null) | None => false,
        Some(other) => return Err((RejectReason::InvalidField, format!("bad \"is_retweet\": {other}"))),
    };
    let lang = match obj.remove("lang") {
        Some(Value::String(s)) => normalize_lang(Some(s)),
        Some(Value::Null) | None => None,
        Some(other) => return Err((RejectReason::InvalidField, format!("bad \"lang\": {other}"))),
    };
    Ok(Tweet {
        id,
        created_at,
        text,
        is_retweet,
        lang,
    })
}

/// Reads one JSON object per line.
///
/// Blank lines are skipped; bad lines become [`RejectRecord`]s. Only a
/// failing reader aborts the parse.
pub fn parse_jsonl<R: BufRead>(mut reader: R, source: impl Into<String>) -> Result<(Corpus, Vec<RejectRecord>)> {
    let mut entries = Vec::new();
    let mut rejects = Vec::new();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = match std::str::from_utf8(&buf) {
            Ok(s) => s.trim(),
            Err(e) => {
                rejects.push(RejectRecord::new(line_no, RejectReason::Parse, e.to_string()));
                continue;
            }
        };
        if line.is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Value>(line)
            .map_err(|e| (RejectReason::Parse, e.to_string()))
            .and_then(json_tweet);
        match parsed {
            Ok(t) => entries.push((line_no, t)),
            Err((reason, detail)) => rejects.push(RejectRecord::new(line_no, reason, detail)),
        }
    }
    let (corpus, dups) = assemble(entries, source.into());
    rejects.extend(dups);
    rejects.sort_by_key(|r| r.line);
    Ok((corpus, rejects))
}

#[derive(Serialize)]
struct JsonTweet<'a> {
    id: &'a str,
    created_at: String,
    text: &'a str,
    is_retweet: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lang: Option<&'a str>,
}

/// Writes the corpus in the JSONL schema accepted by [`parse_jsonl`].
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut out: W) -> Result<()> {
    for t in corpus {
        let row = JsonTweet {
            id: &t.id,
            created_at: format_timestamp(&t.created_at),
            text: &t.text,
            is_retweet: t.is_retweet,
            lang: t.lang.as_deref(),
        };
        serde_json::to_writer(&mut out, &row)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Maps tweet roles onto CSV header names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub id: String,
    pub text: String,
    pub created_at: String,
    pub is_retweet: String,
}

impl Default for ColumnMap {
    /// Trump Twitter Archive export headers.
    fn default() -> Self {
        Self {
            id: "id".into(),
            text: "text".into(),
            created_at: "date".into(),
            is_retweet: "isRetweet".into(),
        }
    }
}

impl ColumnMap {
    /// Applies `role=header,role=header` overrides on top of the defaults.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut map = Self::default();
        for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (role, header) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("column map entry {pair:?} is not role=header")))?;
            let header = header.trim().to_string();
            match role.trim() {
                "id" => map.id = header,
                "text" => map.text = header,
                "created_at" | "date" => map.created_at = header,
                "is_retweet" | "isRetweet" => map.is_retweet = header,
                other => return Err(Error::Config(format!("unknown column role {other:?}"))),
            }
        }
        Ok(map)
    }
}

fn parse_flag(raw: &str) -> Option<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "t" | "true" | "1" => Some(true),
        "f" | "false" | "0" | "" => Some(false),
        _ => None,
    }
}

/// Reads a header-first CSV export. No language information is available,
/// so every tweet has `lang == None`.
pub fn parse_tta_csv<R: Read>(
    reader: R,
    columns: &ColumnMap,
    source: impl Into<String>,
) -> Result<(Corpus, Vec<RejectRecord>)> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Config(format!("CSV header has no column {name:?}")))
    };
    let id_col = find(&columns.id)?;
    let text_col = find(&columns.text)?;
    let date_col = find(&columns.created_at)?;
    let rt_col = find(&columns.is_retweet)?;

    let mut entries = Vec::new();
    let mut rejects = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    return Err(e.into());
                }
                let line = e.position().map_or(0, |p| p.line() as usize);
                rejects.push(RejectRecord::new(line, RejectReason::Parse, e.to_string()));
                continue;
            }
        }
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |col: usize, role: &str| {
            record
                .get(col)
                .ok_or_else(|| RejectRecord::new(line, RejectReason::MissingField, format!("row has no {role} column")))
        };
        let row = (|| {
            let id = field(id_col, "id")?.trim();
            if id.is_empty() {
                return Err(RejectRecord::new(line, RejectReason::MissingField, "empty id"));
            }
            let raw_date = field(date_col, "date")?;
            let created_at = parse_timestamp(raw_date).ok_or_else(|| {
                RejectRecord::new(
                    line,
                    RejectReason::Timestamp,
                    format!("unparseable timestamp {raw_date:?}"),
                )
            })?;
            let raw_rt = field(rt_col, "retweet flag")?;
            let is_retweet = parse_flag(raw_rt).ok_or_else(|| {
                RejectRecord::new(line, RejectReason::InvalidField, format!("bad retweet flag {raw_rt:?}"))
            })?;
            let text = field(text_col, "text")?;
            Ok(Tweet {
                id: id.to_string(),
                created_at,
                text: text.to_string(),
                is_retweet,
                lang: None,
            })
        })();
        match row {
            Ok(t) => entries.push((line, t)),
            Err(r) => rejects.push(r),
        }
    }
    let (corpus, dups) = assemble(entries, source.into());
    rejects.extend(dups);
    rejects.sort_by_key(|r| r.line);
    Ok((corpus, rejects))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    pub drop_retweets: bool,
    pub english_only: bool,
    /// Minimum stop-word share for untagged tweets to count as English.
    pub stopword_ratio_threshold: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            drop_retweets: true,
            english_only: true,
            stopword_ratio_threshold: 0.10,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.stopword_ratio_threshold) {
            return Err(Error::Config(format!(
                "stop-word ratio threshold {} is outside [0, 1]",
                self.stopword_ratio_threshold
            )));
        }
        Ok(())
    }
}

/// Stop-word share test for tweets without a language tag. Texts with no
/// tokens never pass.
pub fn looks_english(text: &str, stopwords: &StopWordList, threshold: f64) -> bool {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return false;
    }
    let hits = tokens.iter().filter(|t| stopwords.contains(t)).count();
    hits as f64 / tokens.len() as f64 >= threshold
}

pub fn filter_corpus(corpus: &Corpus, cfg: &FilterConfig, stopwords: &StopWordList) -> Corpus {
    corpus.retain_into(corpus.source.clone(), |t| {
        if cfg.drop_retweets && t.is_retweet {
            return false;
        }
        if !cfg.english_only {
            return true;
        }
        match t.lang.as_deref() {
            Some(lang) => lang == "en",
            None => looks_english(&t.text, stopwords, cfg.stopword_ratio_threshold),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodKind {
    Month,
    Quarter,
}

impl PeriodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PeriodKind::Month => "month",
            PeriodKind::Quarter => "quarter",
        }
    }
}

impl fmt::Display for PeriodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PeriodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "month" => Ok(PeriodKind::Month),
            "quarter" => Ok(PeriodKind::Quarter),
            other => Err(Error::Config(format!("unknown period {other:?}"))),
        }
    }
}

/// A calendar period label: `YYYY-MM` for months, `YYYY-Qn` for quarters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BucketKey {
    kind: PeriodKind,
    label: String,
}

impl BucketKey {
    pub fn for_instant(kind: PeriodKind, t: &DateTime<Utc>) -> Self {
        let label = match kind {
            PeriodKind::Month => format!("{:04}-{:02}", t.year(), t.month()),
            PeriodKind::Quarter => format!("{:04}-Q{}", t.year(), (t.month() - 1) / 3 + 1),
        };
        Self { kind, label }
    }

    /// Parses a label, inferring its kind from the grammar.
    pub fn parse(label: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad bucket label {label:?}"));
        let (year, rest) = label.split_once('-').ok_or_else(bad)?;
        if year.len() != 4 || !year.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let kind = match rest.as_bytes() {
            [b'Q', q] if (b'1'..=b'4').contains(q) => PeriodKind::Quarter,
            [a, b] if a.is_ascii_digit() && b.is_ascii_digit() => {
                let month: u32 = rest.parse().map_err(|_| bad())?;
                if !(1..=12).contains(&month) {
                    return Err(bad());
                }
                PeriodKind::Month
            }
            _ => return Err(bad()),
        };
        Ok(Self {
            kind,
            label: label.to_string(),
        })
    }

    pub fn kind(&self) -> PeriodKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Display for BucketKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl Serialize for BucketKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label)
    }
}

impl<'de> Deserialize<'de> for BucketKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let label = String::deserialize(d)?;
        BucketKey::parse(&label).map_err(serde::de::Error::custom)
    }
}

/// Splits a corpus into calendar periods (UTC). Empty periods are absent.
pub fn bucket_by_period(corpus: &Corpus, kind: PeriodKind) -> BTreeMap<BucketKey, Corpus> {
    let mut groups: BTreeMap<BucketKey, Vec<Tweet>> = BTreeMap::new();
    for t in corpus {
        groups
            .entry(BucketKey::for_instant(kind, &t.created_at))
            .or_default()
            .push(t.clone());
    }
    groups
        .into_iter()
        .map(|(key, tweets)| {
            let source = format!("{}#{}", corpus.source, key.label);
            (key, Corpus { tweets, source })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn ts(s: &str) -> DateTime<Utc> {
        parse_timestamp(s).unwrap()
    }

    fn jsonl(s: &str) -> (Corpus, Vec<RejectRecord>) {
        parse_jsonl(s.as_bytes(), "test").unwrap()
    }

    #[test]
    fn parses_full_record() {
        let (c, rejects) =
            jsonl(r#"{"id":"1","created_at":"2020-03-14T12:00:00Z","text":"hello","is_retweet":false,"lang":"en"}"#);
        assert!(rejects.is_empty());
        assert_eq!(
            c.tweets(),
            &[Tweet {
                id: "1".into(),
                created_at: Utc.with_ymd_and_hms(2020, 3, 14, 12, 0, 0).unwrap(),
                text: "hello".into(),
                is_retweet: false,
                lang: Some("en".into()),
            }]
        );
    }

    #[test]
    fn missing_optional_fields_take_defaults() {
        let (c, rejects) = jsonl(r#"{"id":"7","created_at":"2020-03-14T12:00:00Z","text":"hi"}"#);
        assert!(rejects.is_empty());
        assert_eq!(c.tweets()[0].lang, None);
        assert!(!c.tweets()[0].is_retweet);
    }

    #[test]
    fn bad_lines_are_rejected_not_fatal() {
        let input = "not json{\n\
            {\"id\":\"1\",\"created_at\":\"yesterday\",\"text\":\"x\"}\n\
            {\"id\":\"2\",\"text\":\"x\"}\n\
            \n\
            [1,2]\n\
            {\"id\":\"3\",\"created_at\":\"2020-01-01T00:00:00Z\",\"text\":\"ok\",\"retweet_count\":5}\n";
        let (c, rejects) = jsonl(input);
        assert_eq!(c.len(), 1);
        let got: Vec<_> = rejects.iter().map(|r| (r.line, r.reason)).collect();
        assert_eq!(
            got,
            vec![
                (1, RejectReason::Parse),
                (2, RejectReason::Timestamp),
                (3, RejectReason::MissingField),
                (5, RejectReason::Parse),
            ]
        );
    }

    #[test]
    fn invalid_utf8_line_is_a_reject() {
        let mut input = b"\xff\xfe\n".to_vec();
        input.extend_from_slice(br#"{"id":"1","created_at":"2020-01-01T00:00:00Z","text":"a"}"#);
        let (c, rejects) = parse_jsonl(&input[..], "bytes").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(rejects[0].line, 1);
    }

    #[test]
    fn duplicate_ids_keep_last() {
        let input = r#"{"id":"1","created_at":"2020-01-01T00:00:00Z","text":"first"}
{"id":"1","created_at":"2020-01-02T00:00:00Z","text":"second"}"#;
        let (c, rejects) = jsonl(input);
        assert_eq!(c.len(), 1);
        assert_eq!(c.tweets()[0].text, "second");
        assert_eq!(rejects.len(), 1);
        assert_eq!((rejects[0].line, rejects[0].reason), (1, RejectReason::Duplicate));
    }

    #[test]
    fn ordering_is_time_then_id() {
        let input = r#"{"id":"b","created_at":"2020-01-01T00:00:00Z","text":"x"}
{"id":"c","created_at":"2019-12-31T00:00:00Z","text":"x"}
{"id":"a","created_at":"2020-01-01T00:00:00Z","text":"x"}"#;
        let (c, _) = jsonl(input);
        let ids: Vec<_> = c.iter().map(|t| t.id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }

    #[test]
    fn timestamp_layouts() {
        let want = Utc.with_ymd_and_hms(2020, 3, 14, 12, 0, 5).unwrap();
        for raw in [
            "2020-03-14T12:00:05Z",
            "2020-03-14T12:00:05.250Z",
            "2020-03-14T13:00:05+01:00",
            "2020-03-14 12:00:05",
            "03-14-2020 12:00:05",
            "Sat Mar 14 12:00:05 +0000 2020",
        ] {
            assert_eq!(parse_timestamp(raw), Some(want), "{raw}");
        }
        assert_eq!(parse_timestamp("March 14"), None);
    }

    #[test]
    fn csv_default_columns() {
        let data = "id,text,date,isRetweet,favorites\n\
            1,Stay safe,2020-03-14 12:00:00,f,10\n\
            2,\"RT @x: hi, there\",2020-03-15 12:00:00,t,3\n";
        let (c, rejects) = parse_tta_csv(data.as_bytes(), &ColumnMap::default(), "tta").unwrap();
        assert!(rejects.is_empty(), "{rejects:?}");
        assert_eq!(c.len(), 2);
        assert!(!c.tweets()[0].is_retweet);
        assert!(c.tweets()[1].is_retweet);
        assert!(c.iter().all(|t| t.lang.is_none()));
        assert_eq!(c.tweets()[1].text, "RT @x: hi, there");
    }

    #[test]
    fn csv_bad_date_is_reject() {
        let data = "id,text,date,isRetweet\n1,a,not a date,f\n2,b,2020-01-01 00:00:00,true\n";
        let (c, rejects) = parse_tta_csv(data.as_bytes(), &ColumnMap::default(), "tta").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(rejects.len(), 1);
        assert_eq!((rejects[0].line, rejects[0].reason), (2, RejectReason::Timestamp));
    }

    #[test]
    fn csv_missing_mapped_column_is_fatal() {
        let data = "id,text,created\n1,a,2020-01-01 00:00:00\n";
        let err = parse_tta_csv(data.as_bytes(), &ColumnMap::default(), "tta").unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn column_map_overrides() {
        let map = ColumnMap::parse("created_at=timestamp, is_retweet=rt").unwrap();
        assert_eq!(map.created_at, "timestamp");
        assert_eq!(map.is_retweet, "rt");
        assert_eq!(map.id, "id");
        assert!(ColumnMap::parse("colour=red").is_err());
        assert!(ColumnMap::parse("id").is_err());
    }

    #[test]
    fn filter_rules() {
        let sw = StopWordList::english();
        let t0 = ts("2020-03-01T00:00:00Z");
        let corpus = Corpus::from_tweets(
            vec![
                Tweet::new("rt", t0, "the economy").with_lang("en").retweet(true),
                Tweet::new("fr", t0, "le plan").with_lang("fr"),
                Tweet::new("en", t0, "jobs jobs").with_lang("en"),
                Tweet::new("untagged-en", t0, "the plan is working"),
                Tweet::new("untagged-other", t0, "restez chez vous"),
                Tweet::new("untagged-empty", t0, "!!! https://t.co/x"),
            ],
            "t",
        );
        let kept = filter_corpus(&corpus, &FilterConfig::default(), &sw);
        let ids: Vec<_> = kept.iter().map(|t| t.id.as_str()).collect();
        assert_eq!(ids, ["en", "untagged-en"]);

        let keep_all = FilterConfig {
            drop_retweets: false,
            english_only: false,
            ..FilterConfig::default()
        };
        assert_eq!(filter_corpus(&corpus, &keep_all, &sw).len(), corpus.len());
    }

    #[test]
    fn filter_threshold_validation() {
        let mut cfg = FilterConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.stopword_ratio_threshold = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn month_and_quarter_labels() {
        let cases = [
            ("2020-03-14T12:00:00Z", PeriodKind::Month, "2020-03"),
            ("2020-03-31T23:59:59Z", PeriodKind::Quarter, "2020-Q1"),
            ("2020-04-01T00:00:00Z", PeriodKind::Quarter, "2020-Q2"),
            ("2020-12-31T23:59:59Z", PeriodKind::Quarter, "2020-Q4"),
            // An offset timestamp lands in its UTC month.
            ("2020-03-31T23:30:00-02:00", PeriodKind::Month, "2020-04"),
        ];
        for (raw, kind, label) in cases {
            assert_eq!(BucketKey::for_instant(kind, &ts(raw)).label(), label, "{raw}");
        }
    }

    #[test]
    fn bucket_label_grammar() {
        assert_eq!(BucketKey::parse("2020-07").unwrap().kind(), PeriodKind::Month);
        assert_eq!(BucketKey::parse("2020-Q3").unwrap().kind(), PeriodKind::Quarter);
        for bad in ["2020-13", "2020-Q5", "20-01", "2020-1", "2020/01", "2020-00"] {
            assert!(BucketKey::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn buckets_partition_the_corpus() {
        let corpus = Corpus::from_tweets(
            vec![
                Tweet::new("1", ts("2020-01-05T00:00:00Z"), "a"),
                Tweet::new("2", ts("2020-03-05T00:00:00Z"), "b"),
                Tweet::new("3", ts("2020-03-06T00:00:00Z"), "c"),
            ],
            "acct",
        );
        let months = bucket_by_period(&corpus, PeriodKind::Month);
        let labels: Vec<_> = months.keys().map(|k| k.label()).collect();
        assert_eq!(labels, ["2020-01", "2020-03"]);
        assert_eq!(months.values().map(Corpus::len).sum::<usize>(), 3);
        let quarters = bucket_by_period(&corpus, PeriodKind::Quarter);
        assert_eq!(quarters.len(), 1);
        assert_eq!(quarters.values().next().unwrap().source(), "acct#2020-Q1");
    }
}
