//! End-to-end analysis and the run report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::{stabilize, StabilizeOptions, StabilizedResult, DEFAULT_RUNS};
use crate::cooccur::{build_graph, connected_components, isolated_vertices, KeywordGraph};
use crate::corpus::{bucket_by_period, filter_corpus, BucketKey, Corpus, FilterConfig, PeriodKind};
use crate::error::{Error, Result};
use crate::lexicon::{keyword_frequencies, top_k, KeywordFrequency, KeywordSet, StopWordList, DEFAULT_TOP_K};

pub const SCHEMA_VERSION: u32 = 1;

/// Range used for the headline "typical count" fraction.
pub const TYPICAL_RANGE: (usize, usize) = (4, 6);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalyzeConfig {
    pub period: PeriodKind,
    pub top_k: usize,
    pub runs: usize,
    pub master_seed: u64,
    pub filter: FilterConfig,
    /// Account or source label; defaults to the corpus source.
    pub label: Option<String>,
    pub parallel: bool,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            period: PeriodKind::Month,
            top_k: DEFAULT_TOP_K,
            runs: DEFAULT_RUNS,
            master_seed: 0,
            filter: FilterConfig::default(),
            label: None,
            parallel: true,
        }
    }
}

impl AnalyzeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::Config("top-k must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("run count must be at least 1".into()));
        }
        self.filter.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BucketFlag {
    /// No keyword survived filtering; counts are reported as 0.
    NoKeywords,
    /// Keywords exist but never share a tweet; modularity is undefined.
    NoEdges,
    IsolatedVertices,
    SmallComponents,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketResult {
    pub bucket: BucketKey,
    pub tweet_count: usize,
    pub keyword_count: usize,
    /// Modal count over the runs.
    pub community_count: usize,
    pub modularity: Option<f64>,
    pub isolated_count: usize,
    pub isolated_keywords: Vec<String>,
    pub component_count: usize,
    /// Components of two or more vertices other than the largest one.
    pub small_component_count: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub flags: Vec<BucketFlag>,
}

impl BucketResult {
    pub fn is_empty(&self) -> bool {
        self.keyword_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub bucket_count: usize,
    pub nonempty_bucket_count: usize,
    /// Community count -> number of nonempty buckets.
    pub distribution: BTreeMap<usize, usize>,
    pub fraction_in_4_6: Option<f64>,
    pub min_count: Option<usize>,
    pub max_count: Option<usize>,
    pub median_count: Option<f64>,
    pub mean_count: Option<f64>,
}

impl Summary {
    pub fn from_buckets(buckets: &[BucketResult]) -> Self {
        let mut counts: Vec<usize> = buckets
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| b.community_count)
            .collect();
        counts.sort_unstable();
        let mut distribution = BTreeMap::new();
        for &c in &counts {
            *distribution.entry(c).or_insert(0) += 1;
        }
        let n = counts.len();
        let median = (n > 0).then(|| {
            if n % 2 == 1 {
                counts[n / 2] as f64
            } else {
                (counts[n / 2 - 1] + counts[n / 2]) as f64 / 2.0
            }
        });
        Self {
            bucket_count: buckets.len(),
            nonempty_bucket_count: n,
            distribution,
            fraction_in_4_6: fraction_of(buckets, TYPICAL_RANGE.0, TYPICAL_RANGE.1).ok(),
            min_count: counts.first().copied(),
            max_count: counts.last().copied(),
            median_count: median,
            mean_count: (n > 0).then(|| counts.iter().sum::<usize>() as f64 / n as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputStats {
    pub records: usize,
    pub rejected: usize,
    pub kept_after_filter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub top_k: usize,
    pub runs: usize,
    pub master_seed: u64,
    pub filter: FilterConfig,
    pub stopwords: String,
    pub stopword_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub label: String,
    pub period: PeriodKind,
    pub config: ConfigEcho,
    pub input: InputStats,
    pub buckets: Vec<BucketResult>,
    pub summary: Summary,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn community_counts(&self) -> BTreeMap<&BucketKey, usize> {
        self.buckets.iter().map(|b| (&b.bucket, b.community_count)).collect()
    }
}

/// Intermediate products of one bucket, kept for exports.
#[derive(Debug, Clone)]
pub struct BucketArtifacts {
    pub bucket: BucketKey,
    pub frequencies: KeywordFrequency,
    pub keywords: KeywordSet,
    pub graph: KeywordGraph,
    /// `None` for buckets without keywords.
    pub stabilized: Option<StabilizedResult>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: RunReport,
    pub artifacts: Vec<BucketArtifacts>,
}

fn analyze_bucket(
    bucket: &BucketKey,
    corpus: &Corpus,
    stopwords: &StopWordList,
    cfg: &AnalyzeConfig,
) -> Result<(BucketResult, BucketArtifacts)> {
    let frequencies = keyword_frequencies(corpus, stopwords).with_bucket(bucket.clone());
    let keywords = top_k(&frequencies, cfg.top_k)?;
    let graph = build_graph(corpus, &keywords, stopwords).with_bucket(bucket.clone());
    let isolated = isolated_vertices(&graph);
    let components = connected_components(&graph);
    let largest = components.iter().map(Vec::len).max().unwrap_or(0);
    let small_components = components
        .iter()
        .filter(|c| c.len() >= 2)
        .count()
        .saturating_sub(usize::from(largest >= 2));

    let mut flags = Vec::new();
    let stabilized = if keywords.is_empty() {
        flags.push(BucketFlag::NoKeywords);
        None
    } else {
        let opts = StabilizeOptions {
            parallel: cfg.parallel,
            ..StabilizeOptions::new(cfg.runs, cfg.master_seed)
        };
        Some(stabilize(&graph, &opts)?)
    };
    if !keywords.is_empty() && graph.total_weight() == 0 {
        flags.push(BucketFlag::NoEdges);
    }
    if !isolated.is_empty() {
        flags.push(BucketFlag::IsolatedVertices);
    }
    if small_components > 0 {
        flags.push(BucketFlag::SmallComponents);
    }

    let result = BucketResult {
        bucket: bucket.clone(),
        tweet_count: corpus.len(),
        keyword_count: keywords.len(),
        community_count: stabilized.as_ref().map_or(0, |s| s.modal_count),
        modularity: stabilized.as_ref().and_then(|s| s.representative_modularity),
        isolated_count: isolated.len(),
        isolated_keywords: isolated,
        component_count: components.len(),
        small_component_count: small_components,
        histogram: stabilized
            .as_ref()
            .map(|s| s.count_histogram.clone())
            .unwrap_or_default(),
        flags,
    };
    let artifacts = BucketArtifacts {
        bucket: bucket.clone(),
        frequencies,
        keywords,
        graph,
        stabilized,
    };
    Ok((result, artifacts))
}

/// Filter, bucket, rank keywords, build graphs and count communities per
/// bucket. Every bucket runs with the same master seed. Buckets are reported
/// in chronological order; a bucket whose tweets yield no keywords is kept
/// with zero counts and a flag.
pub fn analyze(corpus: &Corpus, stopwords: &StopWordList, cfg: &AnalyzeConfig) -> Result<Analysis> {
    cfg.validate()?;
    let filtered = filter_corpus(corpus, &cfg.filter, stopwords);
    let buckets: Vec<(BucketKey, Corpus)> = bucket_by_period(&filtered, cfg.period).into_iter().collect();
    let run = |(key, bucket): &(BucketKey, Corpus)| analyze_bucket(key, bucket, stopwords, cfg);
    let outcomes: Vec<(BucketResult, BucketArtifacts)> = if cfg.parallel {
        buckets.par_iter().map(run).collect::<Result<_>>()?
    } else {
        buckets.iter().map(run).collect::<Result<_>>()?
    };
    let (results, artifacts): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();

    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        label: cfg.label.clone().unwrap_or_else(|| corpus.source().to_string()),
        period: cfg.period,
        config: ConfigEcho {
            top_k: cfg.top_k,
            runs: cfg.runs,
            master_seed: cfg.master_seed,
            filter: cfg.filter,
            stopwords: stopwords.source().to_string(),
            stopword_count: stopwords.len(),
        },
        input: InputStats {
            records: corpus.len(),
            rejected: 0,
            kept_after_filter: filtered.len(),
        },
        summary: Summary::from_buckets(&results),
        buckets: results,
    };
    Ok(Analysis { report, artifacts })
}

fn fraction_of(buckets: &[BucketResult], lo: usize, hi: usize) -> Result<f64> {
    if lo > hi {
        return Err(Error::Config(format!("empty range [{lo}, {hi}]")));
    }
    let nonempty: Vec<usize> = buckets
        .iter()
        .filter(|b| !b.is_empty())
        .map(|b| b.community_count)
        .collect();
    if nonempty.is_empty() {
        return Err(Error::NoData);
    }
    let hits = nonempty.iter().filter(|&&c| (lo..=hi).contains(&c)).count();
    Ok(hits as f64 / nonempty.len() as f64)
}

/// Share of nonempty buckets whose community count lies in `[lo, hi]`.
pub fn fraction_in_range(report: &RunReport, lo: usize, hi: usize) -> Result<f64> {
    fraction_of(&report.buckets, lo, hi)
}
