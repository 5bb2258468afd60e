//! Keyword co-occurrence networks from short-message archives.
//!
//! The pipeline filters a message corpus, splits it into calendar buckets,
//! keeps each bucket's most frequent keywords, links keywords that share a
//! message, and counts communities with repeated seeded Louvain runs.
//! Synthetic control corpora (uniform random words, Markov text, topic
//! mixtures) flow through the same pipeline.

pub mod cli;
pub mod community;
pub mod cooccur;
pub mod corpus;
pub mod error;
pub mod export;
pub mod lexicon;
pub mod report;
pub mod rng;
pub mod synth;

pub use community::{
    brute_force_best, louvain, modularity, stabilize, stabilized_count, LouvainConfig, Partition, StabilizeOptions,
    StabilizedResult,
};
pub use cooccur::{build_graph, connected_components, isolated_vertices, KeywordGraph};
pub use corpus::{
    bucket_by_period, filter_corpus, parse_jsonl, parse_tta_csv, write_jsonl, BucketKey, ColumnMap, Corpus,
    FilterConfig, PeriodKind, RejectReason, RejectRecord, Tweet,
};
pub use error::{Error, Result};
pub use lexicon::{keyword_frequencies, remove_stopwords, tokenize, top_k, KeywordFrequency, KeywordSet, StopWordList};
pub use report::{analyze, fraction_in_range, Analysis, AnalyzeConfig, BucketFlag, BucketResult, RunReport, Summary};
pub use synth::{markov_generate, markov_train, random_tweets, topic_mixture, MarkovModel, TopicSpec, WordList};
