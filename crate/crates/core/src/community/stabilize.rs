use std::cmp::Reverse;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cooccur::KeywordGraph;
use crate::error::{Error, Result};
use crate::rng::derive_seed;

use super::{louvain, LouvainConfig, ModularityScore, Partition};

pub const DEFAULT_RUNS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizeOptions {
    pub runs: usize,
    pub master_seed: u64,
    /// Spread runs over the rayon pool. Results do not depend on this.
    pub parallel: bool,
    /// Sweep cap and gain threshold for every run; the seed field is ignored.
    pub louvain: LouvainConfig,
}

impl StabilizeOptions {
    pub fn new(runs: usize, master_seed: u64) -> Self {
        Self {
            runs,
            master_seed,
            parallel: true,
            louvain: LouvainConfig::default(),
        }
    }
}

/// Modal community count over repeated seeded Louvain runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizedResult {
    pub modal_count: usize,
    /// Community count -> number of runs producing it.
    pub count_histogram: BTreeMap<usize, usize>,
    /// Highest-modularity run among those with the modal count (earliest run on ties).
    pub representative: Partition,
    pub representative_run: usize,
    /// `None` when the graph has no edges and modularity is undefined.
    pub representative_modularity: Option<f64>,
}

/// Runs Louvain `runs` times with seeds derived from `master_seed` and the
/// run index, and reports the most frequent community count.
pub fn stabilized_count(g: &KeywordGraph, runs: usize, master_seed: u64) -> Result<StabilizedResult> {
    stabilize(g, &StabilizeOptions::new(runs, master_seed))
}

pub fn stabilize(g: &KeywordGraph, opts: &StabilizeOptions) -> Result<StabilizedResult> {
    if opts.runs == 0 {
        return Err(Error::Config("run count must be at least 1".into()));
    }
    if g.vertex_count() == 0 {
        return Err(Error::NoVertices);
    }
    let run = |index: usize| -> Result<(Partition, Option<ModularityScore>)> {
        let cfg = LouvainConfig {
            seed: derive_seed(opts.master_seed, index as u64),
            ..opts.louvain
        };
        let p = louvain(g, &cfg)?;
        let score = if g.total_weight() > 0 {
            Some(ModularityScore::compute(g, &p)?)
        } else {
            None
        };
        Ok((p, score))
    };
    let outcomes: Vec<(Partition, Option<ModularityScore>)> = if opts.parallel {
        (0..opts.runs).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..opts.runs).map(run).collect::<Result<_>>()?
    };
    Ok(summarize(outcomes))
}

struct CountTally {
    runs: usize,
    best_run: usize,
    best_score: Option<ModularityScore>,
}

fn summarize(outcomes: Vec<(Partition, Option<ModularityScore>)>) -> StabilizedResult {
    let mut tallies: BTreeMap<usize, CountTally> = BTreeMap::new();
    for (index, (p, score)) in outcomes.iter().enumerate() {
        let tally = tallies.entry(p.community_count()).or_insert(CountTally {
            runs: 0,
            best_run: index,
            best_score: *score,
        });
        tally.runs += 1;
        if *score > tally.best_score {
            tally.best_run = index;
            tally.best_score = *score;
        }
    }
    // Most runs, then the better best run, then the smaller count.
    let (&modal_count, modal) = tallies
        .iter()
        .max_by_key(|(&count, t)| (t.runs, t.best_score, Reverse(count)))
        .expect("at least one run");
    let representative_run = modal.best_run;
    let representative_modularity = modal.best_score.map(|s| s.value());
    let count_histogram = tallies.iter().map(|(&c, t)| (c, t.runs)).collect();
    let representative = outcomes
        .into_iter()
        .nth(representative_run)
        .map(|(p, _)| p)
        .expect("representative run exists");
    StabilizedResult {
        modal_count,
        count_histogram,
        representative,
        representative_run,
        representative_modularity,
    }
}
