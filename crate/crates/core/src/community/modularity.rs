use crate::cooccur::KeywordGraph;
use crate::error::{Error, Result};

use super::Partition;

/// Exact modularity as the integer ratio `numerator / (2m)^2`, where
/// `numerator = 2m * sum_c in_c - sum_c tot_c^2`, `in_c` is the ordered-pair
/// weight inside community `c` and `tot_c` its summed strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct ModularityScore {
    pub numerator: i128,
    pub two_m: u64,
}

impl ModularityScore {
    pub fn compute(g: &KeywordGraph, p: &Partition) -> Result<Self> {
        let n = g.vertex_count();
        if p.len() != n {
            return Err(Error::PartitionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        let two_m = 2 * g.total_weight();
        if two_m == 0 {
            return Err(Error::EmptyGraph);
        }
        let c = p.community_count();
        let mut inside = vec![0i128; c];
        let mut tot = vec![0i128; c];
        for i in 0..n {
            let ci = p.community_of(i);
            tot[ci] += g.strength(i) as i128;
            for (j, w) in g.neighbors(i) {
                if p.community_of(j) == ci {
                    inside[ci] += w as i128;
                }
            }
        }
        let numerator = inside.iter().sum::<i128>() * two_m as i128 - tot.iter().map(|t| t * t).sum::<i128>();
        Ok(Self { numerator, two_m })
    }

    pub fn value(&self) -> f64 {
        let denom = self.two_m as f64;
        self.numerator as f64 / denom / denom
    }
}

/// Newman-Girvan modularity of `p` on `g`:
/// `Q = 1/(2m) * sum_ij (A_ij - k_i k_j / 2m) * [c_i == c_j]`.
///
/// Fails with [`Error::EmptyGraph`] when `m == 0`.
pub fn modularity(g: &KeywordGraph, p: &Partition) -> Result<f64> {
    ModularityScore::compute(g, p).map(|s| s.value())
}
