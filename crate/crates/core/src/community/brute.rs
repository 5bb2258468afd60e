use crate::cooccur::KeywordGraph;
use crate::error::{Error, Result};

use super::{ModularityScore, Partition};

/// Largest graph the exhaustive search accepts (Bell(10) = 115 975 partitions).
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Exhaustive modularity maximisation over every set partition.
///
/// Partitions are enumerated as restricted growth strings in lexicographic
/// order. Ties on modularity go to fewer communities, then to the
/// lexicographically smallest assignment.
pub fn brute_force_best(g: &KeywordGraph) -> Result<(Partition, f64)> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            vertices: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::NoVertices);
    }
    if g.total_weight() == 0 {
        return Err(Error::EmptyGraph);
    }

    let mut labels = vec![0usize; n];
    // max_before[i] = largest label among labels[..i].
    let mut max_before = vec![0usize; n];
    let mut best: Option<(ModularityScore, usize, Vec<usize>)> = None;
    loop {
        let p = Partition::from_labels(&labels);
        let score = ModularityScore::compute(g, &p)?;
        let count = p.community_count();
        let better = match &best {
            None => true,
            Some((s, c, _)) => score > *s || (score == *s && count < *c),
        };
        if better {
            best = Some((score, count, labels.clone()));
        }

        // Advance to the next restricted growth string.
        let mut i = n - 1;
        loop {
            if i == 0 {
                let (score, _, labels) = best.expect("at least one partition");
                return Ok((Partition::from_labels(&labels), score.value()));
            }
            if labels[i] <= max_before[i] {
                labels[i] += 1;
                for j in i + 1..n {
                    labels[j] = 0;
                    max_before[j] = max_before[j - 1].max(labels[j - 1]);
                }
                break;
            }
            i -= 1;
        }
    }
}
