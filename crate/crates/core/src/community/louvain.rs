use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cooccur::KeywordGraph;
use crate::error::{Error, Result};
use crate::rng::StreamRng;

use super::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LouvainConfig {
    pub seed: u64,
    /// Cap on full passes over the vertices within one level.
    pub max_sweeps_per_level: usize,
    /// A move must raise modularity by strictly more than this.
    pub min_gain: f64,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_sweeps_per_level: 100,
            min_gain: 0.0,
        }
    }
}

impl LouvainConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// One level of the hierarchy. Self-loops carry the weight folded into a
/// super-vertex and count towards its strength.
#[derive(Debug, Clone)]
struct Level {
    adj: Vec<Vec<(usize, u64)>>,
    self_loop: Vec<u64>,
    strength: Vec<u64>,
    two_m: u64,
}

impl Level {
    fn from_graph(g: &KeywordGraph) -> Self {
        let n = g.vertex_count();
        Self {
            adj: (0..n).map(|i| g.neighbors(i).collect()).collect(),
            self_loop: vec![0; n],
            strength: g.strengths().to_vec(),
            two_m: 2 * g.total_weight(),
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community (labels contiguous in `0..C`) into one vertex.
    fn aggregate(&self, comm: &[usize]) -> Level {
        let c = comm.iter().max().map_or(0, |&m| m + 1);
        let mut links: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); c];
        let mut self_loop = vec![0; c];
        let mut strength = vec![0; c];
        for i in 0..self.len() {
            let ci = comm[i];
            self_loop[ci] += self.self_loop[i];
            strength[ci] += self.strength[i];
            for &(j, w) in &self.adj[i] {
                let cj = comm[j];
                if cj == ci {
                    self_loop[ci] += w;
                } else {
                    *links[ci].entry(cj).or_insert(0) += w;
                }
            }
        }
        Level {
            adj: links.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loop,
            strength,
            two_m: self.two_m,
        }
    }
}

/// Relabels in order of first appearance; returns the community count.
fn compact(comm: &mut [usize]) -> usize {
    let mut remap = vec![usize::MAX; comm.len()];
    let mut next = 0;
    for c in comm.iter_mut() {
        if remap[*c] == usize::MAX {
            remap[*c] = next;
            next += 1;
        }
        *c = remap[*c];
    }
    next
}

/// Greedy single-vertex moves until a sweep changes nothing.
///
/// For vertex `i` with strength `k` and neighbour weight `w_c` into community
/// `c` (of strength `tot_c`, excluding `i`), joining `c` is worth
/// `2m * w_c - k * tot_c` in units of `1 / (2 m^2)` of modularity. Integer
/// arithmetic keeps comparisons exact; staying put wins ties. Leaving for an
/// empty community is a candidate with gain 0.
fn local_moves(level: &Level, comm: &mut [usize], rng: &mut StreamRng, cfg: &LouvainConfig) -> bool {
    let n = level.len();
    let mut tot = vec![0u64; n];
    let mut size = vec![0usize; n];
    for i in 0..n {
        tot[comm[i]] += level.strength[i];
        size[comm[i]] += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);

    let two_m = level.two_m as i128;
    // Modularity units per integer gain step.
    let unit = 2.0 * (level.two_m as f64 / 2.0).powi(2);
    let mut link = vec![0u64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    for _ in 0..cfg.max_sweeps_per_level.max(1) {
        let mut moved = false;
        for &i in &order {
            let k = level.strength[i];
            if k == 0 {
                continue;
            }
            let home = comm[i];
            for &(j, w) in &level.adj[i] {
                let c = comm[j];
                if link[c] == 0 {
                    touched.push(c);
                }
                link[c] += w;
            }
            tot[home] -= k;
            size[home] -= 1;

            let gain = |c: usize, link: &[u64], tot: &[u64]| two_m * link[c] as i128 - k as i128 * tot[c] as i128;
            let stay = gain(home, &link, &tot);
            let mut best = home;
            let mut best_gain = stay;
            for &c in &touched {
                if c != home {
                    let g = gain(c, &link, &tot);
                    if g > best_gain {
                        best = c;
                        best_gain = g;
                    }
                }
            }
            if size[home] > 0 && best_gain < 0 {
                if let Some(empty) = size.iter().position(|&s| s == 0) {
                    best = empty;
                    best_gain = 0;
                }
            }
            let improves = best != home && {
                let diff = best_gain - stay;
                diff > 0 && (cfg.min_gain <= 0.0 || diff as f64 / unit > cfg.min_gain)
            };
            let target = if improves { best } else { home };

            comm[i] = target;
            tot[target] += k;
            size[target] += 1;
            if target != home {
                moved = true;
            }
            for c in touched.drain(..) {
                link[c] = 0;
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    moved_any
}

/// Two-phase Louvain modularity optimisation.
///
/// Phase one visits vertices in a seeded random order and moves each to the
/// neighbouring community with the largest strictly positive gain; phase two
/// folds communities into super-vertices and repeats. When the hierarchy
/// stops merging, the flat partition is swept once more on the original
/// graph and, if that moves anything, aggregation resumes from there, so the
/// result admits no improving single-vertex move.
///
/// Zero-strength vertices never move. A graph without edges yields the
/// all-singletons partition.
pub fn louvain(g: &KeywordGraph, cfg: &LouvainConfig) -> Result<Partition> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::NoVertices);
    }
    if g.total_weight() == 0 {
        return Ok(Partition::singletons(n));
    }
    let mut rng = StreamRng::new(cfg.seed);
    let base = Level::from_graph(g);
    let mut flat: Vec<usize> = (0..n).collect();

    while local_moves(&base, &mut flat, &mut rng, cfg) {
        compact(&mut flat);
        let mut level = base.aggregate(&flat);
        while level.len() > 1 {
            let mut comm: Vec<usize> = (0..level.len()).collect();
            if !local_moves(&level, &mut comm, &mut rng, cfg) {
                break;
            }
            compact(&mut comm);
            for c in flat.iter_mut() {
                *c = comm[*c];
            }
            level = level.aggregate(&comm);
        }
    }
    Ok(Partition::from_labels(&flat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::modularity;

    fn graph(n: usize, edges: &[(usize, usize, u64)]) -> KeywordGraph {
        KeywordGraph::with_vertices(n, edges).unwrap()
    }

    fn two_triangles() -> KeywordGraph {
        graph(
            6,
            &[
                (0, 1, 1),
                (1, 2, 1),
                (0, 2, 1),
                (3, 4, 1),
                (4, 5, 1),
                (3, 5, 1),
                (2, 3, 1),
            ],
        )
    }

    #[test]
    fn two_triangles_split() {
        for seed in 0..20 {
            let p = louvain(&two_triangles(), &LouvainConfig::with_seed(seed)).unwrap();
            assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1], "seed {seed}");
            let q = modularity(&two_triangles(), &p).unwrap();
            assert!((q - 5.0 / 14.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_edge_merges() {
        let p = louvain(&graph(2, &[(0, 1, 1)]), &LouvainConfig::default()).unwrap();
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn isolated_vertices_stay_single() {
        let p = louvain(&graph(5, &[]), &LouvainConfig::default()).unwrap();
        assert_eq!(p, Partition::singletons(5));
        let p = louvain(&graph(4, &[(0, 1, 2)]), &LouvainConfig::default()).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 1, 2]);
    }

    #[test]
    fn empty_graph_is_an_error() {
        assert!(matches!(
            louvain(&graph(0, &[]), &LouvainConfig::default()),
            Err(Error::NoVertices)
        ));
    }

    #[test]
    fn same_seed_same_partition() {
        let g = graph(
            8,
            &[
                (0, 1, 2),
                (1, 2, 1),
                (2, 3, 3),
                (3, 4, 1),
                (4, 5, 2),
                (5, 6, 1),
                (6, 7, 4),
                (7, 0, 1),
                (1, 5, 1),
            ],
        );
        let a = louvain(&g, &LouvainConfig::with_seed(11)).unwrap();
        let b = louvain(&g, &LouvainConfig::with_seed(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn large_min_gain_blocks_moves() {
        let cfg = LouvainConfig {
            min_gain: 1.0,
            ..LouvainConfig::default()
        };
        let p = louvain(&two_triangles(), &cfg).unwrap();
        assert_eq!(p, Partition::singletons(6));
    }

    #[test]
    fn aggregation_preserves_total_and_strength() {
        let g = two_triangles();
        let base = Level::from_graph(&g);
        let agg = base.aggregate(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(agg.len(), 2);
        assert_eq!(agg.self_loop, vec![6, 6]);
        assert_eq!(agg.strength, vec![7, 7]);
        assert_eq!(agg.adj[0], vec![(1, 1)]);
        let total: u64 = agg.self_loop.iter().sum::<u64>() + agg.adj.iter().flatten().map(|e| e.1).sum::<u64>();
        assert_eq!(total, agg.two_m);
    }
}
