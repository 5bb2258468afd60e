//! Weighted keyword co-occurrence graphs.

use std::collections::BTreeSet;

use crate::corpus::{BucketKey, Corpus};
use crate::error::{Error, Result};
use crate::lexicon::{keywords_of, KeywordSet, StopWordList};

/// Undirected graph over a bucket's top keywords.
///
/// `A[i][j]` counts the tweets in which keywords `i` and `j` both appear.
/// The matrix is symmetric with a zero diagonal; vertex strengths `k_i` and
/// the total weight `m` are kept in step with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordGraph {
    keywords: KeywordSet,
    weights: Vec<u64>,
    strength: Vec<u64>,
    total_weight: u64,
    bucket: Option<BucketKey>,
}

impl KeywordGraph {
    fn empty(keywords: KeywordSet) -> Self {
        let n = keywords.len();
        Self {
            keywords,
            weights: vec![0; n * n],
            strength: vec![0; n],
            total_weight: 0,
            bucket: None,
        }
    }

    fn add(&mut self, i: usize, j: usize, w: u64) {
        let n = self.vertex_count();
        self.weights[i * n + j] += w;
        self.weights[j * n + i] += w;
        self.strength[i] += w;
        self.strength[j] += w;
        self.total_weight += w;
    }

    /// Builds a graph from explicit edges. Repeated pairs accumulate.
    pub fn from_edges(keywords: KeywordSet, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let n = keywords.len();
        let mut g = Self::empty(keywords);
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::Config(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            if i == j {
                return Err(Error::Config(format!("self-loop on vertex {i}")));
            }
            g.add(i, j, w);
        }
        Ok(g)
    }

    /// A graph on `n` vertices labelled `v0`, `v1`, ...
    pub fn with_vertices(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let words = (0..n).map(|i| format!("v{i}")).collect();
        Self::from_edges(KeywordSet::from_words(words)?, edges)
    }

    pub fn with_bucket(mut self, bucket: BucketKey) -> Self {
        self.bucket = Some(bucket);
        self
    }

    pub fn bucket(&self) -> Option<&BucketKey> {
        self.bucket.as_ref()
    }

    pub fn keywords(&self) -> &KeywordSet {
        &self.keywords
    }

    pub fn vertex_count(&self) -> usize {
        self.keywords.len()
    }

    pub fn weight(&self, i: usize, j: usize) -> u64 {
        self.weights[i * self.vertex_count() + j]
    }

    /// `k_i`, the summed weight of edges incident to `i`.
    pub fn strength(&self, i: usize) -> u64 {
        self.strength[i]
    }

    pub fn strengths(&self) -> &[u64] {
        &self.strength
    }

    /// `m`, the summed weight of all edges.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn row(&self, i: usize) -> &[u64] {
        let n = self.vertex_count();
        &self.weights[i * n..(i + 1) * n]
    }

    /// Each unordered pair with positive weight, as `(i, j, w)` with `i < j`,
    /// in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let n = self.vertex_count();
        (0..n).flat_map(move |i| (i + 1..n).filter_map(move |j| Some((i, j, self.weight(i, j))).filter(|e| e.2 > 0)))
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(j, &w)| (j, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w *= factor);
        g.strength.iter_mut().for_each(|w| *w *= factor);
        g.total_weight *= factor;
        g
    }
}

/// Adds 1 to `A[i][j]` for every unordered pair of distinct keywords present
/// in the same tweet. Repeats inside a tweet do not stack; keywords outside
/// `keywords` are ignored.
pub fn build_graph(corpus: &Corpus, keywords: &KeywordSet, stopwords: &StopWordList) -> KeywordGraph {
    let mut g = KeywordGraph::empty(keywords.clone());
    for tweet in corpus {
        let present: BTreeSet<usize> = keywords_of(&tweet.text, stopwords)
            .iter()
            .filter_map(|w| keywords.index_of(w))
            .collect();
        let present: Vec<usize> = present.into_iter().collect();
        for (a, &i) in present.iter().enumerate() {
            for &j in &present[a + 1..] {
                g.add(i, j, 1);
            }
        }
    }
    g
}

/// Keywords with zero strength.
pub fn isolated_vertices(g: &KeywordGraph) -> Vec<String> {
    (0..g.vertex_count())
        .filter(|&i| g.strength(i) == 0)
        .map(|i| g.keywords().word(i).to_string())
        .collect()
}

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components(g: &KeywordGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for (u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}
