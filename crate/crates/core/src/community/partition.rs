use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of every vertex to a community label in `0..C`.
///
/// Every label below `C` is used at least once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    assignment: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Validates an explicit assignment whose labels must be contiguous.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let count = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; count];
        for &c in &assignment {
            used[c] = true;
        }
        if let Some(gap) = used.iter().position(|u| !u) {
            return Err(Error::InvalidPartition(format!(
                "label {gap} is unused but {} exists",
                count - 1
            )));
        }
        Ok(Self { assignment, count })
    }

    /// Relabels arbitrary labels in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let assignment: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        Self {
            count: remap.len(),
            assignment,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            count: n,
        }
    }

    pub fn all_in_one(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_of(&self, vertex: usize) -> usize {
        self.assignment[vertex]
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    /// Number of vertices covered.
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Members of each community, in label order.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Same grouping with labels renumbered by first appearance.
    pub fn canonical(&self) -> Self {
        Self::from_labels(&self.assignment)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.assignment
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(Partition::new(vec![0, 1, 0, 2]).unwrap().community_count(), 3);
        assert!(Partition::new(vec![0, 2]).is_err());
        assert_eq!(Partition::new(vec![]).unwrap().community_count(), 0);
    }

    #[test]
    fn relabel_by_first_appearance() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.communities(), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(
            Partition::new(vec![1, 0, 1]).unwrap().canonical().assignment(),
            &[0, 1, 0]
        );
    }

    #[test]
    fn trivial_partitions() {
        assert_eq!(Partition::singletons(3).community_count(), 3);
        assert_eq!(Partition::all_in_one(3).community_count(), 1);
        assert_eq!(Partition::all_in_one(0).community_count(), 0);
    }
}
