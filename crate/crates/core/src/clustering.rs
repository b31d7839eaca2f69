//! Mask-based cluster labeling over the power matrix, cluster size ranking,
//! and a graph-traversal components oracle.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{build_adjacency, ClusteringConfig, PointSet};
use crate::matpower::{power_fast, BinaryMatrix};

/// Cluster label type. Labels are dense, starting at 1; 0 only appears
/// transiently while labeling is in progress.
pub type Label = u32;

/// Colors for clusters by size rank. Ranks 1-3 are red, green and blue;
/// ranks past the palette wrap around over the entries after blue.
pub const PALETTE: [&str; 12] = [
    "red", "green", "blue", "orange", "purple", "cyan", "magenta", "brown", "olive", "gray",
    "teal", "navy",
];

/// Color name for a 1-based size rank.
pub fn color_for_rank(rank: usize) -> &'static str {
    assert!(rank >= 1, "ranks start at 1");
    if rank <= PALETTE.len() {
        PALETTE[rank - 1]
    } else {
        PALETTE[3 + (rank - 1 - 3) % (PALETTE.len() - 3)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelVector(Vec<Label>);

impl LabelVector {
    /// Wraps a fully assigned label vector; labels must cover `1..=C` densely
    /// in first-appearance order.
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let mut next = 1;
        for &l in &labels {
            if l == 0 || l > next {
                return Err(Error::invalid(format!(
                    "labels must be dense and numbered by first appearance, saw {l} before {next}"
                )));
            }
            if l == next {
                next += 1;
            }
        }
        Ok(LabelVector(labels))
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_clusters(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    /// Node indices grouped by label, `groups[c - 1]` holding cluster `c`.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.num_clusters()];
        for (i, &l) in self.0.iter().enumerate() {
            groups[l as usize - 1].push(i);
        }
        groups
    }
}

impl std::ops::Index<usize> for LabelVector {
    type Output = Label;

    fn index(&self, i: usize) -> &Label {
        &self.0[i]
    }
}

/// One cluster in size-rank order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterRecord {
    pub label: Label,
    pub size: usize,
    pub rank: usize,
    pub color: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTable {
    frequencies: BTreeMap<Label, usize>,
    records: Vec<ClusterRecord>,
}

impl ClusterTable {
    /// Node count per label.
    pub fn frequencies(&self) -> &BTreeMap<Label, usize> {
        &self.frequencies
    }

    pub fn frequency(&self, label: Label) -> Option<usize> {
        self.frequencies.get(&label).copied()
    }

    /// Clusters ordered by descending size, ties by ascending label.
    pub fn records(&self) -> &[ClusterRecord] {
        &self.records
    }

    pub fn ranking(&self) -> Vec<Label> {
        self.records.iter().map(|r| r.label).collect()
    }

    /// Label holding 1-based size rank `rank`, if that many clusters exist.
    pub fn label_at_rank(&self, rank: usize) -> Option<Label> {
        rank.checked_sub(1)
            .and_then(|i| self.records.get(i))
            .map(|r| r.label)
    }

    /// The up-to-three largest clusters (red, green, blue).
    pub fn color_ranks(&self) -> &[ClusterRecord] {
        &self.records[..self.records.len().min(3)]
    }

    pub fn top_sizes(&self, count: usize) -> Vec<usize> {
        self.records.iter().take(count).map(|r| r.size).collect()
    }

    pub fn num_clusters(&self) -> usize {
        self.records.len()
    }
}

/// Labels nodes from the binarized power matrix `g`.
///
/// Scans seeds `i` in index order. An unlabeled seed takes a fresh label and
/// its row becomes the mask; every later unlabeled node whose row shares a
/// set column with the mask joins the seed's cluster.
pub fn cluster_labels(g: &BinaryMatrix) -> Result<LabelVector> {
    let n = g.n();
    if let Some(i) = (0..n).find(|&i| g.row_is_zero(i)) {
        return Err(Error::invalid(format!(
            "row {i} of the power matrix is all zero"
        )));
    }

    let mut labels: Vec<Label> = vec![0; n];
    let mut unlabeled = n;
    let mut next: Label = 1;
    let mut i = 0;
    while unlabeled > 0 {
        if i >= n {
            return Err(Error::Internal(format!(
                "{unlabeled} nodes unlabeled after scanning all {n} seeds"
            )));
        }
        if labels[i] == 0 {
            let c = next;
            next += 1;
            labels[i] = c;
            unlabeled -= 1;
            let mask = g.row(i);
            for (j, lj) in labels.iter_mut().enumerate().skip(i + 1) {
                if *lj == 0 && mask.iter().zip(g.row(j)).any(|(m, r)| m & r != 0) {
                    *lj = c;
                    unlabeled -= 1;
                }
            }
        }
        i += 1;
    }
    Ok(LabelVector(labels))
}

/// Connected components of the adjacency graph by breadth-first traversal,
/// numbered in order of each component's lowest node index.
pub fn connected_components_oracle(a: &BinaryMatrix) -> Result<LabelVector> {
    if !a.is_symmetric() {
        return Err(Error::invalid("adjacency matrix is not symmetric"));
    }
    let n = a.n();
    let mut labels: Vec<Label> = vec![0; n];
    let mut next: Label = 1;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != 0 {
            continue;
        }
        labels[start] = next;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in a.row_ones(u) {
                if labels[v] == 0 {
                    labels[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    Ok(LabelVector(labels))
}

pub fn build_cluster_table(lv: &LabelVector) -> ClusterTable {
    let mut frequencies = BTreeMap::new();
    for &l in lv.as_slice() {
        *frequencies.entry(l).or_insert(0) += 1;
    }
    let mut order: Vec<(Label, usize)> = frequencies.iter().map(|(&l, &f)| (l, f)).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let records = order
        .into_iter()
        .enumerate()
        .map(|(idx, (label, size))| ClusterRecord {
            label,
            size,
            rank: idx + 1,
            color: color_for_rank(idx + 1),
        })
        .collect();
    ClusterTable {
        frequencies,
        records,
    }
}

/// Full pipeline: adjacency, repeated-squaring power, labeling, ranking.
pub fn cluster_pointset(
    ps: &PointSet,
    cfg: &ClusteringConfig,
) -> Result<(LabelVector, ClusterTable)> {
    let a = build_adjacency(ps, cfg);
    let (g, _) = power_fast(&a)?;
    let labels = cluster_labels(&g)?;
    let table = build_cluster_table(&labels);
    Ok((labels, table))
}
