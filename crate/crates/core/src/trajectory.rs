//! Per-frame clustering of moving nodes and split/merge detection.
//!
//! Each frame is clustered on its own. Events are derived afterwards by
//! linking a cluster at `t-1` to every cluster at `t` that shares at least one
//! node id with it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::clustering::{cluster_pointset, ClusterTable, Label, LabelVector};
use crate::error::{Error, Result};
use crate::geometry::{ClusteringConfig, NodeId, Point, PointSet};

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    t: f64,
    points: PointSet,
}

impl Frame {
    pub fn new(t: f64, points: PointSet) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::invalid(format!("non-finite timestamp {t}")));
        }
        Ok(Frame { t, points })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }
}

/// Clustering of a single frame. `ids[i]` is the node carrying `labels[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameClustering {
    pub t: f64,
    pub ids: Vec<NodeId>,
    pub labels: LabelVector,
    pub table: ClusterTable,
}

impl FrameClustering {
    fn label_of(&self) -> BTreeMap<NodeId, Label> {
        self.ids
            .iter()
            .copied()
            .zip(self.labels.as_slice().iter().copied())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Split,
    Merge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterEvent {
    pub t: f64,
    pub kind: EventKind,
    /// Labels in the earlier frame.
    pub parents: Vec<Label>,
    /// Labels in the later frame.
    pub children: Vec<Label>,
    /// For a split, the parent's members; for a merge, the child's members.
    pub member_ids: Vec<NodeId>,
}

/// Checks timestamps are non-decreasing and every frame carries the first
/// frame's id set.
pub fn validate_frames(frames: &[Frame]) -> Result<()> {
    let Some(first) = frames.first() else {
        return Ok(());
    };
    let reference: BTreeSet<NodeId> = first.points.ids().collect();
    let mut prev_t = first.t;
    for f in frames {
        if f.t < prev_t {
            return Err(Error::Frame {
                t: f.t,
                msg: format!("timestamp decreases after t={prev_t}"),
            });
        }
        prev_t = f.t;
        let ids: BTreeSet<NodeId> = f.points.ids().collect();
        if ids != reference {
            let missing: Vec<_> = reference.difference(&ids).collect();
            let extra: Vec<_> = ids.difference(&reference).collect();
            return Err(Error::Frame {
                t: f.t,
                msg: format!(
                    "id set differs from first frame (missing {missing:?}, extra {extra:?})"
                ),
            });
        }
    }
    Ok(())
}

pub fn cluster_frames(frames: &[Frame], cfg: &ClusteringConfig) -> Result<Vec<FrameClustering>> {
    validate_frames(frames)?;
    frames
        .iter()
        .map(|f| {
            let (labels, table) = cluster_pointset(&f.points, cfg)?;
            Ok(FrameClustering {
                t: f.t,
                ids: f.points.ids().collect(),
                labels,
                table,
            })
        })
        .collect()
}

/// Split and merge events between consecutive frames, ordered by time, then
/// kind (split first), then lowest member id.
pub fn detect_events(results: &[FrameClustering]) -> Vec<ClusterEvent> {
    let mut events = Vec::new();
    for pair in results.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let before = prev.label_of();
        let after = cur.label_of();

        let mut children_of: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        let mut parents_of: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        let mut members_before: BTreeMap<Label, Vec<NodeId>> = BTreeMap::new();
        let mut members_after: BTreeMap<Label, Vec<NodeId>> = BTreeMap::new();
        for (id, &p) in &before {
            let Some(&c) = after.get(id) else { continue };
            children_of.entry(p).or_default().insert(c);
            parents_of.entry(c).or_default().insert(p);
            members_before.entry(p).or_default().push(*id);
            members_after.entry(c).or_default().push(*id);
        }

        let mut frame_events = Vec::new();
        for (p, children) in &children_of {
            if children.len() >= 2 {
                frame_events.push(ClusterEvent {
                    t: cur.t,
                    kind: EventKind::Split,
                    parents: vec![*p],
                    children: children.iter().copied().collect(),
                    member_ids: members_before[p].clone(),
                });
            }
        }
        for (c, parents) in &parents_of {
            if parents.len() >= 2 {
                frame_events.push(ClusterEvent {
                    t: cur.t,
                    kind: EventKind::Merge,
                    parents: parents.iter().copied().collect(),
                    children: vec![*c],
                    member_ids: members_after[c].clone(),
                });
            }
        }
        frame_events.sort_by(|a, b| {
            a.kind
                .cmp(&b.kind)
                .then(a.member_ids.first().cmp(&b.member_ids.first()))
        });
        events.extend(frame_events);
    }
    events
}

/// Clustering radius of [`synthetic_motorcade`], in meters.
pub const MOTORCADE_RADIUS: f64 = 50.0;

/// Seven cars in column along x at 35 m gaps, moving 10 m per frame, sampled
/// at `t = 0..=180`. Cars 6 and 7 at the tail pull out laterally from
/// `t = 31`, losing contact with car 5 at `t = 35`, hold 80 m out, and swing
/// back to rejoin at `t = 139`. With radius 50 m this yields one split at 35
/// and one merge at 139.
pub fn synthetic_motorcade() -> Vec<Frame> {
    const GAP: f64 = 35.0;
    const SPEED: f64 = 10.0;
    let lateral = |t: f64| -> f64 {
        if t <= 31.0 {
            0.0
        } else if t <= 39.0 {
            10.0 * (t - 31.0)
        } else if t <= 134.0 {
            80.0
        } else if t <= 142.0 {
            30.0 + 10.0 * (139.0 - t)
        } else {
            0.0
        }
    };
    (0..=180)
        .map(|step| {
            let t = step as f64;
            let points = (1..=7u64)
                .map(|id| {
                    let x = SPEED * t - GAP * (id - 1) as f64;
                    let y = if id >= 6 { lateral(t) } else { 0.0 };
                    Point::new(id, vec![x, y]).expect("finite coordinates")
                })
                .collect();
            let ps = PointSet::new(points).expect("unique ids");
            Frame::new(t, ps).expect("finite timestamp")
        })
        .collect()
}
