//! CSV ingestion and JSON report types.
//!
//! Point CSV: header `id,x,y[,z...]`, one row per node.
//! Trajectory CSV: header `t,id,x,y[,...]`, rows grouped by non-decreasing `t`.

use std::io::Read;

use serde::Serialize;

use crate::clustering::{ClusterRecord, ClusterTable, Label, LabelVector};
use crate::error::{Error, Result};
use crate::geometry::{NodeId, Point, PointSet};
use crate::trajectory::{Frame, FrameClustering};

/// Mean Earth radius in meters, used by the equirectangular projection.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

struct Row {
    line: u64,
    fields: Vec<String>,
}

fn read_rows<R: Read>(
    reader: R,
    source: &str,
    leading: &[&str],
) -> Result<(Vec<String>, Vec<Row>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let parse_err = |line: u64, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let expected = leading.join(",");
    let leading_ok = header.len() > leading.len()
        && header
            .iter()
            .zip(leading)
            .all(|(h, want)| h.eq_ignore_ascii_case(want));
    if !leading_ok {
        return Err(parse_err(
            1,
            format!(
                "header must be `{expected},<coord>[,<coord>...]`, got `{}`",
                header.join(",")
            ),
        ));
    }

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        rows.push(Row {
            line,
            fields: record.iter().map(str::to_string).collect(),
        });
    }
    if rows.is_empty() {
        return Err(parse_err(1, "no data rows".into()));
    }
    Ok((header, rows))
}

fn parse_id(field: &str, source: &str, line: u64) -> Result<NodeId> {
    field.parse().map_err(|_| Error::Parse {
        path: source.to_string(),
        line,
        msg: format!("id {field:?} is not a non-negative integer"),
    })
}

fn parse_number(field: &str, what: &str, source: &str, line: u64) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            path: source.to_string(),
            line,
            msg: format!("{what} {field:?} is not a finite number"),
        }),
    }
}

fn parse_coords(fields: &[String], source: &str, line: u64) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|f| parse_number(f, "coordinate", source, line))
        .collect()
}

fn duplicate(source: &str, line: u64, id: NodeId) -> Error {
    Error::Parse {
        path: source.to_string(),
        line,
        msg: format!("duplicate id {id}"),
    }
}

pub fn parse_points_csv<R: Read>(reader: R, source: &str) -> Result<PointSet> {
    let (_, rows) = read_rows(reader, source, &["id"])?;
    let mut seen = std::collections::HashSet::new();
    let mut points = Vec::with_capacity(rows.len());
    for row in rows {
        let id = parse_id(&row.fields[0], source, row.line)?;
        if !seen.insert(id) {
            return Err(duplicate(source, row.line, id));
        }
        let coords = parse_coords(&row.fields[1..], source, row.line)?;
        points.push(Point::new(id, coords)?);
    }
    PointSet::new(points)
}

pub fn parse_trajectory_csv<R: Read>(reader: R, source: &str) -> Result<Vec<Frame>> {
    let (_, rows) = read_rows(reader, source, &["t", "id"])?;
    let mut frames = Vec::new();
    let mut current: Option<(f64, Vec<Point>, std::collections::HashSet<NodeId>)> = None;
    for row in rows {
        let t = parse_number(&row.fields[0], "timestamp", source, row.line)?;
        let id = parse_id(&row.fields[1], source, row.line)?;
        let coords = parse_coords(&row.fields[2..], source, row.line)?;
        if let Some((ct, _, _)) = &current {
            if t < *ct {
                return Err(Error::Parse {
                    path: source.to_string(),
                    line: row.line,
                    msg: format!("timestamp {t} decreases after {ct}"),
                });
            }
            if t > *ct {
                let (ct, pts, _) = current.take().expect("checked above");
                frames.push(Frame::new(ct, PointSet::new(pts)?)?);
            }
        }
        let (_, pts, ids) = current.get_or_insert_with(|| (t, Vec::new(), Default::default()));
        if !ids.insert(id) {
            return Err(duplicate(source, row.line, id));
        }
        pts.push(Point::new(id, coords)?);
    }
    if let Some((t, pts, _)) = current {
        frames.push(Frame::new(t, PointSet::new(pts)?)?);
    }
    Ok(frames)
}

/// Converts `(lon, lat)` degrees to planar meters about the first frame's
/// centroid.
pub fn project_equirect(frames: Vec<Frame>) -> Result<Vec<Frame>> {
    let Some(first) = frames.first() else {
        return Ok(frames);
    };
    if first.points().dimension() != 2 {
        return Err(Error::invalid(
            "equirectangular projection needs exactly two coordinates (lon, lat)",
        ));
    }
    let n = first.points().len() as f64;
    let lon0 = first
        .points()
        .points()
        .iter()
        .map(|p| p.coords()[0])
        .sum::<f64>()
        / n;
    let lat0 = first
        .points()
        .points()
        .iter()
        .map(|p| p.coords()[1])
        .sum::<f64>()
        / n;
    let cos_lat0 = lat0.to_radians().cos();
    frames
        .into_iter()
        .map(|f| {
            let t = f.t();
            if f.points().dimension() != 2 {
                return Err(Error::Frame {
                    t,
                    msg: "projection needs two coordinates".into(),
                });
            }
            let pts = f
                .points()
                .points()
                .iter()
                .map(|p| {
                    let (lon, lat) = (p.coords()[0], p.coords()[1]);
                    let x = EARTH_RADIUS_M * (lon - lon0).to_radians() * cos_lat0;
                    let y = EARTH_RADIUS_M * (lat - lat0).to_radians();
                    Point::new(p.id(), vec![x, y])
                })
                .collect::<Result<Vec<_>>>()?;
            Frame::new(t, PointSet::new(pts)?)
        })
        .collect()
}

/// Writes a point set as `id,x,y[,...]` CSV with shortest round-trip floats.
pub fn points_to_csv(ps: &PointSet) -> String {
    let axes = ["x", "y", "z"];
    let mut out = String::from("id");
    for k in 0..ps.dimension() {
        out.push(',');
        match axes.get(k) {
            Some(a) => out.push_str(a),
            None => out.push_str(&format!("x{k}")),
        }
    }
    out.push('\n');
    for p in ps.points() {
        out.push_str(&p.id().to_string());
        for c in p.coords() {
            out.push(',');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    out
}

/// Writes frames as `t,id,x,y[,...]` CSV.
pub fn frames_to_csv(frames: &[Frame]) -> String {
    let d = frames.first().map_or(2, |f| f.points().dimension());
    let axes = ["x", "y", "z"];
    let mut out = String::from("t,id");
    for k in 0..d {
        out.push(',');
        match axes.get(k) {
            Some(a) => out.push_str(a),
            None => out.push_str(&format!("x{k}")),
        }
    }
    out.push('\n');
    for f in frames {
        for p in f.points().points() {
            out.push_str(&format!("{},{}", f.t(), p.id()));
            for c in p.coords() {
                out.push(',');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct ClusterReport<'a> {
    pub radius: f64,
    pub n: usize,
    pub labels: &'a [Label],
    pub clusters: &'a [ClusterRecord],
}

impl<'a> ClusterReport<'a> {
    pub fn new(radius: f64, labels: &'a LabelVector, table: &'a ClusterTable) -> Self {
        ClusterReport {
            radius,
            n: labels.len(),
            labels: labels.as_slice(),
            clusters: table.records(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FrameReport<'a> {
    pub t: f64,
    pub n: usize,
    pub ids: &'a [NodeId],
    pub labels: &'a [Label],
    pub clusters: &'a [ClusterRecord],
}

#[derive(Debug, Serialize)]
pub struct TrajectoryReport<'a> {
    pub radius: f64,
    pub frames: Vec<FrameReport<'a>>,
}

impl<'a> TrajectoryReport<'a> {
    pub fn new(radius: f64, results: &'a [FrameClustering]) -> Self {
        TrajectoryReport {
            radius,
            frames: results
                .iter()
                .map(|r| FrameReport {
                    t: r.t,
                    n: r.ids.len(),
                    ids: &r.ids,
                    labels: r.labels.as_slice(),
                    clusters: r.table.records(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchEntry {
    pub n: usize,
    pub k: usize,
    pub m: u32,
    pub naive_mults: usize,
    pub fast_mults: usize,
    /// Whether the naive power was actually executed (only for small `n`).
    pub naive_executed: bool,
    /// Partition from the naive power equals the fast one; `null` when the
    /// naive power was not executed.
    pub partitions_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub seed: u64,
    pub entries: Vec<BenchEntry>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}
