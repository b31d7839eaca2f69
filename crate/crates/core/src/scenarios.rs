//! Deterministic point-set generators for shaped groups, dense crowds and
//! uniform random fields.
//!
//! All lengths in a [`ScenarioSpec`] are in units of the clustering radius,
//! so each generator's expected partition is known by construction:
//!
//! | kind | expected clusters at the spec's radius |
//! |------|----------------------------------------|
//! | `chain` | one cluster iff `spacing < 1` |
//! | `thick-chain` | one cluster iff `spacing < 1` |
//! | `blob` | one cluster iff `spacing < 1` |
//! | `ring` | one cluster (chord spacing is validated below the radius), no point within `r` of the centroid when `ring_radius > 1` |
//! | `forked-branch` | one cluster iff `spacing < 1` |
//! | `dense-core-with-scatter` | core points pairwise connected; the core's cluster is rank 1 when `n_scatter < n_core` |
//! | `uniform-random` | stochastic; `density` is the expected number of points per `r`-disk |
//! | `composite` | the union of its groups' partitions (groups are validated to be at least `r` apart) |
//!
//! Stochastic kinds draw from ChaCha8 seeded with the spec's `seed`; the
//! output is reproducible bit for bit across platforms.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{NodeId, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    /// Clustering radius; every length in `shape` is a multiple of it.
    pub radius: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(flatten)]
    pub shape: Shape,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    /// Single-file chain along x.
    Chain { n: usize, spacing: f64 },
    /// Chain `lanes` points wide on a square lattice.
    ThickChain {
        n: usize,
        lanes: usize,
        spacing: f64,
    },
    /// The `n` square-lattice points nearest the origin.
    Blob { n: usize, spacing: f64 },
    /// Evenly spaced points on a circle around the origin.
    Ring { n: usize, ring_radius: f64 },
    /// A trunk that forks into an upper and a lower arm which rejoin and
    /// continue as a second trunk. Each arm rises `rise` steps, runs `run`
    /// steps, and descends back to the axis.
    ForkedBranch {
        trunk: usize,
        rise: usize,
        run: usize,
        spacing: f64,
    },
    /// Uniform disk of `n_core` points plus `n_scatter` points uniform over
    /// the square `[-field_half_width, field_half_width]²`.
    DenseCoreWithScatter {
        n_core: usize,
        core_radius: f64,
        n_scatter: usize,
        field_half_width: f64,
    },
    /// `n` points uniform over a square sized so that `density` points are
    /// expected per radius-disk.
    UniformRandom { n: usize, density: f64 },
    /// Several shapes, each translated by its offset.
    Composite { groups: Vec<PlacedShape> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedShape {
    pub offset: [f64; 2],
    #[serde(flatten)]
    pub shape: Shape,
}

impl PlacedShape {
    pub fn at(x: f64, y: f64, shape: Shape) -> Self {
        PlacedShape {
            offset: [x, y],
            shape,
        }
    }
}

/// Named built-in scenarios.
pub const PRESETS: [&str; 7] = [
    "shapes",
    "forked",
    "ring",
    "dense-core",
    "low-density",
    "medium-density",
    "high-density",
];

/// Expected points per radius-disk for the three random-field presets.
pub const LOW_DENSITY: f64 = 0.5;
pub const MEDIUM_DENSITY: f64 = 2.0;
pub const HIGH_DENSITY: f64 = 8.0;

impl ScenarioSpec {
    pub fn new(radius: f64, seed: u64, shape: Shape) -> Self {
        ScenarioSpec {
            radius,
            seed,
            shape,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidScenario(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario specs always serialize")
    }

    /// Looks up a built-in scenario by name, at radius 1.
    pub fn preset(name: &str, seed: u64) -> Result<Self> {
        let shape = match name {
            "shapes" => shapes_scene(),
            "forked" => forked_scene(),
            "ring" => Shape::Ring {
                n: 24,
                ring_radius: 3.5,
            },
            "dense-core" => Shape::DenseCoreWithScatter {
                n_core: 40,
                core_radius: 0.45,
                n_scatter: 20,
                field_half_width: 8.0,
            },
            "low-density" => Shape::UniformRandom {
                n: 150,
                density: LOW_DENSITY,
            },
            "medium-density" => Shape::UniformRandom {
                n: 200,
                density: MEDIUM_DENSITY,
            },
            "high-density" => Shape::UniformRandom {
                n: 300,
                density: HIGH_DENSITY,
            },
            other => {
                return Err(Error::InvalidScenario(format!(
                    "unknown preset {other:?}; expected one of {}",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(ScenarioSpec::new(1.0, seed, shape))
    }
}

/// Seven separated groups: a 19-node crowd, a 14-node single-file chain, a
/// 13-node two-lane chain, and four smaller shapes (ring of 10, blob of 7,
/// chains of 5 and 3).
pub fn shapes_scene() -> Shape {
    Shape::Composite {
        groups: vec![
            PlacedShape::at(
                0.0,
                0.0,
                Shape::Blob {
                    n: 19,
                    spacing: 0.8,
                },
            ),
            PlacedShape::at(
                -6.0,
                8.0,
                Shape::Chain {
                    n: 14,
                    spacing: 0.9,
                },
            ),
            PlacedShape::at(
                8.0,
                0.0,
                Shape::ThickChain {
                    n: 13,
                    lanes: 2,
                    spacing: 0.8,
                },
            ),
            PlacedShape::at(
                -8.0,
                -2.0,
                Shape::Ring {
                    n: 10,
                    ring_radius: 1.4,
                },
            ),
            PlacedShape::at(0.0, -8.0, Shape::Blob { n: 7, spacing: 0.8 }),
            PlacedShape::at(8.0, -6.0, Shape::Chain { n: 5, spacing: 0.9 }),
            PlacedShape::at(-8.0, -8.0, Shape::Chain { n: 3, spacing: 0.9 }),
        ],
    }
}

/// A long forked group (36 nodes) plus three chains of 12, 8 and 5.
pub fn forked_scene() -> Shape {
    Shape::Composite {
        groups: vec![
            PlacedShape::at(
                0.0,
                0.0,
                Shape::ForkedBranch {
                    trunk: 6,
                    rise: 3,
                    run: 6,
                    spacing: 0.9,
                },
            ),
            PlacedShape::at(
                -4.0,
                6.0,
                Shape::Chain {
                    n: 12,
                    spacing: 0.9,
                },
            ),
            PlacedShape::at(2.0, -6.0, Shape::Chain { n: 8, spacing: 0.9 }),
            PlacedShape::at(-4.0, 10.0, Shape::Chain { n: 5, spacing: 0.9 }),
        ],
    }
}

/// Generates the scenario's points with ids `1..=N` in generation order.
pub fn generate(spec: &ScenarioSpec) -> Result<PointSet> {
    if !(spec.radius.is_finite() && spec.radius > 0.0) {
        return Err(Error::InvalidScenario(format!(
            "radius must be positive and finite, got {}",
            spec.radius
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let unit_points = shape_points(&spec.shape, &mut rng)?;
    let points = unit_points
        .into_iter()
        .enumerate()
        .map(|(i, [x, y])| Point::new(i as NodeId + 1, vec![x * spec.radius, y * spec.radius]))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(points)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScenario(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn nonzero(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidScenario(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

/// Points in radius units.
fn shape_points(shape: &Shape, rng: &mut ChaCha8Rng) -> Result<Vec<[f64; 2]>> {
    match *shape {
        Shape::Chain { n, spacing } => {
            nonzero("n", n)?;
            positive("spacing", spacing)?;
            Ok((0..n).map(|i| [i as f64 * spacing, 0.0]).collect())
        }
        Shape::ThickChain { n, lanes, spacing } => {
            nonzero("n", n)?;
            nonzero("lanes", lanes)?;
            positive("spacing", spacing)?;
            Ok((0..n)
                .map(|i| [(i / lanes) as f64 * spacing, (i % lanes) as f64 * spacing])
                .collect())
        }
        Shape::Blob { n, spacing } => {
            nonzero("n", n)?;
            positive("spacing", spacing)?;
            Ok(lattice_disk(n)
                .into_iter()
                .map(|(x, y)| [x as f64 * spacing, y as f64 * spacing])
                .collect())
        }
        Shape::Ring { n, ring_radius } => {
            nonzero("n", n)?;
            positive("ring_radius", ring_radius)?;
            if n >= 2 {
                let chord = 2.0 * ring_radius * (PI / n as f64).sin();
                if chord >= 1.0 {
                    return Err(Error::InvalidScenario(format!(
                        "ring of {n} points at radius {ring_radius} has spacing {chord:.4}, \
                         which is not below the clustering radius"
                    )));
                }
            }
            Ok((0..n)
                .map(|i| {
                    let angle = 2.0 * PI * i as f64 / n as f64;
                    [ring_radius * angle.cos(), ring_radius * angle.sin()]
                })
                .collect())
        }
        Shape::ForkedBranch {
            trunk,
            rise,
            run,
            spacing,
        } => {
            nonzero("rise", rise)?;
            if run < 2 {
                return Err(Error::InvalidScenario("run must be at least 2".into()));
            }
            positive("spacing", spacing)?;
            Ok(forked_branch(trunk, rise, run)
                .into_iter()
                .map(|(x, y)| [x as f64 * spacing, y as f64 * spacing])
                .collect())
        }
        Shape::DenseCoreWithScatter {
            n_core,
            core_radius,
            n_scatter,
            field_half_width,
        } => {
            nonzero("n_core", n_core)?;
            positive("core_radius", core_radius)?;
            positive("field_half_width", field_half_width)?;
            // diameter below r keeps every core pair adjacent
            if core_radius >= 0.5 {
                return Err(Error::InvalidScenario(format!(
                    "core_radius must be below 0.5, got {core_radius}"
                )));
            }
            let mut pts = Vec::with_capacity(n_core + n_scatter);
            for _ in 0..n_core {
                let rho = core_radius * rng.random::<f64>().sqrt();
                let angle = 2.0 * PI * rng.random::<f64>();
                pts.push([rho * angle.cos(), rho * angle.sin()]);
            }
            for _ in 0..n_scatter {
                let x = field_half_width * (2.0 * rng.random::<f64>() - 1.0);
                let y = field_half_width * (2.0 * rng.random::<f64>() - 1.0);
                pts.push([x, y]);
            }
            Ok(pts)
        }
        Shape::UniformRandom { n, density } => {
            nonzero("n", n)?;
            positive("density", density)?;
            let side = (n as f64 * PI / density).sqrt();
            Ok((0..n)
                .map(|_| [side * rng.random::<f64>(), side * rng.random::<f64>()])
                .collect())
        }
        Shape::Composite { ref groups } => {
            if groups.is_empty() {
                return Err(Error::InvalidScenario("composite has no groups".into()));
            }
            let mut placed: Vec<Vec<[f64; 2]>> = Vec::with_capacity(groups.len());
            for g in groups {
                if !g.offset.iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidScenario("non-finite group offset".into()));
                }
                let pts = shape_points(&g.shape, rng)?
                    .into_iter()
                    .map(|[x, y]| [x + g.offset[0], y + g.offset[1]])
                    .collect();
                placed.push(pts);
            }
            check_separated(&placed)?;
            Ok(placed.into_iter().flatten().collect())
        }
    }
}

/// The `n` lattice points closest to the origin, ordered by squared distance
/// then `y` then `x`. Every chosen point other than the origin has a lattice
/// neighbor strictly closer to the origin, so the set is 4-connected.
fn lattice_disk(n: usize) -> Vec<(i64, i64)> {
    let half = (n as f64).sqrt().ceil() as i64 + 1;
    let mut cells: Vec<(i64, i64)> = (-half..=half)
        .flat_map(|y| (-half..=half).map(move |x| (x, y)))
        .collect();
    cells.sort_by_key(|&(x, y)| (x * x + y * y, y, x));
    cells.truncate(n);
    cells
}

/// Lattice coordinates of a forked branch, fork point at the origin.
fn forked_branch(trunk: usize, rise: usize, run: usize) -> Vec<(i64, i64)> {
    let (trunk, rise, run) = (trunk as i64, rise as i64, run as i64);
    let mut pts = Vec::new();
    pts.extend((1..=trunk).rev().map(|i| (-i, 0)));
    pts.push((0, 0));
    for sign in [1, -1] {
        pts.extend((1..=rise).map(|j| (0, sign * j)));
        pts.extend((1..=run).map(|i| (i, sign * rise)));
        pts.extend((1..rise).map(|j| (run, sign * (rise - j))));
    }
    pts.push((run, 0));
    pts.extend((1..=trunk).map(|i| (run + i, 0)));
    pts
}

fn check_separated(groups: &[Vec<[f64; 2]>]) -> Result<()> {
    for (gi, a) in groups.iter().enumerate() {
        for (gj, b) in groups.iter().enumerate().skip(gi + 1) {
            for p in a {
                for q in b {
                    let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                    if d < 1.0 {
                        return Err(Error::InvalidScenario(format!(
                            "groups {gi} and {gj} come within {d:.4} radii of each other"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}
