//! Sequential planner on `F(R^d, k)` for any `d >= 2` with `n(k-1)+1` domains
//! of continuity.
//!
//! A query is classified by the number of distinct first coordinates of each
//! configuration. Each configuration is then pushed apart along `e_1` until
//! all first coordinates differ, flattened onto the `e_1` axis, and the axis
//! section (robots rise to distinct heights along `e_2`, slide, and drop) is
//! transported back along that deformation.

use serde::{Deserialize, Serialize};

use crate::error::{PlanError, Result};
use crate::geometry::{axis_projection, distinct_count, Clustering, Configuration, Point, Tolerances};
use crate::pathkit::{concat_homotopies, concat_paths, transport_section, Deformation, Homotopy, Motion, Section, Trajectory};
use crate::query::Query;

/// Off-axis slack accepted by the axis section.
pub const AXIS_TOL: f64 = 1e-9;

/// Fine cell `(j_1, ..., j_n)` of a query and the repacked domain `l = j_1 + ... + j_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralCellLabel {
    pub per_config_counts: Vec<usize>,
    pub domain_index: usize,
}

fn axis_clusters(config: &Configuration, tol: &Tolerances) -> Result<Clustering> {
    let projections: Vec<f64> = config.points().iter().map(axis_projection).collect();
    distinct_count(&projections, tol.eps_proj).map_err(|e| match e {
        PlanError::AmbiguousClustering(a, b, c) => PlanError::BoundaryQuery(format!(
            "first coordinates {a:e}, {b:e}, {c:e} are neither equal nor separated"
        )),
        other => other,
    })
}

/// Number of distinct first coordinates, `1..=k`.
pub fn cp(config: &Configuration, tol: &Tolerances) -> Result<usize> {
    Ok(axis_clusters(config, tol)?.count)
}

/// Desingularization step: `1/k` of the smallest nonzero first-coordinate gap, or 1.
pub fn epsilon(config: &Configuration, tol: &Tolerances) -> Result<f64> {
    let clusters = axis_clusters(config, tol)?;
    Ok(match clusters.min_gap {
        Some(gap) => gap / config.robots() as f64,
        None => 1.0,
    })
}

/// Motion shifting robot `j` (1-based) by `(j-1) * epsilon(C)` along `e_1`;
/// stationary when all first coordinates already differ.
pub fn desingularize(config: &Configuration, tol: &Tolerances) -> Result<Motion> {
    let k = config.robots();
    if cp(config, tol)? == k {
        return Ok(Motion::stationary(config));
    }
    let step = epsilon(config, tol)?;
    let target: Vec<Point> = config
        .points()
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let mut coords = x.coords().to_vec();
            coords[0] += j as f64 * step;
            Point::new(coords)
        })
        .collect();
    Ok(Motion::linear(config, &Configuration::from_points_unchecked(target)))
}

/// Linear motion of every robot onto its first-coordinate projection.
pub fn collapse_to_axis(config: &Configuration, tol: &Tolerances) -> Result<Motion> {
    let count = cp(config, tol)?;
    if count < config.robots() {
        return Err(PlanError::NotDesingularized {
            count,
            robots: config.robots(),
        });
    }
    let target: Vec<Point> = config
        .points()
        .iter()
        .map(|x| {
            let mut coords = vec![0.0; x.dim()];
            coords[0] = axis_projection(x);
            Point::new(coords)
        })
        .collect();
    Ok(Motion::linear(config, &Configuration::from_points_unchecked(target)))
}

fn off_axis(config: &Configuration) -> f64 {
    config
        .points()
        .iter()
        .flat_map(|p| p.coords()[1..].iter().map(|c| c.abs()))
        .fold(0.0, f64::max)
}

/// Robot `i` (1-based) raised by `i * dir`.
fn lifted(config: &Configuration, dir: &[f64]) -> Configuration {
    Configuration::from_points_unchecked(
        config
            .points()
            .iter()
            .enumerate()
            .map(|(i, x)| x.add_scaled((i + 1) as f64, dir))
            .collect(),
    )
}

/// Three-thirds path between configurations that share a line, shifting along `shift`.
pub(crate) fn three_thirds(from: &Configuration, to: &Configuration, shift: &[f64]) -> Result<Trajectory> {
    let up = lifted(from, shift);
    let over = lifted(to, shift);
    let path = concat_paths(&[
        Trajectory::from_motion(Motion::linear(from, &up)),
        Trajectory::from_motion(Motion::linear(&up, &over)),
        Trajectory::from_motion(Motion::linear(&over, to)),
    ])?;
    Ok(path.with_waypoint_times(vec![0.0, 1.0]))
}

/// Section over pairs of configurations on the `e_1` axis: robot `i` rises to
/// height `i` along `e_2`, slides to its target, and drops.
pub fn gamma_pair(from: &Configuration, to: &Configuration) -> Result<Trajectory> {
    for c in [from, to] {
        let off = off_axis(c);
        if off > AXIS_TOL {
            return Err(PlanError::NotOnAxis(off));
        }
    }
    let e2 = Point::basis(from.dim(), 1);
    three_thirds(from, to, e2.coords())
}

/// Concatenation of [`gamma_pair`] over consecutive waypoints.
pub fn gamma_n(configs: &[Configuration]) -> Result<Trajectory> {
    if configs.len() < 2 {
        return Err(PlanError::Shape("need at least 2 waypoints".into()));
    }
    let parts = configs
        .windows(2)
        .map(|w| gamma_pair(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    concat_paths(&parts)
}

pub fn classify_general(query: &Query, tol: &Tolerances) -> Result<GeneralCellLabel> {
    let per_config_counts = query
        .configs()
        .iter()
        .map(|c| cp(c, tol))
        .collect::<Result<Vec<_>>>()?;
    let domain_index = per_config_counts.iter().sum();
    Ok(GeneralCellLabel {
        per_config_counts,
        domain_index,
    })
}

/// Component-wise [`desingularize`].
#[derive(Debug, Clone)]
pub struct AxisDesingularization {
    pub tol: Tolerances,
}

impl Deformation for AxisDesingularization {
    fn name(&self) -> &str {
        "desingularize"
    }
    fn motions(&self, tuple: &[Configuration]) -> Result<Vec<Motion>> {
        tuple.iter().map(|c| desingularize(c, &self.tol)).collect()
    }
}

/// Component-wise [`collapse_to_axis`].
#[derive(Debug, Clone)]
pub struct AxisCollapse {
    pub tol: Tolerances,
}

impl Deformation for AxisCollapse {
    fn name(&self) -> &str {
        "collapse_to_axis"
    }
    fn motions(&self, tuple: &[Configuration]) -> Result<Vec<Motion>> {
        tuple.iter().map(|c| collapse_to_axis(c, &self.tol)).collect()
    }
}

/// [`gamma_n`] on tuples of axis configurations.
#[derive(Debug, Clone, Copy, Default)]
pub struct AxisSection;

impl Section for AxisSection {
    fn check_domain(&self, tuple: &[Configuration]) -> Result<()> {
        for (s, c) in tuple.iter().enumerate() {
            let off = off_axis(c);
            if off > AXIS_TOL {
                return Err(PlanError::Domain(format!(
                    "configuration {s} is {off:e} off the axis"
                )));
            }
            if !(c.min_separation() > 0.0) {
                return Err(PlanError::Domain(format!("configuration {s} has coincident robots")));
            }
        }
        Ok(())
    }

    fn path(&self, tuple: &[Configuration]) -> Result<Trajectory> {
        gamma_n(tuple)
    }
}

/// Desingularization followed by the collapse onto the axis, equal durations.
pub fn general_homotopy(tol: &Tolerances) -> Homotopy {
    concat_homotopies(vec![
        Homotopy::single(AxisDesingularization { tol: *tol }),
        Homotopy::single(AxisCollapse { tol: *tol }),
    ])
}

pub fn plan_general(query: &Query, tol: &Tolerances) -> Result<(Trajectory, GeneralCellLabel)> {
    let label = classify_general(query, tol)?;
    let trajectory = transport_section(&general_homotopy(tol), &AxisSection, query.configs())?;
    Ok((trajectory, label))
}

/// Splits `total` into `parts` integers in `lo..=hi`, filling from the front.
pub(crate) fn composition(total: usize, parts: usize, lo: usize, hi: usize) -> Option<Vec<usize>> {
    if total < parts * lo || total > parts * hi {
        return None;
    }
    let mut out = vec![lo; parts];
    let mut rest = total - parts * lo;
    for slot in out.iter_mut() {
        let add = rest.min(hi - lo);
        *slot += add;
        rest -= add;
    }
    Some(out)
}

/// Configuration with exactly `count` distinct first coordinates: robot `r`
/// sits at `(min(r, count-1), r, 0, ...)`.
pub fn witness_config(dim: usize, robots: usize, count: usize) -> Configuration {
    let points = (0..robots)
        .map(|r| {
            let mut coords = vec![0.0; dim];
            coords[0] = r.min(count - 1) as f64;
            coords[1] = r as f64;
            Point::new(coords)
        })
        .collect();
    Configuration::from_points_unchecked(points)
}

/// A query in the repacked domain `W_l`, `n <= l <= nk`.
pub fn witness_general(dim: usize, robots: usize, waypoints: usize, domain: usize) -> Result<Query> {
    let counts = composition(domain, waypoints, 1, robots).ok_or_else(|| {
        PlanError::InvalidParameter(format!(
            "domain {domain} outside {waypoints}..={}",
            waypoints * robots
        ))
    })?;
    Query::new(
        counts
            .into_iter()
            .map(|c| witness_config(dim, robots, c))
            .collect(),
    )
}
