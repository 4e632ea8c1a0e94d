//! Sequential planner on `F(R^d, k)` for even `d` with `n(k-1)` domains of
//! continuity.
//!
//! Each configuration carries its own oriented line `L_C` through the first two
//! robots. A query is classified by the number of distinct projections onto
//! each `L_C` and by how many orientations are antipodal to the first one.
//! The deformation spreads projections apart along `L_C`, flattens onto
//! `L_C`, translates the line to the origin and turns it onto the first
//! configuration's line (antipodal ones stay put); the section over a common
//! line then shifts robots along the tangent field `v(e_C)`.

use serde::{Deserialize, Serialize};

use crate::error::{PlanError, Result};
use crate::geometry::{
    direction_of, distinct_count, line_of, tangent_field, Clustering, Configuration, OrientedLine, Point,
    Tolerances, UnitVector,
};
use crate::pathkit::{concat_paths, transport_section, Deformation, Homotopy, Motion, Section, Trajectory};
use crate::planner_general::{composition, three_thirds};
use crate::query::Query;

/// Distance from a line, or between lines, accepted as zero.
pub const LINE_TOL: f64 = 1e-9;

/// Fine cell `(i_1, ..., i_n; j)` and repacked domain `l = i_1 + ... + i_n - j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenCellLabel {
    pub per_config_counts: Vec<usize>,
    pub antipode_count: usize,
    pub domain_index: usize,
}

/// Signed coordinates `(x_m - x_1) . e_C` along the configuration's own line.
pub fn line_coordinates(config: &Configuration, tol: &Tolerances) -> Result<(UnitVector, Vec<f64>)> {
    let dir = direction_of(config, tol.eps_sep)?;
    let origin = config.point(0);
    let coords = config
        .points()
        .iter()
        .map(|x| x.sub(origin).dot(dir.coords()))
        .collect();
    Ok((dir, coords))
}

fn line_clusters(config: &Configuration, tol: &Tolerances) -> Result<(UnitVector, Vec<f64>, Clustering)> {
    let (dir, coords) = line_coordinates(config, tol)?;
    let clusters = distinct_count(&coords, tol.eps_proj).map_err(|e| match e {
        PlanError::AmbiguousClustering(a, b, c) => PlanError::BoundaryQuery(format!(
            "line coordinates {a:e}, {b:e}, {c:e} are neither equal nor separated"
        )),
        other => other,
    })?;
    Ok((dir, coords, clusters))
}

/// Number of distinct projections onto `L_C`, `2..=k`.
pub fn cp_bar(config: &Configuration, tol: &Tolerances) -> Result<usize> {
    Ok(line_clusters(config, tol)?.2.count)
}

/// `1/k` of the smallest nonzero gap between projections onto `L_C`.
pub fn epsilon_bar(config: &Configuration, tol: &Tolerances) -> Result<f64> {
    let (_, _, clusters) = line_clusters(config, tol)?;
    // x_1 and x_2 always project apart, so a gap exists.
    Ok(clusters.min_gap.unwrap_or(1.0) / config.robots() as f64)
}

/// Classifies the dot product of an orientation with the reference one.
fn is_antipodal(dot: f64, tol: &Tolerances) -> Result<bool> {
    if dot < -1.0 + tol.eps_antipode {
        Ok(true)
    } else if dot < -1.0 + 2.0 * tol.eps_antipode {
        Err(PlanError::BoundaryQuery(format!(
            "orientation dot product {dot} is within the antipodal guard band"
        )))
    } else {
        Ok(false)
    }
}

/// Number of orientations `e_{C_s}` antipodal to `e_{C_1}`, `0..=n-1`.
pub fn antipode_count(query: &Query, tol: &Tolerances) -> Result<usize> {
    let reference = direction_of(query.config(0), tol.eps_sep)?;
    let mut count = 0;
    for c in &query.configs()[1..] {
        let dir = direction_of(c, tol.eps_sep)?;
        if is_antipodal(dir.dot(&reference), tol)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Motion shifting robot `j` (1-based) by `(j-1) * epsilon_bar(C)` along `e_C`;
/// stationary when all projections already differ.
pub fn desingularize_line(config: &Configuration, tol: &Tolerances) -> Result<Motion> {
    let k = config.robots();
    let (dir, _, clusters) = line_clusters(config, tol)?;
    if clusters.count == k {
        return Ok(Motion::stationary(config));
    }
    let step = clusters.min_gap.unwrap_or(1.0) / k as f64;
    let target: Vec<Point> = config
        .points()
        .iter()
        .enumerate()
        .map(|(j, x)| x.add_scaled(j as f64 * step, dir.coords()))
        .collect();
    Ok(Motion::linear(config, &Configuration::from_points_unchecked(target)))
}

/// Linear motion of every robot onto its orthogonal projection on `L_C`.
pub fn collapse_to_line(config: &Configuration, tol: &Tolerances) -> Result<Motion> {
    let (dir, coords, clusters) = line_clusters(config, tol)?;
    if clusters.count < config.robots() {
        return Err(PlanError::NotDesingularized {
            count: clusters.count,
            robots: config.robots(),
        });
    }
    let origin = config.point(0);
    let target: Vec<Point> = coords
        .iter()
        .map(|a| origin.add_scaled(*a, dir.coords()))
        .collect();
    Ok(Motion::linear(config, &Configuration::from_points_unchecked(target)))
}

/// Largest distance of a robot from `L_C`.
pub fn colinearity_defect(config: &Configuration, tol: &Tolerances) -> Result<f64> {
    let (line, _) = line_of(config, tol.eps_sep)?;
    Ok(config
        .points()
        .iter()
        .map(|x| line.distance_to(x))
        .fold(0.0, f64::max))
}

fn require_colinear(config: &Configuration, tol: &Tolerances) -> Result<OrientedLine> {
    let defect = colinearity_defect(config, tol)?;
    if defect > LINE_TOL {
        return Err(PlanError::NotColinear(defect));
    }
    Ok(line_of(config, tol.eps_sep)?.0)
}

/// Parallel translation of a colinear configuration until `L_C` passes
/// through the origin.
pub fn translate_to_origin(config: &Configuration, tol: &Tolerances) -> Result<Motion> {
    let line = require_colinear(config, tol)?;
    let offset = line.base.scale(-1.0);
    Ok(Motion::linear(config, &config.translate(offset.coords())))
}

/// Turns a colinear configuration on a line through the origin along the
/// shortest geodesic from `e_C` to `reference`; antipodal orientations are
/// left in place.
pub fn rotate_to_reference(
    config: &Configuration,
    reference: &UnitVector,
    tol: &Tolerances,
) -> Result<Motion> {
    let line = require_colinear(config, tol)?;
    if !line.passes_through_origin(LINE_TOL) {
        return Err(PlanError::Domain(format!(
            "line is {:e} away from the origin",
            line.base.norm()
        )));
    }
    let dir = line.direction;
    let dot = dir.dot(reference);
    if is_antipodal(dot, tol)? {
        return Ok(Motion::stationary(config));
    }
    // Smallest norm of (1-t) e + t e_ref is at t = 1/2.
    if ((1.0 + dot) / 2.0).max(0.0).sqrt() < 1e-12 {
        return Err(PlanError::DegenerateGeodesic);
    }
    let offsets = config.points().iter().map(|x| x.dot(dir.coords())).collect();
    Ok(Motion::Pivot {
        offsets,
        from: dir,
        to: reference.clone(),
    })
}

/// Section over pairs of colinear configurations on a common line: robot `i`
/// moves out to `i * v(e_C)`, slides, and comes back.
pub fn gamma_bar(from: &Configuration, to: &Configuration, tol: &Tolerances) -> Result<Trajectory> {
    let d = from.dim();
    if d % 2 != 0 {
        return Err(PlanError::OddDimension(d));
    }
    let line = require_colinear(from, tol)?;
    let other = require_colinear(to, tol)?;
    if !line.same_line(&other, LINE_TOL) {
        return Err(PlanError::LinesDiffer);
    }
    let shift = tangent_field(&line.direction)?;
    three_thirds(from, to, shift.coords())
}

/// Concatenation of [`gamma_bar`] over consecutive waypoints on one line.
pub fn gamma_bar_n(configs: &[Configuration], tol: &Tolerances) -> Result<Trajectory> {
    if configs.len() < 2 {
        return Err(PlanError::Shape("need at least 2 waypoints".into()));
    }
    let parts = configs
        .windows(2)
        .map(|w| gamma_bar(&w[0], &w[1], tol))
        .collect::<Result<Vec<_>>>()?;
    concat_paths(&parts)
}

pub fn classify_even(query: &Query, tol: &Tolerances) -> Result<EvenCellLabel> {
    let d = query.dim();
    if d % 2 != 0 {
        return Err(PlanError::OddDimension(d));
    }
    let per_config_counts = query
        .configs()
        .iter()
        .map(|c| cp_bar(c, tol))
        .collect::<Result<Vec<_>>>()?;
    let antipode_count = antipode_count(query, tol)?;
    let domain_index = per_config_counts.iter().sum::<usize>() - antipode_count;
    Ok(EvenCellLabel {
        per_config_counts,
        antipode_count,
        domain_index,
    })
}

#[derive(Debug, Clone)]
pub struct LineDesingularization {
    pub tol: Tolerances,
}

impl Deformation for LineDesingularization {
    fn name(&self) -> &str {
        "desingularize_line"
    }
    fn motions(&self, tuple: &[Configuration]) -> Result<Vec<Motion>> {
        tuple.iter().map(|c| desingularize_line(c, &self.tol)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct LineCollapse {
    pub tol: Tolerances,
}

impl Deformation for LineCollapse {
    fn name(&self) -> &str {
        "collapse_to_line"
    }
    fn motions(&self, tuple: &[Configuration]) -> Result<Vec<Motion>> {
        tuple.iter().map(|c| collapse_to_line(c, &self.tol)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct OriginTranslation {
    pub tol: Tolerances,
}

impl Deformation for OriginTranslation {
    fn name(&self) -> &str {
        "translate_to_origin"
    }
    fn motions(&self, tuple: &[Configuration]) -> Result<Vec<Motion>> {
        tuple.iter().map(|c| translate_to_origin(c, &self.tol)).collect()
    }
}

/// Turns every component onto the first component's oriented line.
#[derive(Debug, Clone)]
pub struct ReferenceRotation {
    pub tol: Tolerances,
}

impl Deformation for ReferenceRotation {
    fn name(&self) -> &str {
        "rotate_to_reference"
    }
    fn motions(&self, tuple: &[Configuration]) -> Result<Vec<Motion>> {
        let reference = direction_of(&tuple[0], self.tol.eps_sep)?;
        tuple
            .iter()
            .map(|c| rotate_to_reference(c, &reference, &self.tol))
            .collect()
    }
}

/// The four-stage deformation onto tuples sharing one line through the origin.
pub fn even_homotopy(tol: &Tolerances) -> Homotopy {
    Homotopy::from_stages(vec![
        std::sync::Arc::new(LineDesingularization { tol: *tol }),
        std::sync::Arc::new(LineCollapse { tol: *tol }),
        std::sync::Arc::new(OriginTranslation { tol: *tol }),
        std::sync::Arc::new(ReferenceRotation { tol: *tol }),
    ])
}

/// [`gamma_bar_n`] on tuples of colinear configurations sharing one line
/// through the origin, oriented like the first one or antipodally.
#[derive(Debug, Clone)]
pub struct OriginLineSection {
    pub tol: Tolerances,
}

impl Section for OriginLineSection {
    fn check_domain(&self, tuple: &[Configuration]) -> Result<()> {
        let domain = |e: PlanError| PlanError::Domain(e.to_string());
        let first = require_colinear(&tuple[0], &self.tol).map_err(domain)?;
        if !first.passes_through_origin(LINE_TOL) {
            return Err(PlanError::Domain("common line misses the origin".into()));
        }
        for (s, c) in tuple.iter().enumerate().skip(1) {
            let line = require_colinear(c, &self.tol).map_err(domain)?;
            if !line.same_line(&first, LINE_TOL) {
                return Err(PlanError::Domain(format!("configuration {s} is on another line")));
            }
            let dot = line.direction.dot(&first.direction);
            if !(dot > 1.0 - LINE_TOL || is_antipodal(dot, &self.tol).map_err(domain)?) {
                return Err(PlanError::Domain(format!("configuration {s} is not aligned")));
            }
        }
        Ok(())
    }

    fn path(&self, tuple: &[Configuration]) -> Result<Trajectory> {
        gamma_bar_n(tuple, &self.tol)
    }
}

pub fn plan_even(query: &Query, tol: &Tolerances) -> Result<(Trajectory, EvenCellLabel)> {
    let label = classify_even(query, tol)?;
    let section = OriginLineSection { tol: *tol };
    let trajectory = transport_section(&even_homotopy(tol), &section, query.configs())?;
    Ok((trajectory, label))
}

/// Configuration with `count` distinct projections onto its own line, which is
/// the first coordinate axis oriented by `sign`.
pub fn witness_config(dim: usize, robots: usize, count: usize, sign: f64) -> Configuration {
    let points = (0..robots)
        .map(|r| {
            let mut coords = vec![0.0; dim];
            coords[0] = sign * r.min(count - 1) as f64;
            coords[1] = if r < 2 { 0.0 } else { r as f64 };
            Point::new(coords)
        })
        .collect();
    Configuration::from_points_unchecked(points)
}

/// The fine cell `(i_1, ..., i_n; j)` used to witness domain `l`.
pub fn witness_cell(robots: usize, waypoints: usize, domain: usize) -> Option<(Vec<usize>, usize)> {
    if domain < waypoints + 1 || domain > waypoints * robots {
        return None;
    }
    let antipodes = (2 * waypoints).saturating_sub(domain);
    let counts = composition(domain + antipodes, waypoints, 2, robots)?;
    Some((counts, antipodes))
}

/// A query in the repacked domain `W_l`, `n+1 <= l <= nk`.
pub fn witness_even(dim: usize, robots: usize, waypoints: usize, domain: usize) -> Result<Query> {
    if dim % 2 != 0 {
        return Err(PlanError::OddDimension(dim));
    }
    let (counts, antipodes) = witness_cell(robots, waypoints, domain).ok_or_else(|| {
        PlanError::InvalidParameter(format!(
            "domain {domain} outside {}..={}",
            waypoints + 1,
            waypoints * robots
        ))
    })?;
    Query::new(
        counts
            .into_iter()
            .enumerate()
            .map(|(s, c)| {
                let sign = if s >= 1 && s <= antipodes { -1.0 } else { 1.0 };
                witness_config(dim, robots, c, sign)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(coords: &[&[f64]]) -> Configuration {
        Configuration::from_coords(coords.iter().map(|c| c.to_vec()).collect(), 1e-9).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn cp_bar_examples() {
        assert_eq!(cp_bar(&cfg(&[&[0.0, 1.0], &[1.0, 2.0], &[3.0, 4.0]]), &tol()).unwrap(), 3);
        assert_eq!(cp_bar(&cfg(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]), &tol()).unwrap(), 2);
        assert_eq!(cp_bar(&cfg(&[&[5.0, 1.0], &[-2.0, 7.0]]), &tol()).unwrap(), 2);
    }

    #[test]
    fn antipode_examples() {
        let e = cfg(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let anti = cfg(&[&[0.0, 0.0], &[-1.0, 0.0]]);
        let q = Query::new(vec![e.clone(), e.clone(), e.clone()]).unwrap();
        assert_eq!(antipode_count(&q, &tol()).unwrap(), 0);
        let q = Query::new(vec![e.clone(), anti.clone(), e.clone()]).unwrap();
        assert_eq!(antipode_count(&q, &tol()).unwrap(), 1);
        let q = Query::new(vec![e.clone(), anti.clone()]).unwrap();
        assert_eq!(antipode_count(&q, &tol()).unwrap(), 1);
    }

    #[test]
    fn antipode_guard_band_is_boundary() {
        let t = Tolerances {
            eps_antipode: 1e-3,
            ..tol()
        };
        // angle 0.05 from antipodal: dot = -cos(0.05), 1 + dot ~ 1.25e-3
        let (s, c) = (0.05f64.sin(), 0.05f64.cos());
        let q = Query::from_coords(
            vec![
                vec![vec![0.0, 0.0], vec![1.0, 0.0]],
                vec![vec![0.0, 0.0], vec![-c, s]],
            ],
            1e-9,
        )
        .unwrap();
        assert!(matches!(antipode_count(&q, &t), Err(PlanError::BoundaryQuery(_))));
    }

    #[test]
    fn desingularize_line_examples() {
        let c = cfg(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert_abs_diff_eq!(epsilon_bar(&c, &tol()).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        let m = desingularize_line(&c, &tol()).unwrap();
        let end = m.eval(1.0);
        assert_abs_diff_eq!(end.point(1).coords()[0], 1.0 + 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(end.point(2).coords()[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(end.point(2).coords()[1], 1.0);
        assert_eq!(cp_bar(&end, &tol()).unwrap(), 3);
        for i in 0..=10 {
            let mid = m.eval(i as f64 / 10.0);
            let e = direction_of(&mid, 1e-9).unwrap();
            assert_abs_diff_eq!(e.coords()[0], 1.0, epsilon = 1e-12);
        }

        let colinear = cfg(&[&[0.0, 1.0], &[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(desingularize_line(&colinear, &tol()).unwrap(), Motion::stationary(&colinear));
    }

    #[test]
    fn collapse_to_line_examples() {
        let c = cfg(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0 / 3.0, 1.0]]);
        let m = collapse_to_line(&c, &tol()).unwrap();
        assert_eq!(m.eval(1.0), cfg(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0 / 3.0, 0.0]]));
        assert_eq!(m.eval(0.5).point(2).coords(), &[2.0 / 3.0, 0.5]);
        let err = collapse_to_line(&cfg(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]), &tol()).unwrap_err();
        assert!(matches!(err, PlanError::NotDesingularized { count: 2, robots: 3 }));
    }

    #[test]
    fn translate_examples() {
        let c = cfg(&[&[0.0, 1.0], &[1.0, 1.0], &[3.0, 1.0]]);
        let m = translate_to_origin(&c, &tol()).unwrap();
        assert_eq!(m.eval(1.0), cfg(&[&[0.0, 0.0], &[1.0, 0.0], &[3.0, 0.0]]));
        assert_eq!(m.eval(0.25).point(2).coords(), &[3.0, 0.75]);
        let through = cfg(&[&[-1.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(translate_to_origin(&through, &tol()).unwrap(), Motion::stationary(&through));
        let err = translate_to_origin(&cfg(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]), &tol()).unwrap_err();
        assert!(matches!(err, PlanError::NotColinear(_)));
    }

    #[test]
    fn rotate_examples() {
        let c = cfg(&[&[0.0, 1.0], &[0.0, 2.0]]);
        let m = rotate_to_reference(&c, &UnitVector::axis(2, 0), &tol()).unwrap();
        let end = m.eval(1.0);
        assert_abs_diff_eq!(end.point(1).coords()[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(end.point(1).coords()[1], 0.0, epsilon = 1e-15);

        let same = cfg(&[&[1.0, 0.0], &[2.0, 0.0]]);
        let m = rotate_to_reference(&same, &UnitVector::axis(2, 0), &tol()).unwrap();
        assert!(m.eval(0.5).distance(&same) < 1e-15);

        let anti = cfg(&[&[2.0, 0.0], &[1.0, 0.0]]);
        let m = rotate_to_reference(&anti, &UnitVector::axis(2, 0), &tol()).unwrap();
        assert_eq!(m, Motion::stationary(&anti));
    }

    #[test]
    fn gamma_bar_examples() {
        let c = cfg(&[&[0.0, 0.0], &[0.0, 2.0]]);
        let c2 = cfg(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let g = gamma_bar(&c, &c2, &tol()).unwrap();
        let mid = g.eval(0.5);
        assert_abs_diff_eq!(mid.point(0).coords()[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mid.point(0).coords()[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mid.point(1).coords()[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mid.point(1).coords()[1], 1.0, epsilon = 1e-12);
        assert_eq!(g.eval(0.0), c);
        assert_eq!(g.eval(1.0), c2);

        let on_x = cfg(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let g = gamma_bar(&on_x, &on_x, &tol()).unwrap();
        assert_eq!(g.eval(1.0 / 3.0), cfg(&[&[0.0, 1.0], &[1.0, 2.0]]));

        let odd = cfg(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]);
        assert_eq!(gamma_bar(&odd, &odd, &tol()).unwrap_err(), PlanError::OddDimension(3));
        let other = cfg(&[&[0.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(gamma_bar(&on_x, &other, &tol()).unwrap_err(), PlanError::LinesDiffer);
    }

    #[test]
    fn gamma_bar_flips_shift_for_reversed_orientation() {
        let fwd = cfg(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let back = cfg(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let g = gamma_bar_n(&[fwd.clone(), back.clone(), fwd.clone()], &tol()).unwrap();
        // second pair starts from `back`, oriented by -e_1, so it shifts along -e_2
        let t = 0.5 + 1.0 / 6.0;
        assert_abs_diff_eq!(g.eval(t).point(0).coords()[1], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.eval(1.0 / 6.0).point(0).coords()[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn antipodal_pair_is_domain_three() {
        let q = Query::new(vec![
            cfg(&[&[0.0, 0.0], &[1.0, 0.0]]),
            cfg(&[&[0.0, 0.0], &[-1.0, 0.0]]),
        ])
        .unwrap();
        let label = classify_even(&q, &tol()).unwrap();
        assert_eq!(label.per_config_counts, vec![2, 2]);
        assert_eq!(label.antipode_count, 1);
        assert_eq!(label.domain_index, 3);
        let (traj, _) = plan_even(&q, &tol()).unwrap();
        assert!(traj.eval(1.0).distance(q.config(1)) < 1e-12);
    }

    #[test]
    fn classify_rejects_odd_dimension() {
        let q = witness_even(2, 3, 2, 4).unwrap();
        assert_eq!(classify_even(&q, &tol()).unwrap().domain_index, 4);
        let odd = Query::from_coords(
            vec![vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]; 2],
            1e-9,
        )
        .unwrap();
        assert_eq!(classify_even(&odd, &tol()).unwrap_err(), PlanError::OddDimension(3));
    }

    #[test]
    fn witnesses_hit_every_domain() {
        for (d, k, n) in [(2, 2, 2), (2, 4, 3), (4, 3, 4)] {
            for ell in n + 1..=n * k {
                let q = witness_even(d, k, n, ell).unwrap();
                assert_eq!(classify_even(&q, &tol()).unwrap().domain_index, ell, "d={d} k={k} n={n}");
            }
        }
        let q = witness_even(2, 3, 4, 5).unwrap();
        let label = classify_even(&q, &tol()).unwrap();
        assert_eq!(label.per_config_counts, vec![2, 2, 2, 2]);
        assert_eq!(label.antipode_count, 3);
    }
}
