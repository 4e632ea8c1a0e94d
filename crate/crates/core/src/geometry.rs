//! Vector geometry for point robots: points, configurations, directions,
//! lines and the tolerance-aware counting used by cell classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PlanError, Result};

/// Tolerances used wherever exact real comparisons would be needed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Two projections closer than this count as equal.
    pub eps_proj: f64,
    /// Slack on unit-norm and orthogonality checks.
    pub eps_unit: f64,
    /// Robots closer than this are rejected as coincident.
    pub eps_sep: f64,
    /// `e · e_ref < -1 + eps_antipode` means antipodal.
    pub eps_antipode: f64,
    /// Allowed waypoint error of a planned trajectory.
    pub eps_waypoint: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_proj: 1e-9,
            eps_unit: 1e-9,
            eps_sep: 1e-9,
            eps_antipode: 1e-9,
            eps_waypoint: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("eps_proj", self.eps_proj),
            ("eps_unit", self.eps_unit),
            ("eps_sep", self.eps_sep),
            ("eps_antipode", self.eps_antipode),
            ("eps_waypoint", self.eps_waypoint),
        ];
        for (name, value) in all {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(PlanError::InvalidParameter(format!(
                    "{name} must be a finite nonnegative number, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// A point of `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    /// The `axis`-th standard basis vector.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: f64) -> Point {
        Point(self.0.iter().map(|a| a * factor).collect())
    }

    /// `self + factor * dir`.
    pub fn add_scaled(&self, factor: f64, dir: &[f64]) -> Point {
        Point(self.0.iter().zip(dir).map(|(a, b)| a + factor * b).collect())
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        distance(&self.0, &other.0)
    }

    /// `(1 - s) * self + s * other`, exact at both ends.
    pub fn lerp(&self, other: &Point, s: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (1.0 - s) * a + s * b)
                .collect(),
        )
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point(coords)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A unit vector of `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Normalizes `coords`; fails when the norm is not above `eps`.
    pub fn normalize(coords: &[f64], eps: f64) -> Result<Self> {
        let len = norm(coords);
        if !(len > eps) {
            return Err(PlanError::DegenerateDirection);
        }
        Ok(UnitVector(coords.iter().map(|c| c / len).collect()))
    }

    /// Accepts `coords` as given, provided its norm is 1 within `eps_unit`.
    pub fn checked(coords: Vec<f64>, eps_unit: f64) -> Result<Self> {
        let len = norm(&coords);
        if (len - 1.0).abs() > eps_unit {
            return Err(PlanError::InvalidParameter(format!(
                "vector of norm {len} is not a unit vector"
            )));
        }
        Ok(UnitVector(coords))
    }

    pub fn axis(dim: usize, axis: usize) -> Self {
        UnitVector(Point::basis(dim, axis).into_coords())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector(self.0.iter().map(|c| -c).collect())
    }
}

/// A line with an orientation, stored canonically: `base` is the foot of the
/// perpendicular dropped from the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub base: Point,
    pub direction: UnitVector,
}

impl OrientedLine {
    /// The line through `point` with direction `direction`.
    pub fn through(point: &Point, direction: UnitVector) -> Self {
        let along = point.dot(direction.coords());
        let base = point.add_scaled(-along, direction.coords());
        OrientedLine { base, direction }
    }

    /// True when both describe the same set of points (orientation ignored).
    pub fn same_line(&self, other: &OrientedLine, eps: f64) -> bool {
        let d = self.direction.dot(&other.direction);
        (d.abs() - 1.0).abs() <= eps && self.base.distance(&other.base) <= eps
    }

    /// True when the lines coincide and point the same way.
    pub fn same_oriented_line(&self, other: &OrientedLine, eps: f64) -> bool {
        self.same_line(other, eps) && self.direction.dot(&other.direction) > 0.0
    }

    pub fn passes_through_origin(&self, eps: f64) -> bool {
        self.base.norm() <= eps
    }

    /// Distance from `x` to the line.
    pub fn distance_to(&self, x: &Point) -> f64 {
        let rel = x.sub(&self.base);
        let along = rel.dot(self.direction.coords());
        rel.add_scaled(-along, self.direction.coords()).norm()
    }
}

/// An ordered tuple of `k >= 2` pairwise-distinct points of `R^d`, `d >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    points: Vec<Point>,
    dim: usize,
}

impl Configuration {
    /// Builds a configuration, rejecting shape errors and robots closer than `eps_sep`.
    pub fn new(points: Vec<Point>, eps_sep: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(PlanError::Shape(format!(
                "a configuration needs at least 2 robots, got {}",
                points.len()
            )));
        }
        let dim = points[0].dim();
        if dim < 2 {
            return Err(PlanError::Shape(format!(
                "ambient dimension must be at least 2, got {dim}"
            )));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(PlanError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if p.coords().iter().any(|c| !c.is_finite()) {
                return Err(PlanError::Shape("non-finite coordinate".into()));
            }
        }
        let config = Configuration { points, dim };
        if let Some((first, second, distance)) = config.closest_pair() {
            if !(distance > eps_sep) {
                return Err(PlanError::Coincident {
                    first,
                    second,
                    distance,
                });
            }
        }
        Ok(config)
    }

    /// Wraps points without any validation; used for intermediate states of
    /// deformations, whose collision-freeness is checked separately.
    pub fn from_points_unchecked(points: Vec<Point>) -> Self {
        let dim = points.first().map_or(0, Point::dim);
        Configuration { points, dim }
    }

    pub fn from_coords(coords: Vec<Vec<f64>>, eps_sep: f64) -> Result<Self> {
        Configuration::new(coords.into_iter().map(Point::new).collect(), eps_sep)
    }

    pub fn robots(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, robot: usize) -> &Point {
        &self.points[robot]
    }

    pub fn to_coords(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.coords().to_vec()).collect()
    }

    /// Closest pair of robots and their distance (brute-force scan).
    pub fn closest_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for r in 0..self.points.len() {
            for s in (r + 1)..self.points.len() {
                let dist = self.points[r].distance(&self.points[s]);
                if best.is_none_or(|(_, _, b)| dist < b) {
                    best = Some((r, s, dist));
                }
            }
        }
        best
    }

    pub fn min_separation(&self) -> f64 {
        self.closest_pair().map_or(f64::INFINITY, |(_, _, d)| d)
    }

    /// Largest robot-wise Euclidean distance to `other`.
    pub fn distance(&self, other: &Configuration) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    pub fn translate(&self, offset: &[f64]) -> Configuration {
        Configuration {
            points: self.points.iter().map(|p| p.add_scaled(1.0, offset)).collect(),
            dim: self.dim,
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", p.coords())?;
        }
        write!(f, ")")
    }
}

/// First coordinate of `x`: the projection onto the `e_1` axis.
pub fn axis_projection(x: &Point) -> f64 {
    x.coords()[0]
}

/// Orientation `e_C = (x_2 - x_1)/|x_2 - x_1|` of a configuration.
pub fn direction_of(config: &Configuration, eps_sep: f64) -> Result<UnitVector> {
    let diff = config.point(1).sub(config.point(0));
    UnitVector::normalize(diff.coords(), eps_sep)
}

/// The oriented line `L_C` through the first two robots, with its direction.
pub fn line_of(config: &Configuration, eps_sep: f64) -> Result<(OrientedLine, UnitVector)> {
    let dir = direction_of(config, eps_sep)?;
    Ok((OrientedLine::through(config.point(0), dir.clone()), dir))
}

/// Orthogonal projection of `x` onto `L_C`.
pub fn line_projection(config: &Configuration, x: &Point, eps_sep: f64) -> Result<Point> {
    let dir = direction_of(config, eps_sep)?;
    let x1 = config.point(0);
    let along = x.sub(x1).dot(dir.coords());
    Ok(x1.add_scaled(along, dir.coords()))
}

/// The unit tangent field `v(x_1, y_1, ..., x_l, y_l) = (-y_1, x_1, ..., -y_l, x_l)`
/// on the sphere of an even-dimensional space.
pub fn tangent_field(e: &UnitVector) -> Result<UnitVector> {
    let d = e.dim();
    if d % 2 != 0 {
        return Err(PlanError::OddDimension(d));
    }
    let c = e.coords();
    let mut out = vec![0.0; d];
    for pair in 0..d / 2 {
        out[2 * pair] = -c[2 * pair + 1];
        out[2 * pair + 1] = c[2 * pair];
    }
    Ok(UnitVector(out))
}

/// Result of grouping reals into clusters of mutually close values.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Number of clusters.
    pub count: usize,
    /// Cluster index of each input value; clusters are numbered in increasing value order.
    pub assignment: Vec<usize>,
    /// Smallest difference between values in different clusters, if there are two clusters.
    pub min_gap: Option<f64>,
}

/// Counts distinct values, treating values within `eps` as equal.
///
/// Clusters are formed by chaining sorted neighbours; a chain whose ends are
/// further apart than `eps` is reported as [`PlanError::AmbiguousClustering`].
pub fn distinct_count(values: &[f64], eps: f64) -> Result<Clustering> {
    if !(eps >= 0.0) {
        return Err(PlanError::InvalidParameter(format!("eps = {eps}")));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut assignment = vec![0; values.len()];
    let mut count = 0;
    let mut min_gap: Option<f64> = None;
    let mut cluster_start = 0.0;
    let mut prev: Option<f64> = None;
    for &idx in &order {
        let v = values[idx];
        match prev {
            Some(p) if v - p <= eps => {
                if v - cluster_start > eps {
                    return Err(PlanError::AmbiguousClustering(cluster_start, p, v));
                }
            }
            Some(p) => {
                let gap = v - p;
                min_gap = Some(min_gap.map_or(gap, |g: f64| g.min(gap)));
                count += 1;
                cluster_start = v;
            }
            None => {
                count = 1;
                cluster_start = v;
            }
        }
        assignment[idx] = count - 1;
        prev = Some(v);
    }
    Ok(Clustering {
        count,
        assignment,
        min_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(coords: &[&[f64]]) -> Configuration {
        Configuration::from_coords(coords.iter().map(|c| c.to_vec()).collect(), 1e-9).unwrap()
    }

    #[test]
    fn axis_projection_reads_first_coordinate() {
        assert_eq!(axis_projection(&Point::new(vec![0.0, 1.0])), 0.0);
        assert_eq!(axis_projection(&Point::new(vec![3.0, 4.0])), 3.0);
        assert_eq!(axis_projection(&Point::new(vec![-2.5, 0.0, 7.0])), -2.5);
    }

    #[test]
    fn line_of_examples() {
        let (_, e) = line_of(&cfg(&[&[0.0, 0.0], &[3.0, 4.0]]), 1e-9).unwrap();
        assert_abs_diff_eq!(e.coords()[0], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(e.coords()[1], 0.8, epsilon = 1e-15);

        let (line, e) = line_of(&cfg(&[&[0.0, 0.0], &[1.0, 0.0]]), 1e-9).unwrap();
        assert_eq!(e.coords(), &[1.0, 0.0]);
        assert_eq!(line.base.coords(), &[0.0, 0.0]);

        let (line, e) = line_of(&cfg(&[&[0.0, 1.0], &[1.0, 1.0]]), 1e-9).unwrap();
        assert_eq!(e.coords(), &[1.0, 0.0]);
        assert_eq!(line.base.coords(), &[0.0, 1.0]);
    }

    #[test]
    fn line_of_rejects_coincident_leaders() {
        let c = Configuration::from_points_unchecked(vec![
            Point::new(vec![1.0, 1.0]),
            Point::new(vec![1.0, 1.0]),
        ]);
        assert_eq!(line_of(&c, 1e-9).unwrap_err(), PlanError::DegenerateDirection);
    }

    #[test]
    fn line_projection_examples() {
        let x = Point::new(vec![2.0, 5.0]);
        let p = line_projection(&cfg(&[&[0.0, 0.0], &[1.0, 0.0]]), &x, 1e-9).unwrap();
        assert_eq!(p.coords(), &[2.0, 0.0]);

        let x = Point::new(vec![7.0, 3.0]);
        let p = line_projection(&cfg(&[&[0.0, 0.0], &[0.0, 1.0]]), &x, 1e-9).unwrap();
        assert_eq!(p.coords(), &[0.0, 3.0]);

        let x = Point::new(vec![5.0, 0.0]);
        let p = line_projection(&cfg(&[&[0.0, 0.0], &[3.0, 4.0]]), &x, 1e-9).unwrap();
        assert_abs_diff_eq!(p.coords()[0], 1.8, epsilon = 1e-12);
        assert_abs_diff_eq!(p.coords()[1], 2.4, epsilon = 1e-12);
    }

    #[test]
    fn tangent_field_examples() {
        let v = tangent_field(&UnitVector::axis(2, 0)).unwrap();
        assert_eq!(v.coords(), &[0.0, 1.0]);

        let v = tangent_field(&UnitVector::checked(vec![0.6, 0.8], 1e-12).unwrap()).unwrap();
        assert_eq!(v.coords(), &[-0.8, 0.6]);

        let v = tangent_field(&UnitVector::axis(4, 1)).unwrap();
        assert_eq!(v.coords(), &[-1.0, 0.0, 0.0, 0.0]);

        assert_eq!(
            tangent_field(&UnitVector::axis(3, 0)).unwrap_err(),
            PlanError::OddDimension(3)
        );
    }

    #[test]
    fn distinct_count_examples() {
        assert_eq!(distinct_count(&[0.0, 0.0, 1.0], 0.0).unwrap().count, 2);
        assert_eq!(distinct_count(&[0.0, 1.0, 3.0], 0.0).unwrap().count, 3);
        let c = distinct_count(&[0.0, 1e-12, 5.0], 1e-9).unwrap();
        assert_eq!(c.count, 2);
        assert_eq!(c.assignment, vec![0, 0, 1]);
        assert_eq!(c.min_gap, Some(5.0 - 1e-12));
    }

    #[test]
    fn distinct_count_reports_chaining() {
        let err = distinct_count(&[0.0, 0.6e-9, 1.2e-9], 1e-9).unwrap_err();
        assert!(matches!(err, PlanError::AmbiguousClustering(..)));
        assert!(err.is_boundary());
    }

    #[test]
    fn configuration_rejects_bad_shapes() {
        let err = Configuration::from_coords(vec![vec![0.0, 0.0]], 1e-9).unwrap_err();
        assert!(matches!(err, PlanError::Shape(_)));
        let err = Configuration::from_coords(vec![vec![0.0, 0.0], vec![1.0, 0.0, 0.0]], 1e-9)
            .unwrap_err();
        assert!(matches!(err, PlanError::DimensionMismatch { .. }));
        let err =
            Configuration::from_coords(vec![vec![0.0], vec![1.0]], 1e-9).unwrap_err();
        assert!(matches!(err, PlanError::Shape(_)));
        let err = Configuration::from_coords(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1e-12]],
            1e-9,
        )
        .unwrap_err();
        assert!(matches!(err, PlanError::Coincident { first: 0, second: 2, .. }));
    }

    #[test]
    fn oriented_line_equality() {
        let a = OrientedLine::through(&Point::new(vec![0.0, 1.0]), UnitVector::axis(2, 0));
        let b = OrientedLine::through(&Point::new(vec![5.0, 1.0]), UnitVector::axis(2, 0).neg());
        assert!(a.same_line(&b, 1e-12));
        assert!(!a.same_oriented_line(&b, 1e-12));
        assert!(!a.passes_through_origin(1e-12));
        assert_abs_diff_eq!(a.distance_to(&Point::new(vec![3.0, 4.0])), 3.0, epsilon = 1e-12);
    }
}
