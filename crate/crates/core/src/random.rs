//! Seeded random instances: generic queries and queries inside a prescribed
//! fine cell or repacked domain.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{PlanError, Result};
use crate::geometry::{dot, norm, Configuration, Point, UnitVector};
use crate::planner::Algorithm;
use crate::query::Query;

/// Coordinates are drawn from `[-SPAN, SPAN]`.
const SPAN: f64 = 4.0;
/// Minimum spacing between distinct cluster values and between robots.
const MIN_GAP: f64 = 0.05;

fn uniform_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-SPAN..SPAN)).collect()
}

/// `count` values in `[-SPAN, SPAN]` at least `MIN_GAP` apart, also kept that
/// far from each value in `avoid`.
fn spaced_values<R: Rng>(rng: &mut R, count: usize, avoid: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(count);
    while out.len() < count {
        let v = rng.gen_range(-SPAN..SPAN);
        if out.iter().chain(avoid).all(|u| (u - v).abs() >= MIN_GAP) {
            out.push(v);
        }
    }
    out
}

/// Assigns `robots` items to `clusters` groups so that every group is used.
fn surjection<R: Rng>(rng: &mut R, robots: usize, clusters: usize) -> Vec<usize> {
    let mut groups: Vec<usize> = (0..clusters)
        .chain((clusters..robots).map(|_| rng.gen_range(0..clusters)))
        .collect();
    groups.shuffle(rng);
    groups
}

pub fn random_direction<R: Rng>(rng: &mut R, dim: usize) -> UnitVector {
    loop {
        let v = uniform_vec(rng, dim);
        if norm(&v) > 0.5 {
            return UnitVector::normalize(&v, 0.0).expect("nonzero vector");
        }
    }
}

/// Uniformly random configuration, rejected until robots are `MIN_GAP` apart.
pub fn random_configuration<R: Rng>(rng: &mut R, dim: usize, robots: usize) -> Configuration {
    loop {
        let points = (0..robots).map(|_| Point::new(uniform_vec(rng, dim))).collect();
        let c = Configuration::from_points_unchecked(points);
        if c.min_separation() >= MIN_GAP {
            return c;
        }
    }
}

/// Random configuration with exactly `count` distinct first coordinates.
pub fn random_axis_cell_config<R: Rng>(rng: &mut R, dim: usize, robots: usize, count: usize) -> Configuration {
    loop {
        let values = spaced_values(rng, count, &[]);
        let groups = surjection(rng, robots, count);
        let points = groups
            .iter()
            .map(|&g| {
                let mut coords = uniform_vec(rng, dim);
                coords[0] = values[g];
                Point::new(coords)
            })
            .collect();
        let c = Configuration::from_points_unchecked(points);
        if c.min_separation() >= MIN_GAP {
            return c;
        }
    }
}

/// Random configuration oriented by `dir` with exactly `count` distinct
/// projections onto its own line.
pub fn random_line_cell_config<R: Rng>(
    rng: &mut R,
    robots: usize,
    count: usize,
    dir: &UnitVector,
) -> Configuration {
    let dim = dir.dim();
    let e = dir.coords();
    loop {
        let x1 = Point::new(uniform_vec(rng, dim));
        let a2 = rng.gen_range(MIN_GAP..SPAN);
        let mut values = vec![0.0, a2];
        values.extend(spaced_values(rng, count - 2, &[0.0, a2]));
        // clusters 0 and 1 hold x_1 and x_2; the rest must each get a robot
        let mut rest: Vec<usize> = (2..count)
            .chain((count..robots).map(|_| rng.gen_range(0..count)))
            .collect();
        rest.shuffle(rng);
        let mut groups = vec![0, 1];
        groups.extend(rest);
        let points = groups
            .iter()
            .enumerate()
            .map(|(m, &g)| {
                let base = x1.add_scaled(values[g], e);
                if m < 2 {
                    return base;
                }
                let raw = uniform_vec(rng, dim);
                let along = dot(&raw, e);
                let w = Point::new(raw).add_scaled(-along, e);
                base.add(&w)
            })
            .collect();
        let c = Configuration::from_points_unchecked(points);
        let distinct: std::collections::BTreeSet<usize> = groups.iter().copied().collect();
        if distinct.len() == count && c.min_separation() >= MIN_GAP {
            return c;
        }
    }
}

/// Query with fully random coordinates.
pub fn random_generic_query<R: Rng>(rng: &mut R, dim: usize, robots: usize, waypoints: usize) -> Query {
    let configs = (0..waypoints)
        .map(|_| random_configuration(rng, dim, robots))
        .collect();
    Query::new(configs).expect("consistent shapes")
}

/// Random query in the fine cell `counts` (and, for the even planner,
/// `antipodes` configurations oriented against the first).
pub fn random_query_in_cell<R: Rng>(
    rng: &mut R,
    algorithm: Algorithm,
    dim: usize,
    robots: usize,
    counts: &[usize],
    antipodes: usize,
) -> Result<Query> {
    let configs = match algorithm {
        Algorithm::General => counts
            .iter()
            .map(|&c| random_axis_cell_config(rng, dim, robots, c))
            .collect(),
        Algorithm::Even => {
            if dim % 2 != 0 {
                return Err(PlanError::OddDimension(dim));
            }
            let reference = random_direction(rng, dim);
            let mut flip: Vec<bool> = (1..counts.len()).map(|s| s <= antipodes).collect();
            flip.shuffle(rng);
            counts
                .iter()
                .enumerate()
                .map(|(s, &c)| {
                    let dir = if s == 0 {
                        reference.clone()
                    } else if flip[s - 1] {
                        reference.neg()
                    } else {
                        loop {
                            let d = random_direction(rng, dim);
                            if d.dot(&reference) > -0.9 {
                                break d;
                            }
                        }
                    };
                    random_line_cell_config(rng, robots, c, &dir)
                })
                .collect()
        }
    };
    Query::new(configs)
}

/// Random fine cell `(counts, antipodes)` whose repacked domain is `domain`.
pub fn random_cell_in_domain<R: Rng>(
    rng: &mut R,
    algorithm: Algorithm,
    robots: usize,
    waypoints: usize,
    domain: usize,
) -> Result<(Vec<usize>, usize)> {
    if !algorithm.domain_range(robots, waypoints).contains(&domain) {
        return Err(PlanError::InvalidParameter(format!(
            "domain {domain} is not produced by the {algorithm} planner for k={robots}, n={waypoints}"
        )));
    }
    let (lo, max_antipodes) = match algorithm {
        Algorithm::General => (1, 0),
        Algorithm::Even => (2, waypoints - 1),
    };
    loop {
        let antipodes = rng.gen_range(0..=max_antipodes);
        let total = domain + antipodes;
        if total < waypoints * lo || total > waypoints * robots {
            continue;
        }
        // random composition of `total` into parts in lo..=robots
        let mut counts = vec![lo; waypoints];
        let mut rest = total - waypoints * lo;
        while rest > 0 {
            let s = rng.gen_range(0..waypoints);
            if counts[s] < robots {
                counts[s] += 1;
                rest -= 1;
            }
        }
        return Ok((counts, antipodes));
    }
}

/// Random query classifying to domain `domain`.
pub fn random_query_in_domain<R: Rng>(
    rng: &mut R,
    algorithm: Algorithm,
    dim: usize,
    robots: usize,
    waypoints: usize,
    domain: usize,
) -> Result<Query> {
    let (counts, antipodes) = random_cell_in_domain(rng, algorithm, robots, waypoints, domain)?;
    random_query_in_cell(rng, algorithm, dim, robots, &counts, antipodes)
}

/// Mixture used by property runs: a third generic queries, the rest drawn from
/// a uniformly chosen domain.
pub fn random_query<R: Rng>(
    rng: &mut R,
    algorithm: Algorithm,
    dim: usize,
    robots: usize,
    waypoints: usize,
) -> Result<Query> {
    if !algorithm.supports_dim(dim) {
        return Err(PlanError::OddDimension(dim));
    }
    if rng.gen_range(0..3) == 0 {
        return Ok(random_generic_query(rng, dim, robots, waypoints));
    }
    let range = algorithm.domain_range(robots, waypoints);
    let domain = rng.gen_range(range);
    random_query_in_domain(rng, algorithm, dim, robots, waypoints, domain)
}

/// Query whose configurations all lie on one random line through the origin,
/// each oriented along it or against it.
pub fn random_origin_line_query<R: Rng>(rng: &mut R, dim: usize, robots: usize, waypoints: usize) -> Query {
    let dir = random_direction(rng, dim);
    let configs = (0..waypoints)
        .map(|_| {
            let values = spaced_values(rng, robots, &[]);
            Configuration::from_points_unchecked(
                values
                    .iter()
                    .map(|a| Point::new(dir.coords().iter().map(|c| a * c).collect()))
                    .collect(),
            )
        })
        .collect();
    Query::new(configs).expect("consistent shapes")
}

/// Query whose configurations all lie on the first coordinate axis.
pub fn random_axis_query<R: Rng>(rng: &mut R, dim: usize, robots: usize, waypoints: usize) -> Query {
    let configs = (0..waypoints)
        .map(|_| {
            let values = spaced_values(rng, robots, &[]);
            Configuration::from_points_unchecked(
                values
                    .iter()
                    .map(|a| {
                        let mut coords = vec![0.0; dim];
                        coords[0] = *a;
                        Point::new(coords)
                    })
                    .collect(),
            )
        })
        .collect();
    Query::new(configs).expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Tolerances;
    use crate::planner_even::classify_even;
    use crate::planner_general::classify_general;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cell_generators_hit_their_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tol = Tolerances::default();
        for _ in 0..200 {
            let k = rng.gen_range(2..=5);
            let n = rng.gen_range(2..=4);
            let d = 2 * rng.gen_range(1..=2);
            for algorithm in [Algorithm::General, Algorithm::Even] {
                let ell = rng.gen_range(algorithm.domain_range(k, n));
                let (counts, antipodes) = random_cell_in_domain(&mut rng, algorithm, k, n, ell).unwrap();
                let q = random_query_in_cell(&mut rng, algorithm, d, k, &counts, antipodes).unwrap();
                match algorithm {
                    Algorithm::General => {
                        let l = classify_general(&q, &tol).unwrap();
                        assert_eq!(l.per_config_counts, counts);
                        assert_eq!(l.domain_index, ell);
                    }
                    Algorithm::Even => {
                        let l = classify_even(&q, &tol).unwrap();
                        assert_eq!(l.per_config_counts, counts);
                        assert_eq!(l.antipode_count, antipodes);
                        assert_eq!(l.domain_index, ell);
                    }
                }
            }
        }
    }
}
