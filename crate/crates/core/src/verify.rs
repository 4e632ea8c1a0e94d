//! Independent checks on planned trajectories: waypoint contract, collision
//! scanning, continuity probes, domain-count audits and a brute-force
//! evaluator for queries on a common line through the origin.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PlanError, Result};
use crate::geometry::{distance, dot, norm, Configuration, Tolerances};
use crate::pathkit::{sample_times, Motion, Trajectory};
use crate::planner::{Algorithm, Planner};
use crate::planner_even::{antipode_count, cp_bar, even_homotopy};
use crate::query::{waypoint_times, Query};
use crate::random::{random_direction, random_query};

/// Sequential topological complexity of the configuration space:
/// `n(k-1)+1` for odd `d`, `n(k-1)` for even `d`.
pub fn expected_tc(dim: usize, robots: usize, waypoints: usize) -> usize {
    let base = waypoints * (robots - 1);
    if dim % 2 == 1 {
        base + 1
    } else {
        base
    }
}

/// Largest configuration distance between `traj(j/(n-1))` and `C_{j+1}`.
pub fn check_waypoints(traj: &Trajectory, query: &Query) -> f64 {
    waypoint_times(query.len())
        .into_iter()
        .zip(query.configs())
        .map(|(t, c)| traj.eval(t).distance(c))
        .fold(0.0, f64::max)
}

/// Closest approach found by [`scan_collisions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionScan {
    pub min_separation: f64,
    pub t: f64,
    pub pair: (usize, usize),
}

impl CollisionScan {
    fn offer(&mut self, separation: f64, t: f64, pair: (usize, usize)) {
        if separation < self.min_separation {
            *self = CollisionScan {
                min_separation: separation,
                t,
                pair,
            };
        }
    }
}

fn pairwise_scan(coords: &[f64], robots: usize, dim: usize, t: f64, best: &mut CollisionScan) {
    for a in 0..robots {
        for b in a + 1..robots {
            let sep = distance(&coords[a * dim..(a + 1) * dim], &coords[b * dim..(b + 1) * dim]);
            best.offer(sep, t, (a, b));
        }
    }
}

/// Minimum pairwise distance over `resolution + 1` samples and the waypoint
/// times, refined exactly on every piece: on affine pieces by minimizing the
/// quadratic `|D0 + s V|^2`, on pivot pieces (rigid turns) from the constant
/// offsets.
pub fn scan_collisions(traj: &Trajectory, resolution: usize) -> Result<CollisionScan> {
    if resolution < 2 {
        return Err(PlanError::InvalidParameter("resolution must be at least 2".into()));
    }
    let (k, d) = (traj.robots(), traj.dim());
    let mut best = CollisionScan {
        min_separation: f64::INFINITY,
        t: 0.0,
        pair: (0, 1),
    };
    let mut buf = vec![0.0; k * d];
    let times = (0..=resolution)
        .map(|i| i as f64 / resolution as f64)
        .chain(traj.waypoint_times().iter().copied());
    for t in times {
        traj.eval_into(t, &mut buf);
        pairwise_scan(&buf, k, d, t, &mut best);
    }
    for piece in traj.pieces() {
        match piece.motion.as_ref() {
            Motion::Linear { from, to } => {
                let (lo, hi) = if piece.s0 <= piece.s1 {
                    (piece.s0, piece.s1)
                } else {
                    (piece.s1, piece.s0)
                };
                for a in 0..k {
                    for b in a + 1..k {
                        let d0: Vec<f64> = from[a].sub(&from[b]).into_coords();
                        let d1: Vec<f64> = to[a].sub(&to[b]).into_coords();
                        let v: Vec<f64> = d1.iter().zip(&d0).map(|(x, y)| x - y).collect();
                        let vv = dot(&v, &v);
                        let s = if vv > 0.0 { (-dot(&d0, &v) / vv).clamp(lo, hi) } else { lo };
                        let sep = norm(&d0.iter().zip(&v).map(|(x, y)| x + s * y).collect::<Vec<_>>());
                        let t = if piece.s1 == piece.s0 {
                            piece.t0
                        } else {
                            piece.t0 + (s - piece.s0) / (piece.s1 - piece.s0) * (piece.t1 - piece.t0)
                        };
                        best.offer(sep, t, (a, b));
                    }
                }
            }
            Motion::Pivot { offsets, .. } => {
                for a in 0..k {
                    for b in a + 1..k {
                        best.offer((offsets[a] - offsets[b]).abs(), piece.t0, (a, b));
                    }
                }
            }
        }
    }
    if !(best.min_separation > 0.0) {
        return Err(PlanError::CollisionDetected {
            t: best.t,
            first: best.pair.0,
            second: best.pair.1,
            separation: best.min_separation,
        });
    }
    Ok(best)
}

/// Sampled sup over `t` of the configuration distance, with `per_segment`
/// samples per waypoint segment of `a`.
pub fn trajectory_sup_distance(a: &Trajectory, b: &Trajectory, per_segment: usize) -> f64 {
    sample_times(a.waypoint_times().len(), per_segment)
        .into_iter()
        .map(|t| a.eval(t).distance(&b.eval(t)))
        .fold(0.0, f64::max)
}

/// How [`continuity_probe`] keeps perturbed queries in the reference cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    /// Plain random perturbation; a query with exact ties escapes its cell.
    Generic,
    /// Perturb, then restore the ties of the reference cell.
    #[default]
    TiePreserving,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    pub seed: u64,
    pub mode: ProbeMode,
    /// Samples per waypoint segment for the sup-distance.
    pub samples: usize,
    /// Tries per trial before reporting [`PlanError::CellEscape`].
    pub max_attempts: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            seed: 0,
            mode: ProbeMode::TiePreserving,
            samples: 50,
            max_attempts: 20,
        }
    }
}

/// Every robot moved by exactly `delta` in a random direction.
fn perturb(query: &Query, delta: f64, eps_sep: f64, rng: &mut ChaCha8Rng) -> Result<Query> {
    let configs = query
        .configs()
        .iter()
        .map(|c| {
            let points = c
                .points()
                .iter()
                .map(|p| p.add_scaled(delta, random_direction(rng, c.dim()).coords()))
                .collect();
            Configuration::new(points, eps_sep)
        })
        .collect::<Result<Vec<_>>>()?;
    Query::new(configs)
}

/// Lipschitz-style estimate `max sup_t |s(Q') - s(Q)| / delta` over `trials`
/// perturbations `Q'` of size `delta` staying in the fine cell of `Q`.
pub fn continuity_probe(
    planner: &dyn Planner,
    query: &Query,
    delta: f64,
    trials: usize,
    options: ProbeOptions,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(PlanError::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let label = planner.classify(query)?;
    let base = planner.plan(query)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut estimate: f64 = 0.0;
    for _ in 0..trials {
        let mut attempts = 0;
        let moved = loop {
            if attempts == options.max_attempts {
                return Err(PlanError::CellEscape { attempts });
            }
            attempts += 1;
            let candidate = match perturb(query, delta, 0.0, &mut rng) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let candidate = match options.mode {
                ProbeMode::Generic => candidate,
                ProbeMode::TiePreserving => match planner.restore_cell(query, &candidate) {
                    Ok(c) => c,
                    Err(_) => continue,
                },
            };
            match planner.classify(&candidate) {
                Ok(l) if l == label => break candidate,
                _ => continue,
            }
        };
        let path = planner.plan(&moved)?;
        estimate = estimate.max(trajectory_sup_distance(&base, &path, options.samples) / delta);
    }
    Ok(estimate)
}

/// Result of [`audit_domains`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub algorithm: Algorithm,
    pub d: usize,
    pub k: usize,
    pub n: usize,
    /// Domain count of the planner's repacking.
    pub expected: usize,
    /// Topological complexity for this `d`.
    pub expected_tc: usize,
    pub observed: usize,
    pub domains: Vec<usize>,
    pub max_waypoint_error: f64,
    pub samples: usize,
}

/// Classifies and plans a witness for every domain index plus `samples`
/// random queries, and compares the set of indices seen with the planner's
/// range.
pub fn audit_domains(
    algorithm: Algorithm,
    tol: &Tolerances,
    dim: usize,
    robots: usize,
    waypoints: usize,
    samples: usize,
    seed: u64,
) -> Result<AuditReport> {
    if dim < 2 || robots < 2 || waypoints < 2 {
        return Err(PlanError::InvalidParameter("d, k and n must all be at least 2".into()));
    }
    if !algorithm.supports_dim(dim) {
        return Err(PlanError::OddDimension(dim));
    }
    let planner = algorithm.planner(*tol);
    let range = algorithm.domain_range(robots, waypoints);
    let mut seen = BTreeSet::new();
    let mut max_waypoint_error: f64 = 0.0;
    let mut record = |q: &Query| -> Result<()> {
        let label = planner.classify(q)?;
        let traj = planner.plan(q)?;
        max_waypoint_error = max_waypoint_error.max(check_waypoints(&traj, q));
        seen.insert(label.domain_index());
        Ok(())
    };
    for ell in range.clone() {
        record(&algorithm.witness(dim, robots, waypoints, ell)?)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let q = random_query(&mut rng, algorithm, dim, robots, waypoints)?;
        match record(&q) {
            Err(e) if e.is_boundary() => continue,
            other => other?,
        }
    }
    let expected_set: BTreeSet<usize> = range.collect();
    if seen != expected_set {
        return Err(PlanError::CountMismatch {
            missing: expected_set.difference(&seen).copied().collect(),
            extra: seen.difference(&expected_set).copied().collect(),
        });
    }
    Ok(AuditReport {
        algorithm,
        d: dim,
        k: robots,
        n: waypoints,
        expected: algorithm.domain_count(robots, waypoints),
        expected_tc: expected_tc(dim, robots, waypoints),
        observed: seen.len(),
        domains: seen.into_iter().collect(),
        max_waypoint_error,
        samples,
    })
}

/// Direct evaluator of the concatenated common-line section, written against
/// plain coordinate arrays.
#[derive(Debug, Clone)]
pub struct ColinearOracle {
    waypoints: Vec<Vec<Vec<f64>>>,
}

impl ColinearOracle {
    pub fn waypoint_count(&self) -> usize {
        self.waypoints.len()
    }

    /// Robot coordinates at time `t` of the section.
    pub fn eval(&self, t: f64) -> Vec<Vec<f64>> {
        let segments = self.waypoints.len() - 1;
        let scaled = t.clamp(0.0, 1.0) * segments as f64;
        let pair = (scaled.floor() as usize).min(segments - 1);
        let u = scaled - pair as f64;
        let from = &self.waypoints[pair];
        let to = &self.waypoints[pair + 1];
        // v(e) = (-e_2, e_1, -e_4, e_3, ...) with e the direction of x_1 -> x_2
        let e: Vec<f64> = from[1].iter().zip(&from[0]).map(|(a, b)| a - b).collect();
        let len = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut v = vec![0.0; e.len()];
        for i in (0..e.len()).step_by(2) {
            v[i] = -e[i + 1] / len;
            v[i + 1] = e[i] / len;
        }
        from.iter()
            .zip(to)
            .enumerate()
            .map(|(r, (x, y))| {
                let h = (r + 1) as f64;
                (0..x.len())
                    .map(|c| {
                        if u <= 1.0 / 3.0 {
                            x[c] + 3.0 * u * h * v[c]
                        } else if u <= 2.0 / 3.0 {
                            x[c] + h * v[c] + (3.0 * u - 1.0) * (y[c] - x[c])
                        } else {
                            y[c] + h * (3.0 - 3.0 * u) * v[c]
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Oracle for queries whose configurations are colinear on one common line
/// through the origin (even `d`).
pub fn oracle_colinear(query: &Query) -> Result<ColinearOracle> {
    let d = query.dim();
    if d % 2 != 0 {
        return Err(PlanError::OddDimension(d));
    }
    Ok(ColinearOracle {
        waypoints: query.to_coords(),
    })
}

/// Section time reached by the transported planner at time `tau` when the
/// deformation is stationary: constant on the outer thirds of each waypoint
/// segment, linear in the middle third.
pub fn transport_schedule(waypoints: usize, tau: f64) -> f64 {
    let segments = (waypoints - 1) as f64;
    let scaled = tau.clamp(0.0, 1.0) * segments;
    let i = scaled.floor().min(segments - 1.0);
    let u = scaled - i;
    let local = if u <= 1.0 / 3.0 {
        0.0
    } else if u <= 2.0 / 3.0 {
        3.0 * u - 1.0
    } else {
        1.0
    };
    (i + local) / segments
}

/// Sampled sup over `tau` of `|traj(tau) - oracle(schedule(tau))|`.
pub fn oracle_distance(traj: &Trajectory, oracle: &ColinearOracle, per_segment: usize) -> f64 {
    let n = oracle.waypoint_count();
    sample_times(n, per_segment)
        .into_iter()
        .map(|tau| {
            let got = traj.eval(tau);
            let want = oracle.eval(transport_schedule(n, tau));
            got.points()
                .iter()
                .zip(&want)
                .map(|(p, w)| distance(p.coords(), w))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Worst violation of each post-stage predicate of the even-dimensional
/// deformation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MembershipDefects {
    /// Robots minus distinct line projections after the first stage (0 when all distinct).
    pub missing_projections: usize,
    /// Distance of robots from their line after the collapse.
    pub colinearity: f64,
    /// Distance of the lines from the origin after the translation.
    pub origin: f64,
    /// `1 - |e_C . e_ref|` and distance between lines after the rotation.
    pub alignment: f64,
    /// Components whose orientation class changed through the rotation.
    pub orientation_flips: usize,
}

impl MembershipDefects {
    pub fn holds(&self, tol: f64) -> bool {
        self.missing_projections == 0
            && self.colinearity <= tol
            && self.origin <= tol
            && self.alignment <= tol
            && self.orientation_flips == 0
    }
}

fn unit_direction(config: &Configuration) -> Vec<f64> {
    let e = config.point(1).sub(config.point(0)).into_coords();
    let len = norm(&e);
    e.into_iter().map(|x| x / len).collect()
}

fn line_defects(config: &Configuration) -> (f64, f64) {
    let e = unit_direction(config);
    let x1 = config.point(0).coords();
    let off_line = config
        .points()
        .iter()
        .map(|p| {
            let rel: Vec<f64> = p.coords().iter().zip(x1).map(|(a, b)| a - b).collect();
            let a = dot(&rel, &e);
            norm(&rel.iter().zip(&e).map(|(r, c)| r - a * c).collect::<Vec<_>>())
        })
        .fold(0.0, f64::max);
    let a = dot(x1, &e);
    let foot = norm(&x1.iter().zip(&e).map(|(x, c)| x - a * c).collect::<Vec<_>>());
    (off_line, foot)
}

/// Runs the even-dimensional deformation on `query` and measures the
/// post-stage predicates on the tuple reached after each stage.
pub fn membership_chain(query: &Query, tol: &Tolerances) -> Result<MembershipDefects> {
    let tracks = even_homotopy(tol).tracks(query.configs())?;
    let [desing, collapsed, translated, rotated] = match tracks.stage_ends.as_slice() {
        [a, b, c, d] => [a, b, c, d],
        other => {
            return Err(PlanError::Shape(format!("expected 4 stages, got {}", other.len())));
        }
    };
    let mut out = MembershipDefects::default();
    for c in desing {
        out.missing_projections += c.robots() - cp_bar(c, tol)?;
    }
    for c in collapsed {
        out.colinearity = out.colinearity.max(line_defects(c).0);
    }
    for c in translated {
        out.origin = out.origin.max(line_defects(c).1);
    }
    let reference = unit_direction(&rotated[0]);
    let input_antipodes = antipode_count(query, tol)?;
    let mut final_antipodes = 0;
    for c in rotated {
        let e = unit_direction(c);
        let cos = dot(&e, &reference);
        if cos < 0.0 {
            final_antipodes += 1;
        }
        let (off_line, foot) = line_defects(c);
        out.alignment = out.alignment.max(1.0 - cos.abs()).max(off_line).max(foot);
    }
    out.orientation_flips = input_antipodes.abs_diff(final_antipodes);
    Ok(out)
}

/// Deliberate corruptions for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Robots 1 and 2 swap places through a common point and back.
    Collision,
    /// The path stays at the first waypoint.
    Waypoint,
}

/// A trajectory violating the contract in the way `fault` describes.
pub fn corrupt_trajectory(query: &Query, fault: Fault) -> Result<Trajectory> {
    let start = query.config(0);
    match fault {
        Fault::Waypoint => Ok(Trajectory::constant(start).with_waypoint_times(waypoint_times(query.len()))),
        Fault::Collision => {
            let mut swapped = start.points().to_vec();
            swapped.swap(0, 1);
            let there = Configuration::from_points_unchecked(swapped);
            let out = Trajectory::from_motion(Motion::linear(start, &there));
            crate::pathkit::concat_paths(&[out.clone(), out.reversed()])
        }
    }
}

/// Everything `verify` reports about one planned query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub algorithm: Algorithm,
    pub ell: usize,
    pub max_waypoint_error: f64,
    pub min_separation: f64,
    pub min_separation_t: f64,
    pub min_separation_pair: (usize, usize),
    pub junction_gap_max: f64,
    pub domain_count_observed: usize,
    pub domain_count_expected: usize,
    pub continuity_constant_estimate: Option<f64>,
    pub pass: bool,
}

/// Tolerance on waypoint errors and junction gaps for a passing report.
pub const VERIFY_TOL: f64 = 1e-9;

/// Checks `traj` as a plan for `query`: waypoints, collisions, junctions, the
/// domain count of `(d, k, n)`, and a short continuity probe.
pub fn verify_trajectory(
    algorithm: Algorithm,
    tol: &Tolerances,
    query: &Query,
    traj: &Trajectory,
    resolution: usize,
) -> Result<VerificationReport> {
    let planner = algorithm.planner(*tol);
    let ell = planner.classify(query)?.domain_index();
    let scan = match scan_collisions(traj, resolution) {
        Ok(s) => s,
        Err(PlanError::CollisionDetected {
            t,
            first,
            second,
            separation,
        }) => CollisionScan {
            min_separation: separation,
            t,
            pair: (first, second),
        },
        Err(e) => return Err(e),
    };
    let audit = audit_domains(algorithm, tol, query.dim(), query.robots(), query.len(), 0, 0)?;
    let continuity = continuity_probe(planner.as_ref(), query, 1e-6, 3, ProbeOptions::default()).ok();
    let max_waypoint_error = check_waypoints(traj, query);
    let junction_gap_max = traj.junction_gap_max();
    let pass = max_waypoint_error <= VERIFY_TOL
        && scan.min_separation > 0.0
        && junction_gap_max <= VERIFY_TOL
        && audit.observed == audit.expected;
    Ok(VerificationReport {
        algorithm,
        ell,
        max_waypoint_error,
        min_separation: scan.min_separation,
        min_separation_t: scan.t,
        min_separation_pair: scan.pair,
        junction_gap_max,
        domain_count_observed: audit.observed,
        domain_count_expected: audit.expected,
        continuity_constant_estimate: continuity,
        pass,
    })
}
