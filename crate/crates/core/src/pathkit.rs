//! Evaluable piecewise-analytic trajectories and homotopies.
//!
//! A [`Trajectory`] is a list of [`Piece`]s tiling `[0, 1]`; each piece maps
//! its time interval affinely onto a parameter window of a closed-form
//! [`Motion`]. Restriction and reversal only rewrite those windows, so a
//! trajectory built by concatenating restricted and reversed paths is still
//! evaluated exactly from the original formulas.

use std::fmt;
use std::sync::Arc;

use crate::error::{PlanError, Result};
use crate::geometry::{norm, Configuration, Point, UnitVector};
use crate::query::waypoint_times;

/// Junction tolerance for concatenation and stage chaining.
pub const JUNCTION_TOL: f64 = 1e-9;

/// One closed-form motion of all robots over the parameter interval `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Motion {
    /// Every robot moves along a straight segment: `(1 - s) from + s to`.
    Linear { from: Vec<Point>, to: Vec<Point> },
    /// Robots at signed offsets along a line through the origin; the line
    /// turns with direction `normalize((1 - s) from + s to)`.
    Pivot {
        offsets: Vec<f64>,
        from: UnitVector,
        to: UnitVector,
    },
}

impl Motion {
    pub fn linear(from: &Configuration, to: &Configuration) -> Motion {
        Motion::Linear {
            from: from.points().to_vec(),
            to: to.points().to_vec(),
        }
    }

    pub fn stationary(config: &Configuration) -> Motion {
        Motion::linear(config, config)
    }

    pub fn robots(&self) -> usize {
        match self {
            Motion::Linear { from, .. } => from.len(),
            Motion::Pivot { offsets, .. } => offsets.len(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Motion::Linear { from, .. } => from[0].dim(),
            Motion::Pivot { from, .. } => from.dim(),
        }
    }

    /// True when every robot moves affinely in the parameter.
    pub fn is_affine(&self) -> bool {
        matches!(self, Motion::Linear { .. })
    }

    pub fn eval(&self, s: f64) -> Configuration {
        let mut buf = vec![0.0; self.robots() * self.dim()];
        self.eval_into(s, &mut buf);
        let d = self.dim();
        Configuration::from_points_unchecked(
            buf.chunks(d).map(|c| Point::new(c.to_vec())).collect(),
        )
    }

    /// Writes robot coordinates, robot-major, into `out` (length `k * d`).
    pub fn eval_into(&self, s: f64, out: &mut [f64]) {
        match self {
            Motion::Linear { from, to } => {
                let d = from[0].dim();
                for (r, (a, b)) in from.iter().zip(to).enumerate() {
                    for (i, (x, y)) in a.coords().iter().zip(b.coords()).enumerate() {
                        out[r * d + i] = (1.0 - s) * x + s * y;
                    }
                }
            }
            Motion::Pivot { offsets, from, to } => {
                let d = from.dim();
                let dir = pivot_direction(from, to, s);
                for (r, off) in offsets.iter().enumerate() {
                    for i in 0..d {
                        out[r * d + i] = off * dir[i];
                    }
                }
            }
        }
    }
}

fn pivot_direction(from: &UnitVector, to: &UnitVector, s: f64) -> Vec<f64> {
    let mix: Vec<f64> = from
        .coords()
        .iter()
        .zip(to.coords())
        .map(|(a, b)| (1.0 - s) * a + s * b)
        .collect();
    let len = norm(&mix);
    mix.into_iter().map(|c| c / len).collect()
}

/// A time interval `[t0, t1]` of a trajectory running a motion over the
/// parameter window from `s0` to `s1` (which may be decreasing).
#[derive(Debug, Clone)]
pub struct Piece {
    pub t0: f64,
    pub t1: f64,
    pub s0: f64,
    pub s1: f64,
    pub motion: Arc<Motion>,
}

impl Piece {
    pub fn param_at(&self, t: f64) -> f64 {
        if t <= self.t0 {
            self.s0
        } else if t >= self.t1 {
            self.s1
        } else {
            self.s0 + (self.s1 - self.s0) * ((t - self.t0) / (self.t1 - self.t0))
        }
    }

    pub fn eval(&self, t: f64) -> Configuration {
        self.motion.eval(self.param_at(t))
    }
}

/// A continuous path `[0, 1] -> F(R^d, k)` with declared waypoint times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pieces: Vec<Piece>,
    waypoint_times: Vec<f64>,
    robots: usize,
    dim: usize,
}

impl Trajectory {
    /// The path running `motion` once over `[0, 1]`.
    pub fn from_motion(motion: Motion) -> Trajectory {
        let (robots, dim) = (motion.robots(), motion.dim());
        Trajectory {
            pieces: vec![Piece {
                t0: 0.0,
                t1: 1.0,
                s0: 0.0,
                s1: 1.0,
                motion: Arc::new(motion),
            }],
            waypoint_times: vec![0.0, 1.0],
            robots,
            dim,
        }
    }

    pub fn constant(config: &Configuration) -> Trajectory {
        Trajectory::from_motion(Motion::stationary(config))
    }

    /// Assembles a trajectory from pieces that must tile `[0, 1]` in order.
    pub fn from_pieces(pieces: Vec<Piece>, waypoint_times: Vec<f64>) -> Result<Trajectory> {
        let first = pieces
            .first()
            .ok_or_else(|| PlanError::Shape("a trajectory needs at least one piece".into()))?;
        let (robots, dim) = (first.motion.robots(), first.motion.dim());
        if first.t0 != 0.0 || pieces.last().map(|p| p.t1) != Some(1.0) {
            return Err(PlanError::Shape("pieces must cover [0, 1]".into()));
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if w[0].t1 != w[1].t0 || w[0].t0 > w[0].t1 {
                return Err(PlanError::Shape(format!("pieces {i} and {} do not tile", i + 1)));
            }
        }
        if pieces
            .iter()
            .any(|p| p.motion.robots() != robots || p.motion.dim() != dim)
        {
            return Err(PlanError::Shape("pieces disagree on robots or dimension".into()));
        }
        Ok(Trajectory {
            pieces,
            waypoint_times,
            robots,
            dim,
        })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn waypoint_times(&self) -> &[f64] {
        &self.waypoint_times
    }

    pub fn with_waypoint_times(mut self, times: Vec<f64>) -> Trajectory {
        self.waypoint_times = times;
        self
    }

    pub fn robots(&self) -> usize {
        self.robots
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn piece_index(&self, t: f64) -> usize {
        let idx = self.pieces.partition_point(|p| p.t1 < t);
        idx.min(self.pieces.len() - 1)
    }

    /// Configuration at time `t` (clamped into `[0, 1]`).
    pub fn eval(&self, t: f64) -> Configuration {
        let t = t.clamp(0.0, 1.0);
        self.pieces[self.piece_index(t)].eval(t)
    }

    /// Robot-major coordinates at time `t` written into `out` (length `k * d`).
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let t = t.clamp(0.0, 1.0);
        let piece = &self.pieces[self.piece_index(t)];
        piece.motion.eval_into(piece.param_at(t), out);
    }

    pub fn start(&self) -> Configuration {
        self.pieces[0].eval(0.0)
    }

    pub fn end(&self) -> Configuration {
        self.pieces[self.pieces.len() - 1].eval(1.0)
    }

    /// The same path run backwards.
    pub fn reversed(&self) -> Trajectory {
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| Piece {
                t0: 1.0 - p.t1,
                t1: 1.0 - p.t0,
                s0: p.s1,
                s1: p.s0,
                motion: Arc::clone(&p.motion),
            })
            .collect();
        let waypoint_times = self.waypoint_times.iter().rev().map(|t| 1.0 - t).collect();
        Trajectory {
            pieces,
            waypoint_times,
            robots: self.robots,
            dim: self.dim,
        }
    }

    /// The portion over `[a, b]`, rescaled affinely onto `[0, 1]`.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Trajectory> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(PlanError::InvalidParameter(format!(
                "restriction window [{a}, {b}] is not inside [0, 1]"
            )));
        }
        let width = b - a;
        let sliver = 1e-12 * width;
        let mut pieces: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            let lo = p.t0.max(a);
            let hi = p.t1.min(b);
            if hi - lo <= sliver {
                continue;
            }
            // Snap window ends that coincide with piece ends up to rounding.
            let s0 = if (lo - p.t0).abs() <= sliver { p.s0 } else { p.param_at(lo) };
            let s1 = if (hi - p.t1).abs() <= sliver { p.s1 } else { p.param_at(hi) };
            pieces.push(Piece {
                t0: (lo - a) / width,
                t1: (hi - a) / width,
                s0,
                s1,
                motion: Arc::clone(&p.motion),
            });
        }
        let count = pieces.len();
        pieces[0].t0 = 0.0;
        pieces[count - 1].t1 = 1.0;
        for i in 1..count {
            pieces[i].t0 = pieces[i - 1].t1;
        }
        Ok(Trajectory {
            pieces,
            waypoint_times: vec![0.0, 1.0],
            robots: self.robots,
            dim: self.dim,
        })
    }

    /// Largest mismatch between consecutive pieces at their shared time.
    pub fn junction_gap_max(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| w[0].eval(w[0].t1).distance(&w[1].eval(w[1].t0)))
            .fold(0.0, f64::max)
    }

    /// `m + 1` evenly spaced samples `(i/m, configuration)`.
    pub fn sample(&self, m: usize) -> Vec<(f64, Configuration)> {
        let m = m.max(1);
        (0..=m)
            .map(|i| {
                let t = i as f64 / m as f64;
                (t, self.eval(t))
            })
            .collect()
    }

    /// Samples on a grid with `per_segment` steps between consecutive
    /// waypoints, so every waypoint time appears verbatim.
    pub fn sample_per_segment(&self, per_segment: usize) -> Vec<(f64, Configuration)> {
        sample_times(self.waypoint_times.len(), per_segment)
            .into_iter()
            .map(|t| (t, self.eval(t)))
            .collect()
    }
}

/// Strictly increasing sample times with `per_segment` steps per waypoint
/// segment; includes each `j/(n-1)` exactly.
pub fn sample_times(waypoints: usize, per_segment: usize) -> Vec<f64> {
    let per_segment = per_segment.max(1);
    let segments = waypoints.max(2) - 1;
    let total = segments * per_segment;
    (0..=total).map(|i| i as f64 / total as f64).collect()
}

/// Uniform-speed concatenation: part `i` of `m` occupies `[i/m, (i+1)/m]`.
pub fn concat_paths(parts: &[Trajectory]) -> Result<Trajectory> {
    let m = parts.len();
    let first = parts
        .first()
        .ok_or_else(|| PlanError::Shape("nothing to concatenate".into()))?;
    for (i, w) in parts.windows(2).enumerate() {
        if w[1].robots != first.robots || w[1].dim != first.dim {
            return Err(PlanError::Shape(format!(
                "part {} has a different robot count or dimension",
                i + 1
            )));
        }
        let gap = w[0].end().distance(&w[1].start());
        if !(gap <= JUNCTION_TOL) {
            return Err(PlanError::EndpointMismatch { junction: i, gap });
        }
    }
    let scale = m as f64;
    let mut pieces = Vec::new();
    let mut waypoints: Vec<f64> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let offset = i as f64;
        for p in &part.pieces {
            pieces.push(Piece {
                t0: (offset + p.t0) / scale,
                t1: (offset + p.t1) / scale,
                s0: p.s0,
                s1: p.s1,
                motion: Arc::clone(&p.motion),
            });
        }
        for w in &part.waypoint_times {
            let t = (offset + w) / scale;
            if waypoints.last() != Some(&t) {
                waypoints.push(t);
            }
        }
    }
    Ok(Trajectory {
        pieces,
        waypoint_times: waypoints,
        robots: first.robots,
        dim: first.dim,
    })
}

/// One named deformation stage of a homotopy of `n`-tuples of configurations.
///
/// Given the tuple the stage starts from, returns one motion per component;
/// each motion must start at its component.
pub trait Deformation: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn motions(&self, tuple: &[Configuration]) -> Result<Vec<Motion>>;
}

/// A homotopy `H: B x [0, 1] -> F(R^d, k)^n` built from stages with relative durations.
#[derive(Debug, Clone, Default)]
pub struct Homotopy {
    stages: Vec<(Arc<dyn Deformation>, f64)>,
}

/// The component paths `h_i(b, -)` of a homotopy at one input.
#[derive(Debug, Clone)]
pub struct Tracks {
    pub components: Vec<Trajectory>,
    /// `H(b, 1)`.
    pub end: Vec<Configuration>,
    /// Tuple reached at the end of each stage, in stage order.
    pub stage_ends: Vec<Vec<Configuration>>,
}

impl Homotopy {
    /// `H(b, t) = b`.
    pub fn stationary() -> Homotopy {
        Homotopy { stages: Vec::new() }
    }

    /// Stages run one after another with equal durations.
    pub fn from_stages(stages: Vec<Arc<dyn Deformation>>) -> Homotopy {
        let m = stages.len() as f64;
        Homotopy {
            stages: stages.into_iter().map(|s| (s, 1.0 / m)).collect(),
        }
    }

    pub fn single(stage: impl Deformation + 'static) -> Homotopy {
        Homotopy::from_stages(vec![Arc::new(stage)])
    }

    pub fn stage_names(&self) -> Vec<String> {
        self.stages.iter().map(|(s, _)| s.name().to_string()).collect()
    }

    /// Relative stage durations (summing to 1).
    pub fn schedule(&self) -> Vec<f64> {
        self.stages.iter().map(|(_, w)| *w).collect()
    }

    /// Builds the component paths at input `b`, checking that each stage starts
    /// where the previous one ended.
    pub fn tracks(&self, b: &[Configuration]) -> Result<Tracks> {
        let mut current = b.to_vec();
        let mut pieces: Vec<Vec<Piece>> = vec![Vec::new(); b.len()];
        let mut stage_ends = Vec::with_capacity(self.stages.len());
        let mut clock = 0.0;
        for (index, (stage, weight)) in self.stages.iter().enumerate() {
            let motions = stage.motions(&current)?;
            if motions.len() != current.len() {
                return Err(PlanError::Shape(format!(
                    "stage {} produced {} motions for {} components",
                    stage.name(),
                    motions.len(),
                    current.len()
                )));
            }
            let t0 = clock;
            let t1 = if index + 1 == self.stages.len() { 1.0 } else { clock + weight };
            let mut next = Vec::with_capacity(current.len());
            for (comp, motion) in motions.into_iter().enumerate() {
                let gap = motion.eval(0.0).distance(&current[comp]);
                if !(gap <= JUNCTION_TOL) {
                    return Err(PlanError::EndpointMismatch { junction: index, gap });
                }
                next.push(motion.eval(1.0));
                pieces[comp].push(Piece {
                    t0,
                    t1,
                    s0: 0.0,
                    s1: 1.0,
                    motion: Arc::new(motion),
                });
            }
            clock = t1;
            current = next;
            stage_ends.push(current.clone());
        }
        let components = pieces
            .into_iter()
            .zip(b)
            .map(|(p, start)| {
                if p.is_empty() {
                    Ok(Trajectory::constant(start))
                } else {
                    Trajectory::from_pieces(p, vec![0.0, 1.0])
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tracks {
            components,
            end: current,
            stage_ends,
        })
    }

    /// `H(b, t)`.
    pub fn evaluate(&self, b: &[Configuration], t: f64) -> Result<Vec<Configuration>> {
        if t <= 0.0 {
            return Ok(b.to_vec());
        }
        let tracks = self.tracks(b)?;
        Ok(tracks.components.iter().map(|c| c.eval(t)).collect())
    }
}

/// Equal-duration concatenation of homotopies.
///
/// Stages are functions of the tuple they start from, so chaining is checked
/// when the concatenation is evaluated ([`Homotopy::tracks`]).
pub fn concat_homotopies(parts: Vec<Homotopy>) -> Homotopy {
    let nonempty: Vec<Homotopy> = parts.into_iter().filter(|h| !h.stages.is_empty()).collect();
    let m = nonempty.len() as f64;
    Homotopy {
        stages: nonempty
            .into_iter()
            .flat_map(|h| h.stages.into_iter().map(move |(s, w)| (s, w / m)))
            .collect(),
    }
}

/// A continuous sequential motion planner defined on a subset `A` of the
/// `n`-fold product.
pub trait Section {
    /// Membership test for `A`; fails with [`PlanError::Domain`] outside it.
    fn check_domain(&self, tuple: &[Configuration]) -> Result<()>;
    /// The planned path through `tuple`, with waypoint times `j/(n-1)`.
    fn path(&self, tuple: &[Configuration]) -> Result<Trajectory>;
}

/// Moves a section on `A` to a section on `B` along a deformation `H` of `B` into `A`.
///
/// Waypoint segment `i` of the result is split into thirds carrying
/// `h_i(b, -)`, the `i`-th segment of `s_A(H(b, 1))`, and `h_{i+1}(b, -)` backwards.
pub fn transport_section(
    homotopy: &Homotopy,
    section: &dyn Section,
    b: &[Configuration],
) -> Result<Trajectory> {
    let n = b.len();
    if n < 2 {
        return Err(PlanError::Shape("need at least 2 waypoints".into()));
    }
    let tracks = homotopy.tracks(b)?;
    section.check_domain(&tracks.end)?;
    let path = section.path(&tracks.end)?;
    let segments = (n - 1) as f64;
    let mut parts = Vec::with_capacity(3 * (n - 1));
    for i in 0..n - 1 {
        parts.push(tracks.components[i].clone());
        parts.push(path.restrict(i as f64 / segments, (i + 1) as f64 / segments)?);
        parts.push(tracks.components[i + 1].reversed());
    }
    Ok(concat_paths(&parts)?.with_waypoint_times(waypoint_times(n)))
}
