//! Common interface over the two planners.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PlanError, Result};
use crate::geometry::{direction_of, distinct_count, Configuration, Point, Tolerances};
use crate::pathkit::Trajectory;
use crate::planner_even::{classify_even, line_coordinates, plan_even, witness_even, EvenCellLabel};
use crate::planner_general::{classify_general, plan_general, witness_general, GeneralCellLabel};
use crate::query::Query;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Axis-projection planner, any dimension.
    #[default]
    General,
    /// Line-projection planner, even dimensions only.
    Even,
}

impl Algorithm {
    pub fn planner(self, tol: Tolerances) -> Box<dyn Planner> {
        match self {
            Algorithm::General => Box::new(GeneralPlanner { tol }),
            Algorithm::Even => Box::new(EvenPlanner { tol }),
        }
    }

    /// Domain indices `l` the planner's repacking produces.
    pub fn domain_range(self, robots: usize, waypoints: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            Algorithm::General => waypoints..=waypoints * robots,
            Algorithm::Even => waypoints + 1..=waypoints * robots,
        }
    }

    /// Number of domains of continuity: `n(k-1)+1` or `n(k-1)`.
    pub fn domain_count(self, robots: usize, waypoints: usize) -> usize {
        self.domain_range(robots, waypoints).count()
    }

    pub fn supports_dim(self, dim: usize) -> bool {
        match self {
            Algorithm::General => dim >= 2,
            Algorithm::Even => dim >= 2 && dim % 2 == 0,
        }
    }

    /// Deterministic query in domain `l`.
    pub fn witness(self, dim: usize, robots: usize, waypoints: usize, domain: usize) -> Result<Query> {
        match self {
            Algorithm::General => witness_general(dim, robots, waypoints, domain),
            Algorithm::Even => witness_even(dim, robots, waypoints, domain),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::General => "general",
            Algorithm::Even => "even",
        })
    }
}

impl FromStr for Algorithm {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Algorithm::General),
            "even" => Ok(Algorithm::Even),
            other => Err(PlanError::InvalidParameter(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// The fine cell and repacked domain of a query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellLabel {
    Even(EvenCellLabel),
    General(GeneralCellLabel),
}

impl CellLabel {
    pub fn domain_index(&self) -> usize {
        match self {
            CellLabel::General(l) => l.domain_index,
            CellLabel::Even(l) => l.domain_index,
        }
    }

    pub fn per_config_counts(&self) -> &[usize] {
        match self {
            CellLabel::General(l) => &l.per_config_counts,
            CellLabel::Even(l) => &l.per_config_counts,
        }
    }

    pub fn antipode_count(&self) -> Option<usize> {
        match self {
            CellLabel::General(_) => None,
            CellLabel::Even(l) => Some(l.antipode_count),
        }
    }
}

/// A tame sequential planner: classification plus one continuous section per domain.
pub trait Planner: Send + Sync {
    fn plan(&self, query: &Query) -> Result<Trajectory>;
    fn classify(&self, query: &Query) -> Result<CellLabel>;

    /// Moves `candidate` back into the fine cell of `reference` by restoring
    /// the exact coincidences that define the cell. The default leaves it alone.
    fn restore_cell(&self, _reference: &Query, candidate: &Query) -> Result<Query> {
        Ok(candidate.clone())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GeneralPlanner {
    pub tol: Tolerances,
}

impl Planner for GeneralPlanner {
    fn plan(&self, query: &Query) -> Result<Trajectory> {
        Ok(plan_general(query, &self.tol)?.0)
    }

    fn classify(&self, query: &Query) -> Result<CellLabel> {
        classify_general(query, &self.tol).map(CellLabel::General)
    }

    /// Sets the first coordinates of each group of tied robots to their mean.
    fn restore_cell(&self, reference: &Query, candidate: &Query) -> Result<Query> {
        let configs = reference
            .configs()
            .iter()
            .zip(candidate.configs())
            .map(|(r, c)| {
                let firsts: Vec<f64> = r.points().iter().map(|p| p.coords()[0]).collect();
                let clusters = distinct_count(&firsts, self.tol.eps_proj)?;
                let mut sums = vec![(0.0, 0usize); clusters.count];
                for (p, &g) in c.points().iter().zip(&clusters.assignment) {
                    sums[g].0 += p.coords()[0];
                    sums[g].1 += 1;
                }
                let points = c
                    .points()
                    .iter()
                    .zip(&clusters.assignment)
                    .map(|(p, &g)| {
                        let mut coords = p.coords().to_vec();
                        coords[0] = sums[g].0 / sums[g].1 as f64;
                        Point::new(coords)
                    })
                    .collect();
                Configuration::new(points, self.tol.eps_sep)
            })
            .collect::<Result<Vec<_>>>()?;
        Query::new(configs)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvenPlanner {
    pub tol: Tolerances,
}

impl Planner for EvenPlanner {
    fn plan(&self, query: &Query) -> Result<Trajectory> {
        Ok(plan_even(query, &self.tol)?.0)
    }

    fn classify(&self, query: &Query) -> Result<CellLabel> {
        classify_even(query, &self.tol).map(CellLabel::Even)
    }

    /// Re-aligns antipodal orientations with the (perturbed) first one and
    /// sets tied line coordinates equal, keeping orthogonal offsets.
    fn restore_cell(&self, reference: &Query, candidate: &Query) -> Result<Query> {
        let tol = &self.tol;
        let ref_first = direction_of(reference.config(0), tol.eps_sep)?;
        let cand_first = direction_of(candidate.config(0), tol.eps_sep)?;
        let configs = reference
            .configs()
            .iter()
            .zip(candidate.configs())
            .enumerate()
            .map(|(s, (r, c))| {
                let (ref_dir, ref_coords) = line_coordinates(r, tol)?;
                let clusters = distinct_count(&ref_coords, tol.eps_proj)?;
                let x1 = c.point(0);
                let mut dir = direction_of(c, tol.eps_sep)?;
                if s > 0 && ref_dir.dot(&ref_first) < -1.0 + tol.eps_antipode {
                    dir = cand_first.neg();
                }
                let mut along = Vec::with_capacity(c.robots());
                let mut across = Vec::with_capacity(c.robots());
                for (m, p) in c.points().iter().enumerate() {
                    let rel = p.sub(x1);
                    let a = rel.dot(dir.coords());
                    let w = if m < 2 { Point::zeros(c.dim()) } else { rel.add_scaled(-a, dir.coords()) };
                    along.push(a);
                    across.push(w);
                }
                // the clusters holding x_1 and x_2 are pinned to their coordinates
                let mut value = vec![None; clusters.count];
                value[clusters.assignment[0]] = Some(0.0);
                value[clusters.assignment[1]] = Some(along[1]);
                let mut sums = vec![(0.0, 0usize); clusters.count];
                for (a, &g) in along.iter().zip(&clusters.assignment) {
                    sums[g].0 += a;
                    sums[g].1 += 1;
                }
                let points = (0..c.robots())
                    .map(|m| {
                        let g = clusters.assignment[m];
                        let a = value[g].unwrap_or(sums[g].0 / sums[g].1 as f64);
                        x1.add_scaled(a, dir.coords()).add(&across[m])
                    })
                    .collect();
                Configuration::new(points, tol.eps_sep)
            })
            .collect::<Result<Vec<_>>>()?;
        Query::new(configs)
    }
}
