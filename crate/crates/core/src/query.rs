use crate::error::{PlanError, Result};
use crate::geometry::Configuration;

/// The `n >= 2` waypoint configurations of one planning request, all with the
/// same robot count and dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    configs: Vec<Configuration>,
}

impl Query {
    pub fn new(configs: Vec<Configuration>) -> Result<Self> {
        if configs.len() < 2 {
            return Err(PlanError::Shape(format!(
                "a query needs at least 2 configurations, got {}",
                configs.len()
            )));
        }
        let (k, d) = (configs[0].robots(), configs[0].dim());
        for c in &configs[1..] {
            if c.robots() != k {
                return Err(PlanError::Shape(format!(
                    "robot count mismatch: {} vs {k}",
                    c.robots()
                )));
            }
            if c.dim() != d {
                return Err(PlanError::DimensionMismatch {
                    expected: d,
                    found: c.dim(),
                });
            }
        }
        Ok(Query { configs })
    }

    /// Builds a query from an `n x k x d` nested array.
    pub fn from_coords(coords: Vec<Vec<Vec<f64>>>, eps_sep: f64) -> Result<Self> {
        let configs = coords
            .into_iter()
            .map(|c| Configuration::from_coords(c, eps_sep))
            .collect::<Result<Vec<_>>>()?;
        Query::new(configs)
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn config(&self, index: usize) -> &Configuration {
        &self.configs[index]
    }

    /// Number of waypoints.
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn robots(&self) -> usize {
        self.configs[0].robots()
    }

    pub fn dim(&self) -> usize {
        self.configs[0].dim()
    }

    /// Waypoint times `j/(n-1)`.
    pub fn waypoint_times(&self) -> Vec<f64> {
        waypoint_times(self.len())
    }

    pub fn to_coords(&self) -> Vec<Vec<Vec<f64>>> {
        self.configs.iter().map(Configuration::to_coords).collect()
    }

    /// Largest configuration distance between corresponding waypoints.
    pub fn distance(&self, other: &Query) -> f64 {
        self.configs
            .iter()
            .zip(&other.configs)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn waypoint_times(n: usize) -> Vec<f64> {
    let segments = (n - 1) as f64;
    (0..n).map(|j| j as f64 / segments).collect()
}
