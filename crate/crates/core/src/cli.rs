//! Document types and command implementations behind the `tameplan` binary.
//!
//! Commands return serializable documents or a [`CliError`] carrying a
//! machine-readable reason and the process exit code.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::geometry::Tolerances;
use crate::pathkit::sample_times;
use crate::planner::{Algorithm, CellLabel};
use crate::query::Query;
use crate::random::{random_query, random_query_in_domain};
use crate::verify::{audit_domains, corrupt_trajectory, verify_trajectory, AuditReport, Fault, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// A planning request as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryDocument {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    #[serde(default)]
    pub algorithm: Algorithm,
    /// `n x k x d` robot coordinates.
    pub configurations: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliError {
    /// One of `shape`, `parity`, `boundary`, `coincident`, `input`, `io`.
    #[serde(rename = "error")]
    pub reason: String,
    pub message: String,
}

impl CliError {
    pub fn new(reason: &str, message: impl Into<String>) -> Self {
        CliError {
            reason: reason.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.reason, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        let reason = match &e {
            PlanError::Shape(_) | PlanError::DimensionMismatch { .. } => "shape",
            PlanError::OddDimension(_) => "parity",
            PlanError::BoundaryQuery(_) | PlanError::AmbiguousClustering(..) => "boundary",
            PlanError::Coincident { .. } | PlanError::DegenerateDirection => "coincident",
            _ => "input",
        };
        CliError::new(reason, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("io", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new("input", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::new("io", e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Command-line overrides applied on top of a document's own settings.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub algorithm: Option<Algorithm>,
    pub eps_proj: Option<f64>,
    pub eps_antipode: Option<f64>,
}

impl Overrides {
    pub fn tolerances(&self, base: Option<Tolerances>) -> CliResult<Tolerances> {
        let mut tol = base.unwrap_or_default();
        if let Some(e) = self.eps_proj {
            tol.eps_proj = e;
        }
        if let Some(e) = self.eps_antipode {
            tol.eps_antipode = e;
        }
        tol.validate()?;
        Ok(tol)
    }
}

impl QueryDocument {
    pub fn from_query(query: &Query, algorithm: Algorithm) -> Self {
        QueryDocument {
            d: query.dim(),
            k: query.robots(),
            n: query.len(),
            algorithm,
            configurations: query.to_coords(),
            tolerances: None,
            seed: None,
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Shape-checks the document and builds the query.
    pub fn to_query(&self, tol: &Tolerances) -> CliResult<Query> {
        let (d, k, n) = (self.d, self.k, self.n);
        if self.configurations.len() != n {
            return Err(CliError::new(
                "shape",
                format!("expected n={n} configurations, got {}", self.configurations.len()),
            ));
        }
        for (s, c) in self.configurations.iter().enumerate() {
            if c.len() != k {
                return Err(CliError::new(
                    "shape",
                    format!("configuration {s} has {} robots, expected k={k}", c.len()),
                ));
            }
            if let Some(r) = c.iter().position(|p| p.len() != d) {
                return Err(CliError::new(
                    "shape",
                    format!("robot {r} of configuration {s} has {} coordinates, expected d={d}", c[r].len()),
                ));
            }
        }
        Ok(Query::from_coords(self.configurations.clone(), tol.eps_sep)?)
    }
}

/// Parses `doc`, applies overrides and checks the algorithm against `d`.
fn prepare(doc: &QueryDocument, overrides: &Overrides) -> CliResult<(Algorithm, Tolerances, Query)> {
    let algorithm = overrides.algorithm.unwrap_or(doc.algorithm);
    let tol = overrides.tolerances(doc.tolerances)?;
    if !algorithm.supports_dim(doc.d) {
        return Err(CliError::new(
            "parity",
            format!("the {algorithm} planner needs an even dimension, got d={}", doc.d),
        ));
    }
    let query = doc.to_query(&tol)?;
    Ok((algorithm, tol, query))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMetadata {
    pub query: QueryDocument,
    pub cell: CellLabel,
    pub ell: usize,
    pub planner: Algorithm,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub t: f64,
    pub robot: usize,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDocument {
    pub metadata: TrajectoryMetadata,
    pub waypoint_times: Vec<f64>,
    pub samples: Vec<SampleRow>,
}

pub fn cmd_plan(doc: &QueryDocument, overrides: &Overrides, samples_per_segment: usize) -> CliResult<TrajectoryDocument> {
    let (algorithm, tol, query) = prepare(doc, overrides)?;
    let planner = algorithm.planner(tol);
    let cell = planner.classify(&query)?;
    let traj = planner.plan(&query)?;
    let mut samples = Vec::new();
    for t in sample_times(query.len(), samples_per_segment) {
        for (robot, p) in traj.eval(t).points().iter().enumerate() {
            samples.push(SampleRow {
                t,
                robot,
                coords: p.coords().to_vec(),
            });
        }
    }
    let mut echo = doc.clone();
    echo.algorithm = algorithm;
    Ok(TrajectoryDocument {
        metadata: TrajectoryMetadata {
            query: echo,
            ell: cell.domain_index(),
            cell,
            planner: algorithm,
            tolerances: tol,
        },
        waypoint_times: traj.waypoint_times().to_vec(),
        samples,
    })
}

/// Writes the samples as CSV with columns `t, robot, x1..xd`.
pub fn write_csv<W: Write>(doc: &TrajectoryDocument, out: W) -> CliResult<()> {
    let d = doc.metadata.query.d;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "robot".to_string()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for row in &doc.samples {
        let mut record = vec![row.t.to_string(), row.robot.to_string()];
        record.extend(row.coords.iter().map(|c| c.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(doc: &TrajectoryDocument, path: &Path) -> CliResult<()> {
    write_csv(doc, std::fs::File::create(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyDocument {
    pub algorithm: Algorithm,
    pub cells: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipodes: Option<usize>,
    pub ell: usize,
}

pub fn cmd_classify(doc: &QueryDocument, overrides: &Overrides) -> CliResult<ClassifyDocument> {
    let (algorithm, tol, query) = prepare(doc, overrides)?;
    let cell = algorithm.planner(tol).classify(&query)?;
    Ok(ClassifyDocument {
        algorithm,
        cells: cell.per_config_counts().to_vec(),
        antipodes: cell.antipode_count(),
        ell: cell.domain_index(),
    })
}

/// Plans and verifies; with `fault` set, verifies a deliberately broken
/// trajectory instead.
pub fn cmd_verify(
    doc: &QueryDocument,
    overrides: &Overrides,
    resolution: usize,
    fault: Option<Fault>,
) -> CliResult<VerificationReport> {
    let (algorithm, tol, query) = prepare(doc, overrides)?;
    let traj = match fault {
        None => algorithm.planner(tol).plan(&query)?,
        Some(f) => corrupt_trajectory(&query, f)?,
    };
    Ok(verify_trajectory(algorithm, &tol, &query, &traj, resolution)?)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_audit(
    algorithm: Algorithm,
    overrides: &Overrides,
    d: usize,
    k: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> CliResult<AuditReport> {
    let tol = overrides.tolerances(None)?;
    if !algorithm.supports_dim(d) {
        return Err(CliError::new(
            "parity",
            format!("the {algorithm} planner needs an even dimension, got d={d}"),
        ));
    }
    Ok(audit_domains(algorithm, &tol, d, k, n, samples, seed)?)
}

/// Parses `ell=N` as used by `random --cell`.
pub fn parse_cell_target(text: &str) -> CliResult<usize> {
    text.strip_prefix("ell=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CliError::new("input", format!("expected --cell ell=N, got {text:?}")))
}

/// `count` random query documents, deterministic in `seed`; boundary queries
/// are skipped.
#[allow(clippy::too_many_arguments)]
pub fn cmd_random(
    algorithm: Algorithm,
    overrides: &Overrides,
    d: usize,
    k: usize,
    n: usize,
    count: usize,
    seed: u64,
    cell: Option<usize>,
) -> CliResult<Vec<QueryDocument>> {
    let tol = overrides.tolerances(None)?;
    if d < 2 || k < 2 || n < 2 {
        return Err(CliError::new("input", "d, k and n must all be at least 2"));
    }
    if !algorithm.supports_dim(d) {
        return Err(CliError::new(
            "parity",
            format!("the {algorithm} planner needs an even dimension, got d={d}"),
        ));
    }
    let planner = algorithm.planner(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let query = match cell {
            Some(ell) => random_query_in_domain(&mut rng, algorithm, d, k, n, ell)?,
            None => random_query(&mut rng, algorithm, d, k, n)?,
        };
        match planner.classify(&query) {
            Ok(label) if cell.is_none_or(|ell| label.domain_index() == ell) => {
                let mut doc = QueryDocument::from_query(&query, algorithm);
                doc.seed = Some(seed);
                out.push(doc);
            }
            Ok(_) => continue,
            Err(e) if e.is_boundary() => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}
