//! Benchmark problem definitions, synthetic data generators and ingestion.
//!
//! Every generator is a pure function of its parameters and an
//! [`RngStream`](crate::numerics::RngStream), so datasets are bit-reproducible.
//! Costs are stored in each problem's natural orientation (path costs to
//! minimize, item values to maximize); the training layer canonicalizes to
//! minimization via [`Dataset::canonicalize`].

mod archive;
mod energy;
mod knapsack;
mod matching;
mod portfolio;
mod scheduling;
mod shortest_path;
mod specs;
mod topk;

pub use archive::{read_archive, write_archive, ArchiveMeta};
pub use energy::{
    load_energy_csv, parse_energy_csv, synthesize_energy_csv, write_energy_csv, EnergyDay,
    ENERGY_CSV_HEADER, FEATURES_PER_SLOT, SLOTS_PER_DAY,
};
pub use knapsack::gen_knapsack_data;
pub use matching::gen_matching_data;
pub use portfolio::gen_portfolio_data;
pub use scheduling::gen_scheduling_instance;
pub use shortest_path::gen_shortest_path_data;
pub use specs::{
    GridSpec, KnapsackSpec, MatchingSpec, PortfolioSpec, SchedulingSpec, SchedulingTask,
    SyntheticGroundTruth, TopKSpec,
};
pub use topk::gen_topk_data;

use crate::numerics::Matrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("ingest error at row {row}: {reason}")]
    IngestError { row: usize, reason: String },
    #[error("day {date} has {rows} rows, expected 48")]
    PartialDay { date: String, rows: usize },
    #[error("no non-empty matching satisfies the diversity fractions rho1={rho1}, rho2={rho2}")]
    InfeasibleDiversity { rho1: f64, rho2: f64 },
    #[error("could not generate a feasible scheduling instance after {attempts} attempts")]
    InfeasibleInstance { attempts: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver error during generation: {0}")]
    Solver(#[from] crate::solvers::SolverError),
}

/// Feature payload of one instance: a flat vector, or one feature row per
/// decision component (energy problems carry 8 features per half-hour slot).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Features {
    Vector(Vec<f64>),
    Matrix(Matrix),
}

impl Features {
    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Features::Vector(v) => Some(v),
            Features::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Matrix> {
        match self {
            Features::Matrix(m) => Some(m),
            Features::Vector(_) => None,
        }
    }

    pub fn flat_len(&self) -> usize {
        match self {
            Features::Vector(v) => v.len(),
            Features::Matrix(m) => m.rows() * m.cols(),
        }
    }

    pub fn flat(&self) -> &[f64] {
        match self {
            Features::Vector(v) => v,
            Features::Matrix(m) => m.data(),
        }
    }
}

/// One (features, true cost, true solution) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub features: Features,
    pub true_cost: Vec<f64>,
    /// Full-information optimal solution, populated lazily by the training
    /// layer unless the generator already knows it.
    pub true_solution: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Validation => write!(f, "validation"),
            Split::Test => write!(f, "test"),
        }
    }
}

/// Objective orientation of a problem's natural cost vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSense {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub instances: Vec<ProblemInstance>,
    pub split: Split,
}

impl Dataset {
    pub fn new(instances: Vec<ProblemInstance>, split: Split) -> Result<Self, DataError> {
        if instances.is_empty() {
            return Err(DataError::InvalidParam("dataset must be non-empty".into()));
        }
        let dim = instances[0].true_cost.len();
        let flen = instances[0].features.flat_len();
        for (i, inst) in instances.iter().enumerate() {
            if inst.true_cost.len() != dim || inst.features.flat_len() != flen {
                return Err(DataError::InvalidParam(format!(
                    "instance {i} has inhomogeneous dimensions"
                )));
            }
        }
        Ok(Dataset { instances, split })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn cost_dim(&self) -> usize {
        self.instances.first().map_or(0, |i| i.true_cost.len())
    }

    /// Flip cost signs so a max problem becomes min-form. Min problems pass
    /// through unchanged. Solutions are orientation-free and kept as-is.
    pub fn canonicalize(mut self, sense: ObjectiveSense) -> Dataset {
        if sense == ObjectiveSense::Max {
            for inst in &mut self.instances {
                for c in &mut inst.true_cost {
                    *c = -*c;
                }
            }
        }
        self
    }
}
