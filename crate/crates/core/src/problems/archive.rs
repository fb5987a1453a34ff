//! On-disk dataset archive: one directory per problem holding `meta.json`
//! with the problem-level constants and `data.csv` with one row per
//! instance, features and costs flattened under a dimension-prefixed header
//! (`z0..z{F-1}, c0..c{D-1}`).

use super::{DataError, Dataset, Features, ObjectiveSense, ProblemInstance, Split};
use crate::numerics::Matrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchiveMeta {
    pub problem: String,
    pub sense: ObjectiveSense,
    /// `(rows, cols)` of per-instance feature matrices; rows = 0 encodes a
    /// flat feature vector of length `cols`.
    pub feature_shape: (usize, usize),
    pub cost_dim: usize,
    /// Problem-specific constants (weights, capacities, grids, ...).
    pub spec: serde_json::Value,
}

pub fn write_archive(
    dir: impl AsRef<Path>,
    meta: &ArchiveMeta,
    splits: &[&Dataset],
) -> Result<(), DataError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let meta_json = serde_json::to_string_pretty(meta)
        .map_err(|e| DataError::InvalidParam(format!("meta serialization: {e}")))?;
    std::fs::write(dir.join("meta.json"), meta_json)?;

    let flat_len = if meta.feature_shape.0 == 0 {
        meta.feature_shape.1
    } else {
        meta.feature_shape.0 * meta.feature_shape.1
    };
    let mut out = String::from("split");
    for j in 0..flat_len {
        out.push_str(&format!(",z{j}"));
    }
    for j in 0..meta.cost_dim {
        out.push_str(&format!(",c{j}"));
    }
    out.push('\n');
    for ds in splits {
        for inst in &ds.instances {
            out.push_str(&ds.split.to_string());
            for v in inst.features.flat() {
                out.push_str(&format!(",{v}"));
            }
            for v in &inst.true_cost {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
    }
    std::fs::write(dir.join("data.csv"), out)?;
    Ok(())
}

pub fn read_archive(dir: impl AsRef<Path>) -> Result<(ArchiveMeta, Vec<Dataset>), DataError> {
    let dir = dir.as_ref();
    let meta: ArchiveMeta = serde_json::from_str(&std::fs::read_to_string(dir.join("meta.json"))?)
        .map_err(|e| DataError::IngestError { row: 0, reason: format!("meta.json: {e}") })?;
    let content = std::fs::read_to_string(dir.join("data.csv"))?;
    let flat_len = if meta.feature_shape.0 == 0 {
        meta.feature_shape.1
    } else {
        meta.feature_shape.0 * meta.feature_shape.1
    };

    let mut lines = content.lines().enumerate();
    lines.next(); // header
    let mut buckets: [(Split, Vec<ProblemInstance>); 3] = [
        (Split::Train, Vec::new()),
        (Split::Validation, Vec::new()),
        (Split::Test, Vec::new()),
    ];
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = idx + 1;
        let mut fields = line.split(',');
        let split = match fields.next() {
            Some("train") => Split::Train,
            Some("validation") => Split::Validation,
            Some("test") => Split::Test,
            other => {
                return Err(DataError::IngestError {
                    row,
                    reason: format!("bad split label {other:?}"),
                })
            }
        };
        let values: Result<Vec<f64>, _> = fields.map(|f| f.parse::<f64>()).collect();
        let values = values
            .map_err(|e| DataError::IngestError { row, reason: format!("bad number: {e}") })?;
        if values.len() != flat_len + meta.cost_dim {
            return Err(DataError::IngestError {
                row,
                reason: format!(
                    "expected {} numeric fields, found {}",
                    flat_len + meta.cost_dim,
                    values.len()
                ),
            });
        }
        let (feat, cost) = values.split_at(flat_len);
        let features = if meta.feature_shape.0 == 0 {
            Features::Vector(feat.to_vec())
        } else {
            Features::Matrix(Matrix::from_vec(
                meta.feature_shape.0,
                meta.feature_shape.1,
                feat.to_vec(),
            ))
        };
        let inst =
            ProblemInstance { features, true_cost: cost.to_vec(), true_solution: None };
        let bucket = buckets.iter_mut().find(|(s, _)| *s == split).expect("bucket exists");
        bucket.1.push(inst);
    }
    let mut datasets = Vec::new();
    for (split, instances) in buckets {
        if !instances.is_empty() {
            datasets.push(Dataset::new(instances, split)?);
        }
    }
    Ok((meta, datasets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use crate::problems::{gen_topk_data, GridSpec};

    #[test]
    fn round_trip_vector_features() {
        let mut rng = RngStream::new(0, 0);
        let (mut data, spec) = gen_topk_data(6, 2, 8, &mut rng).unwrap();
        // Solutions are not archived; drop them for the equality check.
        for inst in &mut data.instances {
            inst.true_solution = None;
        }
        let meta = ArchiveMeta {
            problem: "topk".into(),
            sense: ObjectiveSense::Max,
            feature_shape: (0, 6),
            cost_dim: 6,
            spec: serde_json::to_value(spec).unwrap(),
        };
        let dir = std::env::temp_dir().join(format!("archive_test_{}", std::process::id()));
        write_archive(&dir, &meta, &[&data]).unwrap();
        let (meta2, datasets) = read_archive(&dir).unwrap();
        std::fs::remove_dir_all(&dir).ok();
        assert_eq!(meta2.problem, "topk");
        assert_eq!(datasets.len(), 1);
        assert_eq!(datasets[0], data);
    }

    #[test]
    fn grid_spec_survives_meta_round_trip() {
        let grid = GridSpec::new(5).unwrap();
        let value = serde_json::to_value(&grid).unwrap();
        let back: GridSpec = serde_json::from_value(value).unwrap();
        assert_eq!(back, grid);
    }
}
