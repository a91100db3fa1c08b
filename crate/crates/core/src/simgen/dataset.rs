//! Deterministic dataset assembly: candidates are drawn at fixed indices,
//! filtered, finalized, split, and written as one JSON file per segment
//! plus a manifest.

use super::generator::{finalize_candidate, generate_candidate};
use super::validity::validity_filter;
use super::{derive_rng, GenError, GeneratorConfig};
use crate::segment::Segment;
use crate::spatial::{Region, TableGeometry};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
const SPLIT_SALT: u64 = 0x005E_ED0F_5A17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitAssignment {
    Train,
    Calibration,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub seed: u64,
    pub config: GeneratorConfig,
    pub config_hash: String,
    pub candidates_examined: u64,
    pub accepted: usize,
    pub rejections: BTreeMap<String, usize>,
    pub region_counts: BTreeMap<String, usize>,
    pub splits: BTreeMap<String, SplitAssignment>,
}

/// FNV-1a over the canonical JSON encoding.
pub fn config_hash(config: &GeneratorConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in json.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{hash:016x}")
}

pub fn generate_dataset(
    config: &GeneratorConfig,
) -> Result<(Vec<Segment>, DatasetManifest), GenError> {
    config.validate()?;
    let table = TableGeometry::default();
    let mut segments = Vec::with_capacity(config.segment_count);
    let mut rejections: BTreeMap<String, usize> = BTreeMap::new();
    let mut region_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut splits: BTreeMap<String, SplitAssignment> = BTreeMap::new();
    let mut next_index = 0u64;
    let budget = (config.segment_count as u64) * 50 + 1000;

    while segments.len() < config.segment_count {
        if next_index > budget {
            return Err(GenError::InvalidConfig(format!(
                "acceptance rate too low: {} accepted after {} candidates",
                segments.len(),
                next_index
            )));
        }
        let batch: Vec<u64> = (next_index..next_index + 256).collect();
        next_index += 256;
        let candidates: Vec<_> = batch
            .par_iter()
            .map(|&index| {
                let candidate = generate_candidate(config, index);
                let verdict = validity_filter(&candidate, config, &table);
                (candidate, verdict)
            })
            .collect();
        for (candidate, verdict) in candidates {
            if segments.len() >= config.segment_count {
                break;
            }
            match verdict {
                Ok(()) => {
                    let accepted_index = segments.len();
                    let id = format!("seg-{accepted_index:06}");
                    let segment = finalize_candidate(&candidate, config, &id)?;
                    let region = table
                        .region_of(segment.strike_point.x)
                        .map_err(|e| GenError::InvalidConfig(e.to_string()))?;
                    *region_counts.entry(region.name().to_string()).or_default() += 1;
                    let draw: f64 =
                        derive_rng(config.seed ^ SPLIT_SALT, accepted_index as u64).random();
                    let split = if draw < config.split_train {
                        SplitAssignment::Train
                    } else if draw < config.split_train + config.split_calibration {
                        SplitAssignment::Calibration
                    } else {
                        SplitAssignment::Test
                    };
                    splits.insert(id, split);
                    segments.push(segment);
                }
                Err(reason) => {
                    *rejections.entry(reason.key().to_string()).or_default() += 1;
                }
            }
        }
    }

    let manifest = DatasetManifest {
        version: MANIFEST_SCHEMA_VERSION,
        seed: config.seed,
        config: config.clone(),
        config_hash: config_hash(config),
        candidates_examined: next_index.min(budget),
        accepted: segments.len(),
        rejections,
        region_counts,
        splits,
    };
    Ok((segments, manifest))
}

/// Segments of one split, in id order.
pub fn split_segments<'a>(
    segments: &'a [Segment],
    manifest: &DatasetManifest,
    split: SplitAssignment,
) -> Vec<&'a Segment> {
    segments
        .iter()
        .filter(|s| manifest.splits.get(&s.id) == Some(&split))
        .collect()
}

pub fn save_dataset(
    dir: &Path,
    segments: &[Segment],
    manifest: &DatasetManifest,
) -> Result<(), GenError> {
    let segment_dir = dir.join("segments");
    std::fs::create_dir_all(&segment_dir)?;
    std::fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(manifest)?,
    )?;
    for segment in segments {
        segment.save(&segment_dir.join(format!("{}.json", segment.id)))?;
    }
    Ok(())
}

pub fn load_dataset(
    dir: &Path,
    table: &TableGeometry,
) -> Result<(Vec<Segment>, DatasetManifest), GenError> {
    let manifest: DatasetManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json"))?)?;
    if manifest.version != MANIFEST_SCHEMA_VERSION {
        return Err(GenError::InvalidConfig(format!(
            "unsupported manifest version {}",
            manifest.version
        )));
    }
    let segment_dir = dir.join("segments");
    let mut paths: Vec<_> = std::fs::read_dir(&segment_dir)?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<Result<Vec<_>, _>>()?;
    paths.sort();
    let segments = paths
        .iter()
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("json"))
        .map(|path| Segment::load(path, table))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((segments, manifest))
}

/// True-strike region of a segment under the default geometry.
pub fn segment_region(segment: &Segment, table: &TableGeometry) -> Region {
    table
        .region_of(segment.strike_point.x)
        .expect("stored strike points are finite")
}
