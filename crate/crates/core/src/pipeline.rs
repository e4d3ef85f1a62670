//! The enumeration pipeline: candidates -> combinatorial filter -> linear
//! pruning -> nonlinear feasibility and range -> rigidity classification ->
//! records and the per-N summary.
//!
//! Candidates are solved in parallel; results are merged in canonical-key
//! order, and every solve derives its randomness from the candidate key, so
//! output is byte-identical across runs and worker counts.

use crate::embedder::{
    feasible_range, lp_prune, CapReason, SolverBudget, SphericalConfig, Status,
};
use crate::extremal::{build_report, fejes_toth_bound};
use crate::graph_gen::{combinatorial_filter, generate_candidates, PlanarCandidate};
use crate::record::{ExtremalReport, FlagsJson, GraphRecord};
use crate::rigidity::{classify_config, d_reflection_exists, is_irreducible};
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// Candidate filters of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunFilters {
    pub max_face_size: usize,
    pub d_lower: Option<f64>,
    pub allow_isolated: bool,
}

impl Default for RunFilters {
    fn default() -> Self {
        // Faces of seven or more vertices force a separation below 2*pi/7,
        // far under every minimum the desk-scale enumerations produce; the
        // summary still cross-checks this after the fact.
        RunFilters {
            max_face_size: 6,
            d_lower: None,
            allow_isolated: true,
        }
    }
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub n: usize,
    pub filters: RunFilters,
    pub budget: SolverBudget,
    pub code_version: String,
}

impl RunManifest {
    pub fn new(n: usize, filters: RunFilters, budget: SolverBudget) -> RunManifest {
        RunManifest {
            n,
            filters,
            budget,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Stable content hash used as the cache key.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("manifest serializes");
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for b in json.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// Outcome counters of one run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub candidates: usize,
    pub filtered_out: usize,
    pub lp_pruned: usize,
    pub infeasible: usize,
    pub reducible: usize,
    pub irreducible: usize,
    pub undecided: usize,
    pub flag_mismatches: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<GraphRecord>,
    pub report: ExtremalReport,
    pub stats: RunStats,
    /// Candidates that could not be decided, by canonical key.
    pub undecided_keys: Vec<String>,
}

enum CandidateOutcome {
    FilteredOut,
    LpPruned,
    Infeasible,
    Undecided(String),
    Reducible,
    Irreducible(Box<GraphRecord>),
}

fn witness_config(range_witness: &Option<(crate::embedder::EmbeddingSolution, SphericalConfig)>) -> &SphericalConfig {
    &range_witness.as_ref().expect("feasible range has witness").1
}

fn process_candidate(
    cand: &PlanarCandidate,
    n: usize,
    filters: &RunFilters,
    budget: &SolverBudget,
) -> Result<CandidateOutcome> {
    let d_floor = filters.d_lower.unwrap_or(0.0);
    if !combinatorial_filter(cand, d_floor) {
        return Ok(CandidateOutcome::FilteredOut);
    }
    let d_hi = fejes_toth_bound(n)? + 2e-3;
    let d_lo = filters.d_lower;
    if !lp_prune(cand, d_lo.unwrap_or(1e-3), d_hi) {
        return Ok(CandidateOutcome::LpPruned);
    }
    let range = feasible_range(cand, budget, 0x5c67_u64, d_lo, Some(d_hi));
    match range.status {
        Status::Undecided => return Ok(CandidateOutcome::Undecided(cand.key.hex())),
        Status::Infeasible => return Ok(CandidateOutcome::Infeasible),
        Status::Feasible => {}
    }
    if !range.irreducible_anywhere {
        return Ok(CandidateOutcome::Reducible);
    }

    let top = witness_config(&range.witness_max);
    let mut flags = classify_config(top)?;
    let bottom = witness_config(&range.witness_min);
    let (irr_at_min, _) = is_irreducible(bottom)?;
    let flag_mismatch = irr_at_min != flags.irreducible;

    if !flags.irreducible {
        return Ok(CandidateOutcome::Reducible);
    }
    // A graph counts as reflection-free when some realization in its range
    // admits no reflection; check the bottom witness too.
    if !flags.d_irreducible && irr_at_min && d_reflection_exists(bottom)?.is_none() {
        flags.d_irreducible = true;
        flags.reflection_witness = None;
    }
    let record = GraphRecord {
        n,
        canonical_key: cand.key.hex(),
        adjacency: (0..cand.core_n())
            .map(|v| cand.rotation.neighbors(v).to_vec())
            .collect(),
        faces: cand.faces.clone(),
        isolated_faces: cand.isolated_faces.clone(),
        edge_count: cand.edge_count(),
        d_min: range.d_min,
        d_max: range.d_max,
        status: Status::Feasible,
        flags: FlagsJson::from(&flags),
        min_cap: range.min_cap,
        max_cap: range.max_cap,
        coords_at_dmax: top.points.iter().map(|p| p.coords()).collect(),
        flag_mismatch,
    };
    Ok(CandidateOutcome::Irreducible(Box::new(record)))
}

/// Runs the full pipeline for one n.
pub fn enumerate_records(
    n: usize,
    filters: &RunFilters,
    budget: &SolverBudget,
) -> Result<RunOutput> {
    let candidates = generate_candidates(n, filters.max_face_size, filters.allow_isolated)?;
    let mut stats = RunStats {
        candidates: candidates.len(),
        ..Default::default()
    };

    let outcomes: Vec<Result<CandidateOutcome>> = candidates
        .par_iter()
        .map(|cand| process_candidate(cand, n, filters, budget))
        .collect();

    let mut records = Vec::new();
    let mut undecided_keys = Vec::new();
    for outcome in outcomes {
        match outcome? {
            CandidateOutcome::FilteredOut => stats.filtered_out += 1,
            CandidateOutcome::LpPruned => stats.lp_pruned += 1,
            CandidateOutcome::Infeasible => stats.infeasible += 1,
            CandidateOutcome::Reducible => stats.reducible += 1,
            CandidateOutcome::Undecided(key) => {
                stats.undecided += 1;
                undecided_keys.push(key);
            }
            CandidateOutcome::Irreducible(record) => {
                stats.irreducible += 1;
                stats.flag_mismatches += record.flag_mismatch as usize;
                records.push(*record);
            }
        }
    }
    // Candidates arrive key-sorted from the generator, but re-sort so the
    // output contract does not depend on that detail.
    records.sort_by(|a, b| a.canonical_key.cmp(&b.canonical_key));
    undecided_keys.sort();

    set_maximal_flags(&mut records);
    let report = build_report(n, &records, stats.undecided)?;
    Ok(RunOutput {
        records,
        report,
        stats,
        undecided_keys,
    })
}

/// Marks the records attaining the enumeration's largest d_max. A record
/// whose range is capped by a forming contact does not attain its supremum
/// with this contact graph, so it is not maximal.
fn set_maximal_flags(records: &mut [GraphRecord]) {
    let d_n = records
        .iter()
        .filter(|r| r.flags.irr)
        .map(|r| r.d_max)
        .fold(f64::MIN, f64::max);
    for r in records.iter_mut() {
        r.flags.maximal = r.flags.irr
            && (r.d_max - d_n).abs() <= 2e-3
            && matches!(r.max_cap, CapReason::Rigid | CapReason::FrameBound);
    }
}

/// Cached run: reuses `<dir>/<hash>.records.jsonl` when the manifest matches,
/// otherwise computes and writes it (plus the report and the manifest).
pub fn enumerate_with_cache(manifest: &RunManifest, dir: &Path) -> Result<RunOutput> {
    let hash = manifest.hash();
    let records_path = dir.join(format!("{hash}.records.jsonl"));
    let report_path = dir.join(format!("{hash}.report.json"));
    let undecided_path = dir.join(format!("{hash}.undecided.json"));
    if records_path.exists() && report_path.exists() {
        let records = crate::record::records_from_jsonl(&std::fs::read_to_string(&records_path)?)?;
        let report: ExtremalReport =
            serde_json::from_str(&std::fs::read_to_string(&report_path)?)?;
        let undecided_keys: Vec<String> = if undecided_path.exists() {
            serde_json::from_str(&std::fs::read_to_string(&undecided_path)?)?
        } else {
            Vec::new()
        };
        let stats = RunStats {
            irreducible: records.len(),
            undecided: undecided_keys.len(),
            ..Default::default()
        };
        return Ok(RunOutput {
            records,
            report,
            stats,
            undecided_keys,
        });
    }
    let out = enumerate_records(manifest.n, &manifest.filters, &manifest.budget)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&records_path, crate::record::records_to_jsonl(&out.records)?)?;
    std::fs::write(&report_path, serde_json::to_string_pretty(&out.report)?)?;
    std::fs::write(
        &undecided_path,
        serde_json::to_string(&out.undecided_keys)?,
    )?;
    std::fs::write(
        dir.join(format!("{hash}.manifest.json")),
        serde_json::to_string_pretty(manifest)?,
    )?;
    Ok(out)
}

/// Contiguous enumerations keyed by n, for the cross-N scans.
pub fn enumerate_many(
    ns: impl IntoIterator<Item = usize>,
    filters: &RunFilters,
    budget: &SolverBudget,
) -> Result<BTreeMap<usize, RunOutput>> {
    let mut out = BTreeMap::new();
    for n in ns {
        out.insert(n, enumerate_records(n, filters, budget)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_point_enumeration() {
        let filters = RunFilters::default();
        let budget = SolverBudget::default();
        let out = enumerate_records(6, &filters, &budget).unwrap();
        assert_eq!(out.stats.undecided, 0, "undecided candidates at n=6");
        assert_eq!(
            out.records.len(),
            2,
            "expected 2 irreducible graphs, stats: {:?}",
            out.stats
        );
        // The octahedron is the unique maximal record at pi/2; the other
        // record (the triangular prism) spans up to pi/2 but collides there.
        let maximal: Vec<&GraphRecord> =
            out.records.iter().filter(|r| r.flags.maximal).collect();
        assert_eq!(maximal.len(), 1);
        assert_eq!(maximal[0].edge_count, 12);
        assert!((maximal[0].d_max - std::f64::consts::FRAC_PI_2).abs() < 2e-3);
        let prism = out.records.iter().find(|r| r.edge_count == 9).unwrap();
        assert!((prism.d_min - 1.4274).abs() < 2e-3, "prism d_min {}", prism.d_min);
        assert!((prism.d_max - 1.5708).abs() < 2e-3, "prism d_max {}", prism.d_max);
        assert!(!prism.flags.maximal);
        assert!(prism.flags.dirr);
    }

    #[test]
    fn manifest_hash_stability() {
        let filters = RunFilters::default();
        let budget = SolverBudget::default();
        let a = RunManifest::new(6, filters.clone(), budget);
        let b = RunManifest::new(6, filters.clone(), budget);
        assert_eq!(a.hash(), b.hash());
        let c = RunManifest::new(7, filters, budget);
        assert_ne!(a.hash(), c.hash());
    }
}
