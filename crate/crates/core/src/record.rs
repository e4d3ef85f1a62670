//! Enumeration results: one record per irreducible contact graph, plus the
//! per-N extremal summary.

use crate::embedder::{CapReason, Status};
use crate::graph_gen::{PlanarCandidate, RotationSystem};
use crate::rigidity::RigidityFlags;
use crate::Result;
use serde::{Deserialize, Serialize};

/// One enumerated graph with its feasible edge-length range, rigidity flags,
/// and a witness configuration at the top of the range.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphRecord {
    pub n: usize,
    pub canonical_key: String,
    /// Cyclic neighbor order per core vertex.
    pub adjacency: Vec<Vec<u8>>,
    pub faces: Vec<Vec<u8>>,
    pub isolated_faces: Vec<usize>,
    pub edge_count: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub status: Status,
    pub flags: FlagsJson,
    pub min_cap: CapReason,
    pub max_cap: CapReason,
    /// Coordinates of the witness at the top of the range, core vertices
    /// first, then isolated vertices.
    pub coords_at_dmax: Vec<[f64; 3]>,
    /// Set when rigidity flags at the two endpoints disagree.
    pub flag_mismatch: bool,
}

/// Compact flag encoding used in the JSON output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagsJson {
    pub irr: bool,
    pub dirr: bool,
    #[serde(rename = "max")]
    pub maximal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift_witness: Option<(usize, [f64; 3])>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflection_witness: Option<(usize, usize, usize)>,
}

impl From<&RigidityFlags> for FlagsJson {
    fn from(f: &RigidityFlags) -> FlagsJson {
        FlagsJson {
            irr: f.irreducible,
            dirr: f.d_irreducible,
            maximal: f.maximal,
            shift_witness: f.shift_witness,
            reflection_witness: f.reflection_witness,
        }
    }
}

impl GraphRecord {
    pub fn candidate(&self) -> Result<PlanarCandidate> {
        PlanarCandidate::new(
            RotationSystem::new(self.adjacency.clone())?,
            self.isolated_faces.clone(),
        )
    }

    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json_line(line: &str) -> Result<GraphRecord> {
        Ok(serde_json::from_str(line)?)
    }
}

/// Per-N extremal summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub n: usize,
    /// Number of irreducible contact graphs found.
    pub irreducible_count: usize,
    /// Largest d_max over the records (the Tammes value of the enumeration).
    pub d_n: f64,
    /// Smallest d_min over the records.
    pub delta_n: f64,
    /// Largest contact count over irreducible records.
    pub k_star: usize,
    /// Smallest contact count over irreducible records.
    pub kappa: usize,
    /// Upper bound on d_n from the hexagonal-cell area argument.
    pub ft_bound: f64,
    /// Best known contact count including reducible constructions.
    pub k_lower: usize,
    /// Candidates whose feasibility could not be decided.
    pub undecided: usize,
}

/// Serializes records as JSON lines (one record per line, key order fixed).
pub fn records_to_jsonl(records: &[GraphRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_json_line()?);
        out.push('\n');
    }
    Ok(out)
}

pub fn records_from_jsonl(text: &str) -> Result<Vec<GraphRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(GraphRecord::from_json_line)
        .collect()
}

/// Round-trip equality check used by tests: integers exact, reals to 1e-12.
pub fn records_equal(a: &GraphRecord, b: &GraphRecord) -> bool {
    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() <= 1e-12 || (x.is_nan() && y.is_nan())
    }
    a.n == b.n
        && a.canonical_key == b.canonical_key
        && a.adjacency == b.adjacency
        && a.isolated_faces == b.isolated_faces
        && a.edge_count == b.edge_count
        && close(a.d_min, b.d_min)
        && close(a.d_max, b.d_max)
        && a.flags.irr == b.flags.irr
        && a.flags.dirr == b.flags.dirr
        && a.flags.maximal == b.flags.maximal
        && a.coords_at_dmax.len() == b.coords_at_dmax.len()
        && a.coords_at_dmax
            .iter()
            .zip(&b.coords_at_dmax)
            .all(|(p, q)| (0..3).all(|i| close(p[i], q[i])))
}

