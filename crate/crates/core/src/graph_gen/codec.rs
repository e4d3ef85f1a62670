//! Import/export of candidates.
//!
//! Text format: header line `n m f` (core vertices, edges, faces), one line
//! per core vertex with its cyclic neighbor order, then one `iso <face_id>`
//! line per isolated vertex. Face ids refer to the order produced by
//! [`RotationSystem::faces`].
//!
//! Planar code (binary, as emitted by standard planar-graph generators):
//! byte 0 is the vertex count, then for each vertex its neighbor list in
//! rotation order, 1-based, terminated by a zero byte.

use super::{PlanarCandidate, RotationSystem};
use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

pub fn to_text(cand: &PlanarCandidate) -> String {
    let rs = &cand.rotation;
    let mut s = format!(
        "{} {} {}\n",
        rs.n(),
        rs.edge_count(),
        cand.faces.len()
    );
    for v in 0..rs.n() {
        let line: Vec<String> = rs.neighbors(v).iter().map(|w| w.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    for &f in &cand.isolated_faces {
        s.push_str(&format!("iso {f}\n"));
    }
    s
}

pub fn from_text(text: &str) -> Result<PlanarCandidate> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty candidate file".into()))?;
    let parts: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token {t}"))))
        .collect::<Result<_>>()?;
    if parts.len() != 3 {
        return Err(Error::Parse("header must be `n m f`".into()));
    }
    let (n, m, f) = (parts[0], parts[1], parts[2]);
    let mut adj = Vec::with_capacity(n);
    let mut isolated = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("iso ") {
            let fid: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad face id {rest}")))?;
            isolated.push(fid);
        } else {
            let nbrs: Vec<u8> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad neighbor {t}"))))
                .collect::<Result<_>>()?;
            adj.push(nbrs);
        }
    }
    if adj.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} vertex lines, got {}",
            adj.len()
        )));
    }
    let rs = RotationSystem::new(adj)?;
    if rs.edge_count() != m {
        return Err(Error::Parse(format!(
            "edge count mismatch: header {m}, actual {}",
            rs.edge_count()
        )));
    }
    if rs.faces().len() != f {
        return Err(Error::Parse(format!(
            "face count mismatch: header {f}, actual {}",
            rs.faces().len()
        )));
    }
    PlanarCandidate::new(rs, isolated)
}

pub fn to_planar_code(cand: &PlanarCandidate) -> Vec<u8> {
    let rs = &cand.rotation;
    let mut out = vec![rs.n() as u8];
    for v in 0..rs.n() {
        for &w in rs.neighbors(v) {
            out.push(w + 1);
        }
        out.push(0);
    }
    out
}

/// Parses one planar-code graph (no isolated-vertex annotations).
pub fn from_planar_code(bytes: &[u8]) -> Result<PlanarCandidate> {
    if bytes.is_empty() {
        return Err(Error::Parse("empty planar code".into()));
    }
    let n = bytes[0] as usize;
    if n == 0 {
        return Err(Error::Parse("planar code with zero vertices".into()));
    }
    let mut adj: Vec<Vec<u8>> = Vec::with_capacity(n);
    let mut cur = Vec::new();
    for &b in &bytes[1..] {
        if b == 0 {
            adj.push(std::mem::take(&mut cur));
            if adj.len() == n {
                break;
            }
        } else {
            if b as usize > n {
                return Err(Error::Parse(format!("neighbor {b} out of range")));
            }
            cur.push(b - 1);
        }
    }
    if adj.len() != n {
        return Err(Error::Parse("truncated planar code".into()));
    }
    PlanarCandidate::new(RotationSystem::new(adj)?, Vec::new())
}

/// JSON mirror of a candidate's fields.
#[derive(Debug, Serialize, Deserialize)]
pub struct CandidateJson {
    pub n: usize,
    pub core_n: usize,
    pub rotation: Vec<Vec<u8>>,
    pub faces: Vec<Vec<u8>>,
    pub isolated_faces: Vec<usize>,
    pub canonical_key: String,
}

pub fn to_json(cand: &PlanarCandidate) -> CandidateJson {
    CandidateJson {
        n: cand.n(),
        core_n: cand.core_n(),
        rotation: (0..cand.core_n())
            .map(|v| cand.rotation.neighbors(v).to_vec())
            .collect(),
        faces: cand.faces.clone(),
        isolated_faces: cand.isolated_faces.clone(),
        canonical_key: cand.key.hex(),
    }
}

pub fn from_json(json: &CandidateJson) -> Result<PlanarCandidate> {
    PlanarCandidate::new(
        RotationSystem::new(json.rotation.clone())?,
        json.isolated_faces.clone(),
    )
}
