//! Checks that a realized configuration actually is what the candidate
//! claims: the contact graph matches, contact arcs are disjoint, faces are
//! convex, and isolated vertices sit inside their annotated faces with room.

use super::realize::point_in_face;
use super::{SphericalConfig, CONTACT_TOL};
use crate::graph_gen::{canonical_key, PlanarCandidate, RotationSystem};
use crate::sphere_geom::{angular_dist, arcs_intersect, UnitVector};
use std::f64::consts::PI;

/// Why a realized configuration fails verification.
#[derive(Debug, Clone, PartialEq)]
pub enum VerifyError {
    /// A pair that should be separated dips below the contact distance, or
    /// an isolated vertex has no room: a new contact is forming.
    Separation { gap: f64 },
    /// The realized contact graph is not the candidate graph.
    ContactMismatch,
    /// Two contact arcs cross.
    Crossing,
    /// A face has a reflex interior angle.
    NonConvex,
    /// Placement produced something unusable (degenerate geometry).
    Degenerate(String),
}

/// Geometric rotation system of the contact structure: neighbors of each
/// vertex sorted by tangent angle.
pub(super) fn geometric_rotation(
    points: &[UnitVector],
    adjacency: &[Vec<usize>],
) -> Result<RotationSystem, VerifyError> {
    let mut adj = Vec::with_capacity(adjacency.len());
    for (v, nbrs) in adjacency.iter().enumerate() {
        let p = &points[v];
        // Tangent frame at p.
        let up = if p.z.abs() < 0.9 {
            UnitVector::new(0.0, 0.0, 1.0).unwrap()
        } else {
            UnitVector::new(1.0, 0.0, 0.0).unwrap()
        };
        let e1v = up.cross(p);
        let n1 = (e1v[0] * e1v[0] + e1v[1] * e1v[1] + e1v[2] * e1v[2]).sqrt();
        let e1 = [e1v[0] / n1, e1v[1] / n1, e1v[2] / n1];
        let e2 = [
            p.y * e1[2] - p.z * e1[1],
            p.z * e1[0] - p.x * e1[2],
            p.x * e1[1] - p.y * e1[0],
        ];
        let mut angled: Vec<(f64, usize)> = Vec::with_capacity(nbrs.len());
        for &w in nbrs {
            let t = points[v]
                .tangent_toward(&points[w])
                .map_err(|e| VerifyError::Degenerate(e.to_string()))?;
            let a = (t[0] * e2[0] + t[1] * e2[1] + t[2] * e2[2])
                .atan2(t[0] * e1[0] + t[1] * e1[1] + t[2] * e1[2]);
            angled.push((a, w));
        }
        angled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        adj.push(angled.into_iter().map(|(_, w)| w as u8).collect());
    }
    RotationSystem::new(adj).map_err(|e| VerifyError::Degenerate(e.to_string()))
}

/// Builds the combinatorial candidate of a configuration's contact graph
/// (the geometric rotation system). The configuration must have no isolated
/// vertices and a connected contact graph.
pub fn candidate_from_config(
    config: &SphericalConfig,
) -> crate::Result<crate::graph_gen::PlanarCandidate> {
    let n = config.n();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in &config.edges {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    if adjacency.iter().any(|a| a.is_empty()) {
        return Err(crate::error::Error::domain(
            "configuration has isolated vertices",
        ));
    }
    let rs = geometric_rotation(&config.points, &adjacency)
        .map_err(|e| crate::error::Error::Structural(format!("{e:?}")))?;
    crate::graph_gen::PlanarCandidate::new(rs, Vec::new())
}

/// Full verification of `points` against the candidate at edge length `d`.
pub fn verify_config(
    points: &[UnitVector],
    cand: &PlanarCandidate,
    d: f64,
) -> Result<SphericalConfig, VerifyError> {
    let core_n = cand.core_n();
    if points.len() != cand.n() {
        return Err(VerifyError::ContactMismatch);
    }

    // Separation: every pair at least d (within tolerance); contacts at d.
    let mut min_gap = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dist = angular_dist(&points[i], &points[j]);
            min_gap = min_gap.min(dist);
        }
    }
    if min_gap < d - CONTACT_TOL {
        return Err(VerifyError::Separation { gap: d - min_gap });
    }

    // Contact adjacency among core vertices.
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); core_n];
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dist = angular_dist(&points[i], &points[j]);
            if dist <= d + CONTACT_TOL {
                if i >= core_n || j >= core_n {
                    // An isolated vertex acquired a contact.
                    return Err(VerifyError::Separation { gap: d - dist });
                }
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let e_actual: usize = adjacency.iter().map(|a| a.len()).sum::<usize>() / 2;
    if e_actual != cand.edge_count() {
        return Err(VerifyError::ContactMismatch);
    }
    for (v, nbrs) in adjacency.iter().enumerate() {
        if nbrs.len() != cand.rotation.degree(v) {
            let _ = v;
            return Err(VerifyError::ContactMismatch);
        }
    }

    // Embedded isomorphism including reflection: canonical keys must agree.
    let geo = geometric_rotation(points, &adjacency)?;
    if canonical_key(&geo) != canonical_key(&cand.rotation) {
        return Err(VerifyError::ContactMismatch);
    }

    // No two contact arcs cross.
    let edges: Vec<(usize, usize)> = {
        let mut e = Vec::new();
        for (i, nbrs) in adjacency.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    e.push((i, j));
                }
            }
        }
        e
    };
    for (a, &(i, j)) in edges.iter().enumerate() {
        for &(k, l) in &edges[a + 1..] {
            if i == k || i == l || j == k || j == l {
                continue;
            }
            match arcs_intersect(&points[i], &points[j], &points[k], &points[l]) {
                Ok(true) => return Err(VerifyError::Crossing),
                Ok(false) => {}
                Err(e) => return Err(VerifyError::Degenerate(e.to_string())),
            }
        }
    }

    // Convex faces: every geometric corner at most pi. The corners at a
    // vertex are the gaps between rotation-consecutive contact directions.
    for v in 0..core_n {
        let nbrs = geo.neighbors(v);
        let deg = nbrs.len();
        let mut dirs: Vec<[f64; 3]> = Vec::with_capacity(deg);
        for &w in nbrs {
            dirs.push(points[v].tangent_toward(&points[w as usize]).unwrap());
        }
        for t in 0..deg {
            let a = dirs[t];
            let b = dirs[(t + 1) % deg];
            let cosg = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
            let crossv = [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ];
            let sing = crossv[0] * points[v].x + crossv[1] * points[v].y + crossv[2] * points[v].z;
            let mut gap = sing.atan2(cosg);
            if gap < 0.0 {
                gap += 2.0 * PI;
            }
            if gap > PI + 1e-9 {
                return Err(VerifyError::NonConvex);
            }
        }
    }

    // Isolated vertices inside their annotated faces.
    for (k, &f) in cand.isolated_faces.iter().enumerate() {
        let p = &points[core_n + k];
        let cycle: Vec<UnitVector> = cand.faces[f].iter().map(|&v| points[v as usize]).collect();
        if !point_in_face(p, &cycle) {
            return Err(VerifyError::ContactMismatch);
        }
    }

    SphericalConfig::from_points(points.to_vec()).map_err(|e| VerifyError::Degenerate(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gen::generate_candidates;

    fn octahedron_points() -> Vec<UnitVector> {
        vec![
            UnitVector::new(0.0, 0.0, 1.0).unwrap(),
            UnitVector::new(1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, 1.0, 0.0).unwrap(),
            UnitVector::new(-1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, -1.0, 0.0).unwrap(),
            UnitVector::new(0.0, 0.0, -1.0).unwrap(),
        ]
    }

    #[test]
    fn octahedron_verifies_against_itself() {
        let cands = generate_candidates(6, 99, false).unwrap();
        let octa = cands.iter().find(|c| c.edge_count() == 12).unwrap();
        let cfg = verify_config(&octahedron_points(), octa, PI / 2.0).unwrap();
        assert_eq!(cfg.contact_count(), 12);
    }

    #[test]
    fn octahedron_fails_against_other_candidates() {
        let cands = generate_candidates(6, 99, false).unwrap();
        for cand in cands.iter().filter(|c| c.edge_count() != 12) {
            assert!(verify_config(&octahedron_points(), cand, PI / 2.0).is_err());
        }
    }

    #[test]
    fn perturbed_point_breaks_verification() {
        let cands = generate_candidates(6, 99, false).unwrap();
        let octa = cands.iter().find(|c| c.edge_count() == 12).unwrap();
        let mut pts = octahedron_points();
        pts[2] = UnitVector::new(1e-3, 1.0, 1e-3).unwrap();
        assert!(verify_config(&pts, octa, PI / 2.0).is_err());
    }
}
