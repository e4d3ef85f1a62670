//! Local rigidity classification of configurations.
//!
//! A vertex can be shifted when some point arbitrarily close to it is
//! strictly farther from every other point than the vertex is. For a vertex
//! with contacts this is a first-order question about the tangent directions
//! toward the contacts; ties (contact directions spanning exactly a half
//! plane) are settled by a small second-order probe. An isolated vertex is
//! shiftable when a local ascent of its minimum distance finds strict
//! improvement.

use crate::embedder::SphericalConfig;
use crate::error::Error;
use crate::sphere_geom::{angular_dist, reflect_across_arc, UnitVector};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Gap above pi that makes a vertex shiftable at first order.
const GAP_TOL: f64 = 1e-7;
/// Strict-improvement threshold for probes, well below the curvature gain
/// at the probe steps but above arithmetic noise.
const IMPROVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RigidityFlags {
    pub irreducible: bool,
    pub d_irreducible: bool,
    pub maximal: bool,
    /// A shiftable vertex and an improving tangent direction, when reducible.
    pub shift_witness: Option<(usize, [f64; 3])>,
    /// An admissible reflection (x, y, z), when one exists.
    pub reflection_witness: Option<(usize, usize, usize)>,
}

/// Minimum distance from point `p` to every configuration point except `skip`.
fn min_dist_except(config: &SphericalConfig, p: &UnitVector, skip: usize) -> f64 {
    config
        .points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, x)| angular_dist(p, x))
        .fold(f64::INFINITY, f64::min)
}

/// Probes whether moving `v` by a small step in `dir` strictly increases its
/// minimum distance to all other points.
fn probe_improves(config: &SphericalConfig, v: usize, dir: [f64; 3], step: f64) -> bool {
    let base = min_dist_except(config, &config.points[v], v);
    let q = config.points[v].walk(dir, step);
    min_dist_except(config, &q, v) > base + IMPROVE_TOL
}

/// Shiftability of a contact vertex: improving points must exist in every
/// neighborhood. A gap wider than pi between adjacent contact directions
/// gives a first-order improving direction; a gap under pi locks the vertex
/// for all sufficiently small moves (the linear loss beats the curvature
/// gain below a step proportional to pi minus the gap), so only the exact
/// half-plane tie needs the second-order probe.
fn contact_vertex_shiftable(
    config: &SphericalConfig,
    v: usize,
    contacts: &[usize],
) -> Result<Option<[f64; 3]>> {
    let p = &config.points[v];
    // Tangent frame.
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
    let mut angles: Vec<f64> = Vec::with_capacity(contacts.len());
    for &c in contacts {
        let t = p.tangent_toward(&config.points[c])?;
        angles.push(
            (t[0] * e2[0] + t[1] * e2[1] + t[2] * e2[2])
                .atan2(t[0] * e1[0] + t[1] * e1[1] + t[2] * e1[2]),
        );
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = angles.len();
    let dir_at = |theta: f64| -> [f64; 3] {
        let (s, c) = theta.sin_cos();
        [
            c * e1[0] + s * e2[0],
            c * e1[1] + s * e2[1],
            c * e1[2] + s * e2[2],
        ]
    };
    if k == 1 {
        // Single contact: move straight away from it.
        return Ok(Some(dir_at(angles[0] + PI)));
    }
    let mut widest = f64::MIN;
    let mut widest_mid = 0.0;
    for i in 0..k {
        let a = angles[i];
        let b = if i + 1 < k {
            angles[i + 1]
        } else {
            angles[0] + 2.0 * PI
        };
        if b - a > widest {
            widest = b - a;
            widest_mid = (a + b) / 2.0;
        }
    }
    if widest > PI + GAP_TOL {
        return Ok(Some(dir_at(widest_mid)));
    }
    if widest < PI - GAP_TOL {
        return Ok(None);
    }
    // Contacts span exactly a half plane: curvature decides, at probe steps
    // small enough to stay within any slack yet far above arithmetic noise.
    for theta in [widest_mid, widest_mid + PI] {
        let dir = dir_at(theta);
        for step in [1e-5, 1e-4] {
            if probe_improves(config, v, dir, step) {
                return Ok(Some(dir));
            }
        }
    }
    Ok(None)
}

/// Local ascent for an isolated vertex: any strict improvement of the
/// minimum distance within a shrinking neighborhood means shiftable.
fn isolated_vertex_shiftable(config: &SphericalConfig, v: usize) -> Option<[f64; 3]> {
    let p = &config.points[v];
    let base = min_dist_except(config, p, v);
    // Directions away from near-minimal points and pair bisectors.
    let mut actives: Vec<[f64; 3]> = Vec::new();
    for (i, x) in config.points.iter().enumerate() {
        if i != v && angular_dist(p, x) < base + 1e-6 {
            if let Ok(t) = p.tangent_toward(x) {
                actives.push(t);
            }
        }
    }
    let mut dirs: Vec<[f64; 3]> = actives.iter().map(|t| [-t[0], -t[1], -t[2]]).collect();
    for i in 0..actives.len() {
        for j in i + 1..actives.len() {
            let s = [
                -(actives[i][0] + actives[j][0]),
                -(actives[i][1] + actives[j][1]),
                -(actives[i][2] + actives[j][2]),
            ];
            let nn = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
            if nn > 1e-9 {
                dirs.push([s[0] / nn, s[1] / nn, s[2] / nn]);
            }
        }
    }
    for step in [1e-3, 1e-4, 1e-5] {
        for &dir in &dirs {
            if probe_improves(config, v, dir, step) {
                return Some(dir);
            }
        }
    }
    None
}

/// Whether vertex `v` can be shifted aside; returns an improving tangent
/// direction as witness.
pub fn vertex_shiftable(config: &SphericalConfig, v: usize) -> Result<Option<[f64; 3]>> {
    if v >= config.n() {
        return Err(Error::domain(format!("vertex {v} out of range")));
    }
    let contacts = config.contacts_of(v);
    if contacts.is_empty() {
        Ok(isolated_vertex_shiftable(config, v))
    } else {
        contact_vertex_shiftable(config, v, &contacts)
    }
}

/// Irreducibility: no vertex is shiftable. Records the first witness found.
pub fn is_irreducible(config: &SphericalConfig) -> Result<(bool, Option<(usize, [f64; 3])>)> {
    for v in 0..config.n() {
        if let Some(dir) = vertex_shiftable(config, v)? {
            return Ok((false, Some((v, dir))));
        }
    }
    Ok((true, None))
}

/// Scans for an admissible reflection: a vertex x with contacts y, z whose
/// mirror image in the great circle through y and z is strictly farther than
/// the separation from every other point. Scan order is lexicographic in
/// (x, y, z); the first witness is returned.
pub fn d_reflection_exists(config: &SphericalConfig) -> Result<Option<(usize, usize, usize)>> {
    let psi = config.separation;
    for x in 0..config.n() {
        let contacts = config.contacts_of(x);
        for (a, &y) in contacts.iter().enumerate() {
            for &z in &contacts[a + 1..] {
                let image =
                    match reflect_across_arc(&config.points[x], &config.points[y], &config.points[z])
                    {
                        Ok(i) => i,
                        Err(_) => continue,
                    };
                let mut clear = true;
                for (i, q) in config.points.iter().enumerate() {
                    if i == x || i == y || i == z {
                        continue;
                    }
                    if angular_dist(&image, q) <= psi + 1e-9 {
                        clear = false;
                        break;
                    }
                }
                if clear {
                    return Ok(Some((x, y, z)));
                }
            }
        }
    }
    Ok(None)
}

/// Irreducibility and reflection flags of one configuration. The `maximal`
/// flag is left false; it depends on the whole enumeration and is set by the
/// pipeline.
pub fn classify_config(config: &SphericalConfig) -> Result<RigidityFlags> {
    let (irr, shift_witness) = is_irreducible(config)?;
    let reflection_witness = if irr {
        d_reflection_exists(config)?
    } else {
        None
    };
    Ok(RigidityFlags {
        irreducible: irr,
        d_irreducible: irr && reflection_witness.is_none(),
        maximal: false,
        shift_witness,
        reflection_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::icosahedron_vertices;

    fn octahedron_config() -> SphericalConfig {
        SphericalConfig::from_points(vec![
            UnitVector::new(0.0, 0.0, 1.0).unwrap(),
            UnitVector::new(1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, 1.0, 0.0).unwrap(),
            UnitVector::new(-1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, -1.0, 0.0).unwrap(),
            UnitVector::new(0.0, 0.0, -1.0).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn octahedron_irreducible_no_reflection() {
        let cfg = octahedron_config();
        let flags = classify_config(&cfg).unwrap();
        assert!(flags.irreducible);
        assert!(flags.d_irreducible);
        assert!(flags.reflection_witness.is_none());
    }

    #[test]
    fn icosahedron_irreducible() {
        let cfg = SphericalConfig::from_points(icosahedron_vertices()).unwrap();
        assert_eq!(cfg.contact_count(), 30);
        let flags = classify_config(&cfg).unwrap();
        assert!(flags.irreducible);
        assert!(flags.d_irreducible);
    }

    #[test]
    fn icosahedron_minus_adjacent_pair_reducible() {
        // Remove two contact-adjacent vertices: some survivor keeps only
        // three contacts whose directions leave a gap wider than pi.
        let all = icosahedron_vertices();
        let cfg_full = SphericalConfig::from_points(all.clone()).unwrap();
        let (u, w) = cfg_full.edges[0];
        let pts: Vec<UnitVector> = all
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| i != u && i != w)
            .map(|(_, p)| p)
            .collect();
        let cfg = SphericalConfig::from_points(pts).unwrap();
        assert_eq!(cfg.contact_count(), 21);
        let (irr, witness) = is_irreducible(&cfg).unwrap();
        assert!(!irr);
        assert!(witness.is_some());
    }

    #[test]
    fn single_contact_vertex_shifts() {
        // Three points, two close together: the pair's members have one
        // contact each and shift freely.
        let cfg = SphericalConfig::from_points(vec![
            UnitVector::new(1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(1.0, 0.6, 0.0).unwrap(),
            UnitVector::new(0.0, 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        assert!(vertex_shiftable(&cfg, 0).unwrap().is_some());
    }

    #[test]
    fn pole_and_square_unshiftable() {
        // North pole plus the equatorial square: no vertex admits a strict
        // improvement (a square vertex moving off the equator keeps its
        // neighbor distances at exactly pi/2).
        let cfg = SphericalConfig::from_points(vec![
            UnitVector::new(0.0, 0.0, 1.0).unwrap(),
            UnitVector::new(1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, 1.0, 0.0).unwrap(),
            UnitVector::new(-1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, -1.0, 0.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(cfg.contact_count(), 8);
        let (irr, _) = is_irreducible(&cfg).unwrap();
        assert!(irr);
    }

    #[test]
    fn octahedron_reflections_all_blocked() {
        // Every reflected vertex lands on an existing vertex position.
        let cfg = octahedron_config();
        assert!(d_reflection_exists(&cfg).unwrap().is_none());
    }
}
