//! Extremal quantities: the Tammes value and its hexagonal-cell upper bound,
//! antipodal optima, contact-number extremes, and the explicit
//! icosahedron-derived constructions.

use crate::embedder::SphericalConfig;
use crate::error::Error;
use crate::record::{ExtremalReport, GraphRecord};
use crate::sphere_geom::UnitVector;
use crate::Result;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Vertices of the regular icosahedron.
pub fn icosahedron_vertices() -> Vec<UnitVector> {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut out = Vec::with_capacity(12);
    for &(a, b) in &[(1.0, phi), (1.0, -phi), (-1.0, phi), (-1.0, -phi)] {
        out.push(UnitVector::new(0.0, a, b).unwrap());
        out.push(UnitVector::new(a, b, 0.0).unwrap());
        out.push(UnitVector::new(b, 0.0, a).unwrap());
    }
    out
}

/// Separation of the icosahedron (and the 11- and 12-point Tammes value).
pub fn icosahedral_distance() -> f64 {
    (1.0 / 5.0_f64.sqrt()).acos()
}

/// Upper bound on the N-point Tammes value:
/// `arccos((cot^2 w - 1) / 2)` with `w = pi*N / (6N - 12)`.
/// Attained exactly at N = 3, 4, 6, 12.
pub fn fejes_toth_bound(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain("bound needs n >= 3"));
    }
    let w = PI * n as f64 / (6.0 * n as f64 - 12.0);
    // w lies in (pi/6, pi/2] for n >= 3; cotangent as cos/sin is safe there.
    let cot = w.cos() / w.sin();
    let arg = ((cot * cot - 1.0) / 2.0).clamp(-1.0, 1.0);
    Ok(arg.acos())
}

/// Upper bound 3n - 6 on the contact count of n points on the sphere;
/// attained only at n = 3, 4, 6, 12.
pub fn contact_upper_bound(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::domain("contact bound needs n >= 3"));
    }
    Ok(3 * n - 6)
}

fn icosa_adjacency(points: &[UnitVector]) -> Vec<(usize, usize)> {
    SphericalConfig::from_points(points.to_vec()).unwrap().edges
}

/// Icosahedron with `12 - n` mutually adjacent vertices removed: the full
/// solid for n = 12, one vertex removed for n = 11, a contact-adjacent pair
/// removed for n = 10, a triangular face removed for n = 9.
pub fn icosa_config(n: usize) -> Result<SphericalConfig> {
    if !(9..=12).contains(&n) {
        return Err(Error::domain("icosahedron deletions support 9 <= n <= 12"));
    }
    let all = icosahedron_vertices();
    let edges = icosa_adjacency(&all);
    let has = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
    let delete: Vec<usize> = match n {
        12 => vec![],
        11 => vec![0],
        10 => {
            let &(a, b) = edges.first().expect("icosahedron has edges");
            vec![a, b]
        }
        _ => {
            // A triangular face: three mutually adjacent vertices.
            let mut found = None;
            'outer: for &(a, b) in &edges {
                for c in 0..12 {
                    if c != a && c != b && has(a, c) && has(b, c) {
                        found = Some(vec![a, b, c]);
                        break 'outer;
                    }
                }
            }
            found.expect("icosahedron has a triangle")
        }
    };
    let pts: Vec<UnitVector> = all
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !delete.contains(i))
        .map(|(_, p)| p)
        .collect();
    SphericalConfig::from_points(pts)
}

/// Five points with eight contacts: the north pole plus the equatorial
/// square, all at separation pi/2.
pub fn k5_config() -> SphericalConfig {
    SphericalConfig::from_points(vec![
        UnitVector::new(0.0, 0.0, 1.0).unwrap(),
        UnitVector::new(1.0, 0.0, 0.0).unwrap(),
        UnitVector::new(0.0, 1.0, 0.0).unwrap(),
        UnitVector::new(-1.0, 0.0, 0.0).unwrap(),
        UnitVector::new(0.0, -1.0, 0.0).unwrap(),
    ])
    .unwrap()
}

/// Optimal antipodal configurations of 2m points and their separation:
/// the equatorial square, the octahedron, the cube, five antipodal vertex
/// pairs of the icosahedron, and the icosahedron.
pub fn antipodal_optimum(m: usize) -> Result<(SphericalConfig, f64)> {
    let cfg = match m {
        2 => SphericalConfig::from_points(vec![
            UnitVector::new(1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, 1.0, 0.0).unwrap(),
            UnitVector::new(-1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, -1.0, 0.0).unwrap(),
        ])?,
        3 => SphericalConfig::from_points(vec![
            UnitVector::new(1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, 1.0, 0.0).unwrap(),
            UnitVector::new(0.0, 0.0, 1.0).unwrap(),
            UnitVector::new(-1.0, 0.0, 0.0).unwrap(),
            UnitVector::new(0.0, -1.0, 0.0).unwrap(),
            UnitVector::new(0.0, 0.0, -1.0).unwrap(),
        ])?,
        4 => {
            let s = 1.0 / 3.0_f64.sqrt();
            let pts = (0..8)
                .map(|i| {
                    UnitVector::new(
                        if i & 1 == 0 { s } else { -s },
                        if i & 2 == 0 { s } else { -s },
                        if i & 4 == 0 { s } else { -s },
                    )
                    .unwrap()
                })
                .collect();
            SphericalConfig::from_points(pts)?
        }
        5 => {
            // Icosahedron minus an antipodal pair.
            let all = icosahedron_vertices();
            let v0 = all[0];
            let anti = all
                .iter()
                .position(|p| (p.dot(&v0) + 1.0).abs() < 1e-9)
                .expect("icosahedron is antipodal");
            let pts: Vec<UnitVector> = all
                .into_iter()
                .enumerate()
                .filter(|&(i, _)| i != 0 && i != anti)
                .map(|(_, p)| p)
                .collect();
            SphericalConfig::from_points(pts)?
        }
        6 => SphericalConfig::from_points(icosahedron_vertices())?,
        _ => return Err(Error::domain("antipodal optima known for 2 <= m <= 6")),
    };
    let a_m = cfg.separation;
    Ok((cfg, a_m))
}

/// Whether a configuration is antipodally symmetric (X = -X) within 1e-9.
pub fn is_antipodal(cfg: &SphericalConfig) -> bool {
    cfg.points.iter().all(|p| {
        let q = p.antipode();
        cfg.points
            .iter()
            .any(|r| crate::sphere_geom::angular_dist(&q, r) < 1e-9)
    })
}

/// Largest d_max over records and the records attaining it within `tol`.
pub fn tammes_from_records(records: &[GraphRecord], tol: f64) -> Result<(f64, Vec<usize>)> {
    if records.is_empty() {
        return Err(Error::incomplete("no records"));
    }
    let d_n = records.iter().map(|r| r.d_max).fold(f64::MIN, f64::max);
    let attaining = records
        .iter()
        .enumerate()
        .filter(|(_, r)| (r.d_max - d_n).abs() <= tol)
        .map(|(i, _)| i)
        .collect();
    Ok((d_n, attaining))
}

pub fn count_irreducible(records: &[GraphRecord]) -> usize {
    records.iter().filter(|r| r.flags.irr).count()
}

/// Largest contact count over irreducible records.
pub fn k_star(records: &[GraphRecord]) -> Result<usize> {
    records
        .iter()
        .filter(|r| r.flags.irr)
        .map(|r| r.edge_count)
        .max()
        .ok_or_else(|| Error::incomplete("no irreducible records"))
}

/// Smallest contact count over irreducible records.
pub fn kappa(records: &[GraphRecord]) -> Result<usize> {
    records
        .iter()
        .filter(|r| r.flags.irr)
        .map(|r| r.edge_count)
        .min()
        .ok_or_else(|| Error::incomplete("no irreducible records"))
}

/// Smallest d_min over records (undecided candidates excluded; callers warn).
pub fn delta_n(records: &[GraphRecord]) -> Result<f64> {
    records
        .iter()
        .filter(|r| matches!(r.status, crate::embedder::Status::Feasible))
        .map(|r| r.d_min)
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.min(d)))
        })
        .ok_or_else(|| Error::incomplete("no feasible records"))
}

/// The least n whose enumeration contains an irreducible graph with
/// separation below the 12-point optimum, with the witness d_min.
/// Requires contiguous enumerations starting at n = 6.
pub fn danzer_scan(
    records_by_n: &BTreeMap<usize, Vec<GraphRecord>>,
) -> Result<Option<(usize, f64)>> {
    let threshold = icosahedral_distance();
    let top = records_by_n.keys().max().copied().unwrap_or(5);
    let missing: Vec<usize> = (6..=top)
        .filter(|n| !records_by_n.contains_key(n))
        .collect();
    if !missing.is_empty() {
        return Err(Error::incomplete(format!(
            "missing enumerations for n = {missing:?}"
        )));
    }
    for (&n, records) in records_by_n {
        if records.is_empty() {
            continue;
        }
        let dmin = delta_n(records)?;
        if dmin < threshold {
            return Ok(Some((n, dmin)));
        }
    }
    Ok(None)
}

/// Best known contact count for n points including the reducible
/// icosahedron-derived constructions.
pub fn contact_lower_bound(n: usize, records: &[GraphRecord]) -> usize {
    let from_records = k_star(records).unwrap_or(0);
    let from_constructions = match n {
        5 => k5_config().contact_count(),
        9..=12 => icosa_config(n).map(|c| c.contact_count()).unwrap_or(0),
        _ => 0,
    };
    from_records.max(from_constructions)
}

/// Aggregates the per-N summary from an enumeration.
pub fn build_report(n: usize, records: &[GraphRecord], undecided: usize) -> Result<ExtremalReport> {
    let irr: Vec<GraphRecord> = records.iter().filter(|r| r.flags.irr).cloned().collect();
    let (d_n, _) = tammes_from_records(&irr, 2e-3)?;
    Ok(ExtremalReport {
        n,
        irreducible_count: irr.len(),
        d_n,
        delta_n: delta_n(&irr)?,
        k_star: k_star(&irr)?,
        kappa: kappa(&irr)?,
        ft_bound: fejes_toth_bound(n)?,
        k_lower: contact_lower_bound(n, &irr),
        undecided,
    })
}
