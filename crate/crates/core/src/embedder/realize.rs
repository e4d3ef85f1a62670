//! Coordinate recovery from a solved angle system.
//!
//! A root edge is placed along a meridian; positions propagate breadth-first
//! using the edge length and the face corner angles, then a Gauss-Newton
//! polish tightens all edge lengths. Isolated vertices are placed at the
//! interior point of their host face that maximizes the minimum distance to
//! every other point.

use super::system::AngleSystem;
use super::EmbeddingSolution;
use crate::error::Error;
use crate::graph_gen::PlanarCandidate;
use crate::sphere_geom::{angular_dist, UnitVector};
use crate::Result;

/// Rotates tangent vector `t` (orthogonal to unit `p`) by `angle` about `p`.
fn rotate_tangent(p: &UnitVector, t: [f64; 3], angle: f64) -> [f64; 3] {
    // Rodrigues with axis p; t is orthogonal to p.
    let (c, s) = (angle.cos(), angle.sin());
    let cross = [
        p.y * t[2] - p.z * t[1],
        p.z * t[0] - p.x * t[2],
        p.x * t[1] - p.y * t[0],
    ];
    [
        c * t[0] + s * cross[0],
        c * t[1] + s * cross[1],
        c * t[2] + s * cross[2],
    ]
}

/// Corner angle table: for vertex `v` and rotation position `t`, the solved
/// interior angle between edges (v -> nbr[t]) and (v -> nbr[t+1]).
fn corner_gap_table(cand: &PlanarCandidate, sys: &AngleSystem, x: &[f64]) -> Vec<Vec<f64>> {
    let rs = &cand.rotation;
    let n = rs.n();
    let mut gaps = vec![Vec::new(); n];
    for v in 0..n {
        gaps[v] = vec![0.0; rs.degree(v)];
    }
    // Walk each face cycle: consecutive darts (w_i -> w_{i+1}); the corner at
    // w_{i+1} sits between the edge back to w_i and the rotation successor.
    for (k, face) in sys.faces.iter().enumerate() {
        let m = face.len();
        for i in 0..m {
            let prev = face[i] as usize;
            let v = face[(i + 1) % m] as usize;
            // Angle stored at the rotation position of `prev` in adj[v].
            let pos = rs
                .neighbors(v)
                .iter()
                .position(|&w| w as usize == prev)
                .expect("face edge in rotation");
            // Corner index within the face: position of v in the cycle.
            let ci = sys.corner_var[k][(i + 1) % m];
            gaps[v][pos] = x[1 + ci];
        }
    }
    gaps
}

/// Gauss-Newton polish on coordinates: drives every edge dot product to
/// cos(d) and every norm to 1.
fn polish(points: &mut [UnitVector], edges: &[(usize, usize)], d: f64) {
    let n = points.len();
    let nv = 3 * n;
    let target = d.cos();
    let nr = edges.len() + n;
    let mut x: Vec<f64> = Vec::with_capacity(nv);
    for p in points.iter() {
        x.extend_from_slice(&p.coords());
    }
    let mut resid = vec![0.0; nr];
    let compute_resid = |x: &[f64], resid: &mut [f64]| {
        for (r, &(i, j)) in edges.iter().enumerate() {
            let mut dot = 0.0;
            for c in 0..3 {
                dot += x[3 * i + c] * x[3 * j + c];
            }
            resid[r] = dot - target;
        }
        for i in 0..n {
            let mut nn = 0.0;
            for c in 0..3 {
                nn += x[3 * i + c] * x[3 * i + c];
            }
            resid[edges.len() + i] = nn - 1.0;
        }
    };
    compute_resid(&x, &mut resid);
    let mut cost: f64 = resid.iter().map(|v| v * v).sum();
    let mut lambda = 1e-6;
    for _ in 0..60 {
        if resid.iter().all(|v| v.abs() < 1e-13) {
            break;
        }
        // Normal equations built sparsely.
        let mut a = vec![0.0; nv * nv];
        let mut g = vec![0.0; nv];
        let add = |a: &mut Vec<f64>, g: &mut Vec<f64>, idx: &[usize], jrow: &[f64], rv: f64| {
            for (p, &ip) in idx.iter().enumerate() {
                g[ip] += jrow[p] * rv;
                for (q, &iq) in idx.iter().enumerate() {
                    a[ip * nv + iq] += jrow[p] * jrow[q];
                }
            }
        };
        for (r, &(i, j)) in edges.iter().enumerate() {
            let idx = [3 * i, 3 * i + 1, 3 * i + 2, 3 * j, 3 * j + 1, 3 * j + 2];
            let jrow = [
                x[3 * j],
                x[3 * j + 1],
                x[3 * j + 2],
                x[3 * i],
                x[3 * i + 1],
                x[3 * i + 2],
            ];
            add(&mut a, &mut g, &idx, &jrow, resid[r]);
        }
        for i in 0..n {
            let idx = [3 * i, 3 * i + 1, 3 * i + 2];
            let jrow = [2.0 * x[3 * i], 2.0 * x[3 * i + 1], 2.0 * x[3 * i + 2]];
            add(&mut a, &mut g, &idx, &jrow, resid[edges.len() + i]);
        }
        let mut step = vec![0.0; nv];
        if !super::lm::cholesky_solve_damped(&a, &g, nv, lambda, &mut step) {
            lambda *= 10.0;
            continue;
        }
        let mut xn = x.clone();
        for i in 0..nv {
            xn[i] += step[i];
        }
        let mut rn = vec![0.0; nr];
        compute_resid(&xn, &mut rn);
        let cn: f64 = rn.iter().map(|v| v * v).sum();
        if cn < cost {
            x = xn;
            resid = rn;
            cost = cn;
            lambda = (lambda / 3.0).max(1e-12);
        } else {
            lambda *= 10.0;
            if lambda > 1e10 {
                break;
            }
        }
    }
    for (i, p) in points.iter_mut().enumerate() {
        *p = UnitVector::new(x[3 * i], x[3 * i + 1], x[3 * i + 2]).expect("polished point");
    }
}

/// Whether `p` lies inside the convex spherical polygon with the given
/// (cyclically ordered) vertices.
pub fn point_in_face(p: &UnitVector, face: &[UnitVector]) -> bool {
    // Consistent side of every boundary great circle; orientation fixed by
    // the face centroid.
    let m = face.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    let mut cz = 0.0;
    for v in face {
        cx += v.x;
        cy += v.y;
        cz += v.z;
    }
    let centroid = match UnitVector::new(cx, cy, cz) {
        Ok(c) => c,
        Err(_) => return false,
    };
    for i in 0..m {
        let a = &face[i];
        let b = &face[(i + 1) % m];
        let nvec = a.cross(b);
        let side_c = nvec[0] * centroid.x + nvec[1] * centroid.y + nvec[2] * centroid.z;
        let side_p = nvec[0] * p.x + nvec[1] * p.y + nvec[2] * p.z;
        if side_c * side_p < 0.0 {
            return false;
        }
    }
    true
}

/// Interior point of the face maximizing the minimum distance to all of
/// `points`; returns the point and the achieved minimum distance. Ascent
/// steps never leave the face.
pub fn maximin_point_in_face(face: &[UnitVector], points: &[UnitVector]) -> (UnitVector, f64) {
    let mut cx = 0.0;
    let mut cy = 0.0;
    let mut cz = 0.0;
    for v in face {
        cx += v.x;
        cy += v.y;
        cz += v.z;
    }
    let mut p = UnitVector::new(cx, cy, cz).unwrap_or(face[0]);
    let score = |q: &UnitVector| -> f64 {
        points
            .iter()
            .map(|x| angular_dist(q, x))
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = score(&p);
    let mut step = 0.2;
    while step > 1e-12 {
        let mut improved = false;
        // Improving directions: away from each active nearest point and
        // bisectors of active pairs.
        let active: Vec<[f64; 3]> = points
            .iter()
            .filter(|x| angular_dist(&p, x) < best + step)
            .filter_map(|x| p.tangent_toward(x).ok())
            .collect();
        let mut dirs: Vec<[f64; 3]> = active.iter().map(|t| [-t[0], -t[1], -t[2]]).collect();
        for i in 0..active.len() {
            for j in i + 1..active.len() {
                let s = [
                    -(active[i][0] + active[j][0]),
                    -(active[i][1] + active[j][1]),
                    -(active[i][2] + active[j][2]),
                ];
                let nn = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
                if nn > 1e-9 {
                    dirs.push([s[0] / nn, s[1] / nn, s[2] / nn]);
                }
            }
        }
        for dir in &dirs {
            let q = p.walk(*dir, step);
            if !point_in_face(&q, face) {
                continue;
            }
            let s = score(&q);
            if s > best + 1e-15 {
                p = q;
                best = s;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (p, best)
}

/// Recovers coordinates for a solved candidate. Core vertices come from the
/// breadth-first propagation plus polish; isolated vertices are placed at
/// the maximin point of their host face. Errors if an isolated vertex has no
/// room (its best distance does not exceed the edge length).
pub fn realize_coordinates(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    sol: &EmbeddingSolution,
    x: &[f64],
) -> Result<Vec<UnitVector>> {
    let rs = &cand.rotation;
    let n = rs.n();
    let d = sol.d;
    let gaps = corner_gap_table(cand, sys, x);

    let mut pos: Vec<Option<UnitVector>> = vec![None; n];
    // Tangent direction from v toward its rotation-position-0 neighbor.
    let mut ref_dir: Vec<Option<[f64; 3]>> = vec![None; n];

    // Root vertex at the pole; its first neighbor goes down the x-z meridian.
    let root = 0usize;
    pos[root] = Some(UnitVector::new(0.0, 0.0, 1.0).unwrap());
    ref_dir[root] = Some([1.0, 0.0, 0.0]);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(root);

    while let Some(v) = queue.pop_front() {
        let pv = pos[v].unwrap();
        // Direction to neighbor t+1 is the direction to neighbor t rotated
        // by the corner angle between them.
        let mut dir = ref_dir[v].unwrap();
        for t in 0..rs.degree(v) {
            let w = rs.neighbors(v)[t] as usize;
            if pos[w].is_none() {
                let pw = pv.walk(dir, d);
                pos[w] = Some(pw);
                // Reference direction at w (toward its rotation position 0):
                // start from the known direction back toward v and unwind the
                // corner angles down to position 0.
                let back = pw.tangent_toward(&pv)?;
                let back_pos = rs
                    .neighbors(w)
                    .iter()
                    .position(|&u| u as usize == v)
                    .expect("symmetric edge");
                let mut dw = back;
                let mut at = back_pos;
                while at != 0 {
                    at -= 1;
                    dw = rotate_tangent(&pw, dw, -gaps[w][at]);
                }
                ref_dir[w] = Some(dw);
                queue.push_back(w);
            }
            dir = rotate_tangent(&pv, dir, gaps[v][t]);
        }
    }

    let mut points: Vec<UnitVector> = pos
        .into_iter()
        .map(|p| p.ok_or_else(|| Error::Inconsistent("unreached vertex in placement".into())))
        .collect::<Result<_>>()?;

    polish(&mut points, &rs.edges(), d);

    // Isolated vertices at the maximin point of their host face; whether the
    // achieved distance actually exceeds d is the verifier's call.
    for &f in &cand.isolated_faces {
        let cycle: Vec<UnitVector> = cand.faces[f].iter().map(|&v| points[v as usize]).collect();
        let (p, _) = maximin_point_in_face(&cycle, &points);
        points.push(p);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedder::AngleSystem;
    use crate::graph_gen::generate_candidates;
    use crate::sphere_geom::min_separation;
    use std::f64::consts::PI;

    #[test]
    fn octahedron_coordinates() {
        let cand = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.edge_count() == 12)
            .unwrap();
        let sys = AngleSystem::new(&cand);
        let x = vec![PI / 2.0; sys.n_vars()];
        let sol = EmbeddingSolution {
            d: PI / 2.0,
            face_angles: Vec::new(),
            residual: 0.0,
        };
        let pts = realize_coordinates(&cand, &sys, &sol, &x).unwrap();
        assert_eq!(pts.len(), 6);
        let sep = min_separation(&pts).unwrap();
        assert!((sep - PI / 2.0).abs() < 1e-9, "sep={sep}");
        // Pairwise distances are pi/2 or pi.
        for i in 0..6 {
            for j in i + 1..6 {
                let dist = angular_dist(&pts[i], &pts[j]);
                assert!(
                    (dist - PI / 2.0).abs() < 1e-9 || (dist - PI).abs() < 1e-9,
                    "unexpected distance {dist}"
                );
            }
        }
    }

    #[test]
    fn point_in_face_octant() {
        let a = UnitVector::new(1.0, 0.0, 0.0).unwrap();
        let b = UnitVector::new(0.0, 1.0, 0.0).unwrap();
        let c = UnitVector::new(0.0, 0.0, 1.0).unwrap();
        let inside = UnitVector::new(1.0, 1.0, 1.0).unwrap();
        let outside = UnitVector::new(-1.0, 1.0, 1.0).unwrap();
        assert!(point_in_face(&inside, &[a, b, c]));
        assert!(!point_in_face(&outside, &[a, b, c]));
    }

    #[test]
    fn maximin_center_of_octant() {
        let a = UnitVector::new(1.0, 0.0, 0.0).unwrap();
        let b = UnitVector::new(0.0, 1.0, 0.0).unwrap();
        let c = UnitVector::new(0.0, 0.0, 1.0).unwrap();
        let pts = vec![a, b, c];
        let (p, dist) = maximin_point_in_face(&[a, b, c], &pts);
        // Center of the octant triangle is equidistant from all three.
        let expect = UnitVector::new(1.0, 1.0, 1.0).unwrap();
        assert!(angular_dist(&p, &expect) < 1e-5);
        assert!((dist - angular_dist(&expect, &a)).abs() < 1e-6);
    }
}
