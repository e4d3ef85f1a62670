//! Linear pruning of candidates over an edge-length interval.
//!
//! The angle system is relaxed to linear constraints that every realization
//! must satisfy for any d in [d_lo, d_hi]:
//!
//! * angles around each vertex sum to 2*pi;
//! * every corner angle lies in [alpha(d), pi], with the common triangle
//!   angle alpha(d) itself a variable `a` boxed by [alpha(d_lo), alpha(d_hi)]
//!   (triangle closure forces each triangle corner to equal alpha(d));
//! * equilateral quadrilaterals have equal opposite angles;
//! * each face's spherical excess is at least floor(m/2) disjoint "ear"
//!   triangles' worth (an ear spans two full sides and one full corner), and
//!   at most the whole sphere minus the other faces' ears.
//!
//! Infeasibility of the relaxation certifies that no embedding exists in the
//! interval; feasibility is inconclusive.

use super::system::D_DOMAIN_MAX;
use crate::graph_gen::PlanarCandidate;
use crate::sphere_geom::equilateral_triangle_angle;
use std::f64::consts::PI;

const TOL: f64 = 1e-9;
const INFEAS_TOL: f64 = 1e-7;

/// Phase-1 simplex feasibility for `A x = b`, `x >= 0` (b may be any sign on
/// input). Returns false when certainly infeasible. Bland's rule, so it
/// terminates; on iteration overflow it reports "feasible" (no pruning).
fn lp_feasible(a: &[Vec<f64>], b: &[f64], nvars: usize) -> bool {
    let m = a.len();
    let width = nvars + m + 1;
    let mut t = vec![vec![0.0; width]; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nvars {
            t[i][j] = flip * a[i][j];
        }
        t[i][nvars + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();
    // Objective row: minimize the artificial sum.
    let mut w = vec![0.0; width];
    for row in t.iter() {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj += row[j];
        }
    }
    for i in 0..m {
        w[nvars + i] = 0.0;
    }

    let mut iters = 0usize;
    loop {
        iters += 1;
        if iters > 20_000 {
            return true;
        }
        // Bland: smallest improving column.
        let Some(col) = (0..nvars + m).find(|&j| w[j] > TOL && !basis.contains(&j)) else {
            break;
        };
        // Ratio test; ties broken by smallest basis variable.
        let mut pick: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][col] > TOL {
                let ratio = t[i][width - 1] / t[i][col];
                match pick {
                    None => pick = Some((i, ratio)),
                    Some((pi, pr)) => {
                        if ratio < pr - TOL || (ratio < pr + TOL && basis[i] < basis[pi]) {
                            pick = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, _)) = pick else {
            // Unbounded improving direction cannot happen for phase 1;
            // treat as inconclusive.
            return true;
        };
        // Pivot.
        let piv = t[row][col];
        for j in 0..width {
            t[row][j] /= piv;
        }
        for i in 0..m {
            if i != row && t[i][col].abs() > 0.0 {
                let f = t[i][col];
                for j in 0..width {
                    t[i][j] -= f * t[row][j];
                }
            }
        }
        let f = w[col];
        if f.abs() > 0.0 {
            for j in 0..width {
                w[j] -= f * t[row][j];
            }
        }
        basis[row] = col;
    }
    w[width - 1] <= INFEAS_TOL
}

/// Conservative linear pruning. `false` certifies that no embedding exists
/// for any d in [d_lo, d_hi]; `true` is inconclusive.
pub fn lp_prune(cand: &PlanarCandidate, d_lo: f64, d_hi: f64) -> bool {
    if d_lo > d_hi {
        return false;
    }
    // Minimum degree 3 rules out the whole interval above the hard limit.
    if d_lo >= D_DOMAIN_MAX {
        return false;
    }
    let d_hi = d_hi.min(D_DOMAIN_MAX);
    let alpha_lo = match equilateral_triangle_angle(d_lo.max(1e-6)) {
        Ok(a) => a,
        Err(_) => return false,
    };
    let alpha_hi = equilateral_triangle_angle(d_hi).map(|a| a.min(PI)).unwrap_or(PI);

    let faces = &cand.faces;
    // Variables: a' = a - alpha_lo, then one w_c = u_c - a >= 0 per
    // non-triangle corner, then slack variables appended by the builder.
    let mut corner_var: Vec<Vec<Option<usize>>> = Vec::with_capacity(faces.len());
    let mut nv = 1usize;
    for face in faces {
        if face.len() == 3 {
            corner_var.push(vec![None; 3]);
        } else {
            let vars = (0..face.len())
                .map(|_| {
                    let v = nv;
                    nv += 1;
                    Some(v)
                })
                .collect();
            corner_var.push(vars);
        }
    }
    let n_struct = nv;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut slacks = 0usize;
    // Each row is built over structural vars; slack columns appended later.
    let push_row = |rows: &mut Vec<Vec<f64>>,
                        rhs: &mut Vec<f64>,
                        coeffs: Vec<(usize, f64)>,
                        b: f64,
                        slack_sign: f64,
                        slacks: &mut usize| {
        let mut row = vec![0.0; n_struct];
        for (j, c) in coeffs {
            row[j] += c;
        }
        if slack_sign != 0.0 {
            row.push(slack_sign);
            *slacks += 1;
        }
        rows.push(row);
        rhs.push(b);
    };

    // a upper bound: a' + s = alpha_hi - alpha_lo.
    push_row(
        &mut rows,
        &mut rhs,
        vec![(0, 1.0)],
        alpha_hi - alpha_lo,
        1.0,
        &mut slacks,
    );

    // Vertex sums: deg(v)*a + sum of w = 2*pi, i.e.
    // deg*a' + sum w = 2*pi - deg*alpha_lo.
    let rs = &cand.rotation;
    let mut vertex_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rs.n()];
    let mut vertex_acount = vec![0usize; rs.n()];
    for (k, face) in faces.iter().enumerate() {
        for (i, &v) in face.iter().enumerate() {
            vertex_acount[v as usize] += 1;
            if let Some(var) = corner_var[k][i] {
                vertex_rows[v as usize].push((var, 1.0));
            }
        }
    }
    for v in 0..rs.n() {
        let deg = vertex_acount[v] as f64;
        let mut coeffs = vertex_rows[v].clone();
        coeffs.push((0, deg));
        push_row(
            &mut rows,
            &mut rhs,
            coeffs,
            2.0 * PI - deg * alpha_lo,
            0.0,
            &mut slacks,
        );
    }

    // Corner upper bounds: a + w <= pi, i.e. a' + w + s = pi - alpha_lo.
    for vars in corner_var.iter() {
        for var in vars.iter().flatten() {
            push_row(
                &mut rows,
                &mut rhs,
                vec![(0, 1.0), (*var, 1.0)],
                PI - alpha_lo,
                1.0,
                &mut slacks,
            );
        }
    }

    // Quadrilaterals: opposite corners equal.
    for (k, face) in faces.iter().enumerate() {
        if face.len() == 4 {
            for off in 0..2 {
                let a1 = corner_var[k][off].unwrap();
                let a2 = corner_var[k][off + 2].unwrap();
                push_row(
                    &mut rows,
                    &mut rhs,
                    vec![(a1, 1.0), (a2, -1.0)],
                    0.0,
                    0.0,
                    &mut slacks,
                );
            }
        }
    }

    // Face excess bounds. With S_k = m*a + sum w_k and ears_k = floor(m/2):
    // lower: S_k - (m-2)pi >= ears_k*(3a - pi)
    // upper: S_k - (m-2)pi <= 4pi - sum_{k' != k} ears_{k'}*(3a - pi)
    let ears: Vec<f64> = faces.iter().map(|f| (f.len() / 2) as f64).collect();
    let total_ears: f64 = ears.iter().sum();
    for (k, face) in faces.iter().enumerate() {
        let m = face.len() as f64;
        let wsum: Vec<(usize, f64)> = corner_var[k]
            .iter()
            .flatten()
            .map(|&var| (var, 1.0))
            .collect();
        // Lower: (m - 3*ears_k)*a + sum w - surplus = (m-2)pi - ears_k*pi
        // in shifted form a = alpha_lo + a'.
        let acoef = m - 3.0 * ears[k];
        let mut coeffs = wsum.clone();
        coeffs.push((0, acoef));
        push_row(
            &mut rows,
            &mut rhs,
            coeffs,
            (m - 2.0) * PI - ears[k] * PI - acoef * alpha_lo,
            -1.0,
            &mut slacks,
        );
        // Upper: (m + 3*rest)*a + sum w + slack = (m-2)pi + 4pi + rest*pi
        let rest = total_ears - ears[k];
        let acoef = m + 3.0 * rest;
        let mut coeffs = wsum;
        coeffs.push((0, acoef));
        push_row(
            &mut rows,
            &mut rhs,
            coeffs,
            (m - 2.0) * PI + 4.0 * PI + rest * PI - acoef * alpha_lo,
            1.0,
            &mut slacks,
        );
    }

    // Rebuild into a rectangular matrix: each row's trailing slack entry
    // becomes its own column.
    let nvars = n_struct + slacks;
    let mut a_mat: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    let mut slack_at = n_struct;
    for row in rows {
        let mut full = vec![0.0; nvars];
        full[..n_struct].copy_from_slice(&row[..n_struct]);
        if row.len() > n_struct {
            full[slack_at] = row[n_struct];
            slack_at += 1;
        }
        a_mat.push(full);
    }
    lp_feasible(&a_mat, &rhs, nvars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gen::generate_candidates;

    #[test]
    fn octahedron_passes_near_right_angle() {
        let octa = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.edge_count() == 12)
            .unwrap();
        assert!(lp_prune(&octa, 1.5, 1.6));
    }

    #[test]
    fn all_triangle_degree_three_prunes_when_angle_exceeds_third_turn() {
        // The tetrahedron has degree-3 vertices with three triangle corners:
        // 3*alpha(d) = 2*pi needs alpha = 2*pi/3, i.e. d = 2*arcsin... any
        // interval forcing alpha(d_lo) > 2*pi/3 is infeasible.
        let k4 = generate_candidates(4, 99, false).unwrap().pop().unwrap();
        assert!(!lp_prune(&k4, 2.0, 2.05));
        // Near the regular tetrahedron distance it must pass.
        assert!(lp_prune(&k4, 1.9, 1.92));
    }

    #[test]
    fn pentagonal_pyramid_always_prunes() {
        // Apex with five triangles forces alpha = 2*pi/5; the base corner
        // then needs 2*pi - 2*alpha > pi: convexity fails for every d.
        let pyramid = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.max_face_size() == 5)
            .unwrap();
        assert!(!lp_prune(&pyramid, 0.3, 2.0));
    }

    #[test]
    fn octahedron_prunes_far_from_right_angle() {
        let octa = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.edge_count() == 12)
            .unwrap();
        // Degree-4 all-triangle vertices force 4*alpha(d) = 2*pi, so any
        // interval excluding pi/2 by enough margin dies.
        assert!(!lp_prune(&octa, 1.2, 1.3));
        assert!(!lp_prune(&octa, 1.8, 1.9));
    }
}
