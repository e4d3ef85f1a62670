//! The angle system of a candidate: variables, residuals, and the analytic
//! Jacobian.
//!
//! Variables are `x = [d, u_0, .., u_{C-1}]` with one `u` per face corner
//! (face-major order). Residuals: nine entries per face from the closure
//! transform minus the identity, then one angle-sum entry per core vertex.

use crate::graph_gen::{embedding_automorphisms, PlanarCandidate};
use crate::sphere_geom::mat3::{self, M};
use crate::sphere_geom::equilateral_triangle_angle;
use std::f64::consts::PI;

/// Hard upper limit on the edge length: two edges sharing a vertex cannot
/// both have length 2*pi/3 or more.
pub const D_DOMAIN_MAX: f64 = 2.0 * PI / 3.0 - 1e-9;
pub const D_DOMAIN_MIN: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct AngleSystem {
    /// Face corner lists: `faces[k][i]` is the vertex at position i.
    pub faces: Vec<Vec<u8>>,
    /// Corner variable index of (face k, position i).
    pub corner_var: Vec<Vec<usize>>,
    /// Corner variable indices incident to each core vertex.
    pub vertex_corners: Vec<Vec<usize>>,
    pub n_vertices: usize,
    pub n_corners: usize,
    /// Embedding automorphisms of the core; computed only for candidates
    /// with isolated vertices, where realizations may land on a branch that
    /// hosts the room in a symmetric face.
    pub core_automorphisms: Vec<Vec<u8>>,
}

impl AngleSystem {
    pub fn new(cand: &PlanarCandidate) -> AngleSystem {
        let faces = cand.faces.clone();
        let n_vertices = cand.core_n();
        let mut corner_var = Vec::with_capacity(faces.len());
        let mut vertex_corners = vec![Vec::new(); n_vertices];
        let mut c = 0usize;
        for face in &faces {
            let mut vars = Vec::with_capacity(face.len());
            for &v in face {
                vars.push(c);
                vertex_corners[v as usize].push(c);
                c += 1;
            }
            corner_var.push(vars);
        }
        let core_automorphisms = if cand.isolated_faces.is_empty() {
            Vec::new()
        } else {
            embedding_automorphisms(&cand.rotation)
        };
        AngleSystem {
            faces,
            corner_var,
            vertex_corners,
            n_vertices,
            n_corners: c,
            core_automorphisms,
        }
    }

    /// Total number of variables (d plus corners).
    pub fn n_vars(&self) -> usize {
        1 + self.n_corners
    }

    pub fn n_residuals(&self) -> usize {
        9 * self.faces.len() + self.n_vertices
    }

    /// Clamps the variable vector into its feasible box: `d` into
    /// [d_lo, d_hi] (intersected with the hard domain) and every corner into
    /// [alpha(d), pi].
    pub fn clamp(&self, x: &mut [f64], d_lo: f64, d_hi: f64) {
        let lo = d_lo.clamp(D_DOMAIN_MIN, D_DOMAIN_MAX);
        let hi = d_hi.clamp(D_DOMAIN_MIN, D_DOMAIN_MAX);
        x[0] = x[0].clamp(lo, hi.max(lo));
        let alpha = equilateral_triangle_angle(x[0]).expect("d in domain");
        for u in x[1..].iter_mut() {
            *u = u.clamp(alpha, PI);
        }
    }

    pub fn residuals(&self, x: &[f64], out: &mut [f64]) {
        let d = x[0];
        let travel = mat3::travel(d);
        let mut r = 0usize;
        for (k, face) in self.faces.iter().enumerate() {
            let mut m = mat3::IDENT;
            for i in 0..face.len() {
                let u = x[1 + self.corner_var[k][i]];
                m = mat3::mul(&m, &mat3::mul(&travel, &mat3::turn(u)));
            }
            for row in 0..3 {
                for col in 0..3 {
                    out[r] = m[row][col] - if row == col { 1.0 } else { 0.0 };
                    r += 1;
                }
            }
        }
        for v in 0..self.n_vertices {
            let s: f64 = self.vertex_corners[v].iter().map(|&c| x[1 + c]).sum();
            out[r] = s - 2.0 * PI;
            r += 1;
        }
        debug_assert_eq!(r, self.n_residuals());
    }

    /// Maximum absolute constraint violation.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut out = vec![0.0; self.n_residuals()];
        self.residuals(x, &mut out);
        out.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    /// Dense Jacobian, row-major `n_residuals x n_vars`, using prefix and
    /// suffix products of the per-corner transforms.
    pub fn jacobian(&self, x: &[f64], jac: &mut [f64]) {
        let nv = self.n_vars();
        for e in jac.iter_mut() {
            *e = 0.0;
        }
        let d = x[0];
        let travel = mat3::travel(d);
        let dtravel = mat3::travel_deriv(d);
        let mut row0 = 0usize;
        for (k, face) in self.faces.iter().enumerate() {
            let m = face.len();
            // steps[i] = travel * turn(u_i)
            let mut steps: Vec<M> = Vec::with_capacity(m);
            let mut turns: Vec<M> = Vec::with_capacity(m);
            for i in 0..m {
                let u = x[1 + self.corner_var[k][i]];
                let t = mat3::turn(u);
                steps.push(mat3::mul(&travel, &t));
                turns.push(t);
            }
            // prefix[i] = steps[0..i], suffix[i] = steps[i+1..m]
            let mut prefix: Vec<M> = Vec::with_capacity(m + 1);
            prefix.push(mat3::IDENT);
            for i in 0..m {
                let last = prefix[i];
                prefix.push(mat3::mul(&last, &steps[i]));
            }
            let mut suffix: Vec<M> = vec![mat3::IDENT; m + 1];
            for i in (0..m).rev() {
                suffix[i] = mat3::mul(&steps[i], &suffix[i + 1]);
            }
            // d-column: sum over positions of prefix * (travel' * turn) * suffix
            for i in 0..m {
                let mid = mat3::mul(&dtravel, &turns[i]);
                let dm = mat3::mul(&prefix[i], &mat3::mul(&mid, &suffix[i + 1]));
                for row in 0..3 {
                    for col in 0..3 {
                        jac[(row0 + row * 3 + col) * nv] += dm[row][col];
                    }
                }
            }
            // corner columns
            for i in 0..m {
                let u = x[1 + self.corner_var[k][i]];
                let mid = mat3::mul(&travel, &mat3::turn_deriv(u));
                let dm = mat3::mul(&prefix[i], &mat3::mul(&mid, &suffix[i + 1]));
                let cvar = 1 + self.corner_var[k][i];
                for row in 0..3 {
                    for col in 0..3 {
                        jac[(row0 + row * 3 + col) * nv + cvar] = dm[row][col];
                    }
                }
            }
            row0 += 9;
        }
        for v in 0..self.n_vertices {
            for &c in &self.vertex_corners[v] {
                jac[(row0 + v) * nv + 1 + c] = 1.0;
            }
        }
    }
}
