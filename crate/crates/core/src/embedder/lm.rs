//! Damped least-squares (Levenberg-Marquardt) with box projection.
//!
//! Minimizes the stacked residual of an [`AngleSystem`]; after every step the
//! iterate is projected back into the moving box [alpha(d), pi] x [d_lo, d_hi].

use super::system::AngleSystem;

pub struct LmOutcome {
    pub x: Vec<f64>,
    /// Maximum absolute constraint violation at the final iterate.
    pub violation: f64,
}

/// Solves the damped normal equations (A + lambda*diag(A)) x = -g via
/// Cholesky; returns false when the factorization breaks down.
pub(super) fn cholesky_solve_damped(
    a: &[f64],
    g: &[f64],
    n: usize,
    lambda: f64,
    out: &mut [f64],
) -> bool {
    let mut m = vec![0.0; n * n];
    m.copy_from_slice(a);
    for i in 0..n {
        let di = a[i * n + i].max(1e-12);
        m[i * n + i] = di + lambda * di + 1e-14;
    }
    // In-place Cholesky.
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= m[i * n + k] * m[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                m[i * n + i] = s.sqrt();
            } else {
                m[i * n + j] = s / m[j * n + j];
            }
        }
    }
    // Forward/back substitution: L L^T x = -g.
    for i in 0..n {
        let mut s = -g[i];
        for k in 0..i {
            s -= m[i * n + k] * out[k];
        }
        out[i] = s / m[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = out[i];
        for k in i + 1..n {
            s -= m[k * n + i] * out[k];
        }
        out[i] = s / m[i * n + i];
    }
    true
}

/// Runs projected LM from `x0`. Stops when the max violation drops below
/// `converge_tol`, the step stalls, or the iteration budget runs out.
pub fn solve_projected(
    sys: &AngleSystem,
    x0: &[f64],
    d_lo: f64,
    d_hi: f64,
    max_iters: usize,
) -> LmOutcome {
    const CONVERGE_TOL: f64 = 1e-12;
    let nv = sys.n_vars();
    let nr = sys.n_residuals();
    let mut x = x0.to_vec();
    sys.clamp(&mut x, d_lo, d_hi);
    let mut r = vec![0.0; nr];
    let mut jac = vec![0.0; nr * nv];
    let mut a = vec![0.0; nv * nv];
    let mut g = vec![0.0; nv];
    let mut step = vec![0.0; nv];
    let mut lambda = 1e-3;

    sys.residuals(&x, &mut r);
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut iters = 0;
    let mut stall = 0;
    // Near fold points convergence turns linear; once well under the
    // acceptance threshold, stop chasing the last two digits.
    let mut good_iters = 0;
    while iters < max_iters {
        iters += 1;
        let viol = r.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if viol < CONVERGE_TOL {
            break;
        }
        if viol < 5e-11 {
            good_iters += 1;
            if good_iters > 30 {
                break;
            }
        }
        sys.jacobian(&x, &mut jac);
        // A = J^T J, g = J^T r.
        for e in a.iter_mut() {
            *e = 0.0;
        }
        for e in g.iter_mut() {
            *e = 0.0;
        }
        for row in 0..nr {
            let jrow = &jac[row * nv..(row + 1) * nv];
            let rv = r[row];
            for i in 0..nv {
                let ji = jrow[i];
                if ji == 0.0 {
                    continue;
                }
                g[i] += ji * rv;
                for j in 0..=i {
                    a[i * nv + j] += ji * jrow[j];
                }
            }
        }
        for i in 0..nv {
            for j in i + 1..nv {
                a[i * nv + j] = a[j * nv + i];
            }
        }

        let mut improved = false;
        for _ in 0..12 {
            if !cholesky_solve_damped(&a, &g, nv, lambda, &mut step) {
                lambda *= 10.0;
                continue;
            }
            let mut xn = x.clone();
            for i in 0..nv {
                xn[i] += step[i];
            }
            sys.clamp(&mut xn, d_lo, d_hi);
            let mut rn = vec![0.0; nr];
            sys.residuals(&xn, &mut rn);
            let cn: f64 = rn.iter().map(|v| v * v).sum();
            if cn < cost {
                let rel = (cost - cn) / cost.max(1e-300);
                x = xn;
                r = rn;
                cost = cn;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                if rel < 1e-14 {
                    stall += 1;
                } else {
                    stall = 0;
                }
                break;
            }
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
        if !improved {
            stall += 1;
        }
        if stall >= 8 {
            break;
        }
    }
    let violation = sys.max_violation(&x);
    LmOutcome { x, violation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gen::generate_candidates;
    use crate::rng::SplitMix64;
    use std::f64::consts::PI;

    #[test]
    fn octahedron_converges_from_perturbed_start() {
        let cand = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.edge_count() == 12)
            .unwrap();
        let sys = AngleSystem::new(&cand);
        let mut rng = SplitMix64::new(9);
        for trial in 0..10 {
            let x0: Vec<f64> = (0..sys.n_vars())
                .map(|i| {
                    if i == 0 {
                        rng.range(1.0, 1.9)
                    } else {
                        rng.range(1.2, 2.6)
                    }
                })
                .collect();
            let out = solve_projected(&sys, &x0, 0.2, 2.0, 400);
            assert!(
                out.violation < 1e-9,
                "trial {trial} failed with violation {}",
                out.violation
            );
            // The octahedron is rigid: d must come out at pi/2.
            assert!(
                (out.x[0] - PI / 2.0).abs() < 1e-7,
                "octahedron solved at d={}",
                out.x[0]
            );
        }
    }
}
