//! Multistart solving and the feasible edge-length range.
//!
//! A candidate is solved by damped least squares from a vertex-balanced
//! start plus Latin-hypercube restarts. The feasible range comes from
//! continuation: march the edge length outward with extrapolated warm
//! starts, halving the step on failure and escalating the iteration budget
//! near fold points, then classify what capped each endpoint.

use super::lm::solve_projected;
use super::realize::realize_coordinates;
use super::system::{AngleSystem, D_DOMAIN_MAX, D_DOMAIN_MIN};
use super::verify::{verify_config, VerifyError};
use super::{
    CapReason, EmbeddingSolution, FeasibleRange, SolverBudget, SphericalConfig, Status,
};
use crate::graph_gen::PlanarCandidate;
use crate::rng::SplitMix64;
use crate::sphere_geom::{angular_dist, equilateral_triangle_angle, FaceAngleVector};
use std::f64::consts::PI;

/// How the edge length is treated during a solve.
#[derive(Debug, Clone, Copy)]
pub enum DMode {
    Free,
    Fixed(f64),
    Bounded(f64, f64),
}

impl DMode {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            DMode::Free => (D_DOMAIN_MIN, D_DOMAIN_MAX),
            DMode::Fixed(d) => (d, d),
            DMode::Bounded(lo, hi) => (lo.max(D_DOMAIN_MIN), hi.min(D_DOMAIN_MAX)),
        }
    }
}

/// A solved angle system whose realization failed verification, kept as a
/// seed for sliding along the branch in d.
#[derive(Debug, Clone)]
pub struct FrameSeed {
    pub x: Vec<f64>,
    /// Worst non-edge slack of the realization (negative when a pair that
    /// should stay clear dips under the edge length).
    pub slack: f64,
}

/// Result of one solving attempt.
#[derive(Debug)]
pub enum SolveOutcome {
    /// Angle system solved and the realization verified.
    Valid(Box<ValidSolve>),
    /// Angle system solved, but every realization failed verification.
    FrameOnly(VerifyError, Vec<FrameSeed>),
    /// No solution found within the budget.
    Failed {
        /// Some attempt stalled close to feasibility (residual below 1e-6).
        suspicious: bool,
    },
}

#[derive(Debug, Clone)]
pub struct ValidSolve {
    pub solution: EmbeddingSolution,
    pub config: SphericalConfig,
    pub x: Vec<f64>,
}

fn build_solution(sys: &AngleSystem, x: &[f64], violation: f64) -> EmbeddingSolution {
    let face_angles = sys
        .faces
        .iter()
        .enumerate()
        .map(|(k, face)| {
            let angles = (0..face.len())
                .map(|i| x[1 + sys.corner_var[k][i]])
                .collect();
            FaceAngleVector { face_id: k, angles }
        })
        .collect();
    EmbeddingSolution {
        d: x[0],
        face_angles,
        residual: violation,
    }
}

/// Tracks what the failed attempts looked like.
#[derive(Debug, Default)]
struct AttemptLog {
    frame_err: Option<VerifyError>,
    suspicious: bool,
    /// Attempts where the angle system converged (realization aside).
    frame_solves: usize,
    /// Deep reruns already spent on near-miss stalls.
    escalations: usize,
    /// Deep reruns that still ended in a near-miss stall.
    deep_stalls: usize,
    /// Best frame-only solutions by non-edge slack, capped at three.
    frames: Vec<FrameSeed>,
}

impl AttemptLog {
    fn push_frame(&mut self, x: Vec<f64>, slack: f64) {
        self.frames.push(FrameSeed { x, slack });
        self.frames
            .sort_by(|a, b| b.slack.partial_cmp(&a.slack).unwrap());
        self.frames.truncate(3);
    }
}

/// Worst slack of pairs that must stay clear of the edge length: negative
/// when a non-adjacent pair (or anything against an isolated vertex) is
/// closer than d.
fn nonedge_slack(cand: &PlanarCandidate, points: &[crate::sphere_geom::UnitVector], d: f64) -> f64 {
    let core = cand.core_n();
    let mut slack = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let adjacent = j < core && cand.rotation.has_edge(i, j);
            if adjacent {
                continue;
            }
            slack = slack.min(angular_dist(&points[i], &points[j]) - d);
        }
    }
    slack
}

fn attempt(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    x0: &[f64],
    lo: f64,
    hi: f64,
    iters: usize,
    accept_tol: f64,
    log: &mut AttemptLog,
) -> Option<ValidSolve> {
    let out = solve_projected(sys, x0, lo, hi, iters);
    if out.violation < accept_tol {
        log.frame_solves += 1;
        let sol = build_solution(sys, &out.x, out.violation);
        match realize_coordinates(cand, sys, &sol, &out.x) {
            Ok(points) => match verify_config(&points, cand, sol.d) {
                Ok(config) => {
                    return Some(ValidSolve {
                        solution: sol,
                        config,
                        x: out.x,
                    })
                }
                Err(e) => {
                    if let Some(v) = automorphic_rescue(cand, sys, &points, sol.d, accept_tol) {
                        return Some(v);
                    }
                    let slack = nonedge_slack(cand, &points, sol.d);
                    if matches!(e, VerifyError::Separation { .. }) {
                        log.push_frame(out.x.clone(), slack);
                    }
                    if log.frame_err.is_none() {
                        log.frame_err = Some(e);
                    }
                }
            },
            Err(_) => {
                if log.frame_err.is_none() {
                    log.frame_err = Some(VerifyError::Separation { gap: f64::NAN });
                }
            }
        }
    } else if out.violation < 1e-6 {
        log.suspicious = true;
    }
    None
}

/// For candidates with isolated vertices, the solver may land on a branch
/// where the roomy face is a symmetric image of the annotated one. Relabel
/// the core by its embedding automorphisms, re-place the isolated vertices,
/// and verify; on success, re-derive the angle variables from the geometry.
fn automorphic_rescue(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    points: &[crate::sphere_geom::UnitVector],
    d: f64,
    accept_tol: f64,
) -> Option<ValidSolve> {
    if cand.isolated_faces.is_empty() {
        return None;
    }
    let core_n = cand.core_n();
    for phi in sys.core_automorphisms.iter().skip(1) {
        let mut pts: Vec<crate::sphere_geom::UnitVector> =
            vec![points[0]; core_n];
        for v in 0..core_n {
            pts[phi[v] as usize] = points[v];
        }
        for &f in &cand.isolated_faces {
            let cycle: Vec<crate::sphere_geom::UnitVector> = cand.faces[f]
                .iter()
                .map(|&v| pts[v as usize])
                .collect();
            let (p, _) = super::realize::maximin_point_in_face(&cycle, &pts);
            pts.push(p);
        }
        if verify_config(&pts, cand, d).is_err() {
            continue;
        }
        // Rebuild the angle variables from the relabeled geometry and let a
        // short solve tighten them.
        let mut x = vec![0.0; sys.n_vars()];
        x[0] = d;
        for (k, face) in sys.faces.iter().enumerate() {
            let m = face.len();
            for i in 0..m {
                let v = pts[face[i] as usize];
                let a = pts[face[(i + m - 1) % m] as usize];
                let b = pts[face[(i + 1) % m] as usize];
                let ta = v.tangent_toward(&a).ok()?;
                let tb = v.tangent_toward(&b).ok()?;
                x[1 + sys.corner_var[k][i]] = (ta[0] * tb[0] + ta[1] * tb[1] + ta[2] * tb[2])
                    .clamp(-1.0, 1.0)
                    .acos();
            }
        }
        let out = solve_projected(sys, &x, d, d, 300);
        if out.violation >= accept_tol {
            continue;
        }
        let sol = build_solution(sys, &out.x, out.violation);
        let Ok(points2) = realize_coordinates(cand, sys, &sol, &out.x) else {
            continue;
        };
        if let Ok(config) = verify_config(&points2, cand, sol.d) {
            return Some(ValidSolve {
                solution: sol,
                config,
                x: out.x,
            });
        }
    }
    None
}

/// One multistart attempt with escalation: a stall close to feasibility gets
/// a longer run, so "suspicious" survives only for genuine oscillators.
#[allow(clippy::too_many_arguments)]
fn laddered_attempt(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    x0: &[f64],
    lo: f64,
    hi: f64,
    base_iters: usize,
    accept_tol: f64,
    log: &mut AttemptLog,
) -> Option<ValidSolve> {
    let outer = log.suspicious;
    log.suspicious = false;
    let got = attempt(cand, sys, x0, lo, hi, base_iters, accept_tol, log);
    let stalled = log.suspicious;
    if got.is_some() || !stalled {
        log.suspicious = outer;
        return got;
    }
    // The start stalled near feasibility. A few deep reruns characterize the
    // pattern; afterwards reuse their verdict instead of paying again.
    if log.escalations < 3 {
        log.escalations += 1;
        log.suspicious = false;
        let got = attempt(cand, sys, x0, lo, hi, 8000, accept_tol, log);
        if log.suspicious {
            log.deep_stalls += 1;
        }
        if got.is_some() {
            log.suspicious = outer;
            return got;
        }
    }
    log.suspicious = outer || log.deep_stalls > 0;
    None
}

/// Vertex-balanced start: every corner at 2*pi/degree so vertex sums hold
/// exactly; d from the given hint.
fn smart_start(sys: &AngleSystem, d0: f64) -> Vec<f64> {
    let mut x = vec![0.0; sys.n_vars()];
    x[0] = d0;
    for v in 0..sys.n_vertices {
        let share = 2.0 * PI / sys.vertex_corners[v].len() as f64;
        for &c in &sys.vertex_corners[v] {
            x[1 + c] = share;
        }
    }
    x
}

fn lhs_start(sys: &AngleSystem, rng: &mut SplitMix64, lo: f64, hi: f64) -> Vec<f64> {
    // Sample d inside the window, preferring the region where the desk-scale
    // optima live when the window is wide open.
    let lo_s = lo.max(0.45).min(hi);
    let hi_s = hi.min(1.62).max(lo_s);
    let d = if hi_s - lo_s > 1e-9 {
        rng.range(lo_s, hi_s)
    } else {
        lo_s
    };
    let alpha = equilateral_triangle_angle(d.clamp(0.05, 2.0 * PI / 3.0 - 0.05)).unwrap();
    let mut x = vec![0.0; sys.n_vars()];
    x[0] = d;
    for c in 0..sys.n_corners {
        x[1 + c] = rng.range(alpha, PI);
    }
    x
}

/// Multistart solve of one candidate. Stops at the first verified solution.
pub fn solve_candidate(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    mode: DMode,
    budget: &SolverBudget,
    seed: u64,
) -> SolveOutcome {
    let (lo, hi) = mode.bounds();
    // With minimum degree 3, two edges at a common vertex rule out any
    // d >= 2*pi/3: nothing to solve outside the hard domain.
    if lo > D_DOMAIN_MAX || hi < D_DOMAIN_MIN || lo > hi {
        return SolveOutcome::Failed { suspicious: false };
    }
    let mut rng = SplitMix64::from_context(seed, &cand.key.0);
    let mut log = AttemptLog::default();

    // Deterministic first starts: vertex-balanced at a few edge lengths.
    let d_hints = [1.15, 0.95, 1.3, 0.75, 1.45]
        .iter()
        .map(|&d: &f64| d.clamp(lo, hi))
        .collect::<Vec<_>>();
    for &d0 in &d_hints {
        if let Some(v) = laddered_attempt(
            cand,
            sys,
            &smart_start(sys, d0),
            lo,
            hi,
            budget.iters,
            budget.accept_tol,
            &mut log,
        ) {
            return SolveOutcome::Valid(Box::new(v));
        }
    }
    for _ in d_hints.len()..budget.starts {
        // The system clearly solves but never verifies: stop early, the
        // caller slides along the captured branches instead.
        if log.frame_solves >= 24 {
            break;
        }
        let x0 = lhs_start(sys, &mut rng, lo, hi);
        if let Some(v) = laddered_attempt(
            cand,
            sys,
            &x0,
            lo,
            hi,
            budget.iters,
            budget.accept_tol,
            &mut log,
        ) {
            return SolveOutcome::Valid(Box::new(v));
        }
    }
    match log.frame_err {
        Some(e) => SolveOutcome::FrameOnly(e, log.frames),
        None => SolveOutcome::Failed {
            suspicious: log.suspicious,
        },
    }
}

/// Slack ascent along the flex at fixed d: frame solutions often fail only
/// because the realization sits at the wrong point of the solution family
/// (an isolated vertex without room, a pair too close). Walking the softest
/// mode while the worst slack improves finds the valid pocket when one
/// exists at this edge length.
fn flex_slide(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    seed_x: &[f64],
    accept_tol: f64,
) -> Option<ValidSolve> {
    let d = seed_x[0];
    let mut x = seed_x.to_vec();
    let score = |x: &[f64]| -> Option<(f64, Option<ValidSolve>)> {
        let viol = sys.max_violation(x);
        if viol >= accept_tol {
            return None;
        }
        let sol = build_solution(sys, x, viol);
        let points = realize_coordinates(cand, sys, &sol, x).ok()?;
        let slack = nonedge_slack(cand, &points, d);
        let valid = verify_config(&points, cand, d).ok().map(|config| ValidSolve {
            solution: sol,
            config,
            x: x.to_vec(),
        });
        Some((slack, valid))
    };
    let (mut slack, valid) = score(&x)?;
    if let Some(v) = valid {
        return Some(v);
    }
    let mut tau = 0.08;
    let mut steps = 0;
    while tau > 1e-4 && steps < 160 {
        steps += 1;
        let dir = flex_direction(sys, &x)?;
        let mut advanced = false;
        for sgn in [1.0, -1.0] {
            let mut xt = x.clone();
            for i in 1..xt.len() {
                xt[i] += sgn * tau * dir[i];
            }
            xt[0] = d;
            let out = solve_projected(sys, &xt, d, d, 300);
            if out.violation >= accept_tol {
                continue;
            }
            if let Some((s2, valid)) = score(&out.x) {
                if let Some(v) = valid {
                    return Some(v);
                }
                if s2 > slack + 1e-12 {
                    x = out.x;
                    slack = s2;
                    advanced = true;
                    break;
                }
            }
        }
        if !advanced {
            tau *= 0.5;
        }
    }
    None
}

/// Follows a frame-only branch in d, watching the worst non-edge slack; when
/// it turns non-negative the realization can verify. Frames whose slack
/// worsens are abandoned quickly.
fn slide_to_window(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    seed: &FrameSeed,
    sign: f64,
    lo: f64,
    hi: f64,
    accept_tol: f64,
) -> Option<ValidSolve> {
    let mut x = seed.x.clone();
    let mut best_slack = seed.slack;
    let mut step = 4e-3;
    let mut stalls = 0;
    for _ in 0..120 {
        let d_try = (x[0] + sign * step).clamp(lo.max(D_DOMAIN_MIN), hi.min(D_DOMAIN_MAX));
        if (d_try - x[0]).abs() < 1e-9 {
            return None;
        }
        let mut x0 = x.clone();
        x0[0] = d_try;
        let out = solve_projected(sys, &x0, d_try, d_try, 400);
        if out.violation >= accept_tol {
            step *= 0.5;
            stalls += 1;
            if stalls > 3 {
                return None;
            }
            continue;
        }
        let sol = build_solution(sys, &out.x, out.violation);
        let Ok(points) = realize_coordinates(cand, sys, &sol, &out.x) else {
            return None;
        };
        if let Ok(config) = verify_config(&points, cand, sol.d) {
            return Some(ValidSolve {
                solution: sol,
                config,
                x: out.x,
            });
        }
        let slack = nonedge_slack(cand, &points, sol.d);
        if slack < best_slack - 1e-10 {
            // Moving the wrong way.
            return None;
        }
        best_slack = slack;
        x = out.x;
        stalls = 0;
        // Approach gently once the violation is nearly resolved.
        if best_slack > -2e-3 {
            step = step.min(5e-4);
        }
    }
    None
}

/// Smallest slack of a non-contact pair over the separation (isolated
/// vertices included); large when no new contact is near.
fn near_gap(config: &SphericalConfig) -> f64 {
    let n = config.n();
    let mut gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            if config.edges.contains(&(i, j)) {
                continue;
            }
            gap = gap.min(angular_dist(&config.points[i], &config.points[j]) - config.separation);
        }
    }
    gap
}

/// One warm-started fixed-d solve with escalating iteration budgets
/// (fold points need far more iterations than regular points). `thorough`
/// enables the deepest stage; near-endpoint refinements skip it since the
/// table tolerance does not need the last digit through a fold.
fn warm_solve(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    x0: &[f64],
    d: f64,
    accept_tol: f64,
    thorough: bool,
    rng: &mut SplitMix64,
    log: &mut AttemptLog,
) -> Option<ValidSolve> {
    let mut x0 = x0.to_vec();
    x0[0] = d;
    let ladder: &[usize] = if thorough {
        &[250, 1500, 6000]
    } else {
        &[250, 1500]
    };
    for &iters in ladder {
        let before = log.suspicious;
        log.suspicious = false;
        if let Some(v) = attempt(cand, sys, &x0, d, d, iters, accept_tol, log) {
            log.suspicious |= before;
            return Some(v);
        }
        let near_miss = log.suspicious;
        log.suspicious |= before;
        if !near_miss {
            break;
        }
    }
    // Jittered retries: symmetric starts sit on invariant subspaces where
    // plain descent cannot reach the symmetry-broken solution branch.
    for mag in [0.02, 0.06] {
        let mut xj = x0.to_vec();
        for u in xj[1..].iter_mut() {
            *u += rng.range(-mag, mag);
        }
        if let Some(v) = attempt(cand, sys, &xj, d, d, 700, accept_tol, log) {
            return Some(v);
        }
    }
    None
}

/// Direction of the softest mode of the angle system at `x` (d pinned):
/// the near-null space of the Jacobian. At a symmetry-breaking point this is
/// the branch direction plain descent cannot find.
fn flex_direction(sys: &AngleSystem, x: &[f64]) -> Option<Vec<f64>> {
    let nv = sys.n_vars();
    let nr = sys.n_residuals();
    let mut jac = vec![0.0; nr * nv];
    sys.jacobian(x, &mut jac);
    let mut a = vec![0.0; nv * nv];
    for row in 0..nr {
        let jrow = &jac[row * nv..(row + 1) * nv];
        for i in 0..nv {
            if jrow[i] == 0.0 {
                continue;
            }
            for j in 0..nv {
                a[i * nv + j] += jrow[i] * jrow[j];
            }
        }
    }
    // Pin the edge-length component.
    for j in 0..nv {
        a[j] = 0.0;
        a[j * nv] = 0.0;
    }
    a[0] = 1.0;
    // Inverse power iteration toward the smallest eigenvector.
    let mut w: Vec<f64> = (0..nv)
        .map(|i| if i == 0 { 0.0 } else { ((i * 2654435761) % 97) as f64 / 97.0 - 0.5 })
        .collect();
    let mut z = vec![0.0; nv];
    for _ in 0..8 {
        let g: Vec<f64> = w.iter().map(|v| -v).collect();
        if !super::lm::cholesky_solve_damped(&a, &g, nv, 1e-9, &mut z) {
            return None;
        }
        z[0] = 0.0;
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return None;
        }
        for (wi, zi) in w.iter_mut().zip(&z) {
            *wi = zi / norm;
        }
    }
    Some(w)
}

struct DirectionEnd {
    d_end: f64,
    witness: ValidSolve,
    cap: CapReason,
}

/// Step acceptance for the range continuation: the tables' ranges are over
/// configurations that stay irreducible, so once the seed classifies as
/// irreducible, steps that lose that property (a vertex going flat) end the
/// range exactly like a forming contact.
fn step_ok(v: &ValidSolve, require_irr: bool) -> bool {
    !require_irr
        || matches!(
            crate::rigidity::is_irreducible(&v.config),
            Ok((true, _))
        )
}

/// Continuation in one direction; `sign` is +1.0 toward the maximum.
#[allow(clippy::too_many_arguments)]
fn continue_direction(
    cand: &PlanarCandidate,
    sys: &AngleSystem,
    start: &ValidSolve,
    sign: f64,
    lo: f64,
    hi: f64,
    budget: &SolverBudget,
    seed: u64,
    require_irr: bool,
) -> DirectionEnd {
    let mut rng = SplitMix64::from_context(seed ^ 0x5eed, &cand.key.0);
    let mut cur = start.clone();
    let mut prev: Option<ValidSolve> = None;

    'outer: loop {
        let mut h = 8e-3;
        // Once a step fails, never regrow past it: the boundary is close.
        let mut h_cap = 8e-3;
        while h > 1e-6 {
            let d_try = (cur.solution.d + sign * h).clamp(lo, hi);
            if (d_try - cur.solution.d).abs() < 1e-12 {
                break;
            }
            // Tangent extrapolation from the last two accepted solutions.
            let x0: Vec<f64> = match &prev {
                Some(p) if (cur.solution.d - p.solution.d).abs() > 1e-12 => {
                    let scale = (d_try - cur.solution.d) / (cur.solution.d - p.solution.d);
                    cur.x
                        .iter()
                        .zip(&p.x)
                        .map(|(c, q)| c + scale * (c - q))
                        .collect()
                }
                _ => cur.x.clone(),
            };
            let mut log = AttemptLog::default();
            let thorough = true;
            let mut got = warm_solve(
                cand,
                sys,
                &x0,
                d_try,
                budget.accept_tol,
                thorough,
                &mut rng,
                &mut log,
            )
            .filter(|v| step_ok(v, require_irr));
            if got.is_none() {
                // When the frame solved but the realization lost its slack
                // (an isolated vertex out of room, a pair closing in), the
                // valid pocket may sit elsewhere on the flex at this d.
                if let Some(best) = log.frames.first() {
                    got = flex_slide(cand, sys, &best.x, budget.accept_tol)
                        .filter(|v| step_ok(v, require_irr));
                }
            }
            if got.is_none() && h >= 2e-5 {
                // Branch switching: step off the softest mode of the current
                // solution (the invariant-subspace trap at symmetric points).
                if let Some(dir) = flex_direction(sys, &cur.x) {
                    'branch: for tau in [0.1, 0.3, 0.7] {
                        for sgn in [1.0, -1.0] {
                            let mut xb = cur.x.clone();
                            for i in 1..xb.len() {
                                xb[i] += sgn * tau * dir[i];
                            }
                            xb[0] = d_try;
                            if let Some(v) = attempt(
                                cand,
                                sys,
                                &xb,
                                d_try,
                                d_try,
                                4000,
                                budget.accept_tol,
                                &mut log,
                            )
                            .filter(|v| step_ok(v, require_irr))
                            {
                                got = Some(v);
                                break 'branch;
                            }
                        }
                    }
                }
            }
            match got {
                Some(v) => {
                    prev = Some(std::mem::replace(&mut cur, v));
                    h = (h * 1.6).min(h_cap);
                }
                None => {
                    h_cap = h;
                    h *= 0.5;
                }
            }
        }

        let d_end = cur.solution.d;
        let at_user_bound = (sign < 0.0 && (d_end - lo).abs() < 1e-9)
            || (sign > 0.0 && (hi - d_end).abs() < 1e-9);
        if at_user_bound {
            return DirectionEnd {
                d_end,
                witness: cur,
                cap: CapReason::DomainLimit,
            };
        }

        // Probe past the endpoint at increasing distances: warm marching can
        // die at parameter folds, and feasible sets are occasionally
        // disconnected (the tables report the hull), so fresh multistarts
        // hunt a little farther out before the endpoint is final.
        let mut frame_past = false;
        let mut resume: Option<ValidSolve> = None;
        let mut irr_expired = false;
        for (k, dist) in [5e-4, 1.5e-3, 4e-3].into_iter().enumerate() {
            let d_probe = (d_end + sign * dist).clamp(D_DOMAIN_MIN, D_DOMAIN_MAX);
            if (d_probe - d_end).abs() < 1e-9 {
                break;
            }
            let mut log = AttemptLog::default();
            let warm = warm_solve(
                cand,
                sys,
                &cur.x.clone(),
                d_probe,
                budget.accept_tol,
                true,
                &mut rng,
                &mut log,
            );
            let got = match warm {
                Some(v) => Some(v),
                None => {
                    let mini = SolverBudget {
                        starts: 32,
                        iters: 4000,
                        accept_tol: budget.accept_tol,
                    };
                    match solve_candidate(
                        cand,
                        sys,
                        DMode::Fixed(d_probe),
                        &mini,
                        seed ^ (0xf7 + k as u64),
                    ) {
                        SolveOutcome::Valid(v) => Some(*v),
                        SolveOutcome::FrameOnly(..) => {
                            if k == 0 {
                                frame_past = true;
                            }
                            None
                        }
                        SolveOutcome::Failed { .. } => None,
                    }
                }
            };
            if k == 0 {
                frame_past |= log.frame_err.is_some();
            }
            if let Some(v) = got {
                if step_ok(&v, require_irr) {
                    resume = Some(v);
                } else {
                    irr_expired = true;
                }
                break;
            }
        }
        if let Some(v) = resume {
            // The range actually continues; resume marching.
            prev = Some(std::mem::replace(&mut cur, v));
            continue 'outer;
        }
        if irr_expired {
            // Valid but no longer irreducible: the range expires with an
            // angle at its bound, not with a forming contact.
            return DirectionEnd {
                d_end,
                witness: cur,
                cap: CapReason::FrameBound,
            };
        }

        // Classify: a frame that keeps closing while separation breaks is a
        // forming contact. A dead frame with a vanishing non-contact gap is
        // the same event expressed through the angle bound.
        let cap = if frame_past {
            CapReason::Collision
        } else {
            let g1 = near_gap(&cur.config);
            if g1 > 1e-3 {
                CapReason::FrameBound
            } else {
                let d_back = (d_end - sign * 1.5e-3).clamp(lo, hi);
                let mut log2 = AttemptLog::default();
                match warm_solve(
                    cand,
                    sys,
                    &cur.x.clone(),
                    d_back,
                    budget.accept_tol,
                    true,
                    &mut rng,
                    &mut log2,
                ) {
                    Some(v2) => {
                        if near_gap(&v2.config) > 2.0 * g1 {
                            CapReason::Collision
                        } else {
                            CapReason::FrameBound
                        }
                    }
                    None => {
                        if g1 < 1e-4 {
                            CapReason::Collision
                        } else {
                            CapReason::FrameBound
                        }
                    }
                }
            }
        };
        return DirectionEnd {
            d_end,
            witness: cur,
            cap,
        };
    }
}

/// Feasible edge-length range of a candidate with verified witnesses.
pub fn feasible_range(
    cand: &PlanarCandidate,
    budget: &SolverBudget,
    seed: u64,
    d_lower: Option<f64>,
    d_upper: Option<f64>,
) -> FeasibleRange {
    let sys = AngleSystem::new(cand);
    let lo = d_lower.unwrap_or(0.0).max(D_DOMAIN_MIN);
    let hi = d_upper.unwrap_or(D_DOMAIN_MAX).min(D_DOMAIN_MAX);
    if lo >= hi {
        return FeasibleRange::infeasible(false);
    }

    let mut suspicious_any = false;
    let seeded = match solve_candidate(cand, &sys, DMode::Bounded(lo, hi), budget, seed) {
        SolveOutcome::Valid(v) => Some(*v),
        SolveOutcome::FrameOnly(_, frames) => {
            // Every free solve landed on an invalid branch. Slide the best
            // branches in d looking for the window where the separation
            // clears, then fall back to a fixed-d sweep.
            let mut found = None;
            'hunt: {
                for f in &frames {
                    if let Some(v) = flex_slide(cand, &sys, &f.x, budget.accept_tol) {
                        found = Some(v);
                        break 'hunt;
                    }
                    for sign in [1.0, -1.0] {
                        if let Some(v) =
                            slide_to_window(cand, &sys, f, sign, lo, hi, budget.accept_tol)
                        {
                            found = Some(v);
                            break 'hunt;
                        }
                    }
                }
                let sweep_budget = SolverBudget {
                    starts: budget.starts.min(12),
                    ..*budget
                };
                let steps = 24;
                for k in 0..=steps {
                    let d = (lo + (hi - lo) * k as f64 / steps as f64).clamp(lo, hi);
                    match solve_candidate(cand, &sys, DMode::Fixed(d), &sweep_budget, seed ^ 0xd0)
                    {
                        SolveOutcome::Valid(v) => {
                            found = Some(*v);
                            break;
                        }
                        SolveOutcome::Failed { suspicious } => suspicious_any |= suspicious,
                        SolveOutcome::FrameOnly(_, more) => {
                            // Slide the sweep's frames too.
                            for f in &more {
                                if let Some(v) = flex_slide(cand, &sys, &f.x, budget.accept_tol)
                                {
                                    found = Some(v);
                                    break 'hunt;
                                }
                                for sign in [1.0, -1.0] {
                                    if let Some(v) = slide_to_window(
                                        cand,
                                        &sys,
                                        f,
                                        sign,
                                        lo,
                                        hi,
                                        budget.accept_tol,
                                    ) {
                                        found = Some(v);
                                        break 'hunt;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            found
        }
        SolveOutcome::Failed { suspicious } => {
            suspicious_any |= suspicious;
            None
        }
    };
    let Some(valid) = seeded else {
        return FeasibleRange::infeasible(suspicious_any);
    };

    // The tables range over irreducible configurations. When the seed is
    // irreducible the continuation must preserve that; when it is not, walk
    // the plain range first and look for an irreducible pocket at its
    // endpoints before settling for "feasible but reducible".
    let seed_irr = step_ok(&valid, true);
    let mut require_irr = seed_irr;
    let mut anchor = valid.clone();
    if !seed_irr {
        let up = continue_direction(cand, &sys, &valid, 1.0, lo, hi, budget, seed ^ 0xa1, false);
        let down =
            continue_direction(cand, &sys, &valid, -1.0, lo, hi, budget, seed ^ 0xb2, false);
        if step_ok(&up.witness, true) {
            anchor = up.witness;
            require_irr = true;
        } else if step_ok(&down.witness, true) {
            anchor = down.witness;
            require_irr = true;
        } else {
            let rigid = (up.d_end - down.d_end).abs() < 1e-5;
            return FeasibleRange {
                status: Status::Feasible,
                irreducible_anywhere: false,
                d_min: down.d_end,
                d_max: up.d_end,
                witness_min: Some((down.witness.solution, down.witness.config)),
                witness_max: Some((up.witness.solution, up.witness.config)),
                min_cap: if rigid { CapReason::Rigid } else { down.cap },
                max_cap: if rigid { CapReason::Rigid } else { up.cap },
                suspicious: suspicious_any,
            };
        }
    }

    let up = continue_direction(
        cand,
        &sys,
        &anchor,
        1.0,
        lo,
        hi,
        budget,
        seed ^ 0xa1,
        require_irr,
    );
    let down = continue_direction(
        cand,
        &sys,
        &anchor,
        -1.0,
        lo,
        hi,
        budget,
        seed ^ 0xb2,
        require_irr,
    );

    let rigid = (up.d_end - down.d_end).abs() < 1e-5;
    FeasibleRange {
        status: Status::Feasible,
        irreducible_anywhere: true,
        d_min: down.d_end,
        d_max: up.d_end,
        witness_min: Some((down.witness.solution, down.witness.config)),
        witness_max: Some((up.witness.solution, up.witness.config)),
        min_cap: if rigid { CapReason::Rigid } else { down.cap },
        max_cap: if rigid { CapReason::Rigid } else { up.cap },
        suspicious: suspicious_any,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gen::generate_candidates;

    #[test]
    fn octahedron_rigid_at_right_angle() {
        let cand = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.edge_count() == 12)
            .unwrap();
        let budget = SolverBudget::default();
        let r = feasible_range(&cand, &budget, 1, None, None);
        assert_eq!(r.status, Status::Feasible);
        assert!((r.d_min - PI / 2.0).abs() < 2e-3, "d_min={}", r.d_min);
        assert!((r.d_max - PI / 2.0).abs() < 2e-3, "d_max={}", r.d_max);
        assert_eq!(r.min_cap, CapReason::Rigid);
    }

    #[test]
    fn prism_range_and_collision_cap() {
        let cand = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.edge_count() == 9)
            .unwrap();
        let budget = SolverBudget::default();
        let r = feasible_range(&cand, &budget, 1, None, None);
        assert_eq!(r.status, Status::Feasible);
        assert!((r.d_min - 1.4274).abs() < 2e-3, "d_min={}", r.d_min);
        assert!((r.d_max - PI / 2.0).abs() < 2e-3, "d_max={}", r.d_max);
        // At the top the prism squares' diagonals reach the separation (the
        // configuration becomes the octahedron): a forming contact.
        assert_eq!(r.max_cap, CapReason::Collision);
        assert_eq!(r.min_cap, CapReason::FrameBound);
    }

    #[test]
    fn triangle_with_overlong_edge_is_infeasible() {
        // Any candidate containing a triangle cannot be solved at d = 2.2
        // (beyond the equilateral-triangle domain).
        let cand = generate_candidates(6, 99, false)
            .unwrap()
            .into_iter()
            .find(|c| c.edge_count() == 12)
            .unwrap();
        let sys = AngleSystem::new(&cand);
        let budget = SolverBudget {
            starts: 8,
            ..Default::default()
        };
        assert!(!matches!(
            solve_candidate(&cand, &sys, DMode::Fixed(2.2), &budget, 3),
            SolveOutcome::Valid(_)
        ));
    }
}
